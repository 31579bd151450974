// Copyright 2026 The DUMP Histogram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dump/random.h"

namespace dump {

namespace {

constexpr uint64_t kPhiloxMultiplier = 0xD2B74407B1CE6E93ULL;
constexpr uint64_t kPhiloxKeyBump = 0x9E3779B97F4A7C15ULL;

// Philox2x64-10 block function: encrypts the counter pair under the key.
inline void PhiloxBlock(uint64_t key, uint64_t& c0, uint64_t& c1) {
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 product =
        static_cast<unsigned __int128>(kPhiloxMultiplier) * c0;
    const uint64_t hi = static_cast<uint64_t>(product >> 64);
    const uint64_t lo = static_cast<uint64_t>(product);
    c0 = hi ^ key ^ c1;
    c1 = lo;
    key += kPhiloxKeyBump;
  }
}

}  // namespace

uint64_t MixBits(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return MixBits(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

uint64_t RandomSource::Next() {
  if (have_buffered_) {
    have_buffered_ = false;
    return buffered_;
  }
  uint64_t c0 = block_++;
  uint64_t c1 = stream_;
  PhiloxBlock(key_, c0, c1);
  buffered_ = c1;
  have_buffered_ = true;
  return c0;
}

uint32_t RandomSource::NextBelow(uint32_t bound) {
  // Lemire's multiply-shift with rejection; exactly uniform.
  uint64_t x = Next();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<uint64_t>(m);
  if (low < bound) {
    const uint64_t threshold = (0 - static_cast<uint64_t>(bound)) % bound;
    while (low < threshold) {
      x = Next();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint32_t>(m >> 64);
}

}  // namespace dump
