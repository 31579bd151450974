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

#ifndef DUMP_RANDOM_H_
#define DUMP_RANDOM_H_

#include <cstdint>

namespace dump {

// SplitMix64 finalizer. Bijective on 64-bit words.
uint64_t MixBits(uint64_t x);

// Derives a child seed from (seed, index). Used for per-repeat seeds and
// other fixed derivations, so that runs are reproducible regardless of
// execution order.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

// Counter-based generator (Philox2x64-10). A (seed, stream) pair addresses a
// disjoint counter block, so per-user streams never overlap and identical
// (seed, stream) always replays the identical draw sequence, independent of
// how work is scheduled across threads.
class RandomSource {
 public:
  RandomSource(uint64_t seed, uint64_t stream)
      : key_(seed), stream_(stream) {}

  uint64_t seed() const { return key_; }
  uint64_t stream() const { return stream_; }

  // Next 64 uniformly random bits.
  uint64_t Next();

  // Uniform double in [0, 1) with 53-bit resolution.
  double NextUnit() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  bool NextBernoulli(double p) { return NextUnit() < p; }

  // Exactly uniform on {0, ..., bound-1}. bound must be positive.
  uint32_t NextBelow(uint32_t bound);

  // Exactly uniform on {1, ..., k}.
  uint32_t NextDomainValue(int64_t k) {
    return 1u + NextBelow(static_cast<uint32_t>(k));
  }

 private:
  uint64_t key_;
  uint64_t stream_;
  uint64_t block_ = 0;
  uint64_t buffered_ = 0;
  bool have_buffered_ = false;
};

}  // namespace dump

#endif  // DUMP_RANDOM_H_
