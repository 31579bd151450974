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

// Benchmarks the OpenMP batch kernels against the serial reference and
// checks that both produce the identical batch.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "dump/data.h"
#include "dump/protocols.h"
#include "dump/random.h"

namespace {

using namespace dump;

double Time(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark: serial reference vs OpenMP kernels"};
  int64_t n = 500000;
  int64_t k = 50;
  int64_t s = 3;
  double gamma = 1.0;
  double epsilon_l = 0.0;
  int threads = 2;
  int rounds = 3;
  app.add_option("--n", n);
  app.add_option("--k", k);
  app.add_option("--s", s);
  app.add_option("--gamma", gamma);
  app.add_option("--epsilon-l", epsilon_l, "> 0 selects the mix encoder");
  app.add_option("--threads", threads);
  app.add_option("--rounds", rounds);
  CLI11_PARSE(app, argc, argv);

  RandomSource data_rng(42, 0);
  const Dataset dataset = SynthUniform(n, Domain{k}, data_rng);
  ProtocolConfig config;
  config.n = n;
  config.domain = Domain{k};
  config.s = s;
  config.gamma = gamma;
  if (epsilon_l > 0.0) config.epsilon_l = epsilon_l;
  const Protocol protocol =
      gamma < 1.0 ? (epsilon_l > 0.0 ? Protocol::kFlexibleMix
                                     : Protocol::kFlexiblePure)
                  : (epsilon_l > 0.0 ? Protocol::kMix : Protocol::kPure);

  std::printf("protocol=%s n=%lld k=%lld s=%lld gamma=%g threads=%d\n",
              ProtocolName(protocol), static_cast<long long>(n),
              static_cast<long long>(k), static_cast<long long>(s), gamma,
              threads);

  ShuffledBatch serial_batch;
  ShuffledBatch parallel_batch;
  double serial_best = 1e300;
  double parallel_best = 1e300;
  for (int round = 0; round < rounds; ++round) {
    const uint64_t seed = DeriveSeed(7, static_cast<uint64_t>(round));
    serial_best = std::min(serial_best, Time([&] {
      serial_batch = GenerateBatchSerial(dataset, config, protocol, seed);
    }));
    parallel_best = std::min(parallel_best, Time([&] {
      parallel_batch =
          GenerateBatchParallel(dataset, config, protocol, seed, threads);
    }));
    if (serial_batch.values != parallel_batch.values) {
      std::printf("MISMATCH: parallel batch differs from the reference\n");
      return 1;
    }
  }
  const double messages = static_cast<double>(serial_batch.values.size());
  std::printf("generate  serial   %8.4fs  (%.1f Mmsg/s)\n", serial_best,
              messages / serial_best / 1e6);
  std::printf("generate  %d-thread %8.4fs  (%.1f Mmsg/s)  speedup %.2fx\n",
              threads, parallel_best, messages / parallel_best / 1e6,
              serial_best / parallel_best);

  double count_serial = 1e300;
  double count_parallel = 1e300;
  std::vector<int64_t> counts_a;
  std::vector<int64_t> counts_b;
  for (int round = 0; round < rounds; ++round) {
    count_serial = std::min(count_serial, Time([&] {
      counts_a = CountValues(serial_batch.values, k, 1);
    }));
    count_parallel = std::min(count_parallel, Time([&] {
      counts_b = CountValues(serial_batch.values, k, threads);
    }));
    if (counts_a != counts_b) {
      std::printf("MISMATCH: parallel counts differ\n");
      return 1;
    }
  }
  std::printf("count     serial   %8.4fs  (%.1f Mmsg/s)\n", count_serial,
              messages / count_serial / 1e6);
  std::printf("count     %d-thread %8.4fs  (%.1f Mmsg/s)  speedup %.2fx\n",
              threads, count_parallel, messages / count_parallel / 1e6,
              count_serial / count_parallel);
  std::printf("batches identical across implementations\n");
  return 0;
}
