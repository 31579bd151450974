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

#ifndef DUMP_PROTOCOLS_H_
#define DUMP_PROTOCOLS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dump/core.h"
#include "dump/data.h"
#include "dump/random.h"

namespace dump {

// Keep/replace probabilities of GRR on a size-k domain:
// p = e^eps / (e^eps + k - 1) for the true value, q = 1/(e^eps + k - 1)
// for each other value.
struct GrrProbabilities {
  double p = 1.0;
  double q = 0.0;
};

GrrProbabilities GrrProbabilitiesFor(double epsilon_l, Domain domain);

// Reports the true value with probability 1-lambda, otherwise a fresh
// uniform draw from {1..k} (which may coincide with the true value).
uint32_t GrrRandomize(uint32_t x, double lambda, Domain domain,
                      RandomSource& rng);

// User-side encoders. Each consumes only the caller-supplied stream, so a
// fixed (seed, stream) pins the report exactly.
Report PureUserReport(uint32_t x, const ProtocolConfig& config,
                      RandomSource& rng);
Report MixUserReport(uint32_t x, const ProtocolConfig& config,
                     RandomSource& rng);
Report FlexibleUserReport(uint32_t x, const ProtocolConfig& config,
                          Protocol protocol, RandomSource& rng);

// Uniformly random permutation of the multiset union of the reports.
ShuffledBatch ShuffleReports(std::span<const Report> reports,
                             const ProtocolConfig& config, RandomSource& rng);

// Value counts of a batch; exact integers, so the reduction commutes and
// results do not depend on the thread count.
std::vector<int64_t> CountValues(std::span<const uint32_t> values, int64_t k,
                                 int threads = 1);

// Debiasing estimators. The frequency vector is a pure function of the
// value counts, hence permutation-invariant bit for bit.
FrequencyEstimate PureEstimate(const ShuffledBatch& batch);
FrequencyEstimate MixEstimate(const ShuffledBatch& batch);
FrequencyEstimate FlexiblePureEstimate(const ShuffledBatch& batch);
FrequencyEstimate FlexibleMixEstimate(const ShuffledBatch& batch);
FrequencyEstimate Estimate(Protocol protocol, const ShuffledBatch& batch,
                           int threads = 1);

// Debias straight from counts (no batch-shape checks). Shared by the
// estimators above and by exact-enumeration checks.
void EstimateFromCounts(Protocol protocol, std::span<const int64_t> counts,
                        const ProtocolConfig& config, std::span<double> z_out);

// Full user->shuffle pass over a dataset for one repeat. The serial version
// is the reference implementation; the parallel version distributes users
// across OpenMP threads into a canonical layout and must produce the
// identical batch for any thread count.
ShuffledBatch GenerateBatchSerial(const Dataset& dataset,
                                  const ProtocolConfig& config,
                                  Protocol protocol, uint64_t repeat_seed);
ShuffledBatch GenerateBatchParallel(const Dataset& dataset,
                                    const ProtocolConfig& config,
                                    Protocol protocol, uint64_t repeat_seed,
                                    int threads);
ShuffledBatch GenerateBatch(const Dataset& dataset,
                            const ProtocolConfig& config, Protocol protocol,
                            uint64_t repeat_seed, int threads);

// Stream id reserved for the batch-level shuffle (never a user index).
inline constexpr uint64_t kShuffleStream = ~0ULL;

}  // namespace dump

#endif  // DUMP_PROTOCOLS_H_
