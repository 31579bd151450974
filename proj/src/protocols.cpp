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

#include "dump/protocols.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "dump/calibration.h"

namespace dump {

namespace {

void CheckDomainValue(uint32_t x, Domain domain) {
  if (x < 1 || static_cast<int64_t>(x) > domain.k) {
    ThrowError(ErrorCode::kValueOutOfDomain,
               "value " + std::to_string(x) + " outside [1, " +
                   std::to_string(domain.k) + "]");
  }
}

// Report size for one user. Consumes the same leading draws as EncodeInto,
// so both passes of the parallel kernel see identical randomness.
int64_t DrawReportSize(const ProtocolConfig& config, bool use_grr,
                       double lambda, RandomSource& rng) {
  if (config.gamma >= 1.0) return config.s + 1;
  if (use_grr && rng.NextBernoulli(lambda)) rng.NextDomainValue(config.domain.k);
  return rng.NextBernoulli(config.gamma) ? config.s + 1 : 1;
}

// Canonical per-user draw sequence: (1) GRR branch, (2) send/skip branch
// when gamma < 1, (3) s dummy values, (4) within-report shuffle. The report
// layout before step 4 is [dummies..., randomized value].
void EncodeInto(uint32_t x, const ProtocolConfig& config, bool use_grr,
                double lambda, RandomSource& rng, std::span<uint32_t> out) {
  const int64_t k = config.domain.k;
  uint32_t randomized = x;
  if (use_grr && rng.NextBernoulli(lambda)) {
    randomized = rng.NextDomainValue(k);
  }
  bool send_dummies = true;
  if (config.gamma < 1.0) {
    send_dummies = rng.NextBernoulli(config.gamma);
  }
  size_t pos = 0;
  if (send_dummies) {
    for (int64_t j = 0; j < config.s; ++j) {
      out[pos++] = rng.NextDomainValue(k);
    }
  }
  out[pos++] = randomized;
  // The shuffler hides cross-user order; shuffling inside the report also
  // hides which message carries the data value from the shuffler itself.
  for (size_t i = out.size() - 1; i > 0; --i) {
    std::swap(out[i], out[rng.NextBelow(static_cast<uint32_t>(i + 1))]);
  }
}

Report EncodeReport(uint32_t x, const ProtocolConfig& config, bool use_grr,
                    bool flexible, RandomSource& rng) {
  ValidateConfig(config);
  CheckDomainValue(x, config.domain);
  double lambda = 0.0;
  if (use_grr) {
    if (!config.epsilon_l.has_value()) {
      ThrowError(ErrorCode::kDegenerateRandomizer,
                 "mix encoder needs epsilon_l");
    }
    lambda = LambdaFromEpsilonL(*config.epsilon_l, config.domain);
  }
  ProtocolConfig effective = config;
  if (!flexible) effective.gamma = 1.0;
  RandomSource sizing = rng;
  const int64_t size = DrawReportSize(effective, use_grr, lambda, sizing);
  std::vector<uint32_t> values(static_cast<size_t>(size));
  EncodeInto(x, effective, use_grr, lambda, rng, values);
  return Report(std::move(values), config);
}

void FisherYates(std::span<uint32_t> values, RandomSource& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1],
              values[rng.NextBelow(static_cast<uint32_t>(i))]);
  }
}

void CheckBatchShape(const ShuffledBatch& batch, bool require_full_size) {
  ValidateConfig(batch.config);
  if (batch.n < 1) {
    ThrowError(ErrorCode::kInvalidCount, "batch has no users");
  }
  if (require_full_size) {
    const int64_t expected = batch.n * (batch.config.s + 1);
    if (static_cast<int64_t>(batch.values.size()) != expected) {
      ThrowError(ErrorCode::kSizeMismatch,
                 "batch holds " + std::to_string(batch.values.size()) +
                     " messages, expected n(s+1) = " +
                     std::to_string(expected));
    }
  }
}

FrequencyEstimate EstimateWithCounts(Protocol protocol,
                                     const ShuffledBatch& batch,
                                     int threads) {
  const auto counts =
      CountValues(batch.values, batch.config.domain.k, threads);
  FrequencyEstimate estimate;
  estimate.config = batch.config;
  estimate.config.n = batch.n;
  estimate.z.resize(static_cast<size_t>(batch.config.domain.k));
  EstimateFromCounts(protocol, counts, estimate.config, estimate.z);
  return estimate;
}

}  // namespace

GrrProbabilities GrrProbabilitiesFor(double epsilon_l, Domain domain) {
  if (!(epsilon_l >= 0.0)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "epsilon_l must be non-negative, got " +
                   std::to_string(epsilon_l));
  }
  const double k = static_cast<double>(domain.k);
  // q = 1/(e^eps + k - 1) via expm1 so epsilon_l = inf yields q = 0, p = 1.
  GrrProbabilities probs;
  probs.q = 1.0 / (std::expm1(epsilon_l) + k);
  probs.p = 1.0 - (k - 1.0) * probs.q;
  return probs;
}

uint32_t GrrRandomize(uint32_t x, double lambda, Domain domain,
                      RandomSource& rng) {
  CheckDomainValue(x, domain);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  if (rng.NextBernoulli(lambda)) {
    return rng.NextDomainValue(domain.k);
  }
  return x;
}

Report PureUserReport(uint32_t x, const ProtocolConfig& config,
                      RandomSource& rng) {
  if (config.gamma != 1.0) {
    ThrowError(ErrorCode::kInvalidGamma, "pure encoder requires gamma = 1");
  }
  return EncodeReport(x, config, /*use_grr=*/false, /*flexible=*/false, rng);
}

Report MixUserReport(uint32_t x, const ProtocolConfig& config,
                     RandomSource& rng) {
  if (config.gamma != 1.0) {
    ThrowError(ErrorCode::kInvalidGamma, "mix encoder requires gamma = 1");
  }
  return EncodeReport(x, config, /*use_grr=*/true, /*flexible=*/false, rng);
}

Report FlexibleUserReport(uint32_t x, const ProtocolConfig& config,
                          Protocol protocol, RandomSource& rng) {
  return EncodeReport(x, config, ProtocolUsesGrr(protocol), /*flexible=*/true,
                      rng);
}

ShuffledBatch ShuffleReports(std::span<const Report> reports,
                             const ProtocolConfig& config, RandomSource& rng) {
  ShuffledBatch batch;
  batch.config = config;
  batch.n = static_cast<int64_t>(reports.size());
  size_t total = 0;
  for (const Report& report : reports) {
    total += report.values().size();
  }
  batch.values.reserve(total);
  for (const Report& report : reports) {
    batch.values.insert(batch.values.end(), report.values().begin(),
                        report.values().end());
  }
  FisherYates(batch.values, rng);
  return batch;
}

std::vector<int64_t> CountValues(std::span<const uint32_t> values, int64_t k,
                                 int threads) {
  std::vector<int64_t> counts(static_cast<size_t>(k), 0);
  if (threads <= 1) {
    for (uint32_t value : values) {
      ++counts[value - 1];
    }
    return counts;
  }
  const int64_t size = static_cast<int64_t>(values.size());
#pragma omp parallel num_threads(threads)
  {
    std::vector<int64_t> local(static_cast<size_t>(k), 0);
#pragma omp for schedule(static) nowait
    for (int64_t i = 0; i < size; ++i) {
      ++local[values[static_cast<size_t>(i)] - 1];
    }
#pragma omp critical
    {
      for (int64_t j = 0; j < k; ++j) {
        counts[static_cast<size_t>(j)] += local[static_cast<size_t>(j)];
      }
    }
  }
  return counts;
}

void EstimateFromCounts(Protocol protocol, std::span<const int64_t> counts,
                        const ProtocolConfig& config,
                        std::span<double> z_out) {
  const double k = static_cast<double>(config.domain.k);
  const double n = static_cast<double>(config.n);
  const double gamma = ProtocolIsFlexible(protocol) ? config.gamma : 1.0;
  const double dummy_shift =
      gamma * n * static_cast<double>(config.s) / k;
  double grr_shift = 0.0;
  double scale = n;
  if (ProtocolUsesGrr(protocol)) {
    if (!config.epsilon_l.has_value()) {
      ThrowError(ErrorCode::kDegenerateRandomizer,
                 "mix estimator needs epsilon_l");
    }
    const GrrProbabilities probs =
        GrrProbabilitiesFor(*config.epsilon_l, config.domain);
    if (!(probs.p > probs.q)) {
      ThrowError(ErrorCode::kDegenerateRandomizer,
                 "epsilon_l = 0 makes p = q; nothing to invert");
    }
    grr_shift = n * probs.q;
    scale = n * (probs.p - probs.q);
  }
  for (size_t m = 0; m < z_out.size(); ++m) {
    z_out[m] =
        (static_cast<double>(counts[m]) - dummy_shift - grr_shift) / scale;
  }
}

FrequencyEstimate PureEstimate(const ShuffledBatch& batch) {
  CheckBatchShape(batch, /*require_full_size=*/true);
  return EstimateWithCounts(Protocol::kPure, batch, 1);
}

FrequencyEstimate MixEstimate(const ShuffledBatch& batch) {
  CheckBatchShape(batch, /*require_full_size=*/true);
  return EstimateWithCounts(Protocol::kMix, batch, 1);
}

FrequencyEstimate FlexiblePureEstimate(const ShuffledBatch& batch) {
  CheckBatchShape(batch, /*require_full_size=*/false);
  return EstimateWithCounts(Protocol::kFlexiblePure, batch, 1);
}

FrequencyEstimate FlexibleMixEstimate(const ShuffledBatch& batch) {
  CheckBatchShape(batch, /*require_full_size=*/false);
  return EstimateWithCounts(Protocol::kFlexibleMix, batch, 1);
}

FrequencyEstimate Estimate(Protocol protocol, const ShuffledBatch& batch,
                           int threads) {
  CheckBatchShape(batch, !ProtocolIsFlexible(protocol));
  return EstimateWithCounts(protocol, batch, threads);
}

ShuffledBatch GenerateBatchSerial(const Dataset& dataset,
                                  const ProtocolConfig& config,
                                  Protocol protocol, uint64_t repeat_seed) {
  ValidateProtocol(protocol, config);
  if (dataset.n() != config.n) {
    ThrowError(ErrorCode::kDimensionMismatch,
               "config.n does not match the dataset size");
  }
  const bool use_grr = ProtocolUsesGrr(protocol);
  const double lambda =
      use_grr ? LambdaFromEpsilonL(*config.epsilon_l, config.domain) : 0.0;

  ShuffledBatch batch;
  batch.config = config;
  batch.n = config.n;
  for (int64_t user = 0; user < config.n; ++user) {
    RandomSource sizing(repeat_seed, static_cast<uint64_t>(user));
    const int64_t size = DrawReportSize(config, use_grr, lambda, sizing);
    const size_t start = batch.values.size();
    batch.values.resize(start + static_cast<size_t>(size));
    RandomSource rng(repeat_seed, static_cast<uint64_t>(user));
    EncodeInto(dataset.values[static_cast<size_t>(user)], config, use_grr,
               lambda, rng,
               std::span<uint32_t>(batch.values).subspan(start));
  }
  RandomSource shuffle_rng(repeat_seed, kShuffleStream);
  FisherYates(batch.values, shuffle_rng);
  return batch;
}

ShuffledBatch GenerateBatchParallel(const Dataset& dataset,
                                    const ProtocolConfig& config,
                                    Protocol protocol, uint64_t repeat_seed,
                                    int threads) {
  ValidateProtocol(protocol, config);
  if (dataset.n() != config.n) {
    ThrowError(ErrorCode::kDimensionMismatch,
               "config.n does not match the dataset size");
  }
  const bool use_grr = ProtocolUsesGrr(protocol);
  const double lambda =
      use_grr ? LambdaFromEpsilonL(*config.epsilon_l, config.domain) : 0.0;
  const int64_t n = config.n;

  // Pass 1: per-user report sizes (cheap replay of the leading draws).
  std::vector<int64_t> offsets(static_cast<size_t>(n) + 1, 0);
  if (config.gamma >= 1.0) {
    for (int64_t user = 0; user < n; ++user) {
      offsets[static_cast<size_t>(user) + 1] = config.s + 1;
    }
  } else {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int64_t user = 0; user < n; ++user) {
      RandomSource rng(repeat_seed, static_cast<uint64_t>(user));
      offsets[static_cast<size_t>(user) + 1] =
          DrawReportSize(config, use_grr, lambda, rng);
    }
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  // Pass 2: encode each user into its canonical (user-ordered) slot.
  ShuffledBatch batch;
  batch.config = config;
  batch.n = n;
  batch.values.resize(static_cast<size_t>(offsets.back()));
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int64_t user = 0; user < n; ++user) {
    RandomSource rng(repeat_seed, static_cast<uint64_t>(user));
    const size_t start = static_cast<size_t>(offsets[static_cast<size_t>(user)]);
    const size_t size =
        static_cast<size_t>(offsets[static_cast<size_t>(user) + 1]) - start;
    EncodeInto(dataset.values[static_cast<size_t>(user)], config, use_grr,
               lambda, rng,
               std::span<uint32_t>(batch.values).subspan(start, size));
  }

  RandomSource shuffle_rng(repeat_seed, kShuffleStream);
  FisherYates(batch.values, shuffle_rng);
  return batch;
}

ShuffledBatch GenerateBatch(const Dataset& dataset,
                            const ProtocolConfig& config, Protocol protocol,
                            uint64_t repeat_seed, int threads) {
  if (threads <= 1) {
    return GenerateBatchSerial(dataset, config, protocol, repeat_seed);
  }
  return GenerateBatchParallel(dataset, config, protocol, repeat_seed,
                               threads);
}

}  // namespace dump
