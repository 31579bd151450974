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

#include "dump/harness.h"

#include <chrono>
#include <cmath>
#include <limits>

#include "dump/calibration.h"
#include "dump/protocols.h"
#include "dump/random.h"
#include "dump/theory.h"

namespace dump {

namespace {

double AchievedCentralEpsilon(Protocol protocol, const ProtocolConfig& config,
                              double delta) {
  try {
    const double total =
        config.gamma * static_cast<double>(config.n) *
        static_cast<double>(config.s);
    double epsilon;
    if (ProtocolUsesGrr(protocol)) {
      const double lambda =
          LambdaFromEpsilonL(*config.epsilon_l, config.domain);
      epsilon = EpsilonMixCentral(total, config.n, config.domain, lambda,
                                  delta);
    } else {
      epsilon = EpsilonPureCentral(total, config.domain, delta);
    }
    if (ProtocolIsFlexible(protocol) && config.gamma < 1.0) {
      epsilon -= std::log1p(
          -std::exp(-config.gamma * static_cast<double>(config.n)));
    }
    return epsilon;
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

double EmpiricalMse(const FrequencyEstimate& estimate,
                    const FrequencyVector& truth) {
  if (estimate.z.size() != truth.f.size()) {
    ThrowError(ErrorCode::kDimensionMismatch,
               "estimate has " + std::to_string(estimate.z.size()) +
                   " entries, truth has " + std::to_string(truth.f.size()));
  }
  double sum = 0.0;
  for (size_t m = 0; m < estimate.z.size(); ++m) {
    const double diff = estimate.z[m] - truth.f[m];
    sum += diff * diff;
  }
  return sum / static_cast<double>(estimate.z.size());
}

ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const Dataset& dataset, int threads) {
  ProtocolConfig config = spec.config;
  if (config.n == 0) config.n = dataset.n();
  ValidateProtocol(spec.protocol, config);
  if (config.n != dataset.n()) {
    ThrowError(ErrorCode::kDimensionMismatch,
               "config.n does not match the dataset size");
  }
  if (spec.repeats < 1) {
    ThrowError(ErrorCode::kInvalidCount, "repeats must be at least 1");
  }

  const auto start = std::chrono::steady_clock::now();
  const FrequencyVector truth = TrueFrequencies(dataset);
  const size_t k = truth.f.size();

  ExperimentResult result;
  result.mean_estimate.assign(k, 0.0);
  double mse_sum = 0.0;
  int64_t message_sum = 0;
  for (int repeat = 0; repeat < spec.repeats; ++repeat) {
    const uint64_t repeat_seed =
        DeriveSeed(spec.seed, static_cast<uint64_t>(repeat));
    const ShuffledBatch batch =
        GenerateBatch(dataset, config, spec.protocol, repeat_seed, threads);
    const FrequencyEstimate estimate =
        Estimate(spec.protocol, batch, threads);
    mse_sum += EmpiricalMse(estimate, truth);
    message_sum += static_cast<int64_t>(batch.values.size());
    for (size_t m = 0; m < k; ++m) {
      result.mean_estimate[m] += estimate.z[m];
    }
  }
  const double repeats = static_cast<double>(spec.repeats);
  for (double& value : result.mean_estimate) {
    value /= repeats;
  }
  result.mse_empirical = mse_sum / repeats;
  result.mse_theory = MseForProtocol(spec.protocol, config);
  result.messages_per_user_observed =
      static_cast<double>(message_sum) /
      (static_cast<double>(config.n) * repeats);
  result.epsilon_achieved =
      AchievedCentralEpsilon(spec.protocol, config, spec.delta);
  result.delta = spec.delta;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

std::vector<CompareRow> RunComparison(const CompareRequest& request,
                                      const Dataset& dataset) {
  if (request.protocols.empty() || request.epsilon_grid.empty()) {
    ThrowError(ErrorCode::kIncompatibleSpecs,
               "need at least one protocol and one epsilon");
  }
  std::vector<CompareRow> rows;
  for (const std::string& name : request.protocols) {
    const bool grr_baseline = (name == "grr");
    std::optional<Protocol> base =
        grr_baseline ? std::optional<Protocol>(Protocol::kMix)
                     : ParseProtocol(name);
    if (!base.has_value()) {
      ThrowError(ErrorCode::kIncompatibleSpecs, "unknown protocol " + name);
    }
    const bool uses_grr = ProtocolUsesGrr(*base);
    if (uses_grr && !request.epsilon_l.has_value()) {
      ThrowError(ErrorCode::kIncompatibleSpecs,
                 name + " needs epsilon_l in the request");
    }
    for (double epsilon : request.epsilon_grid) {
      CompareRow row;
      row.protocol = name;
      row.epsilon = epsilon;
      const PrivacyBudget target{epsilon, request.delta};
      const std::optional<double> epsilon_l =
          uses_grr ? request.epsilon_l : std::nullopt;
      try {
        CalibrationResult calibration;
        if (grr_baseline) {
          // Baseline: no dummy points; feasible only where the GRR blanket
          // alone reaches the target.
          const double lambda =
              LambdaFromEpsilonL(*epsilon_l, dataset.domain);
          const double achieved = EpsilonMixCentral(
              0.0, dataset.n(), dataset.domain, lambda, request.delta);
          if (achieved > epsilon) {
            ThrowError(ErrorCode::kBudgetOutOfRange,
                       "no amplification at this epsilon");
          }
          calibration.s = 0;
          calibration.gamma = 1.0;
          calibration.epsilon_achieved = achieved;
          calibration.delta_effective = request.delta;
        } else if (request.gamma.has_value()) {
          calibration = DummiesForFlexible(target, dataset.n(),
                                           dataset.domain, *request.gamma,
                                           epsilon_l);
        } else {
          calibration =
              CalibrateExact(target, dataset.n(), dataset.domain, epsilon_l);
        }

        ExperimentSpec spec;
        spec.protocol = calibration.gamma < 1.0
                            ? (uses_grr ? Protocol::kFlexibleMix
                                        : Protocol::kFlexiblePure)
                            : *base;
        spec.config.n = dataset.n();
        spec.config.domain = dataset.domain;
        spec.config.s = calibration.s;
        spec.config.gamma = calibration.gamma;
        spec.config.epsilon_l = epsilon_l;
        spec.delta = request.delta;
        spec.repeats = request.repeats;
        spec.seed = request.seed;
        const ExperimentResult outcome =
            RunExperiment(spec, dataset, request.threads);

        row.s = calibration.s;
        row.gamma = calibration.gamma;
        row.mse_empirical = outcome.mse_empirical;
        row.mse_theory = outcome.mse_theory;
        row.messages_per_user = MessagesPerUser(spec.config);
        row.feasible = true;
      } catch (const Error&) {
        row.feasible = false;
        row.s = 0;
        row.gamma = 1.0;
        row.mse_empirical = std::numeric_limits<double>::quiet_NaN();
        row.mse_theory = std::numeric_limits<double>::quiet_NaN();
        row.messages_per_user = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace dump
