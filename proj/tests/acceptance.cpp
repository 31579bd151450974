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

// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dump/calibration.h"
#include "dump/core.h"
#include "dump/data.h"
#include "dump/harness.h"
#include "dump/oracle.h"
#include "dump/protocols.h"
#include "dump/random.h"
#include "dump/theory.h"

namespace {

using namespace dump;

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Require(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

std::string Fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

Dataset Uniform(int64_t n, int64_t k, uint64_t seed) {
  RandomSource rng(seed, 0);
  return SynthUniform(n, Domain{k}, rng);
}

ExperimentResult RunCalibrated(Protocol base, const CalibrationResult& cal,
                               const Dataset& dataset, double delta,
                               uint64_t seed, int threads = 2) {
  ExperimentSpec spec;
  const bool grr = ProtocolUsesGrr(base);
  spec.protocol = cal.gamma < 1.0
                      ? (grr ? Protocol::kFlexibleMix : Protocol::kFlexiblePure)
                      : base;
  spec.config.n = dataset.n();
  spec.config.domain = dataset.domain;
  spec.config.s = cal.s;
  spec.config.gamma = cal.gamma;
  if (grr) spec.config.epsilon_l = 8.0;
  spec.delta = delta;
  spec.repeats = 50;
  spec.seed = seed;
  return RunExperiment(spec, dataset, threads);
}

// 1. Published flexible dummy-count tables, delta = 1e-6, n = 500000,
//    epsilon_l = 8 for the mix table; gamma = 0.01 columns (8 cells each).
void Criterion1(std::string& info) {
  struct Cell {
    double epsilon;
    int64_t k;
    int64_t expected;
  };
  const Cell pure_cells[] = {{0.4, 50, 13},  {0.6, 50, 6},  {0.8, 50, 4},
                             {1.0, 50, 3},   {0.4, 500, 127}, {0.6, 500, 57},
                             {0.8, 500, 32}, {1.0, 500, 21}};
  const Cell mix_cells[] = {{0.4, 50, 12}, {0.6, 50, 5},   {0.8, 50, 2},
                            {1.0, 50, 1},  {0.4, 500, 119}, {0.6, 500, 46},
                            {0.8, 500, 20}, {1.0, 500, 8}};
  for (const Cell& cell : pure_cells) {
    const auto result = DummiesForFlexible({cell.epsilon, 1e-6}, 500000,
                                           Domain{cell.k}, 0.01, {});
    Require(result.s == cell.expected,
            "pure table eps=" + Fmt(cell.epsilon) + " k=" +
                std::to_string(cell.k) + ": got " + std::to_string(result.s) +
                ", want " + std::to_string(cell.expected));
  }
  for (const Cell& cell : mix_cells) {
    const auto result = DummiesForFlexible({cell.epsilon, 1e-6}, 500000,
                                           Domain{cell.k}, 0.01, 8.0);
    Require(result.s == cell.expected,
            "mix table eps=" + Fmt(cell.epsilon) + " k=" +
                std::to_string(cell.k) + ": got " + std::to_string(result.s) +
                ", want " + std::to_string(cell.expected));
  }
  info = "16 table cells reproduced";
}

// 2. Exact estimator expectations equal true frequencies on every
//    enumerable instance.
void Criterion2(std::string& info) {
  double worst = 0.0;
  int64_t instances = 0;
  for (int64_t k = 2; k <= 3; ++k) {
    for (int64_t n = 1; n <= 3; ++n) {
      std::vector<uint32_t> data(static_cast<size_t>(n), 1);
      while (true) {
        std::vector<int64_t> histogram(static_cast<size_t>(k), 0);
        for (uint32_t x : data) ++histogram[x - 1];
        for (int64_t s = 0; s <= 2; ++s) {
          for (double gamma : {0.5, 1.0}) {
            for (int variant = 0; variant < 3; ++variant) {
              ProtocolConfig config;
              config.n = n;
              config.domain = Domain{k};
              config.s = s;
              config.gamma = gamma;
              Protocol protocol = gamma < 1.0 ? Protocol::kFlexiblePure
                                              : Protocol::kPure;
              if (variant > 0) {
                config.epsilon_l =
                    variant == 1 ? std::log(3.0)
                                 : std::numeric_limits<double>::infinity();
                protocol = gamma < 1.0 ? Protocol::kFlexibleMix
                                       : Protocol::kMix;
              }
              const auto expectation =
                  oracle::EstimatorExpectationExact(protocol, config, data);
              for (int64_t m = 0; m < k; ++m) {
                const double truth =
                    static_cast<double>(histogram[static_cast<size_t>(m)]) /
                    static_cast<double>(n);
                worst = std::max(
                    worst,
                    std::fabs(expectation[static_cast<size_t>(m)] - truth));
              }
              ++instances;
            }
          }
        }
        size_t digit = 0;
        while (digit < data.size() && ++data[digit] > k) {
          data[digit] = 1;
          ++digit;
        }
        if (digit == data.size()) break;
      }
    }
  }
  Require(worst <= 1e-12,
          "max deviation " + Fmt(worst) + " over " +
              std::to_string(instances) + " instances");
  info = std::to_string(instances) + " instances, max dev " + Fmt(worst);
}

// 3. Empirical MSE tracks the closed forms within +/-15% at n = 1e5.
void Criterion3(std::string& info) {
  const Dataset dataset = Uniform(100000, 50, 0xACCE01);

  ExperimentSpec pure;
  pure.protocol = Protocol::kPure;
  pure.config.n = dataset.n();
  pure.config.domain = dataset.domain;
  pure.config.s = 3;
  pure.repeats = 50;
  pure.seed = 31;
  const auto pure_result = RunExperiment(pure, dataset, 2);
  const double pure_theory = 5.88e-7;  // s(k-1)/(n k^2)
  Require(PureMse(pure.config) == pure_theory, "pure formula drifted");
  Require(std::fabs(pure_result.mse_empirical - pure_theory) <=
              0.15 * pure_theory,
          "pure empirical " + Fmt(pure_result.mse_empirical) +
              " vs theory " + Fmt(pure_theory));

  ExperimentSpec mix = pure;
  mix.protocol = Protocol::kMix;
  mix.config.s = 1;
  mix.config.epsilon_l = 8.0;
  mix.seed = 32;
  const auto mix_result = RunExperiment(mix, dataset, 2);
  const double mix_theory = 2.060433844460122e-7;
  Require(std::fabs(MixMse(mix.config) - mix_theory) <= 1e-12 * mix_theory,
          "mix formula drifted");
  Require(std::fabs(mix_result.mse_empirical - mix_theory) <=
              0.15 * mix_theory,
          "mix empirical " + Fmt(mix_result.mse_empirical) + " vs theory " +
              Fmt(mix_theory));
  info = "pure " + Fmt(pure_result.mse_empirical) + " ~ " + Fmt(pure_theory) +
         ", mix " + Fmt(mix_result.mse_empirical) + " ~ " + Fmt(mix_theory);
}

// 4. Domain size barely moves pureDUMP accuracy at fixed epsilon.
void Criterion4(std::string& info) {
  double low = 1e300;
  double high = 0.0;
  std::ostringstream detail;
  for (int64_t k : {50, 500, 5000}) {
    const Dataset dataset = Uniform(500000, k, 0xACCE04 + k);
    const auto cal = CalibrateExact({1.0, 1e-6}, dataset.n(), dataset.domain,
                                    {});
    const auto result =
        RunCalibrated(Protocol::kPure, cal, dataset, 1e-6, 41 + k);
    Require(std::fabs(result.mse_empirical - result.mse_theory) <=
                0.15 * result.mse_theory,
            "k=" + std::to_string(k) + " empirical " +
                Fmt(result.mse_empirical) + " vs theory " +
                Fmt(result.mse_theory));
    low = std::min(low, result.mse_empirical);
    high = std::max(high, result.mse_empirical);
    detail << " k" << k << "=" << Fmt(result.mse_empirical);
  }
  Require(high / low < 2.0,
          "spread " + Fmt(high / low) + "x across domain sizes");
  info = "spread " + Fmt(high / low) + "x;" + detail.str();
}

// 5. A 10x user increase cuts the MSE 100x at fixed epsilon.
void Criterion5(std::string& info) {
  double mse[2];
  int index = 0;
  for (int64_t n : {5000, 50000}) {
    const Dataset dataset = Uniform(n, 50, 0xACCE05 + n);
    const auto cal = CalibrateExact({1.0, 1e-6}, n, Domain{50}, {});
    mse[index++] =
        RunCalibrated(Protocol::kPure, cal, dataset, 1e-6, 51 + n)
            .mse_empirical;
  }
  const double ratio = mse[0] / mse[1];
  Require(ratio >= 70.0 && ratio <= 130.0, "ratio " + Fmt(ratio));
  info = "mse(5e3)/mse(5e4) = " + Fmt(ratio);
}

// 6. Exact binomial tails never exceed the certified delta.
void Criterion6(std::string& info) {
  int64_t checks = 0;
  double worst_margin = 0.0;
  for (int64_t k : {10, 50}) {
    for (double delta : {1e-4, 1e-6}) {
      for (int tenth = 2; tenth <= 10; ++tenth) {
        const double epsilon = tenth / 10.0;
        const auto cal = DummiesForPure({epsilon, delta}, 100, Domain{k});
        const double tail = oracle::PureDpTailCheck(
            static_cast<int64_t>(cal.total_dummies), Domain{k}, epsilon);
        Require(tail <= delta, "k=" + std::to_string(k) + " delta=" +
                                   Fmt(delta) + " eps=" + Fmt(epsilon) +
                                   " tail " + Fmt(tail));
        worst_margin = std::max(worst_margin, tail / delta);
        ++checks;
      }
    }
  }
  info = std::to_string(checks) + " calibrations, worst tail/delta " +
         Fmt(worst_margin);
}

// 7. Amplified local bound: Monte-Carlo violations under delta_r, value
//    matches the formula, and more dummies mean a tighter bound.
void Criterion7(std::string& info) {
  const auto check = oracle::LocalAmplificationEmpirical(5.0, 10000,
                                                         Domain{50}, 1e-4,
                                                         1000000, 0xACCE07);
  Require(check.valid, "bound unexpectedly out of validity");
  Require(check.violation_rate <= 1e-4,
          "violation rate " + Fmt(check.violation_rate));
  Require(std::fabs(check.epsilon_r - 4.274) <= 1e-3,
          "eps_r " + Fmt(check.epsilon_r));
  double previous = check.epsilon_r;
  for (int64_t s : {30000, 100000}) {
    const double value =
        EpsilonLocalAmplified(5.0, s, Domain{50}, 1e-4).epsilon_r;
    Require(value < previous,
            "eps_r not decreasing at s=" + std::to_string(s));
    previous = value;
  }
  info = "eps_r " + Fmt(check.epsilon_r) + ", violations " +
         Fmt(check.violation_rate);
}

// 8. Structural invariants: sum-to-one, permutation invariance,
//    thread-count invariance. All bit-level.
void Criterion8(std::string& info) {
  const Dataset dataset = Uniform(5000, 50, 0xACCE08);

  ProtocolConfig pure_config;
  pure_config.n = dataset.n();
  pure_config.domain = dataset.domain;
  pure_config.s = 3;
  auto batch = GenerateBatchSerial(dataset, pure_config, Protocol::kPure, 81);
  auto estimate = PureEstimate(batch);
  const double pure_sum =
      std::accumulate(estimate.z.begin(), estimate.z.end(), 0.0);
  Require(std::fabs(pure_sum - 1.0) <= 1e-12 * 50,
          "pure sum " + Fmt(pure_sum));

  ProtocolConfig mix_config = pure_config;
  mix_config.epsilon_l = 8.0;
  auto mix_batch =
      GenerateBatchSerial(dataset, mix_config, Protocol::kMix, 82);
  auto mix_estimate = MixEstimate(mix_batch);
  const double mix_sum =
      std::accumulate(mix_estimate.z.begin(), mix_estimate.z.end(), 0.0);
  Require(std::fabs(mix_sum - 1.0) <= 1e-12 * 50, "mix sum " + Fmt(mix_sum));

  std::reverse(mix_batch.values.begin(), mix_batch.values.end());
  Require(MixEstimate(mix_batch).z == mix_estimate.z,
          "estimate changed under permutation");

  ExperimentSpec spec;
  spec.protocol = Protocol::kFlexibleMix;
  spec.config = mix_config;
  spec.config.s = 4;
  spec.config.gamma = 0.4;
  spec.repeats = 10;
  spec.seed = 83;
  const auto single = RunExperiment(spec, dataset, 1);
  const auto threaded = RunExperiment(spec, dataset, 4);
  Require(single.mse_empirical == threaded.mse_empirical &&
              single.mean_estimate == threaded.mean_estimate &&
              single.messages_per_user_observed ==
                  threaded.messages_per_user_observed,
          "threads=1 vs threads=4 results differ");
  info = "sum-to-one, permutation, thread invariance all bit-exact";
}

// 9. Expected extra messages per user on a Ratings-shaped workload.
void Criterion9(std::string& info) {
  const int64_t n = 494352;
  const Domain k2000{2000};
  const auto pure = CalibrateExact({1.0, 1e-6}, n, k2000, {});
  const auto mix = CalibrateExact({1.0, 1e-6}, n, k2000, 8.0);
  const double pure_extra = pure.total_dummies / static_cast<double>(n);
  const double mix_extra = mix.total_dummies / static_cast<double>(n);
  Require(pure_extra >= 0.3 && pure_extra <= 1.2,
          "pure extra " + Fmt(pure_extra));
  // Golden values from the first verified run of this calibration.
  Require(std::fabs(pure_extra - 0.821769542104974) <= 1e-9,
          "pure extra drifted: " + Fmt(pure_extra));
  Require(std::fabs(mix_extra - 0.46427551718798926) <= 1e-9,
          "mix extra drifted: " + Fmt(mix_extra));
  Require(mix_extra < pure_extra, "mix not cheaper than pure");
  info = "pure +" + Fmt(pure_extra) + " msgs, mix +" + Fmt(mix_extra);
}

// 10. One full pureDUMP repeat (2e6 messages) in under two seconds,
//     single-threaded.
void Criterion10(std::string& info) {
  const Dataset dataset = Uniform(500000, 50, 0xACCE10);
  ProtocolConfig config;
  config.n = dataset.n();
  config.domain = dataset.domain;
  config.s = 3;
  const auto start = std::chrono::steady_clock::now();
  const auto batch =
      GenerateBatchSerial(dataset, config, Protocol::kPure, 101);
  const auto estimate = PureEstimate(batch);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Require(batch.values.size() == 2000000, "unexpected batch size");
  Require(estimate.z.size() == 50, "unexpected estimate size");
  Require(elapsed < 2.0, "repeat took " + Fmt(elapsed) + "s");
  info = "2e6 messages in " + Fmt(elapsed) + "s";
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_seconds;
  std::function<void(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "calibration-tables", 1.0, Criterion1},
      {2, "unbiasedness-oracle", 60.0, Criterion2},
      {3, "empirical-vs-theory-mse", 240.0, Criterion3},
      {4, "domain-size-insensitivity", 0.0, Criterion4},
      {5, "user-count-scaling", 0.0, Criterion5},
      {6, "privacy-bound-conservativeness", 300.0, Criterion6},
      {7, "local-amplification-monte-carlo", 0.0, Criterion7},
      {8, "structural-invariants", 0.0, Criterion8},
      {9, "communication-accounting", 0.0, Criterion9},
      {10, "single-repeat-performance", 0.0, Criterion10},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string info;
    bool pass = true;
    std::string detail;
    try {
      criterion.run(info);
    } catch (const std::exception& error) {
      pass = false;
      detail = error.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (pass && criterion.time_limit_seconds > 0.0 &&
        elapsed > criterion.time_limit_seconds) {
      pass = false;
      detail = "exceeded " + Fmt(criterion.time_limit_seconds) +
               "s time limit";
    }
    std::printf("[%s] criterion %2d %-32s (%.2fs)%s%s\n",
                pass ? "PASS" : "FAIL", criterion.id, criterion.name, elapsed,
                (pass ? (info.empty() ? "" : " ") : " "),
                (pass ? info.c_str() : detail.c_str()));
    if (!pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
