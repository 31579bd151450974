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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dump/harness.h"
#include "dump/random.h"
#include "dump/theory.h"
#include "test_support.h"

using namespace dump;
using namespace dump::testing;

namespace {

Dataset UniformDataset(int64_t n, int64_t k, uint64_t seed) {
  RandomSource rng(seed, 0);
  return SynthUniform(n, Domain{k}, rng);
}

}  // namespace

TEST_CASE("empirical mse worked examples") {
  FrequencyEstimate estimate;
  estimate.z = {1.0, 0.0};
  FrequencyVector truth;
  truth.f = {0.0, 1.0};
  CHECK(EmpiricalMse(estimate, truth) == 1.0);

  estimate.z = {0.6, 0.4};
  truth.f = {0.5, 0.5};
  CHECK(NearRel(EmpiricalMse(estimate, truth), 0.01, 1e-12));

  estimate.z = truth.f;
  CHECK(EmpiricalMse(estimate, truth) == 0.0);
}

TEST_CASE("empirical mse rejects mismatched dimensions") {
  FrequencyEstimate estimate;
  estimate.z = {1.0, 0.0, 0.0};
  FrequencyVector truth;
  truth.f = {0.5, 0.5};
  CHECK_THROWS_CODE(EmpiricalMse(estimate, truth),
                    ErrorCode::kDimensionMismatch);
}

TEST_CASE("pure run with s = 0 reports zero error on every repeat") {
  const auto dataset = UniformDataset(2000, 10, 1);
  ExperimentSpec spec;
  spec.protocol = Protocol::kPure;
  spec.config = MakeConfig(2000, 10, 0);
  spec.repeats = 5;
  spec.seed = 99;
  const auto result = RunExperiment(spec, dataset);
  CHECK(result.mse_empirical == 0.0);
  CHECK(result.messages_per_user_observed == 1.0);
}

TEST_CASE("runs are reproducible and parallelism invariant") {
  const auto dataset = UniformDataset(4000, 20, 2);
  ExperimentSpec spec;
  spec.protocol = Protocol::kFlexibleMix;
  spec.config = MakeConfig(4000, 20, 3, 0.4, 4.0);
  spec.repeats = 6;
  spec.seed = 7;
  const auto first = RunExperiment(spec, dataset, 1);
  const auto second = RunExperiment(spec, dataset, 1);
  const auto threaded = RunExperiment(spec, dataset, 4);
  CHECK(first.mse_empirical == second.mse_empirical);
  CHECK(first.mean_estimate == second.mean_estimate);
  CHECK(first.mse_empirical == threaded.mse_empirical);
  CHECK(first.mean_estimate == threaded.mean_estimate);
  CHECK(first.messages_per_user_observed ==
        threaded.messages_per_user_observed);

  ExperimentSpec reseeded = spec;
  reseeded.seed = 8;
  const auto different = RunExperiment(reseeded, dataset, 1);
  CHECK(first.mse_empirical != different.mse_empirical);
}

TEST_CASE("messages per user is exactly 1+s for gamma = 1") {
  const auto dataset = UniformDataset(1000, 10, 3);
  ExperimentSpec spec;
  spec.protocol = Protocol::kPure;
  spec.config = MakeConfig(1000, 10, 4);
  spec.repeats = 3;
  spec.seed = 5;
  const auto result = RunExperiment(spec, dataset);
  CHECK(result.messages_per_user_observed == 5.0);
}

TEST_CASE("flexible messages per user converge to 1 + gamma*s") {
  const auto dataset = UniformDataset(20000, 10, 4);
  ExperimentSpec spec;
  spec.protocol = Protocol::kFlexiblePure;
  spec.config = MakeConfig(20000, 10, 5, 0.2);
  spec.repeats = 10;
  spec.seed = 6;
  const auto result = RunExperiment(spec, dataset);
  // Bin(n*repeats, gamma): sd of the mean extra count ~ sqrt(g(1-g)/N)*s.
  const double sd =
      5.0 * std::sqrt(0.2 * 0.8 / (20000.0 * 10.0));
  CHECK(std::fabs(result.messages_per_user_observed - 2.0) <= 4.0 * sd);
}

TEST_CASE("empirical mse tracks the pure formula") {
  const auto dataset = UniformDataset(10000, 10, 5);
  ExperimentSpec spec;
  spec.protocol = Protocol::kPure;
  spec.config = MakeConfig(10000, 10, 5);
  spec.repeats = 200;
  spec.seed = 11;
  const auto result = RunExperiment(spec, dataset);
  CHECK(NearRel(result.mse_empirical, result.mse_theory, 0.15));
  CHECK(result.mse_theory == PureMse(spec.config));
}

TEST_CASE("mean estimate is unbiased within 4 standard errors") {
  // Componentwise: Var(z_m) ~ s(k-1)/(n k^2) per repeat (uniform data).
  const int64_t n = 10000, k = 10, s = 5;
  const int repeats = 200;
  const auto dataset = UniformDataset(n, k, 6);
  const auto truth = TrueFrequencies(dataset);
  ExperimentSpec spec;
  spec.protocol = Protocol::kPure;
  spec.config = MakeConfig(n, k, s);
  spec.repeats = repeats;
  spec.seed = 12;
  const auto result = RunExperiment(spec, dataset);
  const double sigma = std::sqrt(PureMse(spec.config) /
                                 static_cast<double>(repeats));
  for (int64_t m = 0; m < k; ++m) {
    CHECK(std::fabs(result.mean_estimate[m] - truth.f[m]) <= 4.0 * sigma);
  }
}

TEST_CASE("empirical mse stays within 15% of theory across meta-trials") {
  // Five independent 50-repeat means; each lands in [0.85, 1.15] x theory.
  const auto dataset = UniformDataset(20000, 50, 10);
  ExperimentSpec spec;
  spec.protocol = Protocol::kPure;
  spec.config = MakeConfig(20000, 50, 3);
  spec.repeats = 50;
  for (uint64_t meta = 0; meta < 5; ++meta) {
    spec.seed = DeriveSeed(77, meta);
    const auto result = RunExperiment(spec, dataset, 2);
    CHECK(result.mse_empirical >= 0.85 * result.mse_theory);
    CHECK(result.mse_empirical <= 1.15 * result.mse_theory);
  }
}

TEST_CASE("mix theory holds within the widened tolerance on skewed data") {
  // The GRR variance term drops the data-dependent part, so skewed or
  // randomizer-dominated runs get the 25% comparison tolerance.
  RandomSource rng(13, 1);
  const auto dataset = SynthFromHistogram(
      {12000, 4000, 2000, 1000, 500, 250, 125, 75, 40, 10}, rng);
  REQUIRE(dataset.n() == 20000);
  ExperimentSpec spec;
  spec.protocol = Protocol::kMix;
  spec.config = MakeConfig(20000, 10, 1, 1.0, 2.0);
  spec.repeats = 50;
  spec.seed = 14;
  const auto result = RunExperiment(spec, dataset, 2);
  CHECK(std::fabs(result.mse_empirical - result.mse_theory) <=
        0.25 * result.mse_theory);
}

TEST_CASE("comparison emits one row per protocol and epsilon") {
  const auto dataset = UniformDataset(5000, 10, 7);
  CompareRequest request;
  request.protocols = {"pure", "mix"};
  request.epsilon_grid = {0.5, 1.0};
  request.delta = 1e-6;
  request.epsilon_l = 8.0;
  request.repeats = 3;
  request.seed = 1;
  const auto rows = RunComparison(request, dataset);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.feasible);
    CHECK(row.messages_per_user >= 1.0);
    CHECK(row.mse_empirical > 0.0);
    CHECK(row.mse_theory > 0.0);
  }
  CHECK(rows[0].protocol == "pure");
  CHECK(rows[0].epsilon == 0.5);
  CHECK(rows[3].protocol == "mix");
  CHECK(rows[3].epsilon == 1.0);
  // Tighter budgets need more dummy traffic.
  CHECK(rows[0].messages_per_user > rows[1].messages_per_user);
}

TEST_CASE("grr baseline rows are infeasible at small epsilon") {
  const auto dataset = UniformDataset(5000, 10, 8);
  CompareRequest request;
  request.protocols = {"grr"};
  request.epsilon_grid = {0.05, 1.0};
  request.delta = 1e-6;
  request.epsilon_l = 1.0;
  request.repeats = 2;
  request.seed = 2;
  const auto rows = RunComparison(request, dataset);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].feasible);
  CHECK(rows[1].feasible);
  CHECK(rows[1].s == 0);
  CHECK(rows[1].messages_per_user == 1.0);
}

TEST_CASE("comparison rejects grr without epsilon_l") {
  const auto dataset = UniformDataset(100, 5, 9);
  CompareRequest request;
  request.protocols = {"grr"};
  request.epsilon_grid = {1.0};
  CHECK_THROWS_CODE(RunComparison(request, dataset),
                    ErrorCode::kIncompatibleSpecs);
}
