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

#ifndef DUMP_HARNESS_H_
#define DUMP_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dump/core.h"
#include "dump/data.h"

namespace dump {

struct ExperimentSpec {
  Protocol protocol = Protocol::kPure;
  ProtocolConfig config;
  // Failure probability used when reporting the achieved central budget.
  double delta = 1e-6;
  int repeats = 50;
  uint64_t seed = 0;
};

struct ExperimentResult {
  double mse_empirical = 0.0;
  double mse_theory = 0.0;
  std::vector<double> mean_estimate;
  double messages_per_user_observed = 0.0;
  // NaN when the run's parameters give no evaluable central bound.
  double epsilon_achieved = 0.0;
  double delta = 0.0;
  double wall_seconds = 0.0;
};

// (1/k) sum over the domain of the squared estimation error.
double EmpiricalMse(const FrequencyEstimate& estimate,
                    const FrequencyVector& truth);

// Runs the user -> shuffle -> estimate pipeline `repeats` times with
// per-repeat derived seeds. Bit-identical output for a fixed (spec, seed)
// regardless of `threads` (wall_seconds excluded).
ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const Dataset& dataset, int threads = 1);

struct CompareRow {
  std::string protocol;
  double epsilon = 0.0;
  int64_t s = 0;
  double gamma = 1.0;
  double mse_empirical = 0.0;
  double mse_theory = 0.0;
  double messages_per_user = 0.0;
  bool feasible = true;
};

struct CompareRequest {
  // Protocol names: pure, mix, flexible-pure, flexible-mix, plus "grr" for
  // the shuffled-GRR baseline (mix forced to s = 0).
  std::vector<std::string> protocols;
  std::vector<double> epsilon_grid;
  double delta = 1e-6;
  std::optional<double> epsilon_l;
  // When absent, calibration spreads the exact required dummy budget as
  // gamma = |S|/(n s); when set, per-user counts come from the flexible
  // inversion at this gamma.
  std::optional<double> gamma;
  int repeats = 50;
  uint64_t seed = 0;
  int threads = 1;
};

// One row per protocol x epsilon grid point, all over the same dataset and
// delta. Rows whose budget a protocol cannot meet are flagged infeasible
// instead of aborting the table.
std::vector<CompareRow> RunComparison(const CompareRequest& request,
                                      const Dataset& dataset);

}  // namespace dump

#endif  // DUMP_HARNESS_H_
