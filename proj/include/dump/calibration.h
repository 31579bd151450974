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

#ifndef DUMP_CALIBRATION_H_
#define DUMP_CALIBRATION_H_

#include <cstdint>
#include <optional>

#include "dump/core.h"

namespace dump {

// Outcome of inverting a privacy bound for the minimal dummy count.
// total_dummies is the expected total gamma*n*s (= n*s when gamma = 1).
struct CalibrationResult {
  int64_t s = 0;
  double gamma = 1.0;
  double total_dummies = 0.0;
  double epsilon_achieved = 0.0;
  double delta_effective = 0.0;
};

// Central budget achieved by pureDUMP with |S| total dummy points:
// epsilon_d = sqrt(14 k ln(2/delta) / (|S| - 1)).
// Requires |S| > 1 and delta in (0, 0.2907]. Callers must check the
// returned value against the <= 1 validity range of the bound.
double EpsilonPureCentral(double total_dummies, Domain domain, double delta);

// Local budget pureDUMP provides against the shuffler with s dummy points
// per user: same formula with |S| replaced by s.
double EpsilonPureLocal(int64_t s, Domain domain, double delta);

// Uniform-replacement rate of GRR: lambda = k q = k / (e^epsilon_l + k - 1).
double LambdaFromEpsilonL(double epsilon_l, Domain domain);

// Central budget achieved by mixDUMP:
// epsilon_s = sqrt(14 k ln(4/delta) /
//                  (|S| + (n-1)lambda - sqrt(2 (n-1) lambda ln(2/delta)) - 1)).
// Requires delta in (0, 0.5814], lambda in (0, 1], and a positive
// denominator (too few users/dummies otherwise).
double EpsilonMixCentral(double total_dummies, int64_t n, Domain domain,
                         double lambda, double delta);

// Minimal per-user dummy count so that pureDUMP meets the target budget.
// s is floored at 1 (the protocol always sends s dummies per user).
CalibrationResult DummiesForPure(PrivacyBudget target, int64_t n,
                                 Domain domain);

// Minimal per-user dummy count so that mixDUMP with the given GRR budget
// meets the target. s = 0 is allowed: GRR alone may already suffice, which
// doubles as the plain shuffled-GRR baseline.
CalibrationResult DummiesForMix(PrivacyBudget target, int64_t n, Domain domain,
                                double epsilon_l);

struct AmplifiedLocalBudget {
  double epsilon_r = 0.0;
  // True when the bound's k/s cap holds and the value is a certified
  // amplification; otherwise epsilon_r is still the formula value but no
  // amplification claim is made.
  bool valid = false;
};

// Local budget after wrapping an epsilon_l-LDP randomizer with s dummy
// points: epsilon_r = ln( k / (1 - sqrt(2 k ln(1/delta_r)/s))
//                         * (1 + e^epsilon_l / (s (e^epsilon_l + 1))) ).
// Throws SqrtDomain when 2 k ln(1/delta_r)/s >= 1.
AmplifiedLocalBudget EpsilonLocalAmplified(double epsilon_l, int64_t s,
                                           Domain domain, double delta_r);

// Budget degradation when each user sends dummies only with probability
// gamma: (epsilon - ln(1 - e^{-gamma n}), delta + e^{-gamma n}).
PrivacyBudget FlexibleAdjust(PrivacyBudget base, double gamma, int64_t n);

// Minimal per-user dummy count for the flexible protocols, modelling the
// total as |S| = gamma*n*s and tightening the target by the FlexibleAdjust
// penalty (numerically zero whenever gamma*n >= 745). epsilon_l absent
// selects the pure variant.
CalibrationResult DummiesForFlexible(PrivacyBudget target, int64_t n,
                                     Domain domain, double gamma,
                                     std::optional<double> epsilon_l);

// Budget-exact calibration: meets the target with the minimal expected
// total |S|, realized as per-user count s and sending probability
// gamma = |S| / (n s). Reproduces the fractional expected-messages-per-user
// accounting; gamma = 1 with s = 0 when no dummies are needed at all.
CalibrationResult CalibrateExact(PrivacyBudget target, int64_t n,
                                 Domain domain,
                                 std::optional<double> epsilon_l);

}  // namespace dump

#endif  // DUMP_CALIBRATION_H_
