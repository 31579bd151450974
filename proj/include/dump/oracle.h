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

#ifndef DUMP_ORACLE_H_
#define DUMP_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dump/core.h"

namespace dump::oracle {

// Exact output pmf of GRR: p at index x-1, q elsewhere.
std::vector<double> GrrExactPmf(uint32_t x, double epsilon_l, Domain domain);

// Exact expectation of the named estimator over every joint randomizer and
// dummy outcome, by full enumeration. Unbiasedness means this must equal
// the dataset's empirical frequencies. Limited to n <= 4, k <= 3, s <= 3.
std::vector<double> EstimatorExpectationExact(
    Protocol protocol, const ProtocolConfig& config,
    const std::vector<uint32_t>& data);

// Exact evaluation of the two binomial tails the pureDUMP bound controls:
//   Pr[S1 >= c e^{eps/2}] + Pr[S2 <= c e^{-eps/2}],
// with S1 = Bin(|S|-1, 1/k) + 1, S2 = Bin(|S|-1, 1/k), c = (|S|-1)/k.
// A sum <= delta certifies the calibrated parameters at that delta.
double PureDpTailCheck(int64_t total_dummies, Domain domain, double epsilon);

struct AmplificationCheck {
  double violation_rate = 0.0;
  double epsilon_r = 0.0;
  bool valid = false;
  int64_t trials = 0;
};

// Monte-Carlo check of the dummy-amplified local bound: samples the
// (n1, n2) pair from its binomial law and counts how often the likelihood
// ratio (e^el n1 + n2)/(e^el n2 + n1) exceeds e^{epsilon_r}. When the bound
// is valid the rate must not exceed delta_r.
AmplificationCheck LocalAmplificationEmpirical(double epsilon_l, int64_t s,
                                               Domain domain, double delta_r,
                                               int64_t trials, uint64_t seed);

// Pearson chi-square statistic of observed counts against expected
// probabilities.
double ChiSquareStatistic(std::span<const int64_t> observed,
                          std::span<const double> expected_probs);

// 99.9% chi-square quantile (exact table for small dof, Wilson-Hilferty
// otherwise). Statistic above this rejects at significance 1e-3.
double ChiSquareCritical999(int64_t dof);

}  // namespace dump::oracle

#endif  // DUMP_ORACLE_H_
