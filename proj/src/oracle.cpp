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

#include "dump/oracle.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dump/calibration.h"
#include "dump/protocols.h"
#include "dump/random.h"

namespace dump::oracle {

namespace {

// One possible report of a single user: its probability and the value
// counts it contributes.
struct UserOutcome {
  long double prob;
  std::vector<int64_t> delta;
};

std::vector<UserOutcome> EnumerateUserOutcomes(uint32_t x, Protocol protocol,
                                               const ProtocolConfig& config) {
  const int64_t k = config.domain.k;
  const bool use_grr = ProtocolUsesGrr(protocol);
  const bool flexible = ProtocolIsFlexible(protocol);
  const long double gamma = flexible ? config.gamma : 1.0L;

  std::vector<std::pair<long double, uint32_t>> randomized;
  if (use_grr) {
    const GrrProbabilities probs =
        GrrProbabilitiesFor(*config.epsilon_l, config.domain);
    for (int64_t v = 1; v <= k; ++v) {
      const long double pr = (static_cast<int64_t>(x) == v)
                                 ? static_cast<long double>(probs.p)
                                 : static_cast<long double>(probs.q);
      randomized.emplace_back(pr, static_cast<uint32_t>(v));
    }
  } else {
    randomized.emplace_back(1.0L, x);
  }

  std::vector<UserOutcome> outcomes;
  const long double dummy_tuple_prob =
      std::pow(1.0L / static_cast<long double>(k),
               static_cast<long double>(config.s));
  for (const auto& [pr, value] : randomized) {
    if (gamma < 1.0L) {
      UserOutcome skip;
      skip.prob = pr * (1.0L - gamma);
      skip.delta.assign(static_cast<size_t>(k), 0);
      skip.delta[value - 1] += 1;
      outcomes.push_back(std::move(skip));
    }
    // Odometer over all k^s dummy tuples.
    std::vector<int64_t> tuple(static_cast<size_t>(config.s), 1);
    while (true) {
      UserOutcome send;
      send.prob = pr * gamma * dummy_tuple_prob;
      send.delta.assign(static_cast<size_t>(k), 0);
      send.delta[value - 1] += 1;
      for (int64_t dummy : tuple) {
        send.delta[static_cast<size_t>(dummy - 1)] += 1;
      }
      outcomes.push_back(std::move(send));
      size_t digit = 0;
      while (digit < tuple.size() && ++tuple[digit] > k) {
        tuple[digit] = 1;
        ++digit;
      }
      if (digit == tuple.size()) break;
    }
  }
  return outcomes;
}

void RecurseUsers(const std::vector<std::vector<UserOutcome>>& per_user,
                  size_t user, long double prob, std::vector<int64_t>& counts,
                  Protocol protocol, const ProtocolConfig& config,
                  std::vector<double>& z_buffer,
                  std::vector<long double>& expectation) {
  if (user == per_user.size()) {
    EstimateFromCounts(protocol, counts, config, z_buffer);
    for (size_t m = 0; m < z_buffer.size(); ++m) {
      expectation[m] += prob * static_cast<long double>(z_buffer[m]);
    }
    return;
  }
  for (const UserOutcome& outcome : per_user[user]) {
    for (size_t m = 0; m < counts.size(); ++m) counts[m] += outcome.delta[m];
    RecurseUsers(per_user, user + 1, prob * outcome.prob, counts, protocol,
                 config, z_buffer, expectation);
    for (size_t m = 0; m < counts.size(); ++m) counts[m] -= outcome.delta[m];
  }
}

double LogBinomialPmf(int64_t trials, double log_p, double log_1mp,
                      int64_t successes) {
  return std::lgamma(static_cast<double>(trials) + 1.0) -
         std::lgamma(static_cast<double>(successes) + 1.0) -
         std::lgamma(static_cast<double>(trials - successes) + 1.0) +
         static_cast<double>(successes) * log_p +
         static_cast<double>(trials - successes) * log_1mp;
}

// Exact upper tail Pr[Bin(trials, p) >= from], summed term by term via the
// pmf recurrence.
double BinomialUpperTail(int64_t trials, double p, int64_t from) {
  if (from <= 0) return 1.0;
  if (from > trials) return 0.0;
  const double log_p = std::log(p);
  const double log_1mp = std::log1p(-p);
  double log_term = LogBinomialPmf(trials, log_p, log_1mp, from);
  double sum = 0.0;
  for (int64_t j = from; j <= trials; ++j) {
    sum += std::exp(log_term);
    if (log_term < -760.0) break;
    log_term += std::log(static_cast<double>(trials - j) /
                         static_cast<double>(j + 1)) +
                log_p - log_1mp;
  }
  return sum;
}

// Exact lower tail Pr[Bin(trials, p) <= upto].
double BinomialLowerTail(int64_t trials, double p, int64_t upto) {
  if (upto < 0) return 0.0;
  if (upto >= trials) return 1.0;
  const double log_p = std::log(p);
  const double log_1mp = std::log1p(-p);
  double log_term = LogBinomialPmf(trials, log_p, log_1mp, upto);
  double sum = 0.0;
  for (int64_t j = upto; j >= 0; --j) {
    sum += std::exp(log_term);
    if (log_term < -760.0) break;
    log_term += std::log(static_cast<double>(j) /
                         static_cast<double>(trials - j + 1)) -
                log_p + log_1mp;
  }
  return sum;
}

// Exact-inversion sampler for Bin(s, 1/k) built from the cumulative pmf.
class BinomialSampler {
 public:
  BinomialSampler(int64_t trials, double p) {
    long double pmf =
        std::exp(static_cast<long double>(trials) *
                 std::log1p(static_cast<long double>(-p)));
    long double cumulative = 0.0L;
    const long double odds =
        static_cast<long double>(p) / (1.0L - static_cast<long double>(p));
    for (int64_t j = 0; j <= trials; ++j) {
      cumulative += pmf;
      cdf_.push_back(static_cast<double>(cumulative));
      if (cumulative >= 1.0L - 1e-30L) break;
      pmf *= odds * static_cast<long double>(trials - j) /
             static_cast<long double>(j + 1);
    }
  }

  int64_t Sample(RandomSource& rng) const {
    const double u = rng.NextUnit();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return it == cdf_.end() ? static_cast<int64_t>(cdf_.size()) - 1
                            : it - cdf_.begin();
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

std::vector<double> GrrExactPmf(uint32_t x, double epsilon_l, Domain domain) {
  if (domain.k < 2) {
    ThrowError(ErrorCode::kDomainTooSmall, "domain size k must be >= 2");
  }
  if (x < 1 || static_cast<int64_t>(x) > domain.k) {
    ThrowError(ErrorCode::kValueOutOfDomain, "x outside the domain");
  }
  const GrrProbabilities probs = GrrProbabilitiesFor(epsilon_l, domain);
  std::vector<double> pmf(static_cast<size_t>(domain.k), probs.q);
  pmf[x - 1] = probs.p;
  return pmf;
}

std::vector<double> EstimatorExpectationExact(
    Protocol protocol, const ProtocolConfig& config,
    const std::vector<uint32_t>& data) {
  ProtocolConfig effective = config;
  effective.n = static_cast<int64_t>(data.size());
  ValidateProtocol(protocol, effective);
  if (effective.n > 4 || effective.domain.k > 3 || effective.s > 3) {
    ThrowError(ErrorCode::kInstanceTooLarge,
               "exact enumeration is limited to n <= 4, k <= 3, s <= 3");
  }
  std::vector<std::vector<UserOutcome>> per_user;
  per_user.reserve(data.size());
  for (uint32_t x : data) {
    if (x < 1 || static_cast<int64_t>(x) > effective.domain.k) {
      ThrowError(ErrorCode::kValueOutOfDomain, "dataset value outside domain");
    }
    per_user.push_back(EnumerateUserOutcomes(x, protocol, effective));
  }
  const size_t k = static_cast<size_t>(effective.domain.k);
  std::vector<int64_t> counts(k, 0);
  std::vector<double> z_buffer(k, 0.0);
  std::vector<long double> expectation(k, 0.0L);
  RecurseUsers(per_user, 0, 1.0L, counts, protocol, effective, z_buffer,
               expectation);
  std::vector<double> result(k);
  for (size_t m = 0; m < k; ++m) {
    result[m] = static_cast<double>(expectation[m]);
  }
  return result;
}

double PureDpTailCheck(int64_t total_dummies, Domain domain, double epsilon) {
  if (domain.k < 2) {
    ThrowError(ErrorCode::kDomainTooSmall, "domain size k must be >= 2");
  }
  if (total_dummies < 2) {
    ThrowError(ErrorCode::kInsufficientDummies,
               "need at least two total dummy points");
  }
  if (total_dummies > 1000000) {
    ThrowError(ErrorCode::kInstanceTooLarge,
               "exact tail summation is limited to |S| <= 1e6");
  }
  if (!(epsilon > 0.0)) {
    ThrowError(ErrorCode::kInvalidBudget, "epsilon must be positive");
  }
  const int64_t trials = total_dummies - 1;
  const double p = 1.0 / static_cast<double>(domain.k);
  const double c = static_cast<double>(trials) / static_cast<double>(domain.k);
  // S1 = B + 1 >= c e^{eps/2}  <=>  B >= c e^{eps/2} - 1.
  const auto upper_from =
      static_cast<int64_t>(std::ceil(c * std::exp(epsilon / 2.0) - 1.0));
  const auto lower_upto =
      static_cast<int64_t>(std::floor(c * std::exp(-epsilon / 2.0)));
  return BinomialUpperTail(trials, p, upper_from) +
         BinomialLowerTail(trials, p, lower_upto);
}

AmplificationCheck LocalAmplificationEmpirical(double epsilon_l, int64_t s,
                                               Domain domain, double delta_r,
                                               int64_t trials, uint64_t seed) {
  if (trials < 100000) {
    ThrowError(ErrorCode::kInvalidCount, "need at least 1e5 trials");
  }
  const AmplifiedLocalBudget budget =
      EpsilonLocalAmplified(epsilon_l, s, domain, delta_r);
  const double ratio_bound = std::exp(budget.epsilon_r);
  const double e = std::exp(epsilon_l);
  const BinomialSampler sampler(s, 1.0 / static_cast<double>(domain.k));
  RandomSource rng(seed, 0);
  int64_t violations = 0;
  for (int64_t t = 0; t < trials; ++t) {
    const double n1 = static_cast<double>(sampler.Sample(rng) + 1);
    const double n2 = static_cast<double>(sampler.Sample(rng));
    const double ratio = (e * n1 + n2) / (e * n2 + n1);
    if (ratio > ratio_bound) ++violations;
  }
  AmplificationCheck check;
  check.violation_rate =
      static_cast<double>(violations) / static_cast<double>(trials);
  check.epsilon_r = budget.epsilon_r;
  check.valid = budget.valid;
  check.trials = trials;
  return check;
}

double ChiSquareStatistic(std::span<const int64_t> observed,
                          std::span<const double> expected_probs) {
  if (observed.size() != expected_probs.size()) {
    ThrowError(ErrorCode::kDimensionMismatch,
               "observed and expected sizes differ");
  }
  int64_t total = 0;
  for (int64_t count : observed) total += count;
  double statistic = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    const double expected = expected_probs[i] * static_cast<double>(total);
    const double diff = static_cast<double>(observed[i]) - expected;
    statistic += diff * diff / expected;
  }
  return statistic;
}

double ChiSquareCritical999(int64_t dof) {
  if (dof < 1) {
    ThrowError(ErrorCode::kInvalidCount, "dof must be positive");
  }
  switch (dof) {
    case 1:
      return 10.828;
    case 2:
      return 13.816;
    case 3:
      return 16.266;
    case 4:
      return 18.467;
    default:
      break;
  }
  // Wilson-Hilferty, accurate to a few tenths of a percent for dof >= 5.
  const double z = 3.0902323061678132;  // Phi^{-1}(0.999)
  const double d = static_cast<double>(dof);
  const double term = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
  return d * term * term * term;
}

}  // namespace dump::oracle
