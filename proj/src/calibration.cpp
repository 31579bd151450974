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

#include "dump/calibration.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace dump {

namespace {

constexpr double kPureDeltaCap = 0.2907;
constexpr double kMixDeltaCap = 0.5814;

void CheckDomain(Domain domain) {
  if (domain.k < 2) {
    ThrowError(ErrorCode::kDomainTooSmall,
               "domain size k must be at least 2, got " +
                   std::to_string(domain.k));
  }
}

void CheckUserCount(int64_t n) {
  if (n < 1) {
    ThrowError(ErrorCode::kInvalidCount,
               "user count n must be at least 1, got " + std::to_string(n));
  }
}

void CheckTargetBudget(PrivacyBudget target, double delta_cap) {
  if (!(target.epsilon > 0.0 && target.epsilon <= 1.0)) {
    ThrowError(ErrorCode::kBudgetOutOfRange,
               "epsilon must lie in (0, 1], got " +
                   std::to_string(target.epsilon));
  }
  if (!(target.delta > 0.0 && target.delta <= delta_cap)) {
    ThrowError(ErrorCode::kBudgetOutOfRange,
               "delta must lie in (0, " + std::to_string(delta_cap) +
                   "], got " + std::to_string(target.delta));
  }
}

// Smallest real total |S| with EpsilonPureCentral(|S|) <= epsilon.
double RequiredPureTotal(PrivacyBudget target, Domain domain) {
  return 14.0 * static_cast<double>(domain.k) * std::log(2.0 / target.delta) /
             (target.epsilon * target.epsilon) +
         1.0;
}

// Smallest real total |S| with EpsilonMixCentral(|S|) <= epsilon.
double RequiredMixTotal(PrivacyBudget target, int64_t n, Domain domain,
                        double lambda) {
  const double blanket = static_cast<double>(n - 1) * lambda;
  return 14.0 * static_cast<double>(domain.k) * std::log(4.0 / target.delta) /
             (target.epsilon * target.epsilon) -
         blanket + std::sqrt(2.0 * blanket * std::log(2.0 / target.delta)) +
         1.0;
}

int64_t CeilToCount(double x) {
  return static_cast<int64_t>(std::ceil(x));
}

}  // namespace

double EpsilonPureCentral(double total_dummies, Domain domain, double delta) {
  CheckDomain(domain);
  if (!(delta > 0.0 && delta <= kPureDeltaCap)) {
    ThrowError(ErrorCode::kDeltaOutOfRange,
               "delta must lie in (0, 0.2907], got " + std::to_string(delta));
  }
  if (!(total_dummies > 1.0)) {
    ThrowError(ErrorCode::kInsufficientDummies,
               "need more than one dummy point in total, got " +
                   std::to_string(total_dummies));
  }
  return std::sqrt(14.0 * static_cast<double>(domain.k) *
                   std::log(2.0 / delta) / (total_dummies - 1.0));
}

double EpsilonPureLocal(int64_t s, Domain domain, double delta) {
  return EpsilonPureCentral(static_cast<double>(s), domain, delta);
}

double LambdaFromEpsilonL(double epsilon_l, Domain domain) {
  CheckDomain(domain);
  if (!(epsilon_l >= 0.0)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "epsilon_l must be non-negative, got " +
                   std::to_string(epsilon_l));
  }
  const double k = static_cast<double>(domain.k);
  return k / (std::exp(epsilon_l) + k - 1.0);
}

double EpsilonMixCentral(double total_dummies, int64_t n, Domain domain,
                         double lambda, double delta) {
  CheckDomain(domain);
  CheckUserCount(n);
  if (!(delta > 0.0 && delta <= kMixDeltaCap)) {
    ThrowError(ErrorCode::kDeltaOutOfRange,
               "delta must lie in (0, 0.5814], got " + std::to_string(delta));
  }
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "lambda must lie in (0, 1], got " + std::to_string(lambda));
  }
  if (total_dummies < 0.0) {
    ThrowError(ErrorCode::kInvalidCount, "total_dummies must be non-negative");
  }
  const double blanket = static_cast<double>(n - 1) * lambda;
  const double denominator =
      total_dummies + blanket -
      std::sqrt(2.0 * blanket * std::log(2.0 / delta)) - 1.0;
  if (!(denominator > 0.0)) {
    ThrowError(ErrorCode::kDegenerateDenominator,
               "too few users/dummies: denominator " +
                   std::to_string(denominator));
  }
  return std::sqrt(14.0 * static_cast<double>(domain.k) *
                   std::log(4.0 / delta) / denominator);
}

CalibrationResult DummiesForPure(PrivacyBudget target, int64_t n,
                                 Domain domain) {
  CheckDomain(domain);
  CheckUserCount(n);
  CheckTargetBudget(target, kPureDeltaCap);
  const double required = RequiredPureTotal(target, domain);
  const int64_t s =
      std::max<int64_t>(1, CeilToCount(required / static_cast<double>(n)));
  CalibrationResult result;
  result.s = s;
  result.gamma = 1.0;
  result.total_dummies = static_cast<double>(n) * static_cast<double>(s);
  result.epsilon_achieved =
      EpsilonPureCentral(result.total_dummies, domain, target.delta);
  result.delta_effective = target.delta;
  return result;
}

CalibrationResult DummiesForMix(PrivacyBudget target, int64_t n, Domain domain,
                                double epsilon_l) {
  CheckDomain(domain);
  CheckUserCount(n);
  CheckTargetBudget(target, kMixDeltaCap);
  if (!(epsilon_l > 0.0)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "epsilon_l must be positive, got " + std::to_string(epsilon_l));
  }
  const double lambda = LambdaFromEpsilonL(epsilon_l, domain);
  const double required = RequiredMixTotal(target, n, domain, lambda);
  const int64_t s =
      required <= 0.0
          ? 0
          : std::max<int64_t>(0, CeilToCount(required / static_cast<double>(n)));
  CalibrationResult result;
  result.s = s;
  result.gamma = 1.0;
  result.total_dummies = static_cast<double>(n) * static_cast<double>(s);
  result.epsilon_achieved =
      EpsilonMixCentral(result.total_dummies, n, domain, lambda, target.delta);
  result.delta_effective = target.delta;
  return result;
}

AmplifiedLocalBudget EpsilonLocalAmplified(double epsilon_l, int64_t s,
                                           Domain domain, double delta_r) {
  CheckDomain(domain);
  if (s < 1) {
    ThrowError(ErrorCode::kInvalidCount,
               "s must be at least 1, got " + std::to_string(s));
  }
  if (!(delta_r > 0.0 && delta_r < 1.0)) {
    ThrowError(ErrorCode::kDeltaOutOfRange,
               "delta_r must lie in (0, 1), got " + std::to_string(delta_r));
  }
  if (!(epsilon_l > 0.0) || std::isinf(epsilon_l)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "epsilon_l must be positive and finite");
  }
  const double k = static_cast<double>(domain.k);
  const double sd = static_cast<double>(s);
  const double log_inv_delta = std::log(1.0 / delta_r);
  const double inner = 2.0 * k * log_inv_delta / sd;
  if (inner >= 1.0) {
    ThrowError(ErrorCode::kSqrtDomain,
               "2 k ln(1/delta_r)/s = " + std::to_string(inner) +
                   " leaves a non-positive denominator");
  }
  // 1 + e^eps / (s (e^eps + 1)) computed as 1 + 1/(s (1 + e^-eps)).
  const double correction = 1.0 + 1.0 / (sd * (1.0 + std::exp(-epsilon_l)));
  const double epsilon_r =
      std::log(k / (1.0 - std::sqrt(inner)) * correction);

  // Validity cap: k/s <= min(1/(2 ln(1/delta_r)), u*^2), where u* is the
  // positive root of s(1+A) u^2 + e^eps T u - e^eps = 0 in u = sqrt(k/s),
  // i.e. u* = (sqrt(c^2 + 4c/T) - c)/2 with the bound's own c.
  const double t = std::sqrt(2.0 * log_inv_delta);
  const double e = std::exp(epsilon_l);
  const double c = t * e * (e + 1.0) / (sd * (e + 1.0) + e);
  const double root = 2.0 / (t * (std::sqrt(1.0 + 4.0 / (c * t)) + 1.0));
  const double cap = std::min(1.0 / (2.0 * log_inv_delta), root * root);
  AmplifiedLocalBudget result;
  result.epsilon_r = epsilon_r;
  result.valid = (k / sd) <= cap;
  return result;
}

PrivacyBudget FlexibleAdjust(PrivacyBudget base, double gamma, int64_t n) {
  CheckUserCount(n);
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    ThrowError(ErrorCode::kInvalidGamma,
               "gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
  if (!(base.epsilon > 0.0) || !(base.delta > 0.0 && base.delta < 1.0)) {
    ThrowError(ErrorCode::kInvalidBudget, "base budget outside valid ranges");
  }
  const double failure = std::exp(-gamma * static_cast<double>(n));
  const double adjusted_delta = base.delta + failure;
  if (adjusted_delta >= 1.0) {
    ThrowError(ErrorCode::kAdjustedDeltaInvalid,
               "delta + e^{-gamma n} = " + std::to_string(adjusted_delta));
  }
  return PrivacyBudget{base.epsilon - std::log1p(-failure), adjusted_delta};
}

CalibrationResult DummiesForFlexible(PrivacyBudget target, int64_t n,
                                     Domain domain, double gamma,
                                     std::optional<double> epsilon_l) {
  CheckDomain(domain);
  CheckUserCount(n);
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    ThrowError(ErrorCode::kInvalidGamma,
               "gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
  if (gamma == 1.0) {
    return epsilon_l.has_value() ? DummiesForMix(target, n, domain, *epsilon_l)
                                 : DummiesForPure(target, n, domain);
  }
  // Tighten the target by the flexible penalty so the adjusted guarantee
  // still meets it. Both penalty terms are exactly zero in double precision
  // whenever gamma*n >= 745, which covers every realistic deployment.
  const double failure = std::exp(-gamma * static_cast<double>(n));
  const double epsilon_penalty = -std::log1p(-failure);
  if (target.delta - failure <= 0.0 || target.epsilon - epsilon_penalty <= 0.0) {
    ThrowError(ErrorCode::kAdjustedDeltaInvalid,
               "flexible penalty e^{-gamma n} exceeds the target budget");
  }
  const PrivacyBudget base{target.epsilon - epsilon_penalty,
                           target.delta - failure};
  const double senders = gamma * static_cast<double>(n);
  CalibrationResult result;
  result.gamma = gamma;
  if (epsilon_l.has_value()) {
    CheckTargetBudget(base, kMixDeltaCap);
    if (!(*epsilon_l > 0.0)) {
      ThrowError(ErrorCode::kInvalidBudget, "epsilon_l must be positive");
    }
    const double lambda = LambdaFromEpsilonL(*epsilon_l, domain);
    const double required = RequiredMixTotal(base, n, domain, lambda);
    result.s = required <= 0.0 ? 0 : CeilToCount(required / senders);
    result.total_dummies = senders * static_cast<double>(result.s);
    result.epsilon_achieved =
        EpsilonMixCentral(result.total_dummies, n, domain, lambda, base.delta) +
        epsilon_penalty;
  } else {
    CheckTargetBudget(base, kPureDeltaCap);
    const double required = RequiredPureTotal(base, domain);
    result.s = std::max<int64_t>(1, CeilToCount(required / senders));
    result.total_dummies = senders * static_cast<double>(result.s);
    result.epsilon_achieved =
        EpsilonPureCentral(result.total_dummies, domain, base.delta) +
        epsilon_penalty;
  }
  result.delta_effective = base.delta + failure;
  return result;
}

CalibrationResult CalibrateExact(PrivacyBudget target, int64_t n,
                                 Domain domain,
                                 std::optional<double> epsilon_l) {
  CheckDomain(domain);
  CheckUserCount(n);
  CalibrationResult result;
  double required = 0.0;
  double lambda = 0.0;
  if (epsilon_l.has_value()) {
    CheckTargetBudget(target, kMixDeltaCap);
    if (!(*epsilon_l > 0.0)) {
      ThrowError(ErrorCode::kInvalidBudget, "epsilon_l must be positive");
    }
    lambda = LambdaFromEpsilonL(*epsilon_l, domain);
    required = RequiredMixTotal(target, n, domain, lambda);
    if (required <= 0.0) {
      result.s = 0;
      result.gamma = 1.0;
      result.total_dummies = 0.0;
      result.epsilon_achieved =
          EpsilonMixCentral(0.0, n, domain, lambda, target.delta);
      result.delta_effective = target.delta;
      return result;
    }
  } else {
    CheckTargetBudget(target, kPureDeltaCap);
    required = RequiredPureTotal(target, domain);
  }
  const double nd = static_cast<double>(n);
  result.s = std::max<int64_t>(1, CeilToCount(required / nd));
  result.gamma = std::min(1.0, required / (nd * static_cast<double>(result.s)));
  result.total_dummies = result.gamma * nd * static_cast<double>(result.s);
  result.epsilon_achieved =
      epsilon_l.has_value()
          ? EpsilonMixCentral(result.total_dummies, n, domain, lambda,
                              target.delta)
          : EpsilonPureCentral(result.total_dummies, domain, target.delta);
  result.delta_effective = target.delta;
  if (result.gamma < 1.0) {
    const double failure = std::exp(-result.gamma * nd);
    result.epsilon_achieved -= std::log1p(-failure);
    result.delta_effective += failure;
  }
  return result;
}

}  // namespace dump
