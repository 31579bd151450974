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

#include "dump/theory.h"

#include <cmath>

namespace dump {

namespace {

double RequireEpsilonL(const ProtocolConfig& config) {
  if (!config.epsilon_l.has_value() || !(*config.epsilon_l > 0.0)) {
    ThrowError(ErrorCode::kDegenerateRandomizer,
               "mix formulas need epsilon_l > 0");
  }
  return *config.epsilon_l;
}

// GRR-noise term of the mix MSE and the dummy-term inflation factor,
// written via expm1 so the epsilon_l -> infinity limit degrades exactly to
// the pure formulas (grr_term 0, inflation 1).
struct MixFactors {
  double grr_term;
  double inflation;
};

MixFactors ComputeMixFactors(double epsilon_l, const ProtocolConfig& config) {
  const double k = static_cast<double>(config.domain.k);
  const double n = static_cast<double>(config.n);
  const double em1 = std::expm1(epsilon_l);  // e^el - 1
  MixFactors factors;
  factors.grr_term = std::isinf(em1) ? 0.0 : (em1 + k - 1.0) / (em1 * em1 * n);
  const double ratio = 1.0 + k / em1;  // (e^el + k - 1) / (e^el - 1)
  factors.inflation = ratio * ratio;
  return factors;
}

}  // namespace

double PureMse(const ProtocolConfig& config) {
  ValidateConfig(config);
  const double k = static_cast<double>(config.domain.k);
  const double n = static_cast<double>(config.n);
  return static_cast<double>(config.s) * (k - 1.0) / (n * k * k);
}

double MixMse(const ProtocolConfig& config) {
  ValidateConfig(config);
  const MixFactors factors = ComputeMixFactors(RequireEpsilonL(config), config);
  return factors.grr_term + PureMse(config) * factors.inflation;
}

double FlexiblePureMse(const ProtocolConfig& config) {
  ValidateConfig(config);
  const double k = static_cast<double>(config.domain.k);
  const double n = static_cast<double>(config.n);
  return static_cast<double>(config.s) * config.gamma * (k - config.gamma) /
         (n * k * k);
}

double FlexibleMixMse(const ProtocolConfig& config) {
  ValidateConfig(config);
  const MixFactors factors = ComputeMixFactors(RequireEpsilonL(config), config);
  return factors.grr_term + FlexiblePureMse(config) * factors.inflation;
}

double MseForProtocol(Protocol protocol, const ProtocolConfig& config) {
  switch (protocol) {
    case Protocol::kPure:
      return PureMse(config);
    case Protocol::kMix:
      return MixMse(config);
    case Protocol::kFlexiblePure:
      return FlexiblePureMse(config);
    case Protocol::kFlexibleMix:
      return FlexibleMixMse(config);
  }
  ThrowError(ErrorCode::kIncompatibleSpecs, "unknown protocol");
}

double MessagesPerUser(const ProtocolConfig& config) {
  ValidateConfig(config);
  return 1.0 + config.gamma * static_cast<double>(config.s);
}

TheoryReport MakeTheoryReport(Protocol protocol,
                              const ProtocolConfig& config) {
  TheoryReport report;
  report.mse = MseForProtocol(protocol, config);
  report.messages_per_user = MessagesPerUser(config);
  report.bits_per_message =
      std::ceil(std::log2(static_cast<double>(config.domain.k)));
  return report;
}

}  // namespace dump
