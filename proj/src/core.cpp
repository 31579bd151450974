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

#include "dump/core.h"

#include <utility>

namespace dump {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomainTooSmall:
      return "DomainTooSmall";
    case ErrorCode::kInvalidGamma:
      return "InvalidGamma";
    case ErrorCode::kInvalidBudget:
      return "InvalidBudget";
    case ErrorCode::kInvalidCount:
      return "InvalidCount";
    case ErrorCode::kBudgetOutOfRange:
      return "BudgetOutOfRange";
    case ErrorCode::kDeltaOutOfRange:
      return "DeltaOutOfRange";
    case ErrorCode::kInsufficientDummies:
      return "InsufficientDummies";
    case ErrorCode::kDegenerateDenominator:
      return "DegenerateDenominator";
    case ErrorCode::kSqrtDomain:
      return "SqrtDomain";
    case ErrorCode::kAdjustedDeltaInvalid:
      return "AdjustedDeltaInvalid";
    case ErrorCode::kValueOutOfDomain:
      return "ValueOutOfDomain";
    case ErrorCode::kSizeMismatch:
      return "SizeMismatch";
    case ErrorCode::kDegenerateRandomizer:
      return "DegenerateRandomizer";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kFileNotFound:
      return "FileNotFound";
    case ErrorCode::kMissingColumn:
      return "MissingColumn";
    case ErrorCode::kEmptyFile:
      return "EmptyFile";
    case ErrorCode::kMalformedRow:
      return "MalformedRow";
    case ErrorCode::kEmptyHistogram:
      return "EmptyHistogram";
    case ErrorCode::kInstanceTooLarge:
      return "InstanceTooLarge";
    case ErrorCode::kIncompatibleSpecs:
      return "IncompatibleSpecs";
  }
  return "UnknownError";
}

void ThrowError(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

const char* ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kPure:
      return "pure";
    case Protocol::kMix:
      return "mix";
    case Protocol::kFlexiblePure:
      return "flexible-pure";
    case Protocol::kFlexibleMix:
      return "flexible-mix";
  }
  return "unknown";
}

std::optional<Protocol> ParseProtocol(std::string_view name) {
  if (name == "pure") return Protocol::kPure;
  if (name == "mix") return Protocol::kMix;
  if (name == "flexible-pure") return Protocol::kFlexiblePure;
  if (name == "flexible-mix") return Protocol::kFlexibleMix;
  return std::nullopt;
}

bool ProtocolUsesGrr(Protocol protocol) {
  return protocol == Protocol::kMix || protocol == Protocol::kFlexibleMix;
}

bool ProtocolIsFlexible(Protocol protocol) {
  return protocol == Protocol::kFlexiblePure ||
         protocol == Protocol::kFlexibleMix;
}

void ValidateConfig(const ProtocolConfig& config) {
  if (config.domain.k < 2) {
    ThrowError(ErrorCode::kDomainTooSmall,
               "domain size k must be at least 2, got " +
                   std::to_string(config.domain.k));
  }
  if (config.n < 1) {
    ThrowError(ErrorCode::kInvalidCount,
               "user count n must be at least 1, got " +
                   std::to_string(config.n));
  }
  if (config.s < 0) {
    ThrowError(ErrorCode::kInvalidCount,
               "dummy count s must be non-negative, got " +
                   std::to_string(config.s));
  }
  if (!(config.gamma > 0.0 && config.gamma <= 1.0)) {
    ThrowError(ErrorCode::kInvalidGamma,
               "gamma must lie in (0, 1], got " +
                   std::to_string(config.gamma));
  }
  if (config.epsilon_l.has_value() && !(*config.epsilon_l > 0.0)) {
    ThrowError(ErrorCode::kInvalidBudget,
               "epsilon_l must be positive when present");
  }
}

void ValidateProtocol(Protocol protocol, const ProtocolConfig& config) {
  ValidateConfig(config);
  if (ProtocolUsesGrr(protocol) && !config.epsilon_l.has_value()) {
    ThrowError(ErrorCode::kIncompatibleSpecs,
               std::string(ProtocolName(protocol)) + " requires epsilon_l");
  }
  if (!ProtocolIsFlexible(protocol) && config.gamma != 1.0) {
    ThrowError(ErrorCode::kInvalidGamma,
               std::string(ProtocolName(protocol)) + " requires gamma = 1");
  }
}

Report::Report(std::vector<uint32_t> values, const ProtocolConfig& config)
    : values_(std::move(values)) {
  const auto size = static_cast<int64_t>(values_.size());
  if (size != 1 && size != config.s + 1) {
    ThrowError(ErrorCode::kSizeMismatch,
               "report size must be 1 or s+1, got " + std::to_string(size));
  }
  for (uint32_t v : values_) {
    if (v < 1 || static_cast<int64_t>(v) > config.domain.k) {
      ThrowError(ErrorCode::kValueOutOfDomain,
                 "report value " + std::to_string(v) + " outside [1, " +
                     std::to_string(config.domain.k) + "]");
    }
  }
}

}  // namespace dump
