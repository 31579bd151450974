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

#ifndef DUMP_CORE_H_
#define DUMP_CORE_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dump {

enum class ErrorCode {
  kDomainTooSmall,
  kInvalidGamma,
  kInvalidBudget,
  kInvalidCount,
  kBudgetOutOfRange,
  kDeltaOutOfRange,
  kInsufficientDummies,
  kDegenerateDenominator,
  kSqrtDomain,
  kAdjustedDeltaInvalid,
  kValueOutOfDomain,
  kSizeMismatch,
  kDegenerateRandomizer,
  kDimensionMismatch,
  kFileNotFound,
  kMissingColumn,
  kEmptyFile,
  kMalformedRow,
  kEmptyHistogram,
  kInstanceTooLarge,
  kIncompatibleSpecs,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  const char* name() const { return ErrorCodeName(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void ThrowError(ErrorCode code, const std::string& message);

// Categorical value space {1, ..., k}.
struct Domain {
  int64_t k = 0;
};

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

enum class Protocol {
  kPure,
  kMix,
  kFlexiblePure,
  kFlexibleMix,
};

const char* ProtocolName(Protocol protocol);
std::optional<Protocol> ParseProtocol(std::string_view name);
bool ProtocolUsesGrr(Protocol protocol);
bool ProtocolIsFlexible(Protocol protocol);

// Everything a run needs: user count, domain, dummy count per sending user,
// probability gamma that a user sends dummies (1 = every user sends), and
// the GRR local budget (absent = no data randomization).
struct ProtocolConfig {
  int64_t n = 0;
  Domain domain;
  int64_t s = 0;
  double gamma = 1.0;
  std::optional<double> epsilon_l;
};

void ValidateConfig(const ProtocolConfig& config);

// Checks that a protocol choice is compatible with the config (gamma and
// epsilon_l requirements).
void ValidateProtocol(Protocol protocol, const ProtocolConfig& config);

// A single user's upload: the (possibly randomized) value plus dummy points.
// Values are validated on construction; size is 1 (no dummies) or s+1.
class Report {
 public:
  Report(std::vector<uint32_t> values, const ProtocolConfig& config);

  const std::vector<uint32_t>& values() const { return values_; }
  int64_t size() const { return static_cast<int64_t>(values_.size()); }

 private:
  std::vector<uint32_t> values_;
};

// Multiset union of all reports in uniformly random order. Produced by the
// shuffle step; order carries no user linkage.
struct ShuffledBatch {
  std::vector<uint32_t> values;
  int64_t n = 0;
  ProtocolConfig config;
};

// Debiased frequency vector. Entries may be negative: estimates are kept
// raw and unbiased, never clipped (display-side clipping is a CLI concern).
struct FrequencyEstimate {
  std::vector<double> z;
  ProtocolConfig config;
};

}  // namespace dump

#endif  // DUMP_CORE_H_
