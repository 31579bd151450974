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

#ifndef DUMP_THEORY_H_
#define DUMP_THEORY_H_

#include "dump/core.h"

namespace dump {

struct TheoryReport {
  double mse = 0.0;
  double messages_per_user = 0.0;
  double bits_per_message = 0.0;
};

// Expected MSE of pureDUMP: s (k-1) / (n k^2).
double PureMse(const ProtocolConfig& config);

// Expected MSE of mixDUMP:
//   (e^el + k - 2) / (n (e^el - 1)^2)
//   + s (k-1)/(n k^2) * ((e^el + k - 1)/(e^el - 1))^2.
// The GRR term is an approximation that treats per-value frequencies as
// small on average; comparisons on skewed data widen their tolerance.
double MixMse(const ProtocolConfig& config);

// Expected MSE of flexible pureDUMP: s gamma (k - gamma) / (n k^2).
double FlexiblePureMse(const ProtocolConfig& config);

// Expected MSE of flexible mixDUMP: GRR term of MixMse plus the flexible
// dummy term scaled by ((e^el + k - 1)/(e^el - 1))^2.
double FlexibleMixMse(const ProtocolConfig& config);

double MseForProtocol(Protocol protocol, const ProtocolConfig& config);

// Expected messages per user: 1 + gamma * s.
double MessagesPerUser(const ProtocolConfig& config);

TheoryReport MakeTheoryReport(Protocol protocol, const ProtocolConfig& config);

}  // namespace dump

#endif  // DUMP_THEORY_H_
