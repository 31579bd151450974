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

#ifndef DUMP_DATA_H_
#define DUMP_DATA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dump/core.h"
#include "dump/random.h"

namespace dump {

// Immutable collection of users' values, canonicalized to {1..k}. For CSV
// data, labels[i] is the raw label of value i+1 (first-appearance order);
// empty for synthetic data (identity encoding).
struct Dataset {
  std::vector<uint32_t> values;
  Domain domain;
  std::vector<std::string> labels;
  std::string source;

  int64_t n() const { return static_cast<int64_t>(values.size()); }
};

struct FrequencyVector {
  std::vector<double> f;
};

// n i.i.d. values uniform on {1..k}.
Dataset SynthUniform(int64_t n, Domain domain, RandomSource& rng);

// Dataset with exactly counts[j] copies of value j+1, in shuffled order.
Dataset SynthFromHistogram(const std::vector<int64_t>& counts,
                           RandomSource& rng);

// Reads one categorical column from a comma-separated file. `column` is a
// 0-based index when numeric, otherwise a header name (which implies
// `header`). Distinct labels map to 1..k in first-appearance order.
Dataset LoadCsv(const std::string& path, const std::string& column = "0",
                std::optional<int64_t> max_rows = std::nullopt,
                bool header = false);

// Exact empirical frequencies of the dataset.
FrequencyVector TrueFrequencies(const Dataset& dataset);

// Decodes a canonical value back to its raw label.
std::string DecodeLabel(const Dataset& dataset, uint32_t value);

// Order-sensitive hash of the label map; identity encoding hashes to the
// hash of the empty map.
uint64_t LabelMapHash(const Dataset& dataset);

}  // namespace dump

#endif  // DUMP_DATA_H_
