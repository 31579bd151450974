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

#include "dump/data.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace dump {

namespace {

bool IsNumeric(const std::string& text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string> SplitCommaRow(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
}

}  // namespace

Dataset SynthUniform(int64_t n, Domain domain, RandomSource& rng) {
  if (n < 1) {
    ThrowError(ErrorCode::kInvalidCount,
               "n must be at least 1, got " + std::to_string(n));
  }
  if (domain.k < 2) {
    ThrowError(ErrorCode::kDomainTooSmall,
               "domain size k must be at least 2, got " +
                   std::to_string(domain.k));
  }
  Dataset dataset;
  dataset.domain = domain;
  dataset.values.resize(static_cast<size_t>(n));
  for (auto& value : dataset.values) {
    value = rng.NextDomainValue(domain.k);
  }
  dataset.source =
      "uniform:" + std::to_string(n) + "," + std::to_string(domain.k);
  return dataset;
}

Dataset SynthFromHistogram(const std::vector<int64_t>& counts,
                           RandomSource& rng) {
  int64_t total = 0;
  for (int64_t count : counts) {
    if (count < 0) {
      ThrowError(ErrorCode::kInvalidCount, "histogram counts must be >= 0");
    }
    total += count;
  }
  if (counts.size() < 2) {
    ThrowError(ErrorCode::kDomainTooSmall,
               "histogram needs at least two bins");
  }
  if (total < 1) {
    ThrowError(ErrorCode::kEmptyHistogram, "histogram sums to zero");
  }
  Dataset dataset;
  dataset.domain = Domain{static_cast<int64_t>(counts.size())};
  dataset.values.reserve(static_cast<size_t>(total));
  for (size_t j = 0; j < counts.size(); ++j) {
    dataset.values.insert(dataset.values.end(),
                          static_cast<size_t>(counts[j]),
                          static_cast<uint32_t>(j + 1));
  }
  for (size_t i = dataset.values.size(); i > 1; --i) {
    std::swap(dataset.values[i - 1],
              dataset.values[rng.NextBelow(static_cast<uint32_t>(i))]);
  }
  dataset.source = "histogram:" + std::to_string(total);
  return dataset;
}

Dataset LoadCsv(const std::string& path, const std::string& column,
                std::optional<int64_t> max_rows, bool header) {
  std::ifstream file(path);
  if (!file) {
    ThrowError(ErrorCode::kFileNotFound, "cannot open " + path);
  }

  size_t column_index = 0;
  bool skip_first = header;
  std::string line;
  int64_t row_number = 0;

  if (IsNumeric(column)) {
    column_index = static_cast<size_t>(std::stoll(column));
  } else {
    // Named column: the first row is the header.
    skip_first = false;
    if (!std::getline(file, line)) {
      ThrowError(ErrorCode::kEmptyFile, path + " is empty");
    }
    ++row_number;
    StripCarriageReturn(line);
    const auto fields = SplitCommaRow(line);
    const auto it = std::find(fields.begin(), fields.end(), column);
    if (it == fields.end()) {
      ThrowError(ErrorCode::kMissingColumn,
                 "column '" + column + "' not found in header of " + path);
    }
    column_index = static_cast<size_t>(it - fields.begin());
  }

  Dataset dataset;
  dataset.source = path;
  std::unordered_map<std::string, uint32_t> encoder;
  while (std::getline(file, line)) {
    ++row_number;
    StripCarriageReturn(line);
    if (skip_first) {
      skip_first = false;
      continue;
    }
    if (line.empty()) continue;  // blank lines carry no row
    const auto fields = SplitCommaRow(line);
    if (column_index >= fields.size()) {
      ThrowError(ErrorCode::kMalformedRow,
                 "row " + std::to_string(row_number) + " has " +
                     std::to_string(fields.size()) + " fields, need column " +
                     std::to_string(column_index));
    }
    const std::string& label = fields[column_index];
    auto [it, inserted] = encoder.try_emplace(
        label, static_cast<uint32_t>(dataset.labels.size() + 1));
    if (inserted) {
      dataset.labels.push_back(label);
    }
    dataset.values.push_back(it->second);
    if (max_rows.has_value() &&
        static_cast<int64_t>(dataset.values.size()) >= *max_rows) {
      break;
    }
  }
  if (dataset.values.empty()) {
    ThrowError(ErrorCode::kEmptyFile, path + " has no data rows");
  }
  dataset.domain = Domain{static_cast<int64_t>(dataset.labels.size())};
  if (dataset.domain.k < 2) {
    ThrowError(ErrorCode::kDomainTooSmall,
               path + " holds fewer than two distinct labels");
  }
  return dataset;
}

FrequencyVector TrueFrequencies(const Dataset& dataset) {
  FrequencyVector truth;
  truth.f.assign(static_cast<size_t>(dataset.domain.k), 0.0);
  for (uint32_t value : dataset.values) {
    truth.f[value - 1] += 1.0;
  }
  const double n = static_cast<double>(dataset.n());
  for (double& freq : truth.f) {
    freq /= n;
  }
  return truth;
}

std::string DecodeLabel(const Dataset& dataset, uint32_t value) {
  if (value < 1 || static_cast<int64_t>(value) > dataset.domain.k) {
    ThrowError(ErrorCode::kValueOutOfDomain,
               "value " + std::to_string(value) + " outside domain");
  }
  if (dataset.labels.empty()) {
    return std::to_string(value);
  }
  return dataset.labels[value - 1];
}

uint64_t LabelMapHash(const Dataset& dataset) {
  // FNV-1a over "label\x1f index\x1e" records.
  uint64_t hash = 0xCBF29CE484222325ULL;
  auto feed = [&hash](const std::string& text) {
    for (unsigned char c : text) {
      hash ^= c;
      hash *= 0x100000001B3ULL;
    }
  };
  for (size_t i = 0; i < dataset.labels.size(); ++i) {
    feed(dataset.labels[i]);
    feed("\x1f" + std::to_string(i + 1) + "\x1e");
  }
  return hash;
}

}  // namespace dump
