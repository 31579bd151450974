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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dump/calibration.h"
#include "dump/core.h"
#include "dump/data.h"
#include "dump/harness.h"
#include "dump/oracle.h"
#include "dump/protocols.h"
#include "dump/random.h"
#include "dump/theory.h"

namespace {

using namespace dump;

constexpr int kSchemaVersion = 1;
constexpr uint64_t kDatasetSeedTag = 1ULL << 40;

// Exit codes: 2 calibration/budget errors, 3 data errors.
int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound:
    case ErrorCode::kMissingColumn:
    case ErrorCode::kEmptyFile:
    case ErrorCode::kMalformedRow:
    case ErrorCode::kEmptyHistogram:
      return 3;
    default:
      return 2;
  }
}

// Fixed 12-significant-digit rendering so outputs diff cleanly.
std::string Num(double value) {
  if (std::isnan(value) || std::isinf(value)) return "null";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string Num(int64_t value) { return std::to_string(value); }

std::string Quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

class JsonWriter {
 public:
  void Field(const std::string& key, const std::string& raw) {
    lines_.push_back("  " + Quote(key) + ": " + raw);
  }
  void FieldString(const std::string& key, const std::string& value) {
    Field(key, Quote(value));
  }
  void FieldVector(const std::string& key, const std::vector<double>& values) {
    std::string raw = "[";
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) raw += ", ";
      raw += Num(values[i]);
    }
    raw += "]";
    Field(key, raw);
  }
  void Print() const {
    std::cout << "{\n";
    for (size_t i = 0; i < lines_.size(); ++i) {
      std::cout << lines_[i] << (i + 1 < lines_.size() ? ",\n" : "\n");
    }
    std::cout << "}\n";
  }

 private:
  std::vector<std::string> lines_;
};

uint64_t DefaultSeed() {
  if (const char* env = std::getenv("DUMP_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

struct DatasetOptions {
  std::string spec;
  std::string column = "0";
  bool header = false;
  std::optional<int64_t> max_rows;
};

Dataset LoadDataset(const DatasetOptions& options, uint64_t seed) {
  if (options.spec.rfind("uniform:", 0) == 0) {
    const std::string params = options.spec.substr(8);
    const auto comma = params.find(',');
    if (comma == std::string::npos) {
      ThrowError(ErrorCode::kMalformedRow,
                 "dataset spec must be uniform:n,k or a CSV path");
    }
    const int64_t n = std::stoll(params.substr(0, comma));
    const int64_t k = std::stoll(params.substr(comma + 1));
    RandomSource rng(DeriveSeed(seed, kDatasetSeedTag), 0);
    return SynthUniform(n, Domain{k}, rng);
  }
  return LoadCsv(options.spec, options.column, options.max_rows,
                 options.header);
}

struct CalibrateArgs {
  std::string protocol = "pure";
  double epsilon = 0.0;
  double delta = 0.0;
  int64_t n = 0;
  int64_t k = 0;
  double gamma = 1.0;
  std::optional<double> epsilon_l;
  bool exact = false;
};

CalibrationResult Calibrate(const CalibrateArgs& args) {
  const bool mix = args.protocol == "mix" || args.protocol == "flexible-mix";
  if (!mix && args.protocol != "pure" && args.protocol != "flexible-pure") {
    ThrowError(ErrorCode::kIncompatibleSpecs,
               "unknown protocol " + args.protocol);
  }
  if (mix && !args.epsilon_l.has_value()) {
    ThrowError(ErrorCode::kIncompatibleSpecs, "mix needs --epsilon-l");
  }
  const PrivacyBudget target{args.epsilon, args.delta};
  const std::optional<double> epsilon_l =
      mix ? args.epsilon_l : std::nullopt;
  if (args.exact) {
    return CalibrateExact(target, args.n, Domain{args.k}, epsilon_l);
  }
  if (args.gamma < 1.0) {
    return DummiesForFlexible(target, args.n, Domain{args.k}, args.gamma,
                              epsilon_l);
  }
  return mix ? DummiesForMix(target, args.n, Domain{args.k}, *epsilon_l)
             : DummiesForPure(target, args.n, Domain{args.k});
}

int CmdCalibrate(const CalibrateArgs& args) {
  const CalibrationResult result = Calibrate(args);
  ProtocolConfig config;
  config.n = args.n;
  config.domain = Domain{args.k};
  config.s = result.s;
  config.gamma = result.gamma;
  JsonWriter json;
  json.Field("schema", std::to_string(kSchemaVersion));
  json.FieldString("protocol", args.protocol);
  json.Field("epsilon_target", Num(args.epsilon));
  json.Field("delta", Num(args.delta));
  json.Field("n", Num(args.n));
  json.Field("k", Num(args.k));
  json.Field("gamma", Num(result.gamma));
  json.Field("epsilon_l",
             args.epsilon_l.has_value() ? Num(*args.epsilon_l) : "null");
  json.Field("s", Num(result.s));
  json.Field("total_dummies", Num(result.total_dummies));
  json.Field("epsilon_achieved", Num(result.epsilon_achieved));
  json.Field("delta_effective", Num(result.delta_effective));
  json.Field("messages_per_user", Num(MessagesPerUser(config)));
  json.Print();
  return 0;
}

struct RunArgs {
  std::string protocol = "pure";
  DatasetOptions dataset;
  double epsilon = 0.0;
  double delta = 0.0;
  double gamma = 1.0;
  std::optional<double> epsilon_l;
  bool exact = false;
  int repeats = 50;
  uint64_t seed = 1;
  int threads = 1;
  bool clip = false;
};

int CmdRun(const RunArgs& args) {
  const Dataset dataset = LoadDataset(args.dataset, args.seed);
  CalibrateArgs calibrate_args;
  calibrate_args.protocol = args.protocol;
  calibrate_args.epsilon = args.epsilon;
  calibrate_args.delta = args.delta;
  calibrate_args.n = dataset.n();
  calibrate_args.k = dataset.domain.k;
  calibrate_args.gamma = args.gamma;
  calibrate_args.epsilon_l = args.epsilon_l;
  calibrate_args.exact = args.exact;
  const CalibrationResult calibration = Calibrate(calibrate_args);

  const bool mix =
      args.protocol == "mix" || args.protocol == "flexible-mix";
  ExperimentSpec spec;
  spec.protocol = calibration.gamma < 1.0
                      ? (mix ? Protocol::kFlexibleMix : Protocol::kFlexiblePure)
                      : (mix ? Protocol::kMix : Protocol::kPure);
  spec.config.n = dataset.n();
  spec.config.domain = dataset.domain;
  spec.config.s = calibration.s;
  spec.config.gamma = calibration.gamma;
  spec.config.epsilon_l = mix ? args.epsilon_l : std::nullopt;
  spec.delta = args.delta;
  spec.repeats = args.repeats;
  spec.seed = args.seed;
  const ExperimentResult result = RunExperiment(spec, dataset, args.threads);

  std::vector<double> estimate = result.mean_estimate;
  if (args.clip) {
    for (double& value : estimate) value = std::clamp(value, 0.0, 1.0);
  }

  JsonWriter json;
  json.Field("schema", std::to_string(kSchemaVersion));
  json.FieldString("protocol", ProtocolName(spec.protocol));
  json.FieldString("dataset", dataset.source);
  json.Field("n", Num(dataset.n()));
  json.Field("k", Num(dataset.domain.k));
  json.FieldString("label_map_hash",
                   "0x" + [&] {
                     char buffer[32];
                     std::snprintf(buffer, sizeof(buffer), "%016llx",
                                   static_cast<unsigned long long>(
                                       LabelMapHash(dataset)));
                     return std::string(buffer);
                   }());
  json.Field("epsilon_target", Num(args.epsilon));
  json.Field("delta", Num(args.delta));
  json.Field("epsilon_l",
             spec.config.epsilon_l.has_value() ? Num(*spec.config.epsilon_l)
                                               : "null");
  json.Field("s", Num(calibration.s));
  json.Field("gamma", Num(calibration.gamma));
  json.Field("total_dummies", Num(calibration.total_dummies));
  json.Field("epsilon_achieved", Num(result.epsilon_achieved));
  json.Field("delta_effective", Num(calibration.delta_effective));
  json.Field("repeats", std::to_string(args.repeats));
  json.Field("seed", std::to_string(args.seed));
  json.Field("threads", std::to_string(args.threads));
  json.Field("clip", args.clip ? "true" : "false");
  json.Field("mse_empirical", Num(result.mse_empirical));
  json.Field("mse_theory", Num(result.mse_theory));
  json.Field("messages_per_user_observed",
             Num(result.messages_per_user_observed));
  json.Field("messages_per_user_expected", Num(MessagesPerUser(spec.config)));
  json.FieldVector("mean_estimate", estimate);
  json.Field("wall_seconds", Num(result.wall_seconds));
  json.Print();
  return 0;
}

struct CompareArgs {
  std::string protocols = "pure,mix";
  std::string epsilon_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  DatasetOptions dataset;
  double delta = 0.0;
  std::optional<double> epsilon_l;
  std::optional<double> gamma;
  int repeats = 50;
  uint64_t seed = 1;
  int threads = 1;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> ParseGrid(const std::string& text) {
  // Either "a:b:step" or a comma list.
  std::vector<double> grid;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const auto second = text.find(':', colon + 1);
    if (second == std::string::npos) {
      ThrowError(ErrorCode::kIncompatibleSpecs,
                 "grid range must be start:stop:step");
    }
    const double start = std::stod(text.substr(0, colon));
    const double stop = std::stod(text.substr(colon + 1, second - colon - 1));
    const double step = std::stod(text.substr(second + 1));
    if (!(step > 0.0)) {
      ThrowError(ErrorCode::kIncompatibleSpecs, "grid step must be positive");
    }
    for (double value = start; value <= stop + 1e-12; value += step) {
      grid.push_back(value);
    }
    return grid;
  }
  for (const std::string& item : SplitList(text)) {
    grid.push_back(std::stod(item));
  }
  return grid;
}

int CmdCompare(const CompareArgs& args) {
  const Dataset dataset = LoadDataset(args.dataset, args.seed);
  CompareRequest request;
  request.protocols = SplitList(args.protocols);
  request.epsilon_grid = ParseGrid(args.epsilon_grid);
  request.delta = args.delta;
  request.epsilon_l = args.epsilon_l;
  request.gamma = args.gamma;
  request.repeats = args.repeats;
  request.seed = args.seed;
  request.threads = args.threads;
  const auto rows = RunComparison(request, dataset);
  std::cout << "protocol,epsilon,s,mse_empirical,mse_theory,"
               "messages_per_user,feasible\n";
  for (const CompareRow& row : rows) {
    std::cout << row.protocol << ',' << Num(row.epsilon) << ',' << row.s << ','
              << Num(row.mse_empirical) << ',' << Num(row.mse_theory) << ','
              << Num(row.messages_per_user) << ','
              << (row.feasible ? "true" : "false") << '\n';
  }
  return 0;
}

struct VerifyArgs {
  std::string suite;
  int64_t trials = 1000000;
  uint64_t seed = 1;
};

bool ReportCheck(const std::string& name, bool pass, const std::string& info) {
  std::cout << (pass ? "[ok]   " : "[FAIL] ") << name;
  if (!info.empty()) std::cout << " (" << info << ")";
  std::cout << '\n';
  return pass;
}

int VerifyPmf(const VerifyArgs& args) {
  bool all = true;
  struct Case {
    int64_t k;
    double epsilon_l;
  };
  const Case cases[] = {{3, std::log(3.0)}, {10, 2.0}, {50, 8.0}};
  for (const Case& c : cases) {
    const Domain domain{c.k};
    const auto pmf = oracle::GrrExactPmf(1, c.epsilon_l, domain);
    const double lambda = LambdaFromEpsilonL(c.epsilon_l, domain);
    RandomSource rng(args.seed, static_cast<uint64_t>(c.k));
    std::vector<int64_t> counts(static_cast<size_t>(c.k), 0);
    for (int64_t i = 0; i < args.trials; ++i) {
      ++counts[GrrRandomize(1, lambda, domain, rng) - 1];
    }
    const double stat = oracle::ChiSquareStatistic(counts, pmf);
    const double critical = oracle::ChiSquareCritical999(c.k - 1);
    all &= ReportCheck(
        "grr-pmf k=" + std::to_string(c.k),
        stat < critical,
        "chi2 " + Num(stat) + " < " + Num(critical));
  }
  // Dummy points are uniform on the domain.
  {
    RandomSource rng(args.seed, 999);
    std::vector<int64_t> counts(50, 0);
    for (int64_t i = 0; i < args.trials; ++i) {
      ++counts[rng.NextDomainValue(50) - 1];
    }
    const std::vector<double> uniform(50, 0.02);
    const double stat = oracle::ChiSquareStatistic(counts, uniform);
    const double critical = oracle::ChiSquareCritical999(49);
    all &= ReportCheck("dummy-uniform k=50", stat < critical,
                       "chi2 " + Num(stat) + " < " + Num(critical));
  }
  return all ? 0 : 1;
}

int VerifyUnbiased() {
  bool all = true;
  double worst = 0.0;
  int64_t instances = 0;
  for (int64_t k = 2; k <= 3; ++k) {
    for (int64_t n = 1; n <= 3; ++n) {
      std::vector<uint32_t> data(static_cast<size_t>(n), 1);
      while (true) {
        for (int64_t s = 0; s <= 2; ++s) {
          for (double gamma : {0.5, 1.0}) {
            for (int variant = 0; variant < 3; ++variant) {
              ProtocolConfig config;
              config.n = n;
              config.domain = Domain{k};
              config.s = s;
              config.gamma = gamma;
              Protocol protocol;
              if (variant == 0) {
                protocol = gamma < 1.0 ? Protocol::kFlexiblePure
                                       : Protocol::kPure;
              } else {
                config.epsilon_l =
                    variant == 1
                        ? std::log(3.0)
                        : std::numeric_limits<double>::infinity();
                protocol = gamma < 1.0 ? Protocol::kFlexibleMix
                                       : Protocol::kMix;
              }
              const auto expectation = oracle::EstimatorExpectationExact(
                  protocol, config, data);
              std::vector<int64_t> histogram(static_cast<size_t>(k), 0);
              for (uint32_t x : data) ++histogram[x - 1];
              for (int64_t m = 0; m < k; ++m) {
                const double truth =
                    static_cast<double>(histogram[static_cast<size_t>(m)]) /
                    static_cast<double>(n);
                worst = std::max(
                    worst,
                    std::fabs(expectation[static_cast<size_t>(m)] - truth));
              }
              ++instances;
            }
          }
        }
        // Next dataset tuple in {1..k}^n.
        size_t digit = 0;
        while (digit < data.size() && ++data[digit] > k) {
          data[digit] = 1;
          ++digit;
        }
        if (digit == data.size()) break;
      }
    }
  }
  all &= ReportCheck("estimator-unbiasedness", worst <= 1e-12,
                     std::to_string(instances) + " instances, max dev " +
                         Num(worst));
  return all ? 0 : 1;
}

int VerifyTails() {
  bool all = true;
  for (int64_t k : {10, 50}) {
    for (double delta : {1e-4, 1e-6}) {
      for (int eps_tenths = 2; eps_tenths <= 10; ++eps_tenths) {
        const double epsilon = eps_tenths / 10.0;
        const auto calibration =
            DummiesForPure({epsilon, delta}, 100, Domain{k});
        const double tail = oracle::PureDpTailCheck(
            static_cast<int64_t>(calibration.total_dummies), Domain{k},
            epsilon);
        all &= ReportCheck(
            "tails k=" + std::to_string(k) + " delta=" + Num(delta) +
                " eps=" + Num(epsilon),
            tail <= delta, "tail " + Num(tail) + " <= " + Num(delta));
      }
    }
  }
  return all ? 0 : 1;
}

int VerifyAmplification(const VerifyArgs& args) {
  bool all = true;
  double previous = 1e300;
  for (int64_t s : {10000, 30000, 100000}) {
    const auto check = oracle::LocalAmplificationEmpirical(
        5.0, s, Domain{50}, 1e-4, args.trials, args.seed);
    all &= ReportCheck(
        "amplification s=" + std::to_string(s),
        check.valid && check.violation_rate <= 1e-4 &&
            check.epsilon_r < previous,
        "eps_r " + Num(check.epsilon_r) + ", violations " +
            Num(check.violation_rate));
    previous = check.epsilon_r;
  }
  return all ? 0 : 1;
}

int CmdVerify(const VerifyArgs& args) {
  if (args.suite == "pmf") return VerifyPmf(args);
  if (args.suite == "unbiased") return VerifyUnbiased();
  if (args.suite == "tails") return VerifyTails();
  if (args.suite == "amplification") return VerifyAmplification(args);
  ThrowError(ErrorCode::kIncompatibleSpecs, "unknown suite " + args.suite);
}

void AddDatasetOptions(CLI::App* cmd, DatasetOptions* options) {
  cmd->add_option("--dataset", options->spec,
                  "CSV path or uniform:n,k synthetic spec")
      ->required();
  cmd->add_option("--column", options->column,
                  "CSV column (0-based index or header name)");
  cmd->add_flag("--header", options->header,
                "skip the first CSV row when selecting by index");
  cmd->add_option_function<int64_t>(
      "--max-rows",
      [options](const int64_t& value) { options->max_rows = value; },
      "cap the number of ingested rows");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dump: dummy-point shuffle-model histogram estimation "
      "(calibrate, run, compare, verify)"};
  app.require_subcommand(1);

  CalibrateArgs calibrate_args;
  auto* calibrate =
      app.add_subcommand("calibrate", "invert a privacy bound for s");
  calibrate->add_option("--protocol", calibrate_args.protocol,
                        "pure or mix (flexible-* aliases accepted)");
  calibrate->add_option("--epsilon", calibrate_args.epsilon)->required();
  calibrate->add_option("--delta", calibrate_args.delta)->required();
  calibrate->add_option("--n", calibrate_args.n)->required();
  calibrate->add_option("--k", calibrate_args.k)->required();
  calibrate->add_option("--gamma", calibrate_args.gamma,
                        "sending probability; < 1 selects the flexible path");
  calibrate->add_option_function<double>(
      "--epsilon-l",
      [&calibrate_args](const double& value) {
        calibrate_args.epsilon_l = value;
      },
      "GRR local budget (mix only)");
  calibrate->add_flag("--exact", calibrate_args.exact,
                      "spread the exact expected budget via gamma");

  RunArgs run_args;
  run_args.seed = DefaultSeed();
  auto* run = app.add_subcommand("run", "calibrate and run an experiment");
  run->add_option("--protocol", run_args.protocol);
  AddDatasetOptions(run, &run_args.dataset);
  run->add_option("--epsilon", run_args.epsilon)->required();
  run->add_option("--delta", run_args.delta)->required();
  run->add_option("--gamma", run_args.gamma);
  run->add_option_function<double>(
      "--epsilon-l",
      [&run_args](const double& value) { run_args.epsilon_l = value; });
  run->add_flag("--exact", run_args.exact);
  run->add_option("--repeats", run_args.repeats);
  run->add_option("--seed", run_args.seed);
  run->add_option("--threads", run_args.threads);
  run->add_flag("--clip", run_args.clip,
                "clip the displayed mean estimate to [0, 1]");

  CompareArgs compare_args;
  compare_args.seed = DefaultSeed();
  auto* compare =
      app.add_subcommand("compare", "protocol table over an epsilon grid");
  compare->add_option("--protocols", compare_args.protocols,
                      "comma list: pure,mix,flexible-pure,flexible-mix,grr");
  compare->add_option("--epsilon-grid", compare_args.epsilon_grid,
                      "comma list or start:stop:step");
  AddDatasetOptions(compare, &compare_args.dataset);
  compare->add_option("--delta", compare_args.delta)->required();
  compare->add_option_function<double>(
      "--epsilon-l",
      [&compare_args](const double& value) { compare_args.epsilon_l = value; });
  compare->add_option_function<double>(
      "--gamma",
      [&compare_args](const double& value) { compare_args.gamma = value; });
  compare->add_option("--repeats", compare_args.repeats);
  compare->add_option("--seed", compare_args.seed);
  compare->add_option("--threads", compare_args.threads);

  VerifyArgs verify_args;
  verify_args.seed = DefaultSeed();
  auto* verify = app.add_subcommand("verify", "run an oracle check suite");
  verify->add_option("--suite", verify_args.suite,
                     "pmf | unbiased | tails | amplification")
      ->required();
  verify->add_option("--trials", verify_args.trials);
  verify->add_option("--seed", verify_args.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*calibrate) return CmdCalibrate(calibrate_args);
    if (*run) return CmdRun(run_args);
    if (*compare) return CmdCompare(compare_args);
    if (*verify) return CmdVerify(verify_args);
  } catch (const Error& error) {
    std::cerr << error.what() << '\n';
    return ExitCodeFor(error.code());
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 2;
  }
  return 0;
}
