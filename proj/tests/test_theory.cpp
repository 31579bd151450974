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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dump/random.h"
#include "dump/theory.h"
#include "test_support.h"

using namespace dump;
using namespace dump::testing;

TEST_CASE("pure MSE formula values") {
  CHECK(PureMse(MakeConfig(10, 5, 0)) == 0.0);
  CHECK(NearRel(PureMse(MakeConfig(500000, 50, 3)), 1.176e-7, 1e-12));
  CHECK(NearRel(PureMse(MakeConfig(1, 2, 1)), 0.25, 1e-15));
}

TEST_CASE("mix MSE formula values") {
  CHECK(NearRel(MixMse(MakeConfig(500000, 50, 1, 1.0, 8.0)),
                4.120867688920243e-8, 1e-12));
  CHECK(NearRel(MixMse(MakeConfig(100000, 50, 1, 1.0, 8.0)),
                2.060433844460122e-7, 1e-12));
}

TEST_CASE("mix MSE degrades exactly to pure as epsilon_l -> infinity") {
  const auto config =
      MakeConfig(500000, 50, 3, 1.0, std::numeric_limits<double>::infinity());
  CHECK(MixMse(config) == PureMse(MakeConfig(500000, 50, 3)));
  const auto no_dummies =
      MakeConfig(500000, 50, 0, 1.0, std::numeric_limits<double>::infinity());
  CHECK(MixMse(no_dummies) == 0.0);
}

TEST_CASE("mix MSE rejects epsilon_l = 0") {
  CHECK_THROWS_CODE(MixMse(MakeConfig(10, 5, 1)),
                    ErrorCode::kDegenerateRandomizer);
}

TEST_CASE("flexible pure MSE values and gamma = 1 coincidence") {
  CHECK(FlexiblePureMse(MakeConfig(500000, 50, 3)) ==
        PureMse(MakeConfig(500000, 50, 3)));
  CHECK(NearRel(FlexiblePureMse(MakeConfig(500000, 50, 3, 0.01)),
                1.19976e-9, 1e-12));
  CHECK(FlexiblePureMse(MakeConfig(500000, 50, 3, 1e-12)) < 1e-18);
}

TEST_CASE("flexible mix MSE values") {
  CHECK(FlexibleMixMse(MakeConfig(500000, 50, 1, 1.0, 8.0)) ==
        MixMse(MakeConfig(500000, 50, 1, 1.0, 8.0)));
  CHECK(NearRel(FlexibleMixMse(MakeConfig(500000, 50, 1, 0.01, 8.0)),
                1.0956391634189345e-9, 1e-12));
  // s = 0 leaves only the GRR term.
  CHECK(FlexibleMixMse(MakeConfig(500000, 50, 0, 0.01, 8.0)) ==
        MixMse(MakeConfig(500000, 50, 0, 1.0, 8.0)));
}

TEST_CASE("mix never beats pure at matched dummy counts") {
  RandomSource rng(11, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const int64_t k = 2 + rng.NextBelow(500);
    const int64_t n = 1 + rng.NextBelow(1000000);
    const int64_t s = rng.NextBelow(50);
    const double epsilon_l = 0.1 + rng.NextUnit() * 12.0;
    const auto pure = MakeConfig(n, k, s);
    const auto mix = MakeConfig(n, k, s, 1.0, epsilon_l);
    CHECK(MixMse(mix) >= PureMse(pure));
  }
}

TEST_CASE("all MSE formulas scale as 1/n") {
  RandomSource rng(12, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int64_t k = 2 + rng.NextBelow(100);
    const int64_t n = 1 + rng.NextBelow(100000);
    const int64_t s = 1 + rng.NextBelow(20);
    const double gamma = 0.05 + rng.NextUnit() * 0.95;
    const double epsilon_l = 0.5 + rng.NextUnit() * 8.0;
    CHECK(NearRel(PureMse(MakeConfig(10 * n, k, s)),
                  PureMse(MakeConfig(n, k, s)) / 10.0, 1e-14));
    CHECK(NearRel(MixMse(MakeConfig(10 * n, k, s, 1.0, epsilon_l)),
                  MixMse(MakeConfig(n, k, s, 1.0, epsilon_l)) / 10.0, 1e-14));
    CHECK(NearRel(FlexiblePureMse(MakeConfig(10 * n, k, s, gamma)),
                  FlexiblePureMse(MakeConfig(n, k, s, gamma)) / 10.0, 1e-14));
  }
}

TEST_CASE("flexible pure MSE is monotone in s and gamma") {
  RandomSource rng(13, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t k = 2 + rng.NextBelow(100);
    const int64_t n = 1 + rng.NextBelow(100000);
    const int64_t s = 1 + rng.NextBelow(20);
    const double gamma = 0.05 + rng.NextUnit() * 0.9;
    CHECK(FlexiblePureMse(MakeConfig(n, k, s + 1, gamma)) >
          FlexiblePureMse(MakeConfig(n, k, s, gamma)));
    CHECK(FlexiblePureMse(MakeConfig(n, k, s, gamma + 0.05)) >
          FlexiblePureMse(MakeConfig(n, k, s, gamma)));
  }
}

TEST_CASE("messages per user") {
  CHECK(MessagesPerUser(MakeConfig(10, 5, 0)) == 1.0);
  CHECK(NearRel(MessagesPerUser(MakeConfig(10, 5, 3, 0.01)), 1.03, 1e-12));
  CHECK(MessagesPerUser(MakeConfig(100, 50, 102)) == 103.0);
}

TEST_CASE("theory report carries message size") {
  const auto report = MakeTheoryReport(Protocol::kPure, MakeConfig(100, 50, 2));
  CHECK(report.bits_per_message == 6.0);
  CHECK(report.messages_per_user == 3.0);
  CHECK(report.mse == PureMse(MakeConfig(100, 50, 2)));
}
