// Copyright 2026 The phasebal Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phasebal/io.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace phasebal {
namespace {

const std::string kDataDir = PHASEBAL_DATA_DIR;

ParseError::Kind KindOf(std::string_view text, std::size_t* line = nullptr) {
  try {
    parse_feeder_csv(text);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ParseError::Kind::kSyntax;
}

TEST(FeederCsvTest, ShippedFileMatchesEmbedded) {
  const std::string file = read_file(kDataDir + "/reference_feeder.csv");
  EXPECT_EQ(file, data::kReferenceFeederCsv);
  const FeederSnapshot s = parse_feeder_csv(file);
  EXPECT_EQ(s.phase(0).size(), 50u);
  EXPECT_EQ(phase_totals(s).totals, (PhaseVector{245, 120, 82}));
}

TEST(FeederCsvTest, MinimalFile) {
  const FeederSnapshot s = parse_feeder_csv("phase1,phase2,phase3\n1,2,3\n");
  EXPECT_EQ(s, FeederSnapshot({1}, {2}, {3}));
}

TEST(FeederCsvTest, DecimalsAndCrLf) {
  const FeederSnapshot s =
      parse_feeder_csv("phase1,phase2,phase3\r\n1.5, 2 ,0.25\r\n");
  EXPECT_EQ(s, FeederSnapshot({1.5}, {2}, {0.25}));
}

TEST(FeederCsvTest, Diagnostics) {
  std::size_t line = 0;
  EXPECT_EQ(KindOf("phase1,phase2,phase3\n1,2,3\n1,2\n", &line),
            ParseError::Kind::kWrongColumnCount);
  EXPECT_EQ(line, 3u);
  EXPECT_EQ(KindOf("phase1,phase2,phase3\n1,x,3\n", &line),
            ParseError::Kind::kNonNumeric);
  EXPECT_EQ(line, 2u);
  EXPECT_EQ(KindOf("phase1,phase2,phase3\n1,2,-3\n", &line),
            ParseError::Kind::kNegativeValue);
  EXPECT_EQ(line, 2u);
  EXPECT_EQ(KindOf("phase1,phase2,phase3\n"), ParseError::Kind::kEmptyBody);
  EXPECT_EQ(KindOf("a,b,c\n1,2,3\n"), ParseError::Kind::kMissingHeader);
  EXPECT_EQ(KindOf("phase1,phase2,phase3\n1,2,3,4\n"),
            ParseError::Kind::kWrongColumnCount);
  EXPECT_EQ(KindOf("phase1,phase2,phase3\n,,\n"),
            ParseError::Kind::kWrongColumnCount);
}

TEST(FeederCsvTest, MessageCarriesLineNumber) {
  try {
    parse_feeder_csv("phase1,phase2,phase3\n1,2,3\n4,5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(FeederCsvTest, RaggedPhasesRoundTrip) {
  const FeederSnapshot s({1, 2, 3}, {4}, {});
  const std::string text = write_feeder_csv(s);
  EXPECT_EQ(text, "phase1,phase2,phase3\n1,4,\n2,,\n3,,\n");
  EXPECT_EQ(parse_feeder_csv(text), s);
}

TEST(FeederCsvTest, RoundTripProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> frac(0.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<FeederSnapshot::Phase, 3> phases;
    for (auto& ph : phases) {
      ph.resize(1 + rng() % 30);
      for (auto& v : ph) v = (trial % 2) ? frac(rng) : double(rng() % 15);
    }
    const FeederSnapshot s(phases);
    const std::string once = write_feeder_csv(s);
    EXPECT_EQ(parse_feeder_csv(once), s);
    EXPECT_EQ(write_feeder_csv(parse_feeder_csv(once)), once);
  }
}

TEST(FeederCsvTest, ReferenceFileRoundTripIsBitExact) {
  const std::string file = read_file(kDataDir + "/reference_feeder.csv");
  EXPECT_EQ(write_feeder_csv(parse_feeder_csv(file)), file);
}

TEST(ControllerFileTest, ShippedFileEqualsBuiltInDefault) {
  const FuzzyController from_file =
      parse_controller(read_file(kDataDir + "/default_controller.txt"));
  const FuzzyController builtin = default_controller();
  EXPECT_EQ(write_controller(from_file), write_controller(builtin));
  EXPECT_EQ(write_controller(embedded_default_controller()),
            write_controller(builtin));
  for (int load = 0; load <= 300; load += 7) {
    EXPECT_EQ(infer_change(from_file, load), infer_change(builtin, load));
  }
}

TEST(ControllerFileTest, WriteParseRoundTrip) {
  const FuzzyController c = default_controller();
  EXPECT_EQ(write_controller(parse_controller(write_controller(c))),
            write_controller(c));
}

TEST(ControllerFileTest, CustomCapacity) {
  // A controller rescaled for a 100 kW-per-phase feeder.
  const FuzzyController c = parse_controller(R"(
variable Load 0 200
term low 0 50 100
term ok 50 100 150
term high 100 150 200
variable Change -100 100
term give -100 -50 0
term none -50 0 50
term take 0 50 100
rule low -> take
rule ok -> none
rule high -> give
resolution 2001
)");
  EXPECT_EQ(c.integration_resolution(), 2001u);
  EXPECT_EQ(infer_change(c, 100), 0.0);
  EXPECT_THROW(infer_change(c, 250), OutOfUniverse);
}

TEST(ControllerFileTest, Errors) {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_controller(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    ADD_FAILURE() << "no error for: " << text;
    return 0;
  };
  EXPECT_EQ(line_of("term a 0 1 2\n"), 1u);
  EXPECT_EQ(line_of("variable L 0 10\nterm a 0 x 10\n"), 2u);
  EXPECT_EQ(line_of("variable L 0 10\nterm a 5 1 10\n"), 2u);
  EXPECT_EQ(line_of("variable L 0 10\nfrobnicate\n"), 2u);
  EXPECT_EQ(line_of("variable L 0 10\nrule a b\n"), 2u);
  // Structural errors are reported without a line.
  EXPECT_EQ(line_of("variable L 0 10\nterm a 0 5 10\n"), 0u);
  EXPECT_EQ(line_of("variable L 0 10\nterm a 0 5 10\nvariable C 0 10\n"
                    "term b 0 5 10\nrule a -> zzz\n"),
            0u);
}

TEST(ReportTest, WorkedExampleSchema) {
  const BalanceReport r = balance(reference_feeder(), BalancerConfig{});
  const auto doc = report_to_json(r);
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{
                      "status", "initial_totals", "initial_unbalance",
                      "iterations", "final_totals", "final_unbalance"}));
  EXPECT_EQ(doc["status"], "balanced");
  EXPECT_EQ(doc["final_totals"], nlohmann::ordered_json({146, 150, 151}));
  EXPECT_EQ(doc["final_unbalance"].get<double>(), 3.33);
  EXPECT_EQ(doc["initial_unbalance"].get<double>(), 108.67);

  const auto& it0 = doc["iterations"][0];
  std::vector<std::string> it_keys;
  for (auto it = it0.begin(); it != it0.end(); ++it) it_keys.push_back(it.key());
  EXPECT_EQ(it_keys,
            (std::vector<std::string>{"totals_before", "fuzzy_raw", "avg_error",
                                      "error_vector", "fuzzy_corrected",
                                      "moves", "totals_after",
                                      "unbalance_after"}));
  EXPECT_EQ(it0["fuzzy_corrected"], nlohmann::ordered_json({-99, 30, 69}));
  EXPECT_EQ(it0["avg_error"], -5);
  EXPECT_EQ(it0["moves"].size(), 20u);
  const auto& m = it0["moves"][0];
  EXPECT_TRUE(m["kw"].is_number_integer());
  EXPECT_EQ(m["from"], 1);
}

TEST(ReportTest, AlreadyBalanced) {
  const FeederSnapshot s({10, 10}, {10, 10}, {10, 10});
  const auto doc = report_to_json(balance(s, BalancerConfig{}));
  EXPECT_EQ(doc["status"], "already-balanced");
  EXPECT_TRUE(doc["iterations"].is_array());
  EXPECT_TRUE(doc["iterations"].empty());
}

TEST(ReportTest, InfeasibleCarriesReason) {
  const FeederSnapshot s({50, 50, 50, 50}, {60, 60}, {40, 40});
  const auto doc = report_to_json(balance(s, BalancerConfig{}));
  EXPECT_EQ(doc["status"], "infeasible");
  ASSERT_TRUE(doc.contains("reason"));
  EXPECT_NE(doc["reason"].get<std::string>().find("phase 2"), std::string::npos);
  EXPECT_EQ(doc.begin().key(), "status");
  EXPECT_EQ(std::next(doc.begin()).key(), "reason");
}

TEST(ReportTest, ReplayReproducesFinalTotals) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const FeederSnapshot s(testing::random_points(rng, 10 + rng() % 20, 1, 10),
                           testing::random_points(rng, 10 + rng() % 20, 1, 10),
                           testing::random_points(rng, 10 + rng() % 20, 1, 10));
    const BalanceReport r = balance(s, BalancerConfig{});
    const std::string json = write_report(r);
    FeederSnapshot cur = parse_feeder_csv(write_feeder_csv(s));
    for (const BalancePlan& plan : plans_from_report(json)) {
      cur = apply_plan(cur, plan);
    }
    const auto doc = nlohmann::json::parse(json);
    const PhaseVector replayed = phase_totals(cur).totals;
    EXPECT_EQ(doc["final_totals"].get<std::vector<double>>(),
              std::vector<double>(replayed.begin(), replayed.end()));
  }
}

TEST(ReportTest, MovesCsv) {
  const BalanceReport r = balance(reference_feeder(), BalancerConfig{});
  const std::string csv = write_moves_csv(r);
  EXPECT_EQ(csv.rfind("iteration,from,index,to,kw\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
}

}  // namespace
}  // namespace phasebal
