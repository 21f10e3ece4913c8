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

// Checks the reference oracles themselves, then uses them to pin the library
// algorithms on random instances.

#include "oracles/oracles.hpp"

#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "phasebal/fuzzy.hpp"
#include "phasebal/planner.hpp"
#include "test_util.hpp"

namespace phasebal {
namespace {

TEST(BruteForceSubsetTest, HandEnumeratedInstance) {
  // C(5,2) = 10 pairs of {1..5}; sums to 7: (2,5) and (3,4).
  const auto w = oracle::brute_force_subset({1, 2, 3, 4, 5}, 2, 7);
  EXPECT_EQ(w.deviation, 0.0);
  EXPECT_EQ(w.indices, (std::vector<std::size_t>{1, 4}));
}

TEST(BruteForceSubsetTest, SixOfTwenty) {
  const std::vector<double> v = {5, 2, 5, 1, 2, 2, 3, 6, 8, 10,
                                 9, 4, 2, 3, 5, 6, 6, 6, 9, 5};
  EXPECT_EQ(oracle::brute_force_subset(v, 6, 30).deviation, 0.0);
}

TEST(BruteForceSubsetTest, EmptyWitness) {
  const auto w = oracle::brute_force_subset({4, 5}, 0, 3);
  EXPECT_EQ(w.deviation, 3.0);
  EXPECT_TRUE(w.indices.empty());
}

TEST(BruteForceSubsetTest, GuardsSize) {
  EXPECT_THROW(oracle::brute_force_subset(std::vector<double>(23, 1.0), 2, 1),
               std::invalid_argument);
}

TEST(FineGridCentroidTest, SingleRuleApexes) {
  const FuzzyController c = default_controller();
  EXPECT_NEAR(oracle::fine_grid_centroid(c, 120), 25.0, 0.01);
  for (const Rule& r : c.rules()) {
    const auto& in = c.input().terms()[*c.input().find(r.if_term)];
    const auto& out = c.output().terms()[*c.output().find(r.then_term)];
    EXPECT_NEAR(oracle::fine_grid_centroid(c, in.apex), out.apex, 0.01)
        << r.if_term;
  }
}

TEST(FineGridCentroidTest, AgreesWithEngineAt245) {
  const FuzzyController c = default_controller();
  EXPECT_NEAR(infer_change(c, 245), oracle::fine_grid_centroid(c, 245), 0.1);
}

TEST(OracleEquivalenceTest, RandomLoadsAgreeWithinTenthKw) {
  const FuzzyController c = default_controller();
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 300.0);
  for (int i = 0; i < 100; ++i) {
    const double load = u(rng);
    EXPECT_NEAR(infer_change(c, load), oracle::fine_grid_centroid(c, load), 0.1)
        << "load " << load;
  }
}

TEST(OracleEquivalenceTest, DpMatchesExhaustiveUpToTwentyPoints) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 20;
    const auto pts = testing::random_points(rng, m, 1, 15);
    const std::size_t n = rng() % (m + 1);
    const double target = static_cast<double>(rng() % 120);
    const SubsetSelection dp = select_subset(pts, n, target);
    const auto bf = oracle::brute_force_subset(pts, n, target);
    ASSERT_EQ(dp.deviation, bf.deviation) << "trial " << trial;
    ASSERT_EQ(dp.indices, bf.indices) << "trial " << trial;
  }
}

}  // namespace
}  // namespace phasebal
