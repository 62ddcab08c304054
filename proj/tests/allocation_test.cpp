// Copyright 2026 The ascost Authors
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

#include "ascost/allocation.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"

namespace ascost {
namespace {

AirportGame Game(std::vector<double> costs) { return AirportGame::from_costs(costs); }

void ExpectVector(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

// Random costs drawn from a few levels so that ties show up.
std::vector<double> RandomCosts(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> levels(2, n + 2);
  const int k = levels(rng);
  std::uniform_real_distribution<double> value(0, 10);
  std::vector<double> pool(k);
  for (double& v : pool) v = value(rng);
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<double> c(n);
  for (double& v : c) v = pool[pick(rng)];
  return c;
}

TEST(GameTest, SortsAscendingWithIdTieBreak) {
  const AirportGame g({{"b", 2}, {"c", 1}, {"a", 2}});
  ASSERT_EQ(g.size(), 3);
  EXPECT_EQ(g.players()[0].id, "c");
  EXPECT_EQ(g.players()[1].id, "a");
  EXPECT_EQ(g.players()[2].id, "b");
  EXPECT_EQ(g.total(), 2);
  EXPECT_EQ(g.coalition_cost(0b011), 2);
  EXPECT_EQ(g.coalition_cost(0), 0);
}

TEST(GameTest, RejectsNegativeCost) { EXPECT_THROW(Game({1, -1}), AllocationError); }

TEST(ProportionalTest, Examples) {
  ExpectVector(proportional(Game({4, 6, 10})).phi, {2, 3, 5}, 1e-12);
  ExpectVector(proportional(Game({7})).phi, {7}, 0);
  ExpectVector(proportional(Game({1, 1, 2})).phi, {0.5, 0.5, 1}, 1e-12);
  ExpectVector(proportional(Game({0, 0})).phi, {0, 0}, 0);
}

TEST(ShapleyTest, Examples) {
  ExpectVector(shapley_airport(Game({1, 2, 3})).phi, {1.0 / 3, 5.0 / 6, 11.0 / 6}, 1e-15);
  ExpectVector(shapley_airport(Game({5, 5})).phi, {2.5, 2.5}, 0);
  ExpectVector(shapley_airport(Game({4, 9})).phi, {2, 7}, 0);
}

// [1, 2, 3] over the 3! arrival orders, each charging the increment of the
// running maximum.
TEST(ShapleyTest, OrderEnumerationOnSmallGame) {
  std::vector<int> order{0, 1, 2};
  const std::vector<double> cost{1, 2, 3};
  std::vector<double> phi(3, 0.0);
  int count = 0;
  do {
    double running = 0;
    for (int i : order) {
      phi[i] += std::max(running, cost[i]) - running;
      running = std::max(running, cost[i]);
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi) v /= count;
  ExpectVector(shapley_bruteforce(Game(cost)).phi, phi, 1e-15);
  ExpectVector(shapley_airport(Game(cost)).phi, phi, 1e-15);
}

TEST(ShapleyTest, BruteForceMatchesClosedFormOnRandomGames) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const AirportGame g = Game(RandomCosts(rng, 1 + trial % 8));
    ExpectVector(shapley_bruteforce(g).phi, shapley_airport(g).phi, 1e-12);
  }
}

TEST(ShapleyTest, BruteForceRefusesLargeGames) {
  EXPECT_THROW(shapley_bruteforce(Game(std::vector<double>(13, 1.0))), AllocationError);
  EXPECT_NO_THROW(shapley_bruteforce(Game(std::vector<double>(13, 1.0)), 13));
}

TEST(GroupTest, Examples) {
  TypedGroups g = group_by_type(Game({1, 1, 2}));
  ASSERT_EQ(g.groups.size(), 2u);
  EXPECT_EQ(g.groups[0].members.size(), 2u);
  EXPECT_EQ(g.groups[1].members.size(), 1u);

  EXPECT_EQ(group_by_type(Game({1, 2, 3, 4})).groups.size(), 4u);

  g = group_by_type(Game({10, 10 + 1e-12, 20}), 1e-9);
  ASSERT_EQ(g.groups.size(), 2u);
  EXPECT_EQ(g.groups[0].cost, 10 + 1e-12);
}

TEST(NucleolusTest, Examples) {
  ExpectVector(nucleolus_airport(Game({4, 9})).phi, {2, 7}, 0);
  ExpectVector(nucleolus_airport(Game({5, 5})).phi, {2.5, 2.5}, 0);
  ExpectVector(nucleolus_airport(Game({1, 2, 3})).phi, {0.5, 0.75, 1.75}, 1e-15);
}

TEST(NucleolusTest, RecursionStateOnSmallGame) {
  const AirportGame g = Game({1, 2, 3});
  NucleolusState st;
  nucleolus_airport(g, group_by_type(g), &st);
  ExpectVector(st.alpha, {-0.5, -0.75, -1.75}, 1e-15);
  EXPECT_EQ(st.k, (std::vector<int>{1, 2, 3}));
}

TEST(NucleolusTest, StateIsMonotone) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const AirportGame g = Game(RandomCosts(rng, 1 + trial % 10));
    NucleolusState st;
    nucleolus_airport(g, group_by_type(g), &st);
    for (std::size_t q = 1; q < st.alpha.size(); ++q) {
      EXPECT_LE(st.alpha[q], st.alpha[q - 1] + 1e-12);
      EXPECT_GT(st.k[q], st.k[q - 1]);
    }
  }
}

// Excesses of [1, 2, 3] at (0.5, 0.75, 1.75), by hand: the singletons {1}
// and {2} and the pair {1, 2} all sit at -0.5 or below and nothing beats it.
TEST(NucleolusOracleTest, SmallGame) {
  const AirportGame g = Game({1, 2, 3});
  const Allocation a = nucleolus_lp_oracle(g);
  ExpectVector(a.phi, {0.5, 0.75, 1.75}, 1e-9);
  double worst = -1e9;
  for (std::uint64_t s = 1; s < 7; ++s) {
    double x = 0;
    for (int i = 0; i < 3; ++i)
      if (s >> i & 1) x += a.phi[i];
    worst = std::max(worst, x - g.coalition_cost(s));
  }
  EXPECT_NEAR(worst, -0.5, 1e-9);
  ExpectVector(nucleolus_lp_oracle(Game({8})).phi, {8}, 0);
}

TEST(NucleolusOracleTest, MatchesRecursionOnRandomGames) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 150; ++trial) {
    const AirportGame g = Game(RandomCosts(rng, 2 + trial % 5));
    ExpectVector(nucleolus_lp_oracle(g).phi, nucleolus_airport(g).phi, 1e-7);
  }
}

TEST(NucleolusOracleTest, RefusesLargeGames) {
  EXPECT_THROW(nucleolus_lp_oracle(Game(std::vector<double>(9, 1.0))), AllocationError);
}

TEST(CoreTest, Examples) {
  const AirportGame g = Game({1, 2, 3});
  EXPECT_TRUE(core_check(shapley_airport(g), g).passed());
  EXPECT_TRUE(core_check(nucleolus_airport(g), g).passed());

  const AirportGame cross = Game({1, 1, 1, 100});
  const CoreReport r = core_check(proportional(cross), cross);
  EXPECT_TRUE(r.efficient);
  EXPECT_TRUE(r.individually_rational);
  EXPECT_FALSE(r.coalitionally_rational);
  EXPECT_EQ(r.worst_coalition, 0b0111u);
  EXPECT_NEAR(r.worst_excess, 300.0 / 103 - 1, 1e-12);
}

TEST(CoreTest, DetectsIndividualViolation) {
  const AirportGame g = Game({1, 3});
  Allocation a = shapley_airport(g);
  a.phi = {1.5, 1.5};
  const CoreReport r = core_check(a, g);
  EXPECT_TRUE(r.efficient);
  EXPECT_FALSE(r.individually_rational);
}

class RuleProperties : public ::testing::TestWithParam<Rule> {};

TEST_P(RuleProperties, HoldOnRandomGames) {
  const Rule rule = GetParam();
  std::mt19937_64 rng(17 + static_cast<int>(rule));
  for (int trial = 0; trial < 300; ++trial) {
    const AirportGame g = Game(RandomCosts(rng, 1 + trial % 12));
    const Allocation a = allocate(g, rule);
    const double band = 1e-9 * std::max(1.0, g.total());
    EXPECT_LE(a.efficiency_gap, band);
    for (int i = 0; i < g.size(); ++i) {
      EXPECT_LE(a.phi[i], g.cost(i) + band);
      EXPECT_GE(a.phi[i], -band);
      for (int j = i + 1; j < g.size(); ++j) {
        if (g.cost(i) == g.cost(j)) EXPECT_NEAR(a.phi[i], a.phi[j], band);
        if (rule != Rule::kProportional) EXPECT_LE(a.phi[i], a.phi[j] + band);
      }
    }
    if (rule != Rule::kProportional) EXPECT_TRUE(core_check(a, g).passed()) << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(AllRules, RuleProperties,
                         ::testing::Values(Rule::kProportional, Rule::kShapley, Rule::kNucleolus),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(RuleTest, TwoPlayersCoincide) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> v(0, 100);
  for (int trial = 0; trial < 100; ++trial) {
    const AirportGame g = Game({v(rng), v(rng)});
    const Allocation s = shapley_airport(g), n = nucleolus_airport(g);
    ExpectVector(s.phi, n.phi, 1e-12);
    EXPECT_NEAR(s.phi[0], g.cost(0) / 2, 1e-12);
    EXPECT_NEAR(s.phi[1], g.cost(1) - g.cost(0) / 2, 1e-12);
  }
}

TEST(RuleTest, ParseRoundTrip) {
  for (Rule r : {Rule::kProportional, Rule::kShapley, Rule::kNucleolus}) EXPECT_EQ(parse_rule(to_string(r)), r);
  EXPECT_THROW(parse_rule("banzhaf"), AllocationError);
}

StandAloneCosts Hours(std::vector<std::vector<StandAloneEntry>> h) { return StandAloneCosts{std::move(h)}; }

TEST(HourlyTest, ZeroPlayersPayNothing) {
  const StandAloneCosts c = Hours({
      {{"A", "CCGT", 500, 40}, {"B", "CCGT", 100, 0}, {"W", "Wind", 300, 10}},
      {{"A", "CCGT", 500, 0}, {"B", "CCGT", 100, 0}},
      {{"A", "CCGT", 500, 25}},
  });
  for (Rule rule : {Rule::kProportional, Rule::kShapley, Rule::kNucleolus}) {
    const HourlyAllocation a = allocate_hourly(c, rule);
    ASSERT_EQ(a.hours.size(), 3u);
    EXPECT_EQ(a.hours[0][1].phi, 0);
    double s0 = 0;
    for (const auto& u : a.hours[0]) s0 += u.phi;
    EXPECT_NEAR(s0, 40, 1e-12);
    for (const auto& u : a.hours[1]) EXPECT_EQ(u.phi, 0);
    EXPECT_EQ(a.hours[2][0].phi, 25);
    ASSERT_EQ(a.by_technology.size(), 2u);
    EXPECT_EQ(a.by_technology[0].technology, "CCGT");
    EXPECT_NEAR(a.by_technology[0].total + a.by_technology[1].total, 65, 1e-12);
    EXPECT_NEAR(a.by_technology[1].hourly[0], a.hours[0][2].phi, 0);
    EXPECT_EQ(a.headline[0], 40);
  }
}

TEST(HourlyTest, RejectsNegativeCost) {
  EXPECT_THROW(allocate_hourly(Hours({{{"A", "CCGT", 1, -1}}}), Rule::kShapley), AllocationError);
}

}  // namespace
}  // namespace ascost
