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

#include "ascost/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "gtest/gtest.h"

namespace ascost {
namespace {

Scenario Load(const std::string& name) { return load_scenario(std::filesystem::path(ASCOST_DATA_DIR) / name); }

DualSolution ZeroDuals(int hours) {
  DualSolution d;
  for (auto* v : {&d.lambda_e, &d.lambda_h, &d.lambda_pfr, &d.lambda_efr, &d.mu_rocof, &d.mu_nadir_1, &d.mu_nadir_2,
                  &d.mu_nadir_3, &d.mu_qss, &d.omega_loss})
    v->assign(hours, 0.0);
  return d;
}

TEST(PricesTest, SlackSystemHasZeroPrices) {
  const AsPrices p = as_prices_from_duals(ZeroDuals(3), SystemParams{});
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(p.lambda_h[t], 0);
    EXPECT_EQ(p.lambda_pfr[t], 0);
    EXPECT_EQ(p.lambda_efr[t], 0);
    EXPECT_EQ(p.omega_loss[t], 0);
  }
}

TEST(PricesTest, RocofOnlyReduction) {
  DualSolution d = ZeroDuals(1);
  d.mu_rocof[0] = 0.002;
  d.lambda_h[0] = 0.002;
  d.omega_loss[0] = 0.002 * 50 / 2;
  const AsPrices p = as_prices_from_duals(d, SystemParams{});
  EXPECT_DOUBLE_EQ(p.lambda_h[0], 0.002);
  EXPECT_DOUBLE_EQ(p.omega_loss[0], 0.05);
  EXPECT_EQ(p.lambda_pfr[0], 0);

  d.lambda_h[0] = 0.003;
  EXPECT_THROW(as_prices_from_duals(d, SystemParams{}), PricingError);
}

TEST(PricesTest, SolvedInstanceSatisfiesMarketIdentity) {
  const Scenario s = Load("toy10_24h.json");
  UCModel m = build_uc(s, LossRule::endogenous_max(), true);
  const RelaxedResult r = solve_relaxed(m);
  const AsPrices p = as_prices_from_duals(r.duals, s.params);
  bool any_positive = false;
  for (int t = 0; t < s.horizon; ++t) {
    const auto& x = r.dispatch;
    const double omega = x.p_loss[t] * p.omega_loss[t];
    const double market = p.lambda_h[t] * x.h[t] + p.lambda_pfr[t] * x.pfr[t] + p.lambda_efr[t] * x.efr[t];
    EXPECT_LE(std::abs(omega - market), 1e-6 * std::max(1.0, omega));
    for (double v : {p.lambda_h[t], p.lambda_pfr[t], p.lambda_efr[t], p.omega_loss[t]}) EXPECT_GE(v, -1e-9);
    any_positive = any_positive || omega > 1;
  }
  EXPECT_TRUE(any_positive);
}

RelaxedResult Solve(const Scenario& s, const LossRule& rule) {
  UCModel m = build_uc(s, rule, true);
  return solve_relaxed(m);
}

TEST(AuditTest, BalancesOnToysUnderBothLossRules) {
  for (const char* name : {"toy3_24h.json", "toy10_24h.json"}) {
    const Scenario s = Load(name);
    for (const LossRule& rule : {LossRule::endogenous_max(), LossRule::fixed(std::vector<double>(s.horizon, 300))}) {
      const RelaxedResult r = Solve(s, rule);
      const MarketBreakdown b = duality_audit(r, s);
      EXPECT_LE(b.residual_full, 1e-5) << name;
      EXPECT_LE(b.max_omega_residual, 1e-6) << name;
      EXPECT_NEAR(b.system_costs, r.dispatch.objective, 1e-6 * r.dispatch.objective);
      EXPECT_GT(b.as_payments, 0);
      if (rule.kind == LossRule::Kind::kFixedProfile) EXPECT_EQ(b.loss_link_charges, 0);
      double per_tech_cost = 0;
      for (const auto& e : b.by_technology) per_tech_cost += e.cost;
      EXPECT_NEAR(per_tech_cost, b.system_costs, 1e-6 * b.system_costs);
    }
  }
}

TEST(AuditTest, ZeroAsInstance) {
  Scenario s;
  s.name = "energy-only";
  s.horizon = 2;
  s.demand = {60, 80};
  GeneratorSpec g;
  g.id = "G";
  g.technology = "CCGT";
  g.p_max = 100;
  g.lambda_e = 40;
  g.initially_on = true;
  s.generators.push_back(g);
  const RelaxedResult r = Solve(s, LossRule::fixed({0.0, 0.0}));
  const MarketBreakdown b = duality_audit(r, s);
  EXPECT_NEAR(b.as_payments, 0, 1e-12);
  EXPECT_NEAR(b.energy_payments, b.system_costs + b.thermal_profits + b.renewable_profits + b.storage_profits +
                                     b.omitted_terms,
              1e-9);
}

TEST(AuditTest, ScalingOffersScalesBothSides) {
  const Scenario s = Load("toy3_24h.json").truncated(6);
  Scenario s2 = s;
  for (auto& g : s2.generators) g.lambda_e *= 2, g.lambda_h *= 2, g.lambda_pfr *= 2;
  for (auto& u : s2.storage_units) u.lambda_e *= 2, u.lambda_h *= 2, u.lambda_pfr *= 2, u.lambda_efr *= 2;
  const RelaxedResult r1 = Solve(s, LossRule::fixed(std::vector<double>(6, 200)));
  const RelaxedResult r2 = Solve(s2, LossRule::fixed(std::vector<double>(6, 200)));
  const MarketBreakdown b1 = duality_audit(r1, s), b2 = duality_audit(r2, s2);
  EXPECT_NEAR(b2.lhs, 2 * b1.lhs, 1e-6 * b2.lhs);
  EXPECT_NEAR(b2.rhs_full, 2 * b1.rhs_full, 1e-6 * b2.lhs);
  EXPECT_NEAR(b2.system_costs, 2 * b1.system_costs, 1e-6 * b2.lhs);
}

// One large unit whose loss needs paid EFR and inertia, one small unit
// covered by a free EFR provider.
Scenario Covered() {
  Scenario s;
  s.name = "covered";
  s.horizon = 2;
  s.demand = {300, 320};
  GeneratorSpec a;
  a.id = "A";
  a.technology = "CCGT";
  a.p_max = 500;
  a.h = 20;
  a.lambda_e = 10;
  a.lambda_h = 1;
  a.initially_on = true;
  GeneratorSpec small = a;
  small.id = "S";
  small.p_max = 20;
  small.h = 0;
  small.lambda_e = 5;
  small.lambda_h = 0;
  s.generators = {a, small};
  StorageSpec free;
  free.id = "FREE";
  free.technology = "BESS";
  free.p_max = 50;
  free.e_max = 50;
  free.e_ini = free.e_end = 25;
  free.eta_cha = free.eta_dis = 0.9;
  free.efr_max = 50;
  free.lambda_e = 100;
  StorageSpec paid = free;
  paid.id = "PAID";
  paid.p_max = 300;
  paid.efr_max = 300;
  paid.lambda_efr = 1;
  s.storage_units = {free, paid};
  return s;
}

DispatchSolution Outputs(const Scenario& s, std::vector<std::vector<double>> gen_p) {
  DispatchSolution d;
  d.gen_p = std::move(gen_p);
  d.sto_dis.assign(s.storage_units.size(), std::vector<double>(s.horizon, 0.0));
  return d;
}

TEST(StandAloneTest, CoveredUnitHasZeroMarketAndLargestMatchesHeadline) {
  const Scenario s = Covered();
  const DispatchSolution x = Outputs(s, {{280, 300}, {20, 20}});
  const StandAloneCosts c = standalone_markets(s, x);
  ASSERT_EQ(c.hours.size(), 2u);
  const RelaxedResult head = Solve(s, LossRule::fixed({280, 300}));
  for (int t = 0; t < 2; ++t) {
    ASSERT_EQ(c.hours[t].size(), 2u);
    EXPECT_EQ(c.hours[t][0].unit_id, "A");
    EXPECT_EQ(c.hours[t][1].unit_id, "S");
    EXPECT_EQ(c.hours[t][1].omega, 0.0);
    const auto& h = head.dispatch;
    const auto& d = head.duals;
    const double market = d.lambda_h[t] * h.h[t] + d.lambda_pfr[t] * h.pfr[t] + d.lambda_efr[t] * h.efr[t];
    EXPECT_GT(c.hours[t][0].omega, 0);
    EXPECT_NEAR(c.hours[t][0].omega, market, 1e-6 * std::max(1.0, market));
  }
}

TEST(StandAloneTest, ZeroDispatchHasNoEntries) {
  const Scenario s = Covered();
  const StandAloneCosts c = standalone_markets(s, Outputs(s, {{300, 320}, {0, 0}}));
  for (const auto& hour : c.hours) {
    ASSERT_EQ(hour.size(), 1u);
    EXPECT_EQ(hour[0].unit_id, "A");
  }
}

// Within one hour the optimal cost is convex in the loss parameter, so a
// larger loss never carries a smaller stand-alone market. (Across hours the
// commitment coupling can break this; see the notes on stand-alone costs.)
TEST(StandAloneTest, LargerLossCostsMoreWithinAnHour) {
  const Scenario s = Load("toy10_24h.json").truncated(1);
  DispatchSolution x;
  x.gen_p = {{350}, {100}, {250}, {20}, {60}, {180}};
  x.res_p = {{300}, {0}};
  x.sto_dis = {{0}, {120}};
  const StandAloneCosts c = standalone_markets(s, x);
  std::vector<StandAloneEntry> hour = c.hours[0];
  ASSERT_EQ(hour.size(), 8u);
  std::sort(hour.begin(), hour.end(), [](const auto& a, const auto& b) { return a.dispatch_mw < b.dispatch_mw; });
  for (std::size_t k = 1; k < hour.size(); ++k) {
    EXPECT_GE(hour[k].omega, hour[k - 1].omega - 1e-6 * std::max(1.0, hour[k].omega))
        << hour[k].unit_id << " vs " << hour[k - 1].unit_id;
  }
  EXPECT_GT(hour.back().omega, hour.front().omega);
}

TEST(StandAloneTest, IndependentOfThreadCount) {
  const Scenario s = Load("toy3_24h.json").truncated(8);
  UCModel m = build_uc(s, LossRule::endogenous_max(), true);
  const RelaxedResult r = solve_relaxed(m);
  StandAloneOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const StandAloneCosts a = standalone_markets(s, r.dispatch, one);
  const StandAloneCosts b = standalone_markets(s, r.dispatch, many);
  ASSERT_EQ(a.hours.size(), b.hours.size());
  for (std::size_t t = 0; t < a.hours.size(); ++t) {
    ASSERT_EQ(a.hours[t].size(), b.hours[t].size());
    for (std::size_t k = 0; k < a.hours[t].size(); ++k) {
      EXPECT_EQ(a.hours[t][k].unit_id, b.hours[t][k].unit_id);
      EXPECT_EQ(a.hours[t][k].omega, b.hours[t][k].omega);
    }
  }
}

}  // namespace
}  // namespace ascost
