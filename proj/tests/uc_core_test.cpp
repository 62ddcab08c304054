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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "ascost/uc_model.hpp"
#include "ascost/uc_solve.hpp"
#include "gtest/gtest.h"

namespace ascost {
namespace {

Scenario Load(const std::string& name) { return load_scenario(std::filesystem::path(ASCOST_DATA_DIR) / name); }

GeneratorSpec Gen(std::string id, double p_max, double lambda_e) {
  GeneratorSpec g;
  g.id = std::move(id);
  g.technology = "CCGT";
  g.p_max = p_max;
  g.lambda_e = lambda_e;
  return g;
}

Scenario Single(double demand) {
  Scenario s;
  s.name = "single";
  s.horizon = 1;
  s.demand = {demand};
  GeneratorSpec g = Gen("G", 100, 40);
  g.initially_on = true;
  s.generators.push_back(g);
  return s;
}

double Rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(BuildTest, OneGeneratorOneHourRowCounts) {
  Scenario s = Single(60);
  s.generators[0].h = 4;
  s.generators[0].pfr_max = 20;
  const UCModel m = build_uc(s, LossRule::endogenous_max(), true);
  EXPECT_EQ(m.count_rows(RowKind::kBalance), 1);
  EXPECT_EQ(m.count_rows(RowKind::kRocof), 1);
  EXPECT_EQ(m.count_rows(RowKind::kQss), 1);
  EXPECT_EQ(m.count_rows(RowClass::kNadir), static_cast<int>(seed_cut_normals().size()));
  for (const auto& c : m.cuts()) EXPECT_EQ(c.hour, 0);
  EXPECT_EQ(m.count_rows(RowKind::kLossLink), 1);
  EXPECT_TRUE(m.relaxed());
}

TEST(BuildTest, EveryRowReferencesRegisteredColumns) {
  const UCModel m = build_uc(Load("toy10_24h.json"), LossRule::endogenous_max(), false);
  ASSERT_EQ(m.rows().size(), static_cast<std::size_t>(m.lp().num_rows()));
  for (int r = 0; r < m.lp().num_rows(); ++r) {
    for (const auto& e : m.lp().row(r)) {
      ASSERT_GE(e.index, 0);
      ASSERT_LT(e.index, m.lp().num_columns());
    }
  }
  EXPECT_EQ(m.integer_columns().size(), (6 * 4 + 2 * 2) * 24u);
}

TEST(BuildTest, FixedProfileOnGbTemplate) {
  const Scenario s = gb_template();
  const UCModel m = build_uc(s, LossRule::fixed(std::vector<double>(s.horizon, 1800.0)), true);
  EXPECT_EQ(m.count_rows(RowKind::kMaxLoss), s.horizon);
  EXPECT_EQ(m.count_rows(RowKind::kLossLink), 0);
  for (int t = 0; t < s.horizon; ++t) {
    const int r = m.max_loss_row(t);
    ASSERT_GE(r, 0);
    EXPECT_EQ(m.rows()[r].kind, RowKind::kMaxLoss);
    EXPECT_DOUBLE_EQ(m.lp().row_lower(r), 1800.0);
  }
}

TEST(BuildTest, RejectsMismatchedInput) {
  Scenario s = Single(60);
  EXPECT_THROW(build_uc(s, LossRule::fixed({1, 2}), true), ModelError);
  s.generators.clear();
  EXPECT_THROW(build_uc(s, LossRule::endogenous_max(), true), ModelError);
  s = Single(60);
  s.demand.push_back(10);
  EXPECT_THROW(build_uc(s, LossRule::endogenous_max(), true), ModelError);
}

TEST(SolveTest, TrivialDispatch) {
  const Scenario s = Single(60);
  UCModel relaxed = build_uc(s, LossRule::fixed({0.0}), true);
  const RelaxedResult r = solve_relaxed(relaxed);
  EXPECT_NEAR(r.dispatch.gen_p[0][0], 60, 1e-9);
  EXPECT_NEAR(r.dispatch.objective, 60 * 40, 1e-9);
  EXPECT_NEAR(r.duals.lambda_e[0], 40, 1e-9);

  const MipResult q = solve_mip(build_uc(s, LossRule::fixed({0.0}), false));
  EXPECT_NEAR(q.dispatch.gen_p[0][0], 60, 1e-9);
  EXPECT_NEAR(q.dispatch.objective, 60 * 40, 1e-9);
  EXPECT_TRUE(q.stats.gap_reached);
}

TEST(SolveTest, MarginalUnitSetsEnergyPrice) {
  Scenario s = Single(150);
  s.generators.push_back(Gen("G2", 100, 55));
  s.generators[1].initially_on = true;
  UCModel m = build_uc(s, LossRule::fixed({0.0}), true);
  const RelaxedResult r = solve_relaxed(m);
  EXPECT_NEAR(r.duals.lambda_e[0], 55, 1e-9);
  EXPECT_NEAR(r.dispatch.gen_p[0][0], 100, 1e-9);
}

TEST(SolveTest, CapacityShortfallNamesEnergyBalance) {
  const Scenario s = Single(200);
  try {
    solve_mip(build_uc(s, LossRule::fixed({0.0}), false));
    FAIL() << "expected infeasibility";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.constraint_class(), "energy balance");
  }
  UCModel m = build_uc(s, LossRule::fixed({0.0}), true);
  EXPECT_THROW(solve_relaxed(m), InfeasibleError);
}

// A committed 1800 MW unit with no way to turn down.
Scenario BigUnit() {
  Scenario s;
  s.name = "big-unit";
  s.horizon = 2;
  s.demand = {2000, 2100};
  GeneratorSpec big = Gen("BIG", 1800, 10);
  big.technology = "Big Nuclear";
  big.p_msg = 1800;
  big.h = 5;
  big.t_mut = 24;
  big.t_mdt = 24;
  big.initially_on = true;
  s.generators.push_back(big);
  GeneratorSpec sync = Gen("SYNC", 600, 60);
  sync.h = 80;
  sync.lambda_h = 0.01;
  sync.initially_on = true;
  s.generators.push_back(sync);
  StorageSpec b;
  b.id = "BESS";
  b.technology = "BESS";
  b.p_max = 1800;
  b.e_max = 100;
  b.e_ini = b.e_end = 50;
  b.eta_cha = b.eta_dis = 0.95;
  b.efr_max = 1800;
  b.lambda_e = 30;
  b.lambda_efr = 1;
  s.storage_units.push_back(b);
  return s;
}

TEST(SolveTest, EndogenousLossTracksLargestUnit) {
  const Scenario s = BigUnit();
  UCModel relaxed = build_uc(s, LossRule::endogenous_max(), true);
  for (int t = 0; t < s.horizon; ++t) relaxed.set_column_bounds(relaxed.generators()[0].y[t], 1, 1);
  const RelaxedResult r = solve_relaxed(relaxed);
  const MipResult q = solve_mip(build_uc(s, LossRule::endogenous_max(), false));
  for (int t = 0; t < s.horizon; ++t) {
    EXPECT_NEAR(r.dispatch.gen_p[0][t], 1800, 1e-6);
    EXPECT_GE(r.dispatch.p_loss[t], 1800 - 1e-6);
    EXPECT_GE(q.dispatch.p_loss[t], 1800 - 1e-6);
    for (const auto& p : q.dispatch.gen_p) EXPECT_GE(q.dispatch.p_loss[t], p[t] - 1e-6);
  }
}

// Only the RoCoF limit binds: the nadir deviation allowance is huge and
// free PFR covers the loss.
TEST(SolveTest, RocofOnlyBinding) {
  Scenario s;
  s.name = "rocof";
  s.horizon = 1;
  s.params.delta_f_max = 49;
  s.demand = {100};
  GeneratorSpec g1 = Gen("G1", 100, 10);
  g1.h = 5;
  g1.initially_on = true;
  GeneratorSpec g2 = Gen("G2", 200, 20);
  g2.h = 15;
  g2.pfr_max = 200;
  g2.lambda_h = 1;
  g2.initially_on = true;
  s.generators = {g1, g2};
  UCModel m = build_uc(s, LossRule::fixed({100.0}), true);
  const RelaxedResult r = solve_relaxed(m);
  EXPECT_NEAR(r.dispatch.h[0], rocof_min_inertia(100, s.params), 1e-6);
  EXPECT_GT(r.duals.mu_rocof[0], 1e-3);
  EXPECT_NEAR(r.duals.mu_nadir_1[0], 0, 1e-9);
  EXPECT_NEAR(r.duals.mu_nadir_2[0], 0, 1e-9);
  EXPECT_NEAR(r.duals.mu_nadir_3[0], 0, 1e-9);
  EXPECT_NEAR(r.duals.mu_qss[0], 0, 1e-9);
  // One more MWs of inertia is worth lambda_h of the marginal inertia provider.
  EXPECT_NEAR(r.duals.lambda_h[0], 1.0, 1e-9);
  EXPECT_NEAR(r.duals.mu_rocof[0], 1.0, 1e-9);
}

void ExpectDualConsistency(const UCModel& m, const RelaxedResult& r) {
  const auto& lp = m.lp();
  EXPECT_LE(Rel(r.duals.dual_objective, r.dispatch.objective), 1e-6);
  EXPECT_LE(r.stats.duality_gap, 1e-6);
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double y = r.duals.row_dual[i];
    const double a = lp.row_activity(i, r.primal);
    const double lo = lp.row_lower(i), hi = lp.row_upper(i);
    if (y > 1e-7) {
      ASSERT_TRUE(std::isfinite(lo)) << "row " << i;
      EXPECT_LE((a - lo) * y, 1e-6 * std::max(1.0, std::abs(y))) << to_string(m.rows()[i].kind);
    } else if (y < -1e-7) {
      ASSERT_TRUE(std::isfinite(hi)) << "row " << i;
      EXPECT_LE((hi - a) * -y, 1e-6 * std::max(1.0, std::abs(y))) << to_string(m.rows()[i].kind);
    }
  }
  const auto nonneg = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= -1e-9; });
  };
  EXPECT_TRUE(nonneg(r.duals.mu_rocof));
  EXPECT_TRUE(nonneg(r.duals.mu_qss));
  EXPECT_TRUE(nonneg(r.duals.omega_loss));
  EXPECT_TRUE(nonneg(r.duals.mu_nadir_3));
  EXPECT_TRUE(nonneg(r.duals.psi_end));
  EXPECT_TRUE(nonneg(r.duals.psi_ini));
  for (const auto* mat : {&r.duals.psi_max_y, &r.duals.psi_mdt, &r.duals.psi_cf, &r.duals.psi_min_e,
                          &r.duals.psi_max_e, &r.duals.psi_dis_cha, &r.duals.psi_max_ycha}) {
    for (const auto& row : *mat) EXPECT_TRUE(nonneg(row));
  }
}

void ExpectAggregatesAndQss(const Scenario& s, const RelaxedResult& r) {
  for (int t = 0; t < s.horizon; ++t) {
    double h = 0, pfr = 0, efr = 0;
    for (std::size_t g = 0; g < s.generators.size(); ++g) {
      h += s.generators[g].h * s.generators[g].p_max * r.schedule.y[g][t];
      pfr += r.dispatch.gen_pfr[g][t];
    }
    for (std::size_t u = 0; u < s.storage_units.size(); ++u) {
      const auto& su = s.storage_units[u];
      h += su.h * su.p_max * (r.schedule.ycha[u][t] + r.schedule.ydis[u][t]);
      pfr += r.dispatch.sto_pfr[u][t];
      efr += r.dispatch.sto_efr[u][t];
    }
    EXPECT_LE(Rel(r.dispatch.h[t], h), 1e-9);
    EXPECT_LE(Rel(r.dispatch.pfr[t], pfr), 1e-9);
    EXPECT_LE(Rel(r.dispatch.efr[t], efr), 1e-9);
    EXPECT_GE(r.dispatch.efr[t] + r.dispatch.pfr[t], r.dispatch.p_loss[t] - 1e-6);
    EXPECT_LE(nadir_violation(r.dispatch.h[t], r.dispatch.efr[t], r.dispatch.pfr[t], r.dispatch.p_loss[t], s.params),
              1e-5);
    EXPECT_GE(r.dispatch.h[t], rocof_min_inertia(r.dispatch.p_loss[t], s.params) - 1e-6);
  }
}

TEST(RelaxedTest, StrongDualityAndAggregatesToy3) {
  const Scenario s = Load("toy3_24h.json");
  UCModel m = build_uc(s, LossRule::endogenous_max(), true);
  const RelaxedResult r = solve_relaxed(m);
  ExpectDualConsistency(m, r);
  ExpectAggregatesAndQss(s, r);
}

TEST(RelaxedTest, StrongDualityAndAggregatesToy10) {
  const Scenario s = Load("toy10_24h.json");
  UCModel m = build_uc(s, LossRule::endogenous_max(), true);
  const RelaxedResult r = solve_relaxed(m);
  ExpectDualConsistency(m, r);
  ExpectAggregatesAndQss(s, r);
}

TEST(RelaxedTest, MonotoneInLossParameter) {
  const Scenario s = Load("toy3_24h.json").truncated(8);
  UCModel m = build_uc(s, LossRule::fixed(std::vector<double>(s.horizon, 0.0)), true);
  double prev = -lp::kInf;
  for (double cap : {0.0, 50.0, 100.0, 150.0, 200.0, 250.0}) {
    m.set_loss_profile(std::vector<double>(s.horizon, cap));
    const RelaxedResult r = solve_relaxed(m);
    EXPECT_GE(r.dispatch.objective, prev - 1e-6 * std::abs(prev)) << cap;
    for (double pl : r.dispatch.p_loss) EXPECT_GE(pl, cap - 1e-6);
    prev = r.dispatch.objective;
  }
}

TEST(MipTest, RelaxedBoundsMip) {
  const Scenario s = Load("toy3_24h.json").truncated(6);
  UCModel relaxed = build_uc(s, LossRule::endogenous_max(), true);
  const double bound = solve_relaxed(relaxed).dispatch.objective;
  const MipResult q = solve_mip(build_uc(s, LossRule::endogenous_max(), false));
  EXPECT_LE(bound, q.dispatch.objective * (1 + 1e-9));
  EXPECT_TRUE(q.stats.gap_reached);
  for (std::size_t g = 0; g < s.generators.size(); ++g) {
    for (int t = 0; t < s.horizon; ++t) {
      const double prev = t == 0 ? (s.generators[g].initially_on ? 1.0 : 0.0) : q.schedule.y[g][t - 1];
      EXPECT_NEAR(q.schedule.y[g][t], prev + q.schedule.sg[g][t] - q.schedule.sd[g][t], 1e-9);
    }
  }
  for (std::size_t u = 0; u < s.storage_units.size(); ++u) {
    for (int t = 0; t < s.horizon; ++t) EXPECT_LE(q.schedule.ycha[u][t] + q.schedule.ydis[u][t], 1 + 1e-9);
  }
}

// Small random fleets: at most ten binaries, so enumeration is exhaustive.
Scenario RandomSmall(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0, 1);
  Scenario s;
  s.name = "random";
  s.horizon = 1;
  s.params.delta_f_max = 0.8;
  const int gens = 2;
  double cap = 0;
  for (int g = 0; g < gens; ++g) {
    GeneratorSpec u = Gen("G" + std::to_string(g), 100 + 200 * unit(rng), 20 + 60 * unit(rng));
    u.p_msg = u.p_max * 0.4 * unit(rng);
    u.h = 2 + 8 * unit(rng);
    u.pfr_max = u.p_max * 0.3 * unit(rng);
    u.lambda_h = 0.5 * unit(rng);
    u.lambda_pfr = 3 * unit(rng);
    u.initially_on = unit(rng) < 0.5;
    cap += u.p_max;
    s.generators.push_back(u);
  }
  StorageSpec b;
  b.id = "B";
  b.technology = "BESS";
  b.p_max = 100 + 100 * unit(rng);
  b.e_max = 100;
  b.e_ini = b.e_end = 50;
  b.eta_cha = b.eta_dis = 0.9;
  b.efr_max = b.p_max;
  b.lambda_e = 15;
  b.lambda_efr = 2 * unit(rng);
  s.storage_units.push_back(b);
  s.demand = {0.3 * cap * (0.5 + unit(rng))};
  return s;
}

TEST(MipTest, MatchesEnumerationOnSmallInstances) {
  std::mt19937_64 rng(2026);
  int solved = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Scenario s = RandomSmall(rng);
    const UCModel m = build_uc(s, LossRule::endogenous_max(), false);
    ASSERT_LE(m.integer_columns().size(), 10u);
    double reference;
    try {
      reference = solve_by_enumeration(m, 10).dispatch.objective;
    } catch (const InfeasibleError&) {
      EXPECT_THROW(solve_mip(m), InfeasibleError);
      continue;
    }
    const MipResult q = solve_mip(m);
    EXPECT_LE(Rel(q.dispatch.objective, reference), 1e-6) << "trial " << trial;
    ++solved;
  }
  EXPECT_GE(solved, 6);
}

TEST(MipTest, MatchesEnumerationWithPresetColumns) {
  const Scenario s = Load("toy3_24h.json").truncated(4);
  UCModel m = build_uc(s, LossRule::endogenous_max(), false);
  const MipResult full = solve_mip(m);
  // Fix everything except the second unit's first two hours and the storage mode in hour 1.
  const auto& gc = m.generators();
  const auto& sc = full.schedule;
  for (std::size_t g = 0; g < gc.size(); ++g) {
    for (int t = 0; t < s.horizon; ++t) {
      if (g == 1 && t < 2) continue;
      m.set_column_bounds(gc[g].y[t], sc.y[g][t], sc.y[g][t]);
      m.set_column_bounds(gc[g].st[t], sc.st[g][t], sc.st[g][t]);
      m.set_column_bounds(gc[g].sg[t], sc.sg[g][t], sc.sg[g][t]);
      m.set_column_bounds(gc[g].sd[t], sc.sd[g][t], sc.sd[g][t]);
    }
  }
  for (std::size_t u = 0; u < m.storage().size(); ++u) {
    for (int t = 0; t < s.horizon; ++t) {
      if (t == 1) continue;
      m.set_column_bounds(m.storage()[u].ycha[t], sc.ycha[u][t], sc.ycha[u][t]);
      m.set_column_bounds(m.storage()[u].ydis[t], sc.ydis[u][t], sc.ydis[u][t]);
    }
  }
  const MipResult bb = solve_mip(m);
  const MipResult en = solve_by_enumeration(m, 10);
  EXPECT_LE(Rel(bb.dispatch.objective, en.dispatch.objective), 1e-6);
  EXPECT_LE(Rel(bb.dispatch.objective, full.dispatch.objective), 1e-6);
  EXPECT_THROW(solve_by_enumeration(build_uc(s, LossRule::endogenous_max(), false), 10), SolverError);
}

}  // namespace
}  // namespace ascost
