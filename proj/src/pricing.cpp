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
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

namespace ascost {

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

void check_price(const char* name, int t, double formula, double reported, double tol) {
  if (rel_diff(formula, reported) > tol) {
    std::ostringstream os;
    os << "stationarity residual for " << name << " at hour " << t << ": formula " << formula << " vs multiplier "
       << reported;
    throw PricingError(os.str());
  }
}

double sum(const Matrix& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s += v;
  return s;
}

}  // namespace

AsPrices as_prices_from_duals(const DualSolution& d, const SystemParams& p, double rel_tol) {
  const std::size_t T = d.lambda_e.size();
  const double a = p.t_efr / (4 * p.delta_f_max);
  const double sq = std::sqrt(p.delta_f_max);
  AsPrices out;
  out.lambda_e = d.lambda_e;
  out.lambda_h.resize(T);
  out.lambda_pfr.resize(T);
  out.lambda_efr.resize(T);
  out.omega_loss.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double m1 = d.mu_nadir_1[t], m2 = d.mu_nadir_2[t], m3 = d.mu_nadir_3[t];
    out.lambda_h[t] = (m3 - m1) / p.f0 + d.mu_rocof[t];
    out.lambda_pfr[t] = (m3 + m1) / p.t_pfr + d.mu_qss[t];
    out.lambda_efr[t] = (m1 - m3) * a + m2 / sq + d.mu_qss[t];
    out.omega_loss[t] = d.mu_rocof[t] * p.f0 / (2 * p.rocof_max) + m2 / sq + d.mu_qss[t];
    const int h = static_cast<int>(t);
    check_price("lambda_h", h, out.lambda_h[t], d.lambda_h[t], rel_tol);
    check_price("lambda_pfr", h, out.lambda_pfr[t], d.lambda_pfr[t], rel_tol);
    check_price("lambda_efr", h, out.lambda_efr[t], d.lambda_efr[t], rel_tol);
    check_price("omega_loss", h, out.omega_loss[t], d.omega_loss[t], rel_tol);
  }
  return out;
}

MarketBreakdown duality_audit(const RelaxedResult& r, const Scenario& s, double rel_tol, double omega_tol) {
  const int T = s.horizon;
  const auto& x = r.dispatch;
  const auto& y = r.schedule;
  const auto& d = r.duals;
  MarketBreakdown b;
  b.energy_payment.resize(T);
  b.inertia_revenue.resize(T);
  b.pfr_revenue.resize(T);
  b.efr_revenue.resize(T);
  b.omega.resize(T);

  for (int t = 0; t < T; ++t) {
    b.energy_payment[t] = s.demand[t] * d.lambda_e[t];
    b.inertia_revenue[t] = d.lambda_h[t] * x.h[t];
    b.pfr_revenue[t] = d.lambda_pfr[t] * x.pfr[t];
    b.efr_revenue[t] = d.lambda_efr[t] * x.efr[t];
    b.omega[t] = x.p_loss[t] * d.omega_loss[t];
    const double market = b.inertia_revenue[t] + b.pfr_revenue[t] + b.efr_revenue[t];
    b.max_omega_residual =
        std::max(b.max_omega_residual, std::abs(b.omega[t] - market) / std::max(1.0, std::abs(b.omega[t])));
    b.energy_payments += b.energy_payment[t];
    b.as_payments += b.omega[t];
  }

  std::map<std::string, TechnologyTotals> tech;
  auto totals = [&](const std::string& name) -> TechnologyTotals& {
    auto& e = tech[name];
    e.technology = name;
    return e;
  };
  for (std::size_t g = 0; g < s.generators.size(); ++g) {
    const auto& u = s.generators[g];
    auto& e = totals(u.technology);
    for (int t = 0; t < T; ++t) {
      const double inertia = u.h * u.p_max * y.y[g][t];
      const double cost = u.lambda_e * x.gen_p[g][t] + u.lambda_h * inertia + u.lambda_pfr * x.gen_pfr[g][t];
      e.cost += cost;
      e.energy_revenue += d.lambda_e[t] * x.gen_p[g][t];
      e.inertia_revenue += d.lambda_h[t] * inertia;
      e.pfr_revenue += d.lambda_pfr[t] * x.gen_pfr[g][t];
      b.system_costs += cost;
    }
  }
  for (std::size_t i = 0; i < s.res_units.size(); ++i) {
    const auto& u = s.res_units[i];
    auto& e = totals(u.technology);
    for (int t = 0; t < T; ++t) {
      const double cost = u.lambda_e * x.res_p[i][t];
      e.cost += cost;
      e.energy_revenue += d.lambda_e[t] * x.res_p[i][t];
      b.system_costs += cost;
      b.renewable_profits += u.cf[t] * u.p_max * d.psi_cf[i][t];
    }
  }
  for (std::size_t k = 0; k < s.storage_units.size(); ++k) {
    const auto& u = s.storage_units[k];
    auto& e = totals(u.technology);
    for (int t = 0; t < T; ++t) {
      const double inertia = u.h * u.p_max * (y.ycha[k][t] + y.ydis[k][t]);
      const double cost = u.lambda_e * x.sto_dis[k][t] + u.lambda_h * inertia + u.lambda_pfr * x.sto_pfr[k][t] +
                          u.lambda_efr * x.sto_efr[k][t];
      e.cost += cost;
      e.energy_revenue += d.lambda_e[t] * (x.sto_dis[k][t] - x.sto_cha[k][t]);
      e.inertia_revenue += d.lambda_h[t] * inertia;
      e.pfr_revenue += d.lambda_pfr[t] * x.sto_pfr[k][t];
      e.efr_revenue += d.lambda_efr[t] * x.sto_efr[k][t];
      b.system_costs += cost;
      b.storage_profits += d.psi_max_ycha[k][t] + d.psi_max_ydis[k][t] + d.psi_dis_cha[k][t];
    }
    for (std::size_t t = 0; t < d.psi_min_e[k].size(); ++t)
      b.storage_profits += -u.e_min * d.psi_min_e[k][t] + u.e_max * d.psi_max_e[k][t];
    b.storage_profits += u.e_ini * d.psi_ini[k] - u.e_end * d.psi_end[k];
  }
  b.thermal_profits = sum(d.psi_max_y) + sum(d.psi_max_st) + sum(d.psi_max_sg) + sum(d.psi_max_sd);

  // Rows whose right-hand side is priced but absent from the displayed
  // identity, and the loss-link multipliers applied to each unit's output.
  const std::size_t G = s.generators.size(), R = s.res_units.size();
  for (std::size_t row = 0; row < d.row_tags.size(); ++row) {
    const RowTag& tag = d.row_tags[row];
    const double v = d.row_dual[row];
    switch (tag.kind) {
      case RowKind::kBalance:
      case RowKind::kMaxLoss:
      case RowKind::kResCap:
      case RowKind::kStorageInitial:
      case RowKind::kStorageFinal:
      case RowKind::kStorageMode: break;
      case RowKind::kLossLink: {
        const std::size_t i = static_cast<std::size_t>(tag.unit);
        const double out = i < G       ? x.gen_p[i][tag.hour]
                           : i < G + R ? x.res_p[i - G][tag.hour]
                                       : x.sto_dis[i - G - R][tag.hour];
        b.loss_link_charges += v * out;
        break;
      }
      default: b.omitted_terms -= d.row_rhs[row] * v; break;
    }
  }

  b.lhs = b.energy_payments + b.as_payments;
  b.rhs_displayed = b.system_costs + b.thermal_profits + b.renewable_profits + b.storage_profits;
  b.rhs_full = b.rhs_displayed + b.omitted_terms + b.loss_link_charges;
  const double scale = std::max(1.0, std::abs(b.lhs));
  b.residual_full = std::abs(b.lhs - b.rhs_full) / scale;
  b.residual_displayed = std::abs(b.lhs - b.rhs_displayed) / scale;
  for (auto& [name, e] : tech) b.by_technology.push_back(e);

  if (b.residual_full > rel_tol) {
    std::ostringstream os;
    os << "strong-duality identity off by " << b.residual_full << " (relative): payments " << b.lhs
       << ", costs and profits " << b.rhs_full;
    throw AuditError(os.str(), std::move(b));
  }
  if (b.max_omega_residual > omega_tol) {
    std::ostringstream os;
    os << "AS market identity off by " << b.max_omega_residual << " (relative)";
    throw AuditError(os.str(), std::move(b));
  }
  return b;
}

namespace {

struct Candidate {
  std::string id, technology;
  std::vector<double> output;
};

std::vector<Candidate> dispatched_units(const Scenario& s, const DispatchSolution& x, double tol) {
  std::vector<Candidate> out;
  auto consider = [&](const std::string& id, const std::string& tech, bool eligible, const std::vector<double>& p) {
    if (!eligible) return;
    std::vector<double> clipped(p.size());
    bool any = false;
    for (std::size_t t = 0; t < p.size(); ++t) {
      clipped[t] = p[t] > tol ? p[t] : 0.0;
      any = any || clipped[t] > 0;
    }
    if (any) out.push_back({id, tech, std::move(clipped)});
  };
  for (std::size_t g = 0; g < s.generators.size(); ++g)
    consider(s.generators[g].id, s.generators[g].technology, s.generators[g].loss_eligible, x.gen_p[g]);
  for (std::size_t i = 0; i < s.res_units.size(); ++i)
    consider(s.res_units[i].id, s.res_units[i].technology, s.res_units[i].loss_eligible, x.res_p[i]);
  for (std::size_t k = 0; k < s.storage_units.size(); ++k)
    consider(s.storage_units[k].id, s.storage_units[k].technology, s.storage_units[k].loss_eligible, x.sto_dis[k]);
  return out;
}

}  // namespace

StandAloneCosts standalone_markets(const Scenario& s, const DispatchSolution& block_i, const StandAloneOptions& opt) {
  const std::vector<Candidate> units = dispatched_units(s, block_i, opt.dispatch_tol);
  std::vector<std::vector<double>> omega(units.size());
  std::vector<std::exception_ptr> errors(units.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++) {
      try {
        UCModel m = build_uc(s, LossRule::fixed(units[i].output), true);
        const RelaxedResult r = solve_relaxed(m, opt.solve);
        omega[i].resize(s.horizon);
        for (int t = 0; t < s.horizon; ++t) omega[i][t] = units[i].output[t] * r.duals.omega_loss[t];
      } catch (const InfeasibleError& e) {
        errors[i] = std::make_exception_ptr(
            InfeasibleError(e.constraint_class(), "stand-alone market of " + units[i].id + ": " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, static_cast<int>(units.size())));
  {
    std::vector<std::jthread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  double scale = 1.0;
  for (const auto& row : omega)
    for (double v : row) scale = std::max(scale, std::abs(v));
  StandAloneCosts out;
  out.hours.resize(s.horizon);
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (int t = 0; t < s.horizon; ++t) {
      if (units[i].output[t] <= 0) continue;
      double v = omega[i][t];
      if (std::abs(v) <= opt.zero_clamp * scale) v = 0.0;
      out.hours[t].push_back({units[i].id, units[i].technology, units[i].output[t], v});
    }
  }
  return out;
}

}  // namespace ascost
