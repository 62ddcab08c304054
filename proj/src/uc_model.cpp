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

#include "ascost/uc_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ascost {

using lp::Entry;
using lp::kInf;

RowClass row_class(RowKind kind) {
  switch (kind) {
    case RowKind::kBalance: return RowClass::kBalance;
    case RowKind::kTransition:
    case RowKind::kStartLead:
    case RowKind::kMinDown:
    case RowKind::kMinUp:
    case RowKind::kGenMin:
    case RowKind::kGenMax:
    case RowKind::kGenPfrCap:
    case RowKind::kGenPfrMargin: return RowClass::kThermal;
    case RowKind::kResCap: return RowClass::kRes;
    case RowKind::kStorageDynamics:
    case RowKind::kChargeMin:
    case RowKind::kChargeMax:
    case RowKind::kDischargeMin:
    case RowKind::kDischargeMax:
    case RowKind::kStoragePfrCap:
    case RowKind::kStoragePfrMargin:
    case RowKind::kStorageEfrCap:
    case RowKind::kStorageEfrMargin:
    case RowKind::kStorageMode:
    case RowKind::kStorageInitial:
    case RowKind::kStorageFinal: return RowClass::kStorage;
    case RowKind::kInertiaAgg:
    case RowKind::kPfrAgg:
    case RowKind::kEfrAgg: return RowClass::kAggregation;
    case RowKind::kMaxLoss:
    case RowKind::kLossLink: return RowClass::kMaxLoss;
    case RowKind::kRocof: return RowClass::kRocof;
    case RowKind::kNadirCut: return RowClass::kNadir;
    case RowKind::kQss: return RowClass::kQss;
  }
  return RowClass::kBalance;
}

std::string_view to_string(RowKind kind) {
  switch (kind) {
    case RowKind::kBalance: return "energy balance";
    case RowKind::kTransition: return "commitment transition";
    case RowKind::kStartLead: return "start-up lead time";
    case RowKind::kMinDown: return "minimum down time";
    case RowKind::kMinUp: return "minimum up time";
    case RowKind::kGenMin: return "minimum stable generation";
    case RowKind::kGenMax: return "maximum generation";
    case RowKind::kGenPfrCap: return "generator PFR capacity";
    case RowKind::kGenPfrMargin: return "generator PFR headroom";
    case RowKind::kResCap: return "renewable capacity factor";
    case RowKind::kStorageDynamics: return "storage energy dynamics";
    case RowKind::kChargeMin: return "storage minimum charge";
    case RowKind::kChargeMax: return "storage maximum charge";
    case RowKind::kDischargeMin: return "storage minimum discharge";
    case RowKind::kDischargeMax: return "storage maximum discharge";
    case RowKind::kStoragePfrCap: return "storage PFR capacity";
    case RowKind::kStoragePfrMargin: return "storage PFR headroom";
    case RowKind::kStorageEfrCap: return "storage EFR capacity";
    case RowKind::kStorageEfrMargin: return "storage EFR headroom";
    case RowKind::kStorageMode: return "storage charge/discharge exclusion";
    case RowKind::kStorageInitial: return "storage initial state";
    case RowKind::kStorageFinal: return "storage final state";
    case RowKind::kInertiaAgg: return "inertia aggregation";
    case RowKind::kPfrAgg: return "PFR aggregation";
    case RowKind::kEfrAgg: return "EFR aggregation";
    case RowKind::kMaxLoss: return "maximum loss";
    case RowKind::kLossLink: return "largest infeed";
    case RowKind::kRocof: return "RoCoF";
    case RowKind::kNadirCut: return "frequency nadir";
    case RowKind::kQss: return "quasi-steady-state";
  }
  return "unknown";
}

std::string_view to_string(RowClass cls) {
  switch (cls) {
    case RowClass::kBalance: return "energy balance";
    case RowClass::kThermal: return "thermal";
    case RowClass::kRes: return "renewable";
    case RowClass::kStorage: return "storage";
    case RowClass::kAggregation: return "aggregation";
    case RowClass::kMaxLoss: return "max-loss";
    case RowClass::kRocof: return "RoCoF";
    case RowClass::kNadir: return "nadir-SOC";
    case RowClass::kQss: return "q-s-s";
  }
  return "unknown";
}

std::vector<std::array<double, 2>> seed_cut_normals() {
  std::vector<std::array<double, 2>> out;
  for (int k = 0; k < 8; ++k) {
    const double th = k * std::numbers::pi / 4.0;
    double c = std::cos(th);
    double s = std::sin(th);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    out.push_back({c, s});
  }
  return out;
}

int UCModel::add_row(RowKind kind, int unit, int hour, double lower, double upper, std::vector<Entry> entries) {
  std::erase_if(entries, [](const Entry& e) { return e.index == kNoColumn || e.value == 0.0; });
  const int r = lp_.add_row(lower, upper, entries);
  rows_.push_back({kind, unit, hour});
  return r;
}

int UCModel::count_rows(RowKind kind) const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(), [&](const RowTag& t) { return t.kind == kind; }));
}

int UCModel::count_rows(RowClass cls) const {
  return static_cast<int>(
      std::count_if(rows_.begin(), rows_.end(), [&](const RowTag& t) { return row_class(t.kind) == cls; }));
}

int UCModel::add_nadir_cut(int hour, double n1, double n2) {
  const auto c = nadir_cut(cone_, n1, n2);
  const int r = add_row(RowKind::kNadirCut, -1, hour, 0.0, kInf,
                        {{sys_.h[hour], c[0]}, {sys_.efr[hour], c[1]}, {sys_.pfr[hour], c[2]}, {sys_.loss[hour], c[3]}});
  cuts_.push_back({r, hour, n1, n2});
  return r;
}

void UCModel::set_loss_profile(const std::vector<double>& mw) {
  if (loss_rule_.kind != LossRule::Kind::kFixedProfile) throw ModelError("model does not use a fixed loss profile");
  if (static_cast<int>(mw.size()) != horizon()) throw ModelError("loss profile length differs from horizon");
  for (int t = 0; t < horizon(); ++t) lp_.set_row_bounds(max_loss_rows_[t], mw[t], kInf);
  loss_rule_.profile = mw;
}

UCModel build_uc(const Scenario& s, const LossRule& rule, bool relaxed) {
  const int T = s.horizon;
  if (T < 1 || static_cast<int>(s.demand.size()) != T) throw ModelError("demand length differs from horizon");
  for (const auto& r : s.res_units)
    if (static_cast<int>(r.cf.size()) != T) throw ModelError("capacity factor of '" + r.id + "' differs from horizon");
  if (s.unit_count() == 0) throw ModelError("empty fleet");
  if (rule.kind == LossRule::Kind::kFixedProfile && static_cast<int>(rule.profile.size()) != T)
    throw ModelError("loss profile length differs from horizon");

  UCModel m;
  m.scenario_ = s;
  m.loss_rule_ = rule;
  m.relaxed_ = relaxed;
  m.cone_ = nadir_cone(s.params);
  lp::LinearProgram& lp = m.lp_;
  auto col = [&](double cost, double lo, double hi) { return lp.add_column(cost, lo, hi); };
  auto hours = [&](int fill) { return std::vector<int>(T, fill); };

  m.gen_.resize(s.generators.size());
  for (std::size_t g = 0; g < s.generators.size(); ++g) {
    const GeneratorSpec& u = s.generators[g];
    GeneratorColumns& c = m.gen_[g];
    c.y = c.st = c.sg = c.sd = c.p = c.pfr = hours(kNoColumn);
    for (int t = 0; t < T; ++t) {
      c.y[t] = col(u.lambda_h * u.p_max * u.h, 0, 1);
      c.st[t] = col(0, 0, 1);
      c.sg[t] = col(0, 0, 1);
      c.sd[t] = col(0, 0, 1);
      c.p[t] = col(u.lambda_e, 0, kInf);
      if (u.pfr_max > 0) c.pfr[t] = col(u.lambda_pfr, 0, kInf);
      for (int b : {c.y[t], c.st[t], c.sg[t], c.sd[t]}) {
        m.integer_columns_.push_back(b);
        m.integer_size_.push_back(u.p_max);
      }
    }
  }
  m.res_.resize(s.res_units.size());
  for (std::size_t r = 0; r < s.res_units.size(); ++r) {
    m.res_[r].p = hours(kNoColumn);
    for (int t = 0; t < T; ++t) m.res_[r].p[t] = col(s.res_units[r].lambda_e, 0, kInf);
  }
  m.sto_.resize(s.storage_units.size());
  for (std::size_t k = 0; k < s.storage_units.size(); ++k) {
    const StorageSpec& u = s.storage_units[k];
    StorageColumns& c = m.sto_[k];
    c.cha = c.dis = c.ycha = c.ydis = c.pfr = c.efr = hours(kNoColumn);
    c.e.assign(T + 1, kNoColumn);
    const double inertia_cost = u.lambda_h * u.p_max * u.h;
    c.e[0] = col(0, u.e_min, u.e_max);
    for (int t = 0; t < T; ++t) {
      c.cha[t] = col(0, 0, kInf);
      c.dis[t] = col(u.lambda_e, 0, kInf);
      c.ycha[t] = col(inertia_cost, 0, 1);
      c.ydis[t] = col(inertia_cost, 0, 1);
      c.e[t + 1] = col(0, u.e_min, u.e_max);
      if (u.pfr_max > 0) c.pfr[t] = col(u.lambda_pfr, 0, kInf);
      if (u.efr_max > 0) c.efr[t] = col(u.lambda_efr, 0, kInf);
      for (int b : {c.ycha[t], c.ydis[t]}) {
        m.integer_columns_.push_back(b);
        m.integer_size_.push_back(u.p_max);
      }
    }
  }
  SystemColumns& sys = m.sys_;
  sys.h = sys.pfr = sys.efr = sys.loss = hours(kNoColumn);
  for (int t = 0; t < T; ++t) {
    sys.h[t] = col(0, -kInf, kInf);
    sys.pfr[t] = col(0, -kInf, kInf);
    sys.efr[t] = col(0, -kInf, kInf);
    sys.loss[t] = col(0, -kInf, kInf);
  }

  for (int t = 0; t < T; ++t) {
    std::vector<Entry> bal;
    for (const auto& c : m.gen_) bal.push_back({c.p[t], 1});
    for (const auto& c : m.res_) bal.push_back({c.p[t], 1});
    for (const auto& c : m.sto_) {
      bal.push_back({c.dis[t], 1});
      bal.push_back({c.cha[t], -1});
    }
    m.add_row(RowKind::kBalance, -1, t, s.demand[t], s.demand[t], std::move(bal));
  }

  for (std::size_t gi = 0; gi < s.generators.size(); ++gi) {
    const GeneratorSpec& u = s.generators[gi];
    const GeneratorColumns& c = m.gen_[gi];
    const int g = static_cast<int>(gi);
    const double y0 = u.initially_on ? 1.0 : 0.0;
    for (int t = 0; t < T; ++t) {
      const int yprev = t > 0 ? c.y[t - 1] : kNoColumn;
      const double yprev_const = t > 0 ? 0.0 : y0;
      m.add_row(RowKind::kTransition, g, t, yprev_const, yprev_const,
                {{c.y[t], 1}, {yprev, -1}, {c.sg[t], -1}, {c.sd[t], 1}});
      const int lead = t - u.t_st;
      m.add_row(RowKind::kStartLead, g, t, 0, 0, {{c.sg[t], 1}, {lead >= 0 ? c.st[lead] : kNoColumn, -1}});

      std::vector<Entry> down = {{c.st[t], 1}, {yprev, 1}};
      for (int j = std::max(0, t - u.t_mdt); j < t; ++j) down.push_back({c.sd[j], 1});
      m.add_row(RowKind::kMinDown, g, t, -kInf, 1.0 - yprev_const, std::move(down));

      std::vector<Entry> up = {{c.sd[t], 1}, {yprev, -1}};
      for (int j = std::max(0, t - u.t_mut); j < t; ++j) up.push_back({c.sg[j], 1});
      m.add_row(RowKind::kMinUp, g, t, -kInf, yprev_const, std::move(up));

      if (u.p_msg > 0) m.add_row(RowKind::kGenMin, g, t, 0, kInf, {{c.p[t], 1}, {c.y[t], -u.p_msg}});
      m.add_row(RowKind::kGenMax, g, t, -kInf, 0, {{c.p[t], 1}, {c.y[t], -u.p_max}});
      if (c.pfr[t] != kNoColumn) {
        m.add_row(RowKind::kGenPfrCap, g, t, -kInf, 0, {{c.pfr[t], 1}, {c.y[t], -u.pfr_max}});
        m.add_row(RowKind::kGenPfrMargin, g, t, -kInf, 0, {{c.pfr[t], 1}, {c.p[t], 1}, {c.y[t], -u.p_max}});
      }
    }
  }

  for (std::size_t r = 0; r < s.res_units.size(); ++r) {
    const ResSpec& u = s.res_units[r];
    for (int t = 0; t < T; ++t)
      m.add_row(RowKind::kResCap, static_cast<int>(r), t, -kInf, u.cf[t] * u.p_max, {{m.res_[r].p[t], 1}});
  }

  for (std::size_t k = 0; k < s.storage_units.size(); ++k) {
    const StorageSpec& u = s.storage_units[k];
    const StorageColumns& c = m.sto_[k];
    const int id = static_cast<int>(k);
    for (int t = 0; t < T; ++t) {
      m.add_row(RowKind::kStorageDynamics, id, t, 0, 0,
                {{c.e[t + 1], 1}, {c.e[t], -1}, {c.cha[t], -u.eta_cha}, {c.dis[t], 1.0 / u.eta_dis}});
      if (u.p_msg > 0) {
        m.add_row(RowKind::kChargeMin, id, t, 0, kInf, {{c.cha[t], 1}, {c.ycha[t], -u.p_msg}});
        m.add_row(RowKind::kDischargeMin, id, t, 0, kInf, {{c.dis[t], 1}, {c.ydis[t], -u.p_msg}});
      }
      m.add_row(RowKind::kChargeMax, id, t, -kInf, 0, {{c.cha[t], 1}, {c.ycha[t], -u.p_max}});
      m.add_row(RowKind::kDischargeMax, id, t, -kInf, 0, {{c.dis[t], 1}, {c.ydis[t], -u.p_max}});
      if (c.pfr[t] != kNoColumn) {
        m.add_row(RowKind::kStoragePfrCap, id, t, -kInf, 0,
                  {{c.pfr[t], 1}, {c.ydis[t], -u.pfr_max}, {c.ycha[t], -u.pfr_max}});
        m.add_row(RowKind::kStoragePfrMargin, id, t, -kInf, 0,
                  {{c.pfr[t], 1}, {c.dis[t], 1}, {c.cha[t], -1}, {c.ydis[t], -u.p_max}});
      }
      if (c.efr[t] != kNoColumn) {
        m.add_row(RowKind::kStorageEfrCap, id, t, -kInf, 0,
                  {{c.efr[t], 1}, {c.ycha[t], -u.efr_max}, {c.ydis[t], -u.efr_max}});
        m.add_row(RowKind::kStorageEfrMargin, id, t, -kInf, 0,
                  {{c.efr[t], 1}, {c.dis[t], 1}, {c.cha[t], -1}, {c.ydis[t], -u.p_max}, {c.ycha[t], -u.p_max}});
      }
      m.add_row(RowKind::kStorageMode, id, t, -kInf, 1, {{c.ycha[t], 1}, {c.ydis[t], 1}});
    }
    m.add_row(RowKind::kStorageInitial, id, 0, -kInf, u.e_ini, {{c.e[0], 1}});
    m.add_row(RowKind::kStorageFinal, id, T - 1, u.e_end, kInf, {{c.e[T], 1}});
  }

  const SystemParams& p = s.params;
  m.max_loss_rows_.assign(T, -1);
  for (int t = 0; t < T; ++t) {
    std::vector<Entry> h = {{sys.h[t], 1}};
    for (std::size_t g = 0; g < s.generators.size(); ++g)
      h.push_back({m.gen_[g].y[t], -s.generators[g].h * s.generators[g].p_max});
    for (std::size_t k = 0; k < s.storage_units.size(); ++k) {
      const double w = -s.storage_units[k].h * s.storage_units[k].p_max;
      h.push_back({m.sto_[k].ycha[t], w});
      h.push_back({m.sto_[k].ydis[t], w});
    }
    m.add_row(RowKind::kInertiaAgg, -1, t, 0, 0, std::move(h));

    std::vector<Entry> pfr = {{sys.pfr[t], 1}};
    for (const auto& c : m.gen_) pfr.push_back({c.pfr[t], -1});
    for (const auto& c : m.sto_) pfr.push_back({c.pfr[t], -1});
    m.add_row(RowKind::kPfrAgg, -1, t, 0, 0, std::move(pfr));

    std::vector<Entry> efr = {{sys.efr[t], 1}};
    for (const auto& c : m.sto_) efr.push_back({c.efr[t], -1});
    m.add_row(RowKind::kEfrAgg, -1, t, 0, 0, std::move(efr));

    if (rule.kind == LossRule::Kind::kFixedProfile) {
      m.max_loss_rows_[t] = m.add_row(RowKind::kMaxLoss, -1, t, rule.profile[t], kInf, {{sys.loss[t], 1}});
    } else {
      if (s.p_loss_cap) {
        m.max_loss_rows_[t] = m.add_row(RowKind::kMaxLoss, -1, t, (*s.p_loss_cap)[t], kInf, {{sys.loss[t], 1}});
      }
      for (std::size_t g = 0; g < s.generators.size(); ++g)
        if (s.generators[g].loss_eligible)
          m.add_row(RowKind::kLossLink, static_cast<int>(g), t, 0, kInf, {{sys.loss[t], 1}, {m.gen_[g].p[t], -1}});
      for (std::size_t r = 0; r < s.res_units.size(); ++r)
        if (s.res_units[r].loss_eligible)
          m.add_row(RowKind::kLossLink, static_cast<int>(s.generators.size() + r), t, 0, kInf,
                    {{sys.loss[t], 1}, {m.res_[r].p[t], -1}});
      for (std::size_t k = 0; k < s.storage_units.size(); ++k)
        if (s.storage_units[k].loss_eligible)
          m.add_row(RowKind::kLossLink, static_cast<int>(s.generators.size() + s.res_units.size() + k), t, 0, kInf,
                    {{sys.loss[t], 1}, {m.sto_[k].dis[t], -1}});
    }

    m.add_row(RowKind::kRocof, -1, t, 0, kInf, {{sys.h[t], 1}, {sys.loss[t], -p.f0 / (2.0 * p.rocof_max)}});
    m.add_row(RowKind::kQss, -1, t, 0, kInf, {{sys.efr[t], 1}, {sys.pfr[t], 1}, {sys.loss[t], -1}});
    for (const auto& n : seed_cut_normals()) m.add_nadir_cut(t, n[0], n[1]);
  }
  return m;
}

}  // namespace ascost
