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

#include "ascost/uc_solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>

namespace ascost {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntegralityTolerance = 1e-6;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double value(const std::vector<double>& x, int col) { return col == kNoColumn ? 0.0 : x[col]; }

Matrix gather(const std::vector<std::vector<int>>& cols, const std::vector<double>& x) {
  Matrix out(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out[i].resize(cols[i].size());
    for (std::size_t t = 0; t < cols[i].size(); ++t) out[i][t] = value(x, cols[i][t]);
  }
  return out;
}

template <class Units, class Member>
std::vector<std::vector<int>> columns_of(const Units& units, Member member) {
  std::vector<std::vector<int>> out;
  for (const auto& u : units) out.push_back(u.*member);
  return out;
}

enum class LoopStatus { kOptimal, kInfeasible, kFailed };

struct LoopOutcome {
  LoopStatus status = LoopStatus::kFailed;
  lp::Solution lp;
  std::string failure;
};

// Largest cone violation of the current point, measured like the cut test.
double cone_violation(const UCModel& m, const std::vector<double>& x, int t, std::array<double, 2>* normal,
                      double* scaled) {
  const auto& sys = m.system();
  const auto v = m.cone().evaluate({x[sys.h[t]], x[sys.efr[t]], x[sys.pfr[t]], x[sys.loss[t]]});
  const double norm = std::hypot(v[0], v[1]);
  const double gap = norm - v[2];
  if (normal != nullptr && norm > 0) *normal = {v[0] / norm, v[1] / norm};
  if (scaled != nullptr) {
    *scaled = 0.0;
    if (norm > 0 && gap > 0) {
      const auto c = nadir_cut(m.cone(), v[0] / norm, v[1] / norm);
      double big = 0.0;
      for (double ci : c) big = std::max(big, std::abs(ci));
      *scaled = gap / big;
    }
  }
  return gap;
}

// Solves the LP, adds tangent cuts where the nadir cone is violated, repeats.
LoopOutcome cut_loop(UCModel& m, const lp::Basis* warm, const SolveOptions& opt, SolveStats& stats) {
  LoopOutcome out;
  lp::Basis basis;
  if (warm != nullptr) basis = *warm;
  for (int round = 0;; ++round) {
    out.lp = lp::solve(m.lp(), {}, basis.empty() ? nullptr : &basis);
    stats.lp_iterations += out.lp.iterations;
    ++stats.lp_solves;
    if (out.lp.status == lp::Status::kInfeasible) {
      out.status = LoopStatus::kInfeasible;
      return out;
    }
    if (!out.lp.optimal()) {
      out.status = LoopStatus::kFailed;
      out.failure = "LP solver stopped: " + lp::to_string(out.lp.status);
      return out;
    }
    basis = out.lp.basis;
    int added = 0;
    double worst = 0.0;
    for (int t = 0; t < m.horizon(); ++t) {
      std::array<double, 2> n{};
      double scaled = 0.0;
      cone_violation(m, out.lp.x, t, &n, &scaled);
      worst = std::max(worst, scaled);
      if (scaled > opt.cone_tolerance) {
        m.add_nadir_cut(t, n[0], n[1]);
        ++added;
      }
    }
    stats.max_cone_violation = worst;
    if (added == 0) {
      out.status = LoopStatus::kOptimal;
      out.lp.basis = basis;
      return out;
    }
    ++stats.cut_rounds;
    stats.cuts_added += added;
    if (round + 1 >= opt.max_cut_rounds) {
      out.status = LoopStatus::kFailed;
      out.failure = "nadir cut loop did not converge";
      return out;
    }
  }
}

// Names the constraint family behind an infeasible LP.
InfeasibleError certificate(const UCModel& m, const lp::Solution& sol) {
  std::map<RowClass, int> votes;
  for (int r : sol.infeasible_rows)
    if (r < static_cast<int>(m.rows().size())) ++votes[row_class(m.rows()[r].kind)];
  if (votes.empty()) return InfeasibleError("unknown", "the model has no feasible point");
  const auto best = std::max_element(votes.begin(), votes.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  const RowClass cls = votes.count(RowClass::kBalance) != 0 ? RowClass::kBalance : best->first;
  return InfeasibleError(std::string(to_string(cls)),
                         std::to_string(sol.infeasible_rows.size()) + " constraint(s) could not be satisfied");
}

// Hour-by-hour capacity screen; catches the common case with a precise message.
void check_capacity(const UCModel& m) {
  const Scenario& s = m.scenario();
  for (int t = 0; t < s.horizon; ++t) {
    double cap = 0.0;
    for (const auto& g : s.generators) cap += g.p_max;
    for (const auto& r : s.res_units) cap += r.cf[t] * r.p_max;
    for (const auto& u : s.storage_units) cap += u.p_max;
    if (cap < s.demand[t] * (1 - 1e-12)) {
      throw InfeasibleError("energy balance", "hour " + std::to_string(t) + ": demand " +
                                                  std::to_string(s.demand[t]) + " MW exceeds fleet capacity " +
                                                  std::to_string(cap) + " MW");
    }
  }
}

DispatchSolution extract_dispatch(const UCModel& m, const lp::Solution& sol) {
  const auto& x = sol.x;
  DispatchSolution d;
  d.gen_p = gather(columns_of(m.generators(), &GeneratorColumns::p), x);
  d.gen_pfr = gather(columns_of(m.generators(), &GeneratorColumns::pfr), x);
  d.res_p = gather(columns_of(m.res(), &ResColumns::p), x);
  d.sto_cha = gather(columns_of(m.storage(), &StorageColumns::cha), x);
  d.sto_dis = gather(columns_of(m.storage(), &StorageColumns::dis), x);
  d.sto_pfr = gather(columns_of(m.storage(), &StorageColumns::pfr), x);
  d.sto_efr = gather(columns_of(m.storage(), &StorageColumns::efr), x);
  d.sto_e = gather(columns_of(m.storage(), &StorageColumns::e), x);
  const auto& sys = m.system();
  d.h = gather({sys.h}, x)[0];
  d.pfr = gather({sys.pfr}, x)[0];
  d.efr = gather({sys.efr}, x)[0];
  d.p_loss = gather({sys.loss}, x)[0];
  d.objective = sol.objective;
  return d;
}

DualSolution extract_duals(const UCModel& m, const lp::Solution& sol) {
  const int T = m.horizon();
  // Multipliers pointing at an infinite bound are round-off; drop them.
  std::vector<double> y = sol.row_dual;
  for (std::size_t r = 0; r < y.size(); ++r) {
    const int i = static_cast<int>(r);
    if ((y[r] > 0 && m.lp().row_lower(i) == -lp::kInf) || (y[r] < 0 && m.lp().row_upper(i) == lp::kInf)) y[r] = 0.0;
  }
  const auto& dc = sol.reduced_cost;
  DualSolution d;
  for (auto* v : {&d.lambda_e, &d.lambda_h, &d.lambda_pfr, &d.lambda_efr, &d.mu_rocof, &d.mu_nadir_1, &d.mu_nadir_2,
                  &d.mu_nadir_3, &d.mu_qss, &d.omega_loss})
    v->assign(T, 0.0);
  const std::size_t G = m.generators().size(), R = m.res().size(), S = m.storage().size();
  auto zeros = [&](std::size_t n, int len) { return Matrix(n, std::vector<double>(len, 0.0)); };
  d.psi_mdt = zeros(G, T);
  d.psi_cf = zeros(R, T);
  d.psi_dis_cha = zeros(S, T);
  d.psi_ini.assign(S, 0.0);
  d.psi_end.assign(S, 0.0);

  for (std::size_t r = 0; r < m.rows().size(); ++r) {
    const RowTag& tag = m.rows()[r];
    const double v = y[r];
    switch (tag.kind) {
      case RowKind::kBalance: d.lambda_e[tag.hour] = v; break;
      case RowKind::kInertiaAgg: d.lambda_h[tag.hour] = -v; break;
      case RowKind::kPfrAgg: d.lambda_pfr[tag.hour] = -v; break;
      case RowKind::kEfrAgg: d.lambda_efr[tag.hour] = -v; break;
      case RowKind::kRocof: d.mu_rocof[tag.hour] = v; break;
      case RowKind::kQss: d.mu_qss[tag.hour] = v; break;
      case RowKind::kMaxLoss:
      case RowKind::kLossLink: d.omega_loss[tag.hour] += v; break;
      case RowKind::kMinDown: d.psi_mdt[tag.unit][tag.hour] = -v; break;
      case RowKind::kResCap: d.psi_cf[tag.unit][tag.hour] = -v; break;
      case RowKind::kStorageMode: d.psi_dis_cha[tag.unit][tag.hour] = -v; break;
      case RowKind::kStorageInitial: d.psi_ini[tag.unit] = -v; break;
      case RowKind::kStorageFinal: d.psi_end[tag.unit] = v; break;
      default: break;
    }
  }
  for (const NadirCutInfo& c : m.cuts()) {
    const double pi = y[c.row];
    d.mu_nadir_1[c.hour] += pi * c.n1;
    d.mu_nadir_2[c.hour] += pi * c.n2;
    d.mu_nadir_3[c.hour] += pi;
  }

  auto upper = [&](const std::vector<std::vector<int>>& cols) {
    Matrix out(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (int c : cols[i]) out[i].push_back(c == kNoColumn ? 0.0 : std::max(0.0, -dc[c]));
    return out;
  };
  auto lower = [&](const std::vector<std::vector<int>>& cols) {
    Matrix out(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (int c : cols[i]) out[i].push_back(c == kNoColumn ? 0.0 : std::max(0.0, dc[c]));
    return out;
  };
  d.psi_max_y = upper(columns_of(m.generators(), &GeneratorColumns::y));
  d.psi_max_st = upper(columns_of(m.generators(), &GeneratorColumns::st));
  d.psi_max_sg = upper(columns_of(m.generators(), &GeneratorColumns::sg));
  d.psi_max_sd = upper(columns_of(m.generators(), &GeneratorColumns::sd));
  d.psi_max_ycha = upper(columns_of(m.storage(), &StorageColumns::ycha));
  d.psi_max_ydis = upper(columns_of(m.storage(), &StorageColumns::ydis));
  d.psi_min_e = lower(columns_of(m.storage(), &StorageColumns::e));
  d.psi_max_e = upper(columns_of(m.storage(), &StorageColumns::e));

  d.row_dual = y;
  d.row_tags = m.rows();
  d.row_rhs.assign(y.size(), 0.0);
  for (std::size_t r = 0; r < y.size(); ++r) {
    if (y[r] > 0) d.row_rhs[r] = m.lp().row_lower(static_cast<int>(r));
    if (y[r] < 0) d.row_rhs[r] = m.lp().row_upper(static_cast<int>(r));
  }
  d.reduced_cost = dc;
  d.dual_objective = sol.dual_objective(m.lp());
  return d;
}

void finish_stats(SolveStats& st, const lp::Solution& sol, double dual_obj) {
  st.duality_gap = std::abs(sol.objective - dual_obj) / std::max(1.0, std::abs(sol.objective));
  st.max_primal_violation = sol.max_primal_violation;
}

}  // namespace

InfeasibleError::InfeasibleError(std::string constraint_class, std::string detail)
    : std::runtime_error("infeasible (" + constraint_class + "): " + detail), class_(std::move(constraint_class)) {}

CommitmentSchedule extract_schedule(const UCModel& m, const std::vector<double>& x) {
  CommitmentSchedule s;
  s.y = gather(columns_of(m.generators(), &GeneratorColumns::y), x);
  s.st = gather(columns_of(m.generators(), &GeneratorColumns::st), x);
  s.sg = gather(columns_of(m.generators(), &GeneratorColumns::sg), x);
  s.sd = gather(columns_of(m.generators(), &GeneratorColumns::sd), x);
  s.ycha = gather(columns_of(m.storage(), &StorageColumns::ycha), x);
  s.ydis = gather(columns_of(m.storage(), &StorageColumns::ydis), x);
  return s;
}

RelaxedResult solve_relaxed(UCModel& model, const SolveOptions& options) {
  const auto start = Clock::now();
  check_capacity(model);
  RelaxedResult res;
  LoopOutcome out =
      cut_loop(model, model.warm_basis.empty() ? nullptr : &model.warm_basis, options, res.stats);
  if (out.status == LoopStatus::kInfeasible) throw certificate(model, out.lp);
  if (out.status != LoopStatus::kOptimal) throw SolverError(out.failure);
  model.warm_basis = out.lp.basis;
  res.schedule = extract_schedule(model, out.lp.x);
  res.dispatch = extract_dispatch(model, out.lp);
  res.duals = extract_duals(model, out.lp);
  res.primal = out.lp.x;
  finish_stats(res.stats, out.lp, res.duals.dual_objective);
  res.stats.wall_seconds = seconds_since(start);
  return res;
}

namespace {

struct Node {
  double bound;
  long id;
  int depth;
  std::vector<std::int8_t> fixed;  // per integer column: -1 free, 0 or 1
  lp::Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

void apply(UCModel& work, const std::vector<int>& ints, const std::vector<std::int8_t>& fixed) {
  for (std::size_t k = 0; k < ints.size(); ++k) {
    if (fixed[k] < 0) {
      work.set_column_bounds(ints[k], 0.0, 1.0);
    } else {
      work.set_column_bounds(ints[k], fixed[k], fixed[k]);
    }
  }
}

// Index into `ints` of the branching variable, or -1 if integral.
int pick_branch(const UCModel& work, const std::vector<double>& x) {
  const auto& ints = work.integer_columns();
  int best = -1;
  double best_frac = kIntegralityTolerance;
  double best_size = 0.0;
  for (std::size_t k = 0; k < ints.size(); ++k) {
    const double v = x[ints[k]];
    const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
    if (frac <= kIntegralityTolerance) continue;
    const double size = work.integer_column_size(k);
    const bool better = frac > best_frac + 1e-12 || (std::abs(frac - best_frac) <= 1e-12 && size > best_size);
    if (best < 0 || better) {
      best = static_cast<int>(k);
      best_frac = frac;
      best_size = size;
    }
  }
  return best;
}

// Integer columns already fixed in the caller's model keep their value;
// everything else starts free.
std::vector<std::int8_t> preset(const UCModel& model) {
  const auto& ints = model.integer_columns();
  std::vector<std::int8_t> fixed(ints.size(), -1);
  for (std::size_t k = 0; k < ints.size(); ++k) {
    const double lo = model.lp().column_lower(ints[k]);
    if (lo == model.lp().column_upper(ints[k])) fixed[k] = static_cast<std::int8_t>(lo >= 0.5 ? 1 : 0);
  }
  return fixed;
}

struct Incumbent {
  bool found = false;
  double objective = lp::kInf;
  lp::Solution sol;
};

void offer(Incumbent& inc, const lp::Solution& sol) {
  if (!inc.found || sol.objective < inc.objective) {
    inc.found = true;
    inc.objective = sol.objective;
    inc.sol = sol;
  }
}

// Depth-first dive from a node: fix the most fractional variable to its
// nearest value (the other value if that is infeasible) until the point is
// integral or the dive fails.
void dive(UCModel& work, std::vector<std::int8_t> fixed, lp::Solution sol, const SolveOptions& opt,
          SolveStats& stats, Incumbent& inc, Clock::time_point start) {
  const auto& ints = work.integer_columns();
  for (int step = 0; step < static_cast<int>(ints.size()) + 1; ++step) {
    if (seconds_since(start) > opt.time_limit_seconds) return;
    const int k = pick_branch(work, sol.x);
    if (k < 0) {
      offer(inc, sol);
      return;
    }
    if (inc.found && sol.objective >= inc.objective) return;
    const std::int8_t nearest = sol.x[ints[k]] >= 0.5 ? 1 : 0;
    LoopOutcome out;
    for (std::int8_t v : {nearest, static_cast<std::int8_t>(1 - nearest)}) {
      fixed[k] = v;
      apply(work, ints, fixed);
      out = cut_loop(work, &sol.basis, opt, stats);
      if (out.status == LoopStatus::kOptimal) break;
    }
    if (out.status != LoopStatus::kOptimal) return;
    sol = std::move(out.lp);
  }
}


// Makes a 0/1 commitment pattern satisfy the lead-time and minimum up/down
// rows by keeping the unit on longer where a run or gap is too short.
void repair_pattern(std::vector<int>& v, const GeneratorSpec& u) {
  const int T = static_cast<int>(v.size());
  const int y0 = u.initially_on ? 1 : 0;
  if (!y0) {
    for (int t = 0; t < std::min(T, u.t_st); ++t) v[t] = 0;
  }
  auto prev = [&](int t) { return t == 0 ? y0 : v[t - 1]; };
  for (bool changed = true; changed;) {
    changed = false;
    int last_start = -1;
    int last_stop = -1;
    for (int t = 0; t < T && !changed; ++t) {
      if (v[t] && !prev(t)) {
        const int k = t - u.t_st;
        if (last_stop >= 0 && last_stop > k - u.t_mdt - 1) {
          std::fill(v.begin() + last_stop, v.begin() + t, 1);
          changed = true;
        }
        last_start = t;
      } else if (!v[t] && prev(t)) {
        if (last_start >= 0 && t - last_start < u.t_mut + 1) {
          std::fill(v.begin() + t, v.begin() + std::min(T, last_start + u.t_mut + 1), 1);
          changed = true;
        }
        last_stop = t;
      }
    }
  }
}

// Primal heuristic: commit every generator whose relaxed commitment is at
// least `theta`, repair the pattern, fix the implied start/stop columns and
// dive on whatever binaries remain.
void round_commitment(UCModel& work, const std::vector<std::int8_t>& base, const std::vector<double>& x, double theta,
                      const SolveOptions& opt, SolveStats& stats, Incumbent& inc, Clock::time_point start) {
  const auto& ints = work.integer_columns();
  std::vector<int> slot(work.lp().num_columns(), -1);
  for (std::size_t k = 0; k < ints.size(); ++k) slot[ints[k]] = static_cast<int>(k);
  std::vector<std::int8_t> fixed = base;
  const int T = work.horizon();
  const auto& specs = work.scenario().generators;
  for (std::size_t g = 0; g < specs.size(); ++g) {
    const auto& c = work.generators()[g];
    const auto& u = specs[g];
    std::vector<int> v(T);
    for (int t = 0; t < T; ++t) v[t] = x[c.y[t]] >= theta ? 1 : 0;
    repair_pattern(v, u);
    const int y0 = u.initially_on ? 1 : 0;
    std::vector<int> sg(T), sd(T), st(T, 0);
    for (int t = 0; t < T; ++t) {
      const int p = t == 0 ? y0 : v[t - 1];
      sg[t] = v[t] && !p;
      sd[t] = !v[t] && p;
      if (sg[t] && t - u.t_st >= 0) st[t - u.t_st] = 1;
    }
    auto fix = [&](const std::vector<int>& cols, const std::vector<int>& val) {
      for (int t = 0; t < T; ++t) {
        if (cols[t] == kNoColumn || slot[cols[t]] < 0 || base[slot[cols[t]]] >= 0) continue;
        fixed[slot[cols[t]]] = static_cast<std::int8_t>(val[t]);
      }
    };
    fix(c.y, v);
    fix(c.sg, sg);
    fix(c.sd, sd);
    fix(c.st, st);
  }
  apply(work, ints, fixed);
  LoopOutcome out = cut_loop(work, nullptr, opt, stats);
  if (out.status != LoopStatus::kOptimal) return;
  dive(work, std::move(fixed), std::move(out.lp), opt, stats, inc, start);
}

}  // namespace

MipResult solve_mip(const UCModel& model, const SolveOptions& opt) {
  const auto start = Clock::now();
  check_capacity(model);
  UCModel work = model;
  const auto& ints = work.integer_columns();
  MipResult res;
  SolveStats& stats = res.stats;
  Incumbent inc;

  const std::vector<std::int8_t> root_fixed = preset(model);
  apply(work, ints, root_fixed);
  LoopOutcome root = cut_loop(work, model.warm_basis.empty() ? nullptr : &model.warm_basis, opt, stats);
  if (root.status == LoopStatus::kInfeasible) throw certificate(work, root.lp);
  if (root.status != LoopStatus::kOptimal) throw SolverError(root.failure);
  const double root_bound = root.lp.objective;
  for (double theta : {0.5, 0.1, 1e-6}) {
    round_commitment(work, root_fixed, root.lp.x, theta, opt, stats, inc, start);
    if (inc.found) break;
  }
  if (!inc.found) dive(work, root_fixed, root.lp, opt, stats, inc, start);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push({root_bound, next_id++, 0, root_fixed, {}});
  double best_bound = root_bound;
  bool exhausted = true;

  auto gap_closed = [&](double bound) {
    return inc.found && bound >= inc.objective - opt.rel_gap * std::max(1.0, std::abs(inc.objective));
  };

  while (!open.empty()) {
    best_bound = open.top().bound;
    if (gap_closed(best_bound)) break;
    if (stats.nodes >= opt.node_limit || seconds_since(start) > opt.time_limit_seconds) {
      exhausted = false;
      break;
    }
    Node node = open.top();
    open.pop();
    ++stats.nodes;
    apply(work, ints, node.fixed);
    LoopOutcome out;
    if (node.id == 0) {
      out = root;
    } else {
      out = cut_loop(work, node.basis.empty() ? nullptr : &node.basis, opt, stats);
    }
    if (out.status == LoopStatus::kInfeasible) continue;
    if (out.status != LoopStatus::kOptimal) throw SolverError(out.failure);
    if (gap_closed(out.lp.objective)) continue;
    const int k = pick_branch(work, out.lp.x);
    if (k < 0) {
      offer(inc, out.lp);
      continue;
    }
    if (stats.nodes % 50 == 0) {
      round_commitment(work, root_fixed, out.lp.x, 0.5, opt, stats, inc, start);
      dive(work, node.fixed, out.lp, opt, stats, inc, start);
    }
    for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{out.lp.objective, next_id++, node.depth + 1, node.fixed, out.lp.basis};
      child.fixed[k] = v;
      open.push(std::move(child));
    }
  }
  if (open.empty()) best_bound = inc.found ? inc.objective : best_bound;

  if (!inc.found) {
    if (exhausted) throw InfeasibleError("integrality", "no commitment pattern satisfies the constraints");
    throw SolverError("no integer solution found within the node/time budget");
  }
  best_bound = std::min(best_bound, inc.objective);
  stats.mip_gap = std::max(0.0, (inc.objective - best_bound) / std::max(1.0, std::abs(inc.objective)));
  stats.gap_reached = stats.mip_gap <= opt.rel_gap || open.empty();

  res.schedule = extract_schedule(work, inc.sol.x);
  res.dispatch = extract_dispatch(work, inc.sol);
  finish_stats(stats, inc.sol, inc.sol.dual_objective(work.lp()));
  stats.wall_seconds = seconds_since(start);
  return res;
}

MipResult solve_by_enumeration(const UCModel& model, int max_binaries, const SolveOptions& opt) {
  const auto start = Clock::now();
  UCModel work = model;
  const auto& ints = work.integer_columns();
  std::vector<std::int8_t> fixed = preset(model);
  std::vector<int> open;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i] < 0) open.push_back(static_cast<int>(i));
  }
  const int k = static_cast<int>(open.size());
  if (k > max_binaries) {
    throw SolverError("enumeration over " + std::to_string(k) + " binaries exceeds the limit of " +
                      std::to_string(max_binaries));
  }
  MipResult res;
  Incumbent inc;
  lp::Basis basis;
  for (long mask = 0; mask < (1L << k); ++mask) {
    for (int i = 0; i < k; ++i) fixed[open[i]] = static_cast<std::int8_t>((mask >> i) & 1);
    apply(work, ints, fixed);
    LoopOutcome out = cut_loop(work, basis.empty() ? nullptr : &basis, opt, res.stats);
    ++res.stats.nodes;
    if (out.status == LoopStatus::kInfeasible) continue;
    if (out.status != LoopStatus::kOptimal) throw SolverError(out.failure);
    basis = out.lp.basis;
    offer(inc, out.lp);
  }
  if (!inc.found) throw InfeasibleError("integrality", "no commitment pattern satisfies the constraints");
  res.schedule = extract_schedule(work, inc.sol.x);
  res.dispatch = extract_dispatch(work, inc.sol);
  finish_stats(res.stats, inc.sol, inc.sol.dual_objective(work.lp()));
  res.stats.wall_seconds = seconds_since(start);
  return res;
}

}  // namespace ascost
