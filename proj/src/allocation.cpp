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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "ascost/lp.hpp"

namespace ascost {

namespace {

std::vector<std::string> ids_of(const AirportGame& game) {
  std::vector<std::string> ids;
  ids.reserve(game.size());
  for (const auto& p : game.players()) ids.push_back(p.id);
  return ids;
}

Allocation finish(std::string rule, const AirportGame& game, std::vector<double> phi) {
  Allocation a;
  a.rule = std::move(rule);
  a.ids = ids_of(game);
  a.phi = std::move(phi);
  a.efficiency_gap = std::abs(std::accumulate(a.phi.begin(), a.phi.end(), 0.0) - game.total());
  return a;
}

void check_size(const AirportGame& game, int max_n, const char* what) {
  if (game.size() > max_n) {
    std::ostringstream os;
    os << what << ": " << game.size() << " players exceeds the limit of " << max_n;
    throw AllocationError(os.str());
  }
}

}  // namespace

AirportGame::AirportGame(std::vector<Player> players, int hour) : players_(std::move(players)), hour_(hour) {
  for (const auto& p : players_) {
    if (!std::isfinite(p.cost) || p.cost < 0) throw AllocationError("player " + p.id + " has an invalid cost");
  }
  std::sort(players_.begin(), players_.end(), [](const Player& a, const Player& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.id < b.id;
  });
}

AirportGame AirportGame::from_costs(const std::vector<double>& costs) {
  std::vector<Player> players;
  // Zero-padded ids keep input order as the tie-break.
  const int width = static_cast<int>(std::to_string(costs.size()).size());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    std::string id = std::to_string(i + 1);
    players.push_back({"p" + std::string(width - id.size(), '0') + id, costs[i]});
  }
  return AirportGame(std::move(players));
}

double AirportGame::coalition_cost(std::uint64_t mask) const {
  double c = 0.0;
  for (int i = 0; i < std::min(size(), 64); ++i) {
    if (mask >> i & 1) c = std::max(c, players_[i].cost);
  }
  return c;
}

Allocation proportional(const AirportGame& game) {
  const int n = game.size();
  double sum = 0.0;
  for (const auto& p : game.players()) sum += p.cost;
  std::vector<double> phi(n, 0.0);
  if (sum > 0) {
    for (int i = 0; i < n; ++i) phi[i] = game.cost(i) * game.total() / sum;
  }
  return finish("proportional", game, std::move(phi));
}

Allocation shapley_airport(const AirportGame& game) {
  const int n = game.size();
  std::vector<double> phi(n);
  double acc = 0.0, prev = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += (game.cost(k) - prev) / (n - k);
    prev = game.cost(k);
    phi[k] = acc;
  }
  return finish("shapley", game, std::move(phi));
}

Allocation shapley_bruteforce(const AirportGame& game, int max_n) {
  check_size(game, max_n, "shapley_bruteforce");
  const int n = game.size();
  std::vector<long double> fact(n + 1, 1.0L);
  for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
  std::vector<double> phi(n, 0.0);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    long double v = 0.0L;
    for (std::uint64_t m = 0; m <= all; ++m) {
      if (m & bit) continue;
      const int s = std::popcount(m);
      const long double w = fact[s] * fact[n - s - 1] / fact[n];
      v += w * (static_cast<long double>(game.coalition_cost(m | bit)) - game.coalition_cost(m));
    }
    phi[i] = static_cast<double>(v);
  }
  return finish("shapley", game, std::move(phi));
}

TypedGroups group_by_type(const AirportGame& game, double tol) {
  TypedGroups g;
  g.num_players = game.size();
  const double band = tol * std::max(1.0, game.total());
  for (int i = 0; i < game.size(); ++i) {
    if (g.groups.empty() || game.cost(i) - game.cost(g.groups.back().members.front()) > band) {
      g.groups.push_back({game.cost(i), {i}});
    } else {
      g.groups.back().members.push_back(i);
      g.groups.back().cost = game.cost(i);
    }
  }
  return g;
}

Allocation nucleolus_airport(const AirportGame& game, const TypedGroups& groups, NucleolusState* state) {
  const auto& gs = groups.groups;
  const int m = static_cast<int>(gs.size());
  if (m == 0) throw AllocationError("nucleolus_airport: no types");
  // l[k]: members in types 1..k.
  std::vector<int> l(m + 1, 0);
  for (int j = 0; j < m; ++j) l[j + 1] = l[j] + static_cast<int>(gs[j].members.size());

  std::vector<double> share(m, 0.0);
  int kq = 0;            // types 1..kq are settled
  double assigned = 0.0;  // cost already charged to them
  int rounds = 0;
  while (kq < m) {
    if (++rounds > m) throw AllocationError("nucleolus_airport: recursion did not terminate");
    int best_k = m;
    double best = (gs[m - 1].cost - assigned) / (l[m] - l[kq]);
    for (int k = m - 1; k > kq; --k) {
      const double v = (gs[k - 1].cost - assigned) / (l[k] - l[kq] + 1);
      if (v < best) best = v, best_k = k;
    }
    for (int j = kq; j < best_k; ++j) share[j] = best;
    assigned += best * (l[best_k] - l[kq]);
    kq = best_k;
    if (state) {
      state->alpha.push_back(-best);
      state->k.push_back(kq);
    }
  }

  std::vector<double> phi(game.size(), 0.0);
  for (int j = 0; j < m; ++j) {
    for (int i : gs[j].members) phi[i] = share[j];
  }
  return finish("nucleolus", game, std::move(phi));
}

Allocation nucleolus_airport(const AirportGame& game, double tol) {
  if (game.empty()) return finish("nucleolus", game, {});
  return nucleolus_airport(game, group_by_type(game, tol));
}

Allocation nucleolus_lp_oracle(const AirportGame& game, int max_n) {
  check_size(game, max_n, "nucleolus_lp_oracle");
  const int n = game.size();
  if (n <= 1) return finish("nucleolus", game, std::vector<double>(n, game.total()));

  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  auto indicator = [n](std::uint64_t mask) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = static_cast<double>(mask >> i & 1);
    return v;
  };

  // Orthonormal basis of the fixed indicators; the grand coalition is fixed
  // by efficiency.
  std::vector<Eigen::VectorXd> basis{indicator(all).normalized()};
  std::vector<std::uint64_t> fixed_masks{all};
  std::vector<double> fixed_rhs{game.total()};
  auto residual = [&](std::uint64_t mask) {
    Eigen::VectorXd v = indicator(mask);
    for (const auto& b : basis) v -= b.dot(v) * b;
    return v;
  };

  std::vector<std::uint64_t> active;
  for (std::uint64_t s = 1; s < all; ++s) active.push_back(s);

  std::vector<std::uint64_t> independent{all};
  std::vector<double> independent_rhs{game.total()};
  while (static_cast<int>(basis.size()) < n) {
    lp::LinearProgram prog;
    for (int i = 0; i < n; ++i) prog.add_column(0.0, -lp::kInf, lp::kInf);
    const int t = prog.add_column(1.0, -lp::kInf, lp::kInf);
    std::vector<lp::Entry> row;
    for (std::size_t f = 0; f < fixed_masks.size(); ++f) {
      row.clear();
      for (int i = 0; i < n; ++i)
        if (fixed_masks[f] >> i & 1) row.push_back({i, 1.0});
      prog.add_row(fixed_rhs[f], fixed_rhs[f], row);
    }
    const int first_active = prog.num_rows();
    for (std::uint64_t s : active) {
      row.clear();
      for (int i = 0; i < n; ++i)
        if (s >> i & 1) row.push_back({i, 1.0});
      row.push_back({t, -1.0});
      prog.add_row(-lp::kInf, game.coalition_cost(s), row);
    }
    const lp::Solution sol = lp::solve(prog);
    if (!sol.optimal()) throw AllocationError("nucleolus_lp_oracle: LP " + lp::to_string(sol.status));
    const double excess = sol.x[t];

    std::vector<std::uint64_t> still;
    bool progressed = false;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::uint64_t s = active[a];
      if (sol.row_dual[first_active + a] < -1e-9) {
        fixed_masks.push_back(s);
        fixed_rhs.push_back(game.coalition_cost(s) + excess);
        const Eigen::VectorXd r = residual(s);
        if (r.norm() > 1e-9) {
          basis.push_back(r.normalized());
          independent.push_back(s);
          independent_rhs.push_back(fixed_rhs.back());
          progressed = true;
        }
      } else {
        still.push_back(s);
      }
    }
    if (!progressed) throw AllocationError("nucleolus_lp_oracle: no coalition fixed in a round");
    active.clear();
    for (std::uint64_t s : still) {
      if (residual(s).norm() > 1e-9) active.push_back(s);
    }
  }

  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int r = 0; r < n; ++r) {
    a.row(r) = indicator(independent[r]).transpose();
    b[r] = independent_rhs[r];
  }
  const Eigen::VectorXd x = a.fullPivLu().solve(b);
  return finish("nucleolus", game, std::vector<double>(x.data(), x.data() + n));
}

CoreReport core_check(const Allocation& alloc, const AirportGame& game, double tol, int max_n) {
  check_size(game, max_n, "core_check");
  if (alloc.phi.size() != static_cast<std::size_t>(game.size()))
    throw AllocationError("core_check: allocation and game differ in size");
  const int n = game.size();
  const double band = tol * std::max(1.0, game.total());
  CoreReport r;
  r.efficiency_gap = std::abs(std::accumulate(alloc.phi.begin(), alloc.phi.end(), 0.0) - game.total());
  r.efficient = r.efficiency_gap <= band;
  r.individually_rational = true;
  for (int i = 0; i < n; ++i) {
    if (alloc.phi[i] > game.cost(i) + band) r.individually_rational = false;
  }

  const std::uint64_t all = n == 0 ? 0 : (std::uint64_t{1} << n) - 1;
  std::vector<double> sum(all + 1, 0.0);
  r.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 1; s <= all; ++s) {
    sum[s] = sum[s & (s - 1)] + alloc.phi[std::countr_zero(s)];
    if (s == all) continue;
    const double e = sum[s] - game.coalition_cost(s);
    if (e > r.worst_excess) r.worst_excess = e, r.worst_coalition = s;
  }
  if (n <= 1) r.worst_excess = 0.0;
  r.coalitionally_rational = r.worst_excess <= band;
  for (int i = 0; i < n; ++i) {
    if (r.worst_coalition >> i & 1) r.worst_members.push_back(game.players()[i].id);
  }
  return r;
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::kProportional:
      return "proportional";
    case Rule::kShapley:
      return "shapley";
    case Rule::kNucleolus:
      return "nucleolus";
  }
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  if (name == "proportional") return Rule::kProportional;
  if (name == "shapley") return Rule::kShapley;
  if (name == "nucleolus") return Rule::kNucleolus;
  throw AllocationError("unknown allocation rule '" + std::string(name) + "'");
}

Allocation allocate(const AirportGame& game, Rule rule, double group_tol) {
  switch (rule) {
    case Rule::kProportional:
      return proportional(game);
    case Rule::kShapley:
      return shapley_airport(game);
    case Rule::kNucleolus:
      return nucleolus_airport(game, group_tol);
  }
  throw AllocationError("unknown allocation rule");
}

HourlyAllocation allocate_hourly(const StandAloneCosts& standalone, Rule rule, double group_tol) {
  HourlyAllocation out;
  out.rule = std::string(to_string(rule));
  const int hours = static_cast<int>(standalone.hours.size());
  std::map<std::string, std::size_t> tech_index;
  auto tech = [&](const std::string& name) -> TechnologyShare& {
    auto [it, inserted] = tech_index.try_emplace(name, out.by_technology.size());
    if (inserted) out.by_technology.push_back({name, std::vector<double>(hours, 0.0), 0.0});
    return out.by_technology[it->second];
  };

  for (int t = 0; t < hours; ++t) {
    const auto& entries = standalone.hours[t];
    std::vector<Player> players;
    std::vector<UnitShare> shares;
    double headline = 0.0;
    for (const auto& e : entries) {
      if (!std::isfinite(e.omega) || e.omega < 0) {
        std::ostringstream os;
        os << "stand-alone cost of " << e.unit_id << " at hour " << t << " is " << e.omega;
        throw AllocationError(os.str());
      }
      shares.push_back({e.unit_id, e.technology, e.omega, 0.0});
      tech(e.technology);
      headline = std::max(headline, e.omega);
      if (e.omega > 0) players.push_back({e.unit_id, e.omega});
    }
    out.headline.push_back(headline);
    double gap = 0.0;
    if (!players.empty()) {
      const AirportGame game(std::move(players), t);
      const Allocation a = allocate(game, rule, group_tol);
      gap = a.efficiency_gap;
      std::map<std::string, double> by_id;
      for (std::size_t i = 0; i < a.ids.size(); ++i) by_id[a.ids[i]] = a.phi[i];
      for (auto& s : shares) {
        if (auto it = by_id.find(s.unit_id); it != by_id.end()) s.phi = it->second;
      }
    }
    for (const auto& s : shares) {
      TechnologyShare& ts = tech(s.technology);
      ts.hourly[t] += s.phi;
      ts.total += s.phi;
    }
    out.efficiency_gap.push_back(gap);
    out.hours.push_back(std::move(shares));
  }
  return out;
}

}  // namespace ascost
