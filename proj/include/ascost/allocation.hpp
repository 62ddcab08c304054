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

// Sharing one hour's ancillary-service cost among the units that could
// trigger it. The coalition cost is the stand-alone cost of the largest
// member, C(M) = max_{i in M} Omega_i, which makes each hour an airport game.

#ifndef ASCOST_ALLOCATION_HPP
#define ASCOST_ALLOCATION_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ascost/pricing.hpp"

namespace ascost {

class AllocationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Player {
  std::string id;
  double cost = 0.0;  // stand-alone cost, >= 0
};

// Players are kept in ascending cost order, equal costs ordered by id.
class AirportGame {
 public:
  AirportGame() = default;
  explicit AirportGame(std::vector<Player> players, int hour = 0);
  static AirportGame from_costs(const std::vector<double>& costs);

  [[nodiscard]] int size() const { return static_cast<int>(players_.size()); }
  [[nodiscard]] bool empty() const { return players_.empty(); }
  [[nodiscard]] int hour() const { return hour_; }
  [[nodiscard]] const std::vector<Player>& players() const { return players_; }
  [[nodiscard]] double cost(int i) const { return players_[i].cost; }
  // C(N), the cost of the largest player.
  [[nodiscard]] double total() const { return players_.empty() ? 0.0 : players_.back().cost; }
  // Bit i of `mask` selects sorted player i (first 64 players only).
  [[nodiscard]] double coalition_cost(std::uint64_t mask) const;

 private:
  std::vector<Player> players_;
  int hour_ = 0;
};

struct Allocation {
  std::string rule;
  std::vector<std::string> ids;  // game order
  std::vector<double> phi;
  double efficiency_gap = 0.0;  // |sum(phi) - C(N)|
};

Allocation proportional(const AirportGame& game);

// phi_i = sum_{k <= i} (Omega_k - Omega_{k-1}) / (n + 1 - k), Omega_0 = 0.
Allocation shapley_airport(const AirportGame& game);

// Subset-weighted marginal contributions over all 2^(n-1) coalitions per
// player.
Allocation shapley_bruteforce(const AirportGame& game, int max_n = 12);

struct TypeGroup {
  double cost = 0.0;
  std::vector<int> members;  // indices into the game
};

struct TypedGroups {
  std::vector<TypeGroup> groups;  // strictly ascending cost
  int num_players = 0;
};

// Consecutive players within tol * max(1, C(N)) of the group's first member
// form one type. The group cost is the largest member cost.
TypedGroups group_by_type(const AirportGame& game, double tol = 1e-9);

// Iteration log of the recursive form. k_q are 1-based type indices.
struct NucleolusState {
  std::vector<double> alpha;
  std::vector<int> k;
};

// Recursive airport nucleolus over cost types: repeatedly pick the type
// index k minimizing the remaining cost per remaining member (plus one
// member of the largest type while k < m), give every type up to k that
// share, and continue from k. The largest type closes the budget.
Allocation nucleolus_airport(const AirportGame& game, const TypedGroups& groups, NucleolusState* state = nullptr);
Allocation nucleolus_airport(const AirportGame& game, double tol = 1e-9);

// Lexicographic minimization of coalition excesses x(S) - C(S) over all
// proper coalitions with a sequence of LPs. Each round fixes the
// coalitions with a positive multiplier (tight at every optimum) and drops
// those whose indicator lies in the span of the fixed ones.
Allocation nucleolus_lp_oracle(const AirportGame& game, int max_n = 8);

struct CoreReport {
  bool efficient = false;
  bool individually_rational = false;
  bool coalitionally_rational = false;
  double efficiency_gap = 0.0;
  double worst_excess = 0.0;          // max over proper coalitions of x(S) - C(S)
  std::uint64_t worst_coalition = 0;  // bit mask in game order
  std::vector<std::string> worst_members;
  [[nodiscard]] bool passed() const { return efficient && individually_rational && coalitionally_rational; }
};

// Checks every coalition; tolerance is tol * max(1, C(N)).
CoreReport core_check(const Allocation& alloc, const AirportGame& game, double tol = 1e-9, int max_n = 20);

enum class Rule { kProportional, kShapley, kNucleolus };

std::string_view to_string(Rule rule);
Rule parse_rule(std::string_view name);  // throws AllocationError
Allocation allocate(const AirportGame& game, Rule rule, double group_tol = 1e-9);

struct UnitShare {
  std::string unit_id;
  std::string technology;
  double omega = 0.0;
  double phi = 0.0;
};

struct TechnologyShare {
  std::string technology;
  std::vector<double> hourly;  // per hour
  double total = 0.0;
};

struct HourlyAllocation {
  std::string rule;
  std::vector<std::vector<UnitShare>> hours;  // per hour, stand-alone order
  std::vector<double> headline;               // largest Omega per hour
  std::vector<double> efficiency_gap;
  std::vector<TechnologyShare> by_technology;  // first-appearance order
};

// Per hour: players with Omega == 0 pay nothing and stay out of the game.
// Throws AllocationError on a negative or non-finite Omega.
HourlyAllocation allocate_hourly(const StandAloneCosts& standalone, Rule rule, double group_tol = 1e-9);

}  // namespace ascost

#endif  // ASCOST_ALLOCATION_HPP
