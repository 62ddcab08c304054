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

// Bounded-variable primal simplex for small and medium sparse LPs.
//
// Problem form:
//
//   min  c'x
//   s.t. row_lower <= A x <= row_upper
//        col_lower <=   x <= col_upper
//
// Each row i carries a logical variable s_i = a_i x bounded by the row
// bounds, so every constraint is an equality internally. Duals follow the
// sensitivity convention: row_dual[i] = d(objective)/d(rhs_i), which is
// nonnegative on an active lower row bound and nonpositive on an active
// upper row bound. reduced_cost[j] = c_j - y'a_j.

#ifndef ASCOST_LP_HPP
#define ASCOST_LP_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ascost::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entry {
  int index;
  double value;
};

class LinearProgram {
 public:
  int add_column(double cost, double lower, double upper);
  int add_row(double lower, double upper, std::span<const Entry> entries);
  int add_row(double lower, double upper, std::initializer_list<Entry> entries) {
    return add_row(lower, upper, std::span<const Entry>(entries.begin(), entries.size()));
  }

  void set_cost(int col, double cost) { cost_.at(col) = cost; }
  void set_column_bounds(int col, double lower, double upper);
  void set_row_bounds(int row, double lower, double upper);

  [[nodiscard]] int num_columns() const { return static_cast<int>(cost_.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] double cost(int col) const { return cost_[col]; }
  [[nodiscard]] double column_lower(int col) const { return col_lower_[col]; }
  [[nodiscard]] double column_upper(int col) const { return col_upper_[col]; }
  [[nodiscard]] double row_lower(int row) const { return row_lower_[row]; }
  [[nodiscard]] double row_upper(int row) const { return row_upper_[row]; }
  [[nodiscard]] const std::vector<Entry>& row(int r) const { return rows_[r]; }
  [[nodiscard]] std::size_t num_nonzeros() const;

  [[nodiscard]] double row_activity(int r, std::span<const double> x) const;

 private:
  std::vector<double> cost_;
  std::vector<double> col_lower_;
  std::vector<double> col_upper_;
  std::vector<double> row_lower_;
  std::vector<double> row_upper_;
  std::vector<std::vector<Entry>> rows_;
};

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree, kFixed };

// Starting point for a warm solve. Rows appended after the basis was saved
// start with their logical basic.
struct Basis {
  std::vector<VarStatus> columns;
  std::vector<VarStatus> rows;
  [[nodiscard]] bool empty() const { return columns.empty() && rows.empty(); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

std::string to_string(Status status);

struct Options {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int max_iterations = 2'000'000;
  int refactor_interval = 64;
  bool scale = true;
  bool perturb_costs = true;
};

struct Solution {
  Status status = Status::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_activity;
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
  Basis basis;
  int iterations = 0;
  // Rows whose logical was still out of bounds when phase 1 stalled.
  std::vector<int> infeasible_rows;
  double max_primal_violation = 0.0;
  double max_dual_violation = 0.0;

  [[nodiscard]] bool optimal() const { return status == Status::kOptimal; }
  // Dual objective from row and bound multipliers; equals `objective` at an
  // exact optimum.
  [[nodiscard]] double dual_objective(const LinearProgram& lp) const;
};

Solution solve(const LinearProgram& lp, const Options& options = {},
               const Basis* warm_start = nullptr);

}  // namespace ascost::lp

#endif  // ASCOST_LP_HPP
