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

// Solvers for the unit-commitment model: the convex relaxation with full
// multiplier recovery, and branch-and-bound for the mixed-integer problem.
//
// Multiplier conventions (all inequality multipliers nonnegative):
//   lambda_e     balance row
//   lambda_h/pfr/efr   aggregation rows "aggregate = sum of contributions"
//   mu_rocof, mu_qss, omega_loss   the >= rows of the same name
//   mu_nadir_1..3   cone multiplier, recovered from the active cuts as
//                   mu_3 = sum(pi), (mu_1, mu_2) = sum(pi * n)
//   psi_*        private rows and the [0,1] / energy boxes

#ifndef ASCOST_UC_SOLVE_HPP
#define ASCOST_UC_SOLVE_HPP

#include <string>
#include <vector>

#include "ascost/uc_model.hpp"

namespace ascost {

using Matrix = std::vector<std::vector<double>>;  // [unit][hour]

struct CommitmentSchedule {
  Matrix y, st, sg, sd;  // generators
  Matrix ycha, ydis;     // storage
};

struct DispatchSolution {
  Matrix gen_p, gen_pfr;
  Matrix res_p;
  Matrix sto_cha, sto_dis, sto_pfr, sto_efr;
  Matrix sto_e;  // [unit][0..T], entry 0 is the opening state
  std::vector<double> h, pfr, efr, p_loss;
  double objective = 0.0;
};

struct DualSolution {
  std::vector<double> lambda_e, lambda_h, lambda_pfr, lambda_efr;
  std::vector<double> mu_rocof, mu_nadir_1, mu_nadir_2, mu_nadir_3, mu_qss, omega_loss;

  Matrix psi_max_y, psi_max_st, psi_max_sg, psi_max_sd, psi_mdt;  // generators
  Matrix psi_cf;                                                  // renewables
  Matrix psi_min_e, psi_max_e;                                    // storage, [unit][0..T]
  Matrix psi_max_ycha, psi_max_ydis, psi_dis_cha;
  std::vector<double> psi_ini, psi_end;

  // Raw LP multipliers, aligned with UCModel::rows() and the LP columns.
  // row_rhs is the bound each multiplier prices (0 where the multiplier is 0).
  std::vector<double> row_dual;
  std::vector<RowTag> row_tags;
  std::vector<double> row_rhs;
  std::vector<double> reduced_cost;
  double dual_objective = 0.0;
};

struct SolveStats {
  int nodes = 0;
  int lp_iterations = 0;
  int lp_solves = 0;
  int cut_rounds = 0;
  int cuts_added = 0;
  double mip_gap = 0.0;
  double duality_gap = 0.0;
  double max_primal_violation = 0.0;
  double max_cone_violation = 0.0;
  double wall_seconds = 0.0;
  bool gap_reached = true;
};

struct SolveOptions {
  double feasibility_tolerance = 1e-6;  // per row, scaled by its largest coefficient
  double cone_tolerance = 1e-6;         // cut violation over the cut's largest coefficient
  int max_cut_rounds = 400;
  // Branch-and-bound.
  double rel_gap = 1e-6;
  int node_limit = 200000;
  double time_limit_seconds = 600.0;
};

struct RelaxedResult {
  CommitmentSchedule schedule;  // fractional
  DispatchSolution dispatch;
  DualSolution duals;
  SolveStats stats;
  std::vector<double> primal;  // LP columns, aligned with model.lp()
};

struct MipResult {
  CommitmentSchedule schedule;
  DispatchSolution dispatch;
  SolveStats stats;
};

// Raised when the model has no feasible point. `constraint_class` names the
// family of constraints that could not be met (e.g. "energy balance").
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string constraint_class, std::string detail);
  [[nodiscard]] const std::string& constraint_class() const { return class_; }

 private:
  std::string class_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves the convex relaxation. Cuts added to approximate the nadir cone stay
// in the model, and the final basis is stored in model.warm_basis.
RelaxedResult solve_relaxed(UCModel& model, const SolveOptions& options = {});

// Best-first branch-and-bound on the binary columns. Integer columns whose
// bounds are already fixed in `model` keep their value. When the node or time
// budget runs out the incumbent is returned with stats.gap_reached = false;
// without an incumbent SolverError is thrown.
MipResult solve_mip(const UCModel& model, const SolveOptions& options = {});

// Exhaustive search over every 0/1 pattern of the free integer columns, each
// pattern solved as an LP with the cone cut loop. Reference implementation
// for small models; throws SolverError above `max_binaries`.
MipResult solve_by_enumeration(const UCModel& model, int max_binaries = 16, const SolveOptions& options = {});

// Extracts the commitment-like columns from a primal vector.
CommitmentSchedule extract_schedule(const UCModel& model, const std::vector<double>& x);

}  // namespace ascost

#endif  // ASCOST_UC_SOLVE_HPP
