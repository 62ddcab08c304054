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

#include "ascost/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ascost::lp {

int LinearProgram::add_column(double cost, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("column lower bound exceeds upper bound");
  cost_.push_back(cost);
  col_lower_.push_back(lower);
  col_upper_.push_back(upper);
  return num_columns() - 1;
}

int LinearProgram::add_row(double lower, double upper, std::span<const Entry> entries) {
  if (lower > upper) throw std::invalid_argument("row lower bound exceeds upper bound");
  std::vector<Entry> row;
  row.reserve(entries.size());
  for (const Entry& e : entries) {
    if (e.index < 0 || e.index >= num_columns()) {
      throw std::out_of_range("row references unknown column");
    }
    if (e.value == 0.0) continue;
    auto it = std::find_if(row.begin(), row.end(), [&](const Entry& r) { return r.index == e.index; });
    if (it != row.end()) {
      it->value += e.value;
    } else {
      row.push_back(e);
    }
  }
  rows_.push_back(std::move(row));
  row_lower_.push_back(lower);
  row_upper_.push_back(upper);
  return num_rows() - 1;
}

void LinearProgram::set_column_bounds(int col, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("column lower bound exceeds upper bound");
  col_lower_.at(col) = lower;
  col_upper_.at(col) = upper;
}

void LinearProgram::set_row_bounds(int row, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("row lower bound exceeds upper bound");
  row_lower_.at(row) = lower;
  row_upper_.at(row) = upper;
}

std::size_t LinearProgram::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const auto& r : rows_) nnz += r.size();
  return nnz;
}

double LinearProgram::row_activity(int r, std::span<const double> x) const {
  double s = 0.0;
  for (const Entry& e : rows_[r]) s += e.value * x[e.index];
  return s;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
    case Status::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

double Solution::dual_objective(const LinearProgram& lp) const {
  double z = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double y = row_dual[i];
    if (y == 0.0) continue;
    const double bound = y > 0 ? lp.row_lower(i) : lp.row_upper(i);
    z += y * (std::isfinite(bound) ? bound : row_activity[i]);
  }
  for (int j = 0; j < lp.num_columns(); ++j) {
    const double d = reduced_cost[j];
    if (d == 0.0) continue;
    const double bound = d > 0 ? lp.column_lower(j) : lp.column_upper(j);
    z += d * (std::isfinite(bound) ? bound : x[j]);
  }
  return z;
}

namespace {

double pow2_round(double v) { return std::exp2(std::round(std::log2(v))); }

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Options& options) : lp_(lp), opt_(options) { load(); }

  Solution run(const Basis* warm);

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  struct Ratio {
    int row = -1;
    double theta = 0.0;
    bool flip = false;
    bool unbounded = false;
  };

  void load();
  void slack_basis();
  bool apply_warm_start(const Basis& basis);
  double nonbasic_value(int j) const;
  bool factorize();
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void compute_primal();
  bool set_phase_costs();
  void load_column(int j, std::vector<double>& dense) const;
  double column_dot(int j, const std::vector<double>& y) const;
  Ratio ratio_test(int q, int dir, bool phase1) const;
  void pivot(int q, int dir, const Ratio& ratio);
  void perturb();
  Solution finish(Status status);

  const LinearProgram& lp_;
  Options opt_;
  int n_ = 0;
  int m_ = 0;

  std::vector<int> col_start_;
  std::vector<int> col_index_;
  std::vector<double> col_value_;
  std::vector<double> col_scale_;
  std::vector<double> row_scale_;
  double cost_scale_ = 1.0;

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> true_cost_;
  std::vector<double> work_cost_;

  std::vector<VarStatus> status_;
  std::vector<int> basis_;
  std::vector<int> position_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> alpha_;

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  int iterations_ = 0;
};

void Simplex::load() {
  n_ = lp_.num_columns();
  m_ = lp_.num_rows();
  std::vector<int> count(n_ + 1, 0);
  for (int i = 0; i < m_; ++i)
    for (const Entry& e : lp_.row(i)) ++count[e.index + 1];
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  col_index_.resize(col_start_[n_]);
  col_value_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const Entry& e : lp_.row(i)) {
      col_index_[fill[e.index]] = i;
      col_value_[fill[e.index]] = e.value;
      ++fill[e.index];
    }
  }

  col_scale_.assign(n_, 1.0);
  row_scale_.assign(m_, 1.0);
  if (opt_.scale && col_start_[n_] > 0) {
    // Geometric-mean scaling, alternating rows and columns.
    for (int pass = 0; pass < 6; ++pass) {
      std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
      for (int j = 0; j < n_; ++j) {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          const double a = std::abs(col_value_[k]) * row_scale_[col_index_[k]] * col_scale_[j];
          rmin[col_index_[k]] = std::min(rmin[col_index_[k]], a);
          rmax[col_index_[k]] = std::max(rmax[col_index_[k]], a);
        }
      }
      for (int i = 0; i < m_; ++i)
        if (rmax[i] > 0) row_scale_[i] /= std::sqrt(rmin[i] * rmax[i]);
      for (int j = 0; j < n_; ++j) {
        double cmin = kInf, cmax = 0.0;
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          const double a = std::abs(col_value_[k]) * row_scale_[col_index_[k]] * col_scale_[j];
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0) col_scale_[j] /= std::sqrt(cmin * cmax);
      }
    }
    for (double& r : row_scale_) r = pow2_round(r);
    for (double& c : col_scale_) c = pow2_round(c);
  }
  for (int j = 0; j < n_; ++j)
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
      col_value_[k] *= row_scale_[col_index_[k]] * col_scale_[j];

  const int total = n_ + m_;
  lower_.resize(total);
  upper_.resize(total);
  cost_.assign(total, 0.0);
  double cmax = 0.0;
  for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::abs(lp_.cost(j) * col_scale_[j]));
  cost_scale_ = cmax > 0 ? pow2_round(1.0 / cmax) : 1.0;
  for (int j = 0; j < n_; ++j) {
    lower_[j] = lp_.column_lower(j) / col_scale_[j];
    upper_[j] = lp_.column_upper(j) / col_scale_[j];
    cost_[j] = lp_.cost(j) * col_scale_[j] * cost_scale_;
  }
  for (int i = 0; i < m_; ++i) {
    lower_[n_ + i] = lp_.row_lower(i) * row_scale_[i];
    upper_[n_ + i] = lp_.row_upper(i) * row_scale_[i];
  }
  true_cost_ = cost_;
}

double Simplex::nonbasic_value(int j) const {
  switch (status_[j]) {
    case VarStatus::kAtLower:
    case VarStatus::kFixed: return lower_[j];
    case VarStatus::kAtUpper: return upper_[j];
    default: return 0.0;
  }
}

VarStatus default_status(double lo, double hi) {
  if (lo == hi) return VarStatus::kFixed;
  if (std::isfinite(lo)) return VarStatus::kAtLower;
  if (std::isfinite(hi)) return VarStatus::kAtUpper;
  return VarStatus::kFree;
}

void Simplex::slack_basis() {
  const int total = n_ + m_;
  status_.assign(total, VarStatus::kBasic);
  position_.assign(total, -1);
  basis_.assign(m_, -1);
  x_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    status_[j] = default_status(lower_[j], upper_[j]);
    x_[j] = nonbasic_value(j);
  }
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    position_[n_ + i] = i;
  }
}

bool Simplex::apply_warm_start(const Basis& basis) {
  if (static_cast<int>(basis.columns.size()) != n_ || static_cast<int>(basis.rows.size()) > m_) {
    return false;
  }
  const int total = n_ + m_;
  status_.assign(total, VarStatus::kBasic);
  for (int j = 0; j < n_; ++j) status_[j] = basis.columns[j];
  for (std::size_t i = 0; i < basis.rows.size(); ++i) status_[n_ + i] = basis.rows[i];
  int basic = 0;
  for (int j = 0; j < total; ++j) basic += status_[j] == VarStatus::kBasic;
  if (basic != m_) return false;
  position_.assign(total, -1);
  basis_.clear();
  x_.assign(total, 0.0);
  for (int j = 0; j < total; ++j) {
    if (status_[j] == VarStatus::kBasic) {
      position_[j] = static_cast<int>(basis_.size());
      basis_.push_back(j);
      continue;
    }
    // Bounds may have changed since the basis was saved.
    VarStatus s = status_[j];
    if (lower_[j] == upper_[j]) {
      s = VarStatus::kFixed;
    } else if (s == VarStatus::kAtLower && !std::isfinite(lower_[j])) {
      s = default_status(lower_[j], upper_[j]);
    } else if (s == VarStatus::kAtUpper && !std::isfinite(upper_[j])) {
      s = default_status(lower_[j], upper_[j]);
    } else if (s == VarStatus::kFixed || s == VarStatus::kFree) {
      s = default_status(lower_[j], upper_[j]);
    }
    status_[j] = s;
    x_[j] = nonbasic_value(j);
  }
  return true;
}

bool Simplex::factorize() {
  etas_.clear();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m_) * 4);
  for (int i = 0; i < m_; ++i) {
    const int j = basis_[i];
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        trip.emplace_back(col_index_[k], i, col_value_[k]);
    } else {
      trip.emplace_back(j - n_, i, -1.0);
    }
  }
  Eigen::SparseMatrix<double> b(m_, m_);
  b.setFromTriplets(trip.begin(), trip.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  if (lu_.info() != Eigen::Success) return false;
  // SparseLU only rejects exact zero pivots; guard against near-singular bases.
  const double logdet = lu_.logAbsDeterminant();
  return std::isfinite(logdet);
}

void Simplex::ftran(std::vector<double>& v) const {
  Eigen::Map<Eigen::VectorXd> rhs(v.data(), m_);
  Eigen::VectorXd sol = lu_.solve(rhs);
  rhs = sol;
  for (const Eta& e : etas_) {
    const double t = v[e.row] / e.pivot;
    if (t != 0.0) {
      for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * t;
    }
    v[e.row] = t;
  }
}

void Simplex::btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
    v[it->row] = s / it->pivot;
  }
  Eigen::Map<Eigen::VectorXd> rhs(v.data(), m_);
  Eigen::VectorXd sol = lu_.transpose().solve(rhs);
  rhs = sol;
}

void Simplex::load_column(int j, std::vector<double>& dense) const {
  std::fill(dense.begin(), dense.end(), 0.0);
  if (j < n_) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) dense[col_index_[k]] = col_value_[k];
  } else {
    dense[j - n_] = -1.0;
  }
}

double Simplex::column_dot(int j, const std::vector<double>& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) s += col_value_[k] * y[col_index_[k]];
  return s;
}

void Simplex::compute_primal() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) rhs[col_index_[k]] -= col_value_[k] * x_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const int j = n_ + i;
    if (status_[j] != VarStatus::kBasic) rhs[i] += x_[j];
  }
  ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[basis_[i]] = rhs[i];
}

// Fills work_cost_ for the current phase; returns true when phase 1 applies.
bool Simplex::set_phase_costs() {
  const double tol = opt_.primal_tolerance;
  bool infeasible = false;
  for (int i = 0; i < m_; ++i) {
    const int j = basis_[i];
    if (x_[j] < lower_[j] - tol || x_[j] > upper_[j] + tol) {
      infeasible = true;
      break;
    }
  }
  if (!infeasible) {
    work_cost_ = cost_;
    return false;
  }
  work_cost_.assign(n_ + m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const int j = basis_[i];
    if (x_[j] < lower_[j] - tol) {
      work_cost_[j] = -1.0;
    } else if (x_[j] > upper_[j] + tol) {
      work_cost_[j] = 1.0;
    }
  }
  return true;
}

Simplex::Ratio Simplex::ratio_test(int q, int dir, bool phase1) const {
  const double tol = opt_.primal_tolerance;
  const double ptol = opt_.pivot_tolerance;
  Ratio out;
  double range = upper_[q] - lower_[q];
  if (!std::isfinite(range)) range = kInf;

  // Pass 1: bound on the step with feasibility relaxed by the tolerance.
  double theta_max = kInf;
  for (int i = 0; i < m_; ++i) {
    const double a = alpha_[i] * dir;
    if (std::abs(a) < ptol) continue;
    const int j = basis_[i];
    const double xv = x_[j];
    double bound;
    if (a > 0) {  // basic variable decreases
      if (phase1 && xv > upper_[j] + tol) {
        bound = upper_[j];
      } else if (xv < lower_[j] - tol) {
        continue;
      } else {
        bound = lower_[j];
      }
      if (!std::isfinite(bound)) continue;
      theta_max = std::min(theta_max, (xv - bound + tol) / a);
    } else {  // increases
      if (phase1 && xv < lower_[j] - tol) {
        bound = lower_[j];
      } else if (xv > upper_[j] + tol) {
        continue;
      } else {
        bound = upper_[j];
      }
      if (!std::isfinite(bound)) continue;
      theta_max = std::min(theta_max, (bound - xv + tol) / (-a));
    }
  }

  if (std::isfinite(range) && range <= theta_max) {
    out.flip = true;
    out.theta = range;
    return out;
  }
  if (!std::isfinite(theta_max)) {
    out.unbounded = true;
    return out;
  }

  // Pass 2: largest pivot among rows that block within theta_max.
  double best = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double a = alpha_[i] * dir;
    if (std::abs(a) < ptol) continue;
    const int j = basis_[i];
    const double xv = x_[j];
    double ratio;
    if (a > 0) {
      double bound;
      if (phase1 && xv > upper_[j] + tol) {
        bound = upper_[j];
      } else if (xv < lower_[j] - tol) {
        continue;
      } else {
        bound = lower_[j];
      }
      if (!std::isfinite(bound)) continue;
      ratio = (xv - bound) / a;
    } else {
      double bound;
      if (phase1 && xv < lower_[j] - tol) {
        bound = lower_[j];
      } else if (xv > upper_[j] + tol) {
        continue;
      } else {
        bound = upper_[j];
      }
      if (!std::isfinite(bound)) continue;
      ratio = (bound - xv) / (-a);
    }
    if (ratio <= theta_max && std::abs(a) > best) {
      best = std::abs(a);
      out.row = i;
      out.theta = std::max(ratio, 0.0);
    }
  }
  if (out.row < 0) out.unbounded = true;
  return out;
}

void Simplex::pivot(int q, int dir, const Ratio& ratio) {
  const double step = dir * ratio.theta;
  if (step != 0.0) {
    for (int i = 0; i < m_; ++i) {
      if (alpha_[i] != 0.0) x_[basis_[i]] -= step * alpha_[i];
    }
    x_[q] += step;
  }
  if (ratio.flip) {
    status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
    x_[q] = nonbasic_value(q);
    return;
  }
  const int r = ratio.row;
  const int leaving = basis_[r];
  const double a = alpha_[r] * dir;
  // A decreasing basic variable leaves at its lower bound unless it was
  // coming down from above the upper bound in phase 1.
  const double xv = x_[leaving];
  VarStatus leave_status;
  if (lower_[leaving] == upper_[leaving]) {
    leave_status = VarStatus::kFixed;
  } else if (a > 0) {
    leave_status = std::abs(xv - upper_[leaving]) < std::abs(xv - lower_[leaving]) ? VarStatus::kAtUpper
                                                                                    : VarStatus::kAtLower;
    if (!std::isfinite(lower_[leaving])) leave_status = VarStatus::kAtUpper;
    if (!std::isfinite(upper_[leaving])) leave_status = VarStatus::kAtLower;
  } else {
    leave_status = std::abs(xv - lower_[leaving]) < std::abs(xv - upper_[leaving]) ? VarStatus::kAtLower
                                                                                    : VarStatus::kAtUpper;
    if (!std::isfinite(upper_[leaving])) leave_status = VarStatus::kAtLower;
    if (!std::isfinite(lower_[leaving])) leave_status = VarStatus::kAtUpper;
  }
  status_[leaving] = leave_status;
  x_[leaving] = nonbasic_value(leaving);
  position_[leaving] = -1;
  basis_[r] = q;
  position_[q] = r;
  status_[q] = VarStatus::kBasic;

  Eta eta;
  eta.row = r;
  eta.pivot = alpha_[r];
  for (int i = 0; i < m_; ++i) {
    if (i != r && std::abs(alpha_[i]) > 1e-14) {
      eta.index.push_back(i);
      eta.value.push_back(alpha_[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

void Simplex::perturb() {
  std::mt19937 rng(20260317u);
  for (int j = 0; j < n_ + m_; ++j) {
    const double u = 0.5 + 0.5 * (static_cast<double>(rng()) / static_cast<double>(rng.max()));
    const double mag = 1e-7 * (1.0 + std::abs(true_cost_[j])) * u;
    // Push nonbasic variables further into their current bound.
    switch (status_[j]) {
      case VarStatus::kAtUpper: cost_[j] = true_cost_[j] - mag; break;
      case VarStatus::kAtLower: cost_[j] = true_cost_[j] + mag; break;
      default: cost_[j] = true_cost_[j] + (rng() & 1u ? mag : -mag); break;
    }
  }
}

Solution Simplex::run(const Basis* warm) {
  if (warm == nullptr || warm->empty() || !apply_warm_start(*warm)) slack_basis();
  if (m_ == 0) {
    // Pure bound-constrained problem.
    for (int j = 0; j < n_; ++j) {
      if (true_cost_[j] > 0 && std::isfinite(lower_[j])) {
        status_[j] = lower_[j] == upper_[j] ? VarStatus::kFixed : VarStatus::kAtLower;
      } else if (true_cost_[j] < 0 && std::isfinite(upper_[j])) {
        status_[j] = VarStatus::kAtUpper;
      } else if (true_cost_[j] != 0) {
        return finish(Status::kUnbounded);
      }
      x_[j] = nonbasic_value(j);
    }
    y_.clear();
    return finish(Status::kOptimal);
  }
  if (!factorize()) {
    slack_basis();
    if (!factorize()) return finish(Status::kNumericalFailure);
  }
  compute_primal();
  alpha_.assign(m_, 0.0);
  y_.assign(m_, 0.0);

  bool perturbed = false;
  bool perturb_done = !opt_.perturb_costs;
  bool fresh = true;
  int degenerate_run = 0;
  int recoveries = 0;
  std::vector<char> rejected(n_ + m_, 0);
  int rejected_count = 0;

  for (;;) {
    if (iterations_ >= opt_.max_iterations) return finish(Status::kIterationLimit);
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!factorize()) {
        if (++recoveries > 5) return finish(Status::kNumericalFailure);
        slack_basis();
        factorize();
      }
      compute_primal();
      fresh = true;
    }
    const bool phase1 = set_phase_costs();
    if (!phase1 && !perturbed && !perturb_done) {
      perturb();
      perturbed = true;
      work_cost_ = cost_;
    }
    for (int i = 0; i < m_; ++i) y_[i] = work_cost_[basis_[i]];
    btran(y_);

    const bool bland = degenerate_run > 200;
    const double dtol = opt_.dual_tolerance;
    int q = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::kBasic || s == VarStatus::kFixed || rejected[j]) continue;
      const double cj = phase1 ? 0.0 : work_cost_[j];
      const double d = cj - column_dot(j, y_);
      int jdir = 0;
      if ((s == VarStatus::kAtLower || s == VarStatus::kFree) && d < -dtol) {
        jdir = 1;
      } else if ((s == VarStatus::kAtUpper || s == VarStatus::kFree) && d > dtol) {
        jdir = -1;
      }
      if (jdir == 0) continue;
      if (bland) {
        q = j;
        dir = jdir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dir = jdir;
      }
    }

    if (q < 0) {
      if (rejected_count > 0) {
        std::fill(rejected.begin(), rejected.end(), 0);
        rejected_count = 0;
        if (!fresh) {
          factorize();
          compute_primal();
          fresh = true;
          continue;
        }
      }
      if (!fresh) {
        if (!factorize()) {
          if (++recoveries > 5) return finish(Status::kNumericalFailure);
          slack_basis();
          factorize();
        }
        compute_primal();
        fresh = true;
        continue;
      }
      if (phase1) return finish(Status::kInfeasible);
      if (perturbed) {
        cost_ = true_cost_;
        perturbed = false;
        perturb_done = true;
        continue;
      }
      return finish(Status::kOptimal);
    }

    load_column(q, alpha_);
    ftran(alpha_);
    Ratio ratio = ratio_test(q, dir, phase1);
    if (ratio.unbounded) {
      if (phase1 || !fresh) {
        // Numerical trouble: refresh and try another candidate.
        rejected[q] = 1;
        ++rejected_count;
        continue;
      }
      return finish(Status::kUnbounded);
    }
    if (!ratio.flip && std::abs(alpha_[ratio.row]) < 1e-7 && !fresh) {
      factorize();
      compute_primal();
      fresh = true;
      continue;
    }
    pivot(q, dir, ratio);
    ++iterations_;
    fresh = false;
    if (rejected_count > 0) {
      std::fill(rejected.begin(), rejected.end(), 0);
      rejected_count = 0;
    }
    if (ratio.theta < 1e-12) {
      ++degenerate_run;
    } else {
      degenerate_run = 0;
    }
  }
}

Solution Simplex::finish(Status status) {
  Solution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.x.resize(n_);
  for (int j = 0; j < n_; ++j) sol.x[j] = x_[j] * col_scale_[j];
  for (int j = 0; j < n_; ++j) {
    // Snap nonbasic structurals exactly onto their bounds.
    if (status_[j] == VarStatus::kAtLower || status_[j] == VarStatus::kFixed) sol.x[j] = lp_.column_lower(j);
    if (status_[j] == VarStatus::kAtUpper) sol.x[j] = lp_.column_upper(j);
  }
  sol.row_activity.resize(m_);
  for (int i = 0; i < m_; ++i) sol.row_activity[i] = lp_.row_activity(i, sol.x);
  sol.basis.columns.assign(status_.begin(), status_.begin() + n_);
  sol.basis.rows.assign(status_.begin() + n_, status_.end());

  if (status == Status::kInfeasible) {
    const double tol = opt_.primal_tolerance;
    for (int i = 0; i < m_; ++i) {
      const int j = n_ + i;
      if (status_[j] == VarStatus::kBasic && (x_[j] < lower_[j] - tol || x_[j] > upper_[j] + tol)) {
        sol.infeasible_rows.push_back(i);
      }
    }
  }

  sol.row_dual.assign(m_, 0.0);
  sol.reduced_cost.assign(n_, 0.0);
  if (status == Status::kOptimal) {
    for (int i = 0; i < m_; ++i) sol.row_dual[i] = y_[i] * row_scale_[i] / cost_scale_;
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::kBasic) continue;
      sol.reduced_cost[j] = (true_cost_[j] - column_dot(j, y_)) / (col_scale_[j] * cost_scale_);
    }
    // Exact zero multipliers on basic logicals.
    for (int i = 0; i < m_; ++i)
      if (status_[n_ + i] == VarStatus::kBasic) sol.row_dual[i] = 0.0;
  }

  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += lp_.cost(j) * sol.x[j];
  sol.objective = obj;

  double pviol = 0.0;
  for (int j = 0; j < n_; ++j) {
    pviol = std::max(pviol, lp_.column_lower(j) - sol.x[j]);
    pviol = std::max(pviol, sol.x[j] - lp_.column_upper(j));
  }
  for (int i = 0; i < m_; ++i) {
    pviol = std::max(pviol, lp_.row_lower(i) - sol.row_activity[i]);
    pviol = std::max(pviol, sol.row_activity[i] - lp_.row_upper(i));
  }
  sol.max_primal_violation = pviol;
  if (status == Status::kOptimal) {
    double dviol = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double d = sol.reduced_cost[j];
      switch (status_[j]) {
        case VarStatus::kAtLower: dviol = std::max(dviol, -d); break;
        case VarStatus::kAtUpper: dviol = std::max(dviol, d); break;
        case VarStatus::kFree: dviol = std::max(dviol, std::abs(d)); break;
        default: break;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const double y = sol.row_dual[i];
      switch (status_[n_ + i]) {
        case VarStatus::kAtLower: dviol = std::max(dviol, -y); break;
        case VarStatus::kAtUpper: dviol = std::max(dviol, y); break;
        case VarStatus::kFree: dviol = std::max(dviol, std::abs(y)); break;
        default: break;
      }
    }
    sol.max_dual_violation = dviol;
  }
  return sol;
}

}  // namespace

Solution solve(const LinearProgram& lp, const Options& options, const Basis* warm_start) {
  Simplex simplex(lp, options);
  return simplex.run(warm_start);
}

}  // namespace ascost::lp
