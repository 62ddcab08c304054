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

// Frequency-secured unit commitment as a linear program plus a registry of
// which rows and columns mean what.
//
// The nadir cone is held as a growing set of supporting half-spaces (cuts)
// per hour; every other constraint is an ordinary row. Row orientation is
// fixed so that the LP multiplier y = d(objective)/d(rhs) maps onto the
// market multipliers with a known sign (see uc_solve.cpp).

#ifndef ASCOST_UC_MODEL_HPP
#define ASCOST_UC_MODEL_HPP

#include <string_view>
#include <vector>

#include "ascost/frequency.hpp"
#include "ascost/lp.hpp"
#include "ascost/scenario.hpp"

namespace ascost {

struct LossRule {
  enum class Kind { kEndogenousMax, kFixedProfile };
  Kind kind = Kind::kEndogenousMax;
  std::vector<double> profile;  // MW per hour, FixedProfile only

  static LossRule endogenous_max() { return {}; }
  static LossRule fixed(std::vector<double> mw) { return {Kind::kFixedProfile, std::move(mw)}; }
};

enum class RowKind {
  kBalance,
  kTransition,
  kStartLead,
  kMinDown,
  kMinUp,
  kGenMin,
  kGenMax,
  kGenPfrCap,
  kGenPfrMargin,
  kResCap,
  kStorageDynamics,
  kChargeMin,
  kChargeMax,
  kDischargeMin,
  kDischargeMax,
  kStoragePfrCap,
  kStoragePfrMargin,
  kStorageEfrCap,
  kStorageEfrMargin,
  kStorageMode,
  kStorageInitial,
  kStorageFinal,
  kInertiaAgg,
  kPfrAgg,
  kEfrAgg,
  kMaxLoss,   // P_loss >= parameter
  kLossLink,  // P_loss >= P_i (endogenous rule)
  kRocof,
  kNadirCut,
  kQss,
};

enum class RowClass { kBalance, kThermal, kRes, kStorage, kAggregation, kMaxLoss, kRocof, kNadir, kQss };

RowClass row_class(RowKind kind);
std::string_view to_string(RowKind kind);
std::string_view to_string(RowClass cls);

struct RowTag {
  RowKind kind;
  int unit = -1;  // index within its fleet (for kLossLink: generators, then
                  // renewables, then storage), -1 for system rows
  int hour = -1;
};

inline constexpr int kNoColumn = -1;

// Column indices per hour; kNoColumn where a unit lacks the quantity.
struct GeneratorColumns {
  std::vector<int> y, st, sg, sd, p, pfr;
};
struct ResColumns {
  std::vector<int> p;
};
struct StorageColumns {
  std::vector<int> cha, dis, ycha, ydis, pfr, efr;
  std::vector<int> e;  // hours 0..T, e[0] is the opening state
};
struct SystemColumns {
  std::vector<int> h, pfr, efr, loss;
};

struct NadirCutInfo {
  int row;
  int hour;
  double n1;
  double n2;
};

class UCModel {
 public:
  [[nodiscard]] const Scenario& scenario() const { return scenario_; }
  [[nodiscard]] const LossRule& loss_rule() const { return loss_rule_; }
  [[nodiscard]] bool relaxed() const { return relaxed_; }
  [[nodiscard]] int horizon() const { return scenario_.horizon; }
  [[nodiscard]] const NadirCone& cone() const { return cone_; }

  [[nodiscard]] const lp::LinearProgram& lp() const { return lp_; }
  [[nodiscard]] const std::vector<RowTag>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<NadirCutInfo>& cuts() const { return cuts_; }
  // Binary columns (commitment and storage mode), in a fixed order.
  [[nodiscard]] const std::vector<int>& integer_columns() const { return integer_columns_; }
  // Rated power of the unit owning each integer column, for branching.
  [[nodiscard]] double integer_column_size(std::size_t k) const { return integer_size_[k]; }

  [[nodiscard]] int count_rows(RowKind kind) const;
  [[nodiscard]] int count_rows(RowClass cls) const;
  // Rows carrying the loss parameter (kMaxLoss) for hour t, if present.
  [[nodiscard]] int max_loss_row(int hour) const { return max_loss_rows_[hour]; }

  // Adds b'z - n'Az >= 0 for hour t; returns the row index.
  int add_nadir_cut(int hour, double n1, double n2);
  // Replaces the FixedProfile parameter; the model must use that rule.
  void set_loss_profile(const std::vector<double>& mw);
  // Changes a column's bounds (used by branching and enumeration).
  void set_column_bounds(int col, double lower, double upper) { lp_.set_column_bounds(col, lower, upper); }

  lp::Basis warm_basis;  // last optimal basis, reused by the next solve

  GeneratorColumns& gen(int g) { return gen_[g]; }
  [[nodiscard]] const std::vector<GeneratorColumns>& generators() const { return gen_; }
  [[nodiscard]] const std::vector<ResColumns>& res() const { return res_; }
  [[nodiscard]] const std::vector<StorageColumns>& storage() const { return sto_; }
  [[nodiscard]] const SystemColumns& system() const { return sys_; }

 private:
  friend UCModel build_uc(const Scenario&, const LossRule&, bool);

  int add_row(RowKind kind, int unit, int hour, double lower, double upper, std::vector<lp::Entry> entries);

  Scenario scenario_;
  LossRule loss_rule_;
  bool relaxed_ = false;
  NadirCone cone_{};
  lp::LinearProgram lp_;
  std::vector<RowTag> rows_;
  std::vector<NadirCutInfo> cuts_;
  std::vector<int> integer_columns_;
  std::vector<double> integer_size_;
  std::vector<int> max_loss_rows_;
  std::vector<GeneratorColumns> gen_;
  std::vector<ResColumns> res_;
  std::vector<StorageColumns> sto_;
  SystemColumns sys_;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unit normals of the cuts every hour starts with: eight directions, 45
// degrees apart. Normals (-1, 0) and (1, 0) are u >= 0 and v >= 0.
std::vector<std::array<double, 2>> seed_cut_normals();

// Throws ModelError on horizon mismatch, empty fleet or a loss profile of
// the wrong length.
UCModel build_uc(const Scenario& scenario, const LossRule& loss_rule, bool relaxed);

}  // namespace ascost

#endif  // ASCOST_UC_MODEL_HPP
