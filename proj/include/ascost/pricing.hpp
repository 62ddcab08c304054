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

// Ancillary-service prices from the relaxed multipliers, the payment
// decomposition implied by LP strong duality, and per-unit stand-alone
// market sizes.

#ifndef ASCOST_PRICING_HPP
#define ASCOST_PRICING_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ascost/uc_solve.hpp"

namespace ascost {

struct AsPrices {
  std::vector<double> lambda_e, lambda_h, lambda_pfr, lambda_efr, omega_loss;
};

class PricingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prices from the stationarity conditions of H, PFR, EFR and P_loss:
//   lambda_h   = (mu3 - mu1)/f0 + mu_rocof
//   lambda_pfr = (mu3 + mu1)/T_pfr + mu_qss
//   lambda_efr = (mu1 - mu3) T_efr/(4 df) + mu2/sqrt(df) + mu_qss
//   omega      = mu_rocof f0/(2 RoCoF_max) + mu2/sqrt(df) + mu_qss
// Each is compared with the multiplier reported for the matching row
// (aggregation rows for the three services, loss rows for omega) and a
// PricingError is thrown if they differ by more than `rel_tol`.
AsPrices as_prices_from_duals(const DualSolution& duals, const SystemParams& params, double rel_tol = 1e-6);

struct TechnologyTotals {
  std::string technology;
  double energy_revenue = 0.0;  // lambda_e(t) * output
  double inertia_revenue = 0.0;
  double pfr_revenue = 0.0;
  double efr_revenue = 0.0;
  double cost = 0.0;  // own offers times quantities
};

// Horizon totals are in GBP. "Omitted" collects the multipliers of rows
// with a nonzero right-hand side that the textbook display leaves out
// (commitment transition at the first hour, minimum up and down time).
struct MarketBreakdown {
  // Per hour.
  std::vector<double> energy_payment;  // demand * lambda_e
  std::vector<double> inertia_revenue, pfr_revenue, efr_revenue;
  std::vector<double> omega;  // P_loss * omega_loss

  double energy_payments = 0.0;
  double as_payments = 0.0;
  double system_costs = 0.0;
  double thermal_profits = 0.0;
  double renewable_profits = 0.0;
  double storage_profits = 0.0;
  double omitted_terms = 0.0;
  double loss_link_charges = 0.0;  // endogenous loss rule only

  double lhs = 0.0;           // energy + AS payments
  double rhs_displayed = 0.0;  // costs + the three profit blocks
  double rhs_full = 0.0;       // rhs_displayed + omitted + loss-link charges
  double residual_full = 0.0;       // |lhs - rhs_full| / max(1, |lhs|)
  double residual_displayed = 0.0;  // |lhs - rhs_displayed| / max(1, |lhs|)
  double max_omega_residual = 0.0;  // worst hourly Omega identity residual, relative

  std::vector<TechnologyTotals> by_technology;
};

class AuditError : public std::runtime_error {
 public:
  AuditError(const std::string& what, MarketBreakdown breakdown)
      : std::runtime_error(what), breakdown_(std::move(breakdown)) {}
  [[nodiscard]] const MarketBreakdown& breakdown() const { return breakdown_; }

 private:
  MarketBreakdown breakdown_;
};

// Itemizes the strong-duality identity of one relaxed solve. Throws
// AuditError when the full identity misses by more than `rel_tol`, or an
// hourly Omega identity by more than `omega_tol` relative to max(1, Omega).
MarketBreakdown duality_audit(const RelaxedResult& relaxed, const Scenario& scenario, double rel_tol = 1e-5,
                              double omega_tol = 1e-6);

struct StandAloneEntry {
  std::string unit_id;
  std::string technology;
  double dispatch_mw = 0.0;
  double omega = 0.0;  // GBP
};

struct StandAloneCosts {
  std::vector<std::vector<StandAloneEntry>> hours;  // per hour, in fleet order
};

struct StandAloneOptions {
  SolveOptions solve;
  int threads = 0;             // 0: hardware concurrency
  double dispatch_tol = 1e-6;  // MW below which a unit counts as not dispatched
  double zero_clamp = 1e-8;    // relative to the largest |Omega|
};

// Stand-alone market of every loss-eligible unit that is dispatched
// (discharging, for storage) in some hour: one relaxed solve per unit with
// the loss parameter set to that unit's hourly output. Omega(i, t) =
// output(i, t) * omega_loss(t). Units at zero output carry no entry that
// hour. A unit whose solve is infeasible raises InfeasibleError naming it.
StandAloneCosts standalone_markets(const Scenario& scenario, const DispatchSolution& block_i,
                                   const StandAloneOptions& options = {});

}  // namespace ascost

#endif  // ASCOST_PRICING_HPP
