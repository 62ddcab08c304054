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

// Frequency-security limits after a generation loss.
//
// With z = (H, EFR, PFR, P_loss) the nadir limit is the second-order cone
//
//   || A z || <= b'z,
//   A = [ 1/f0  -a         -1/T_pfr  0          ]    a = T_efr / (4 df)
//       [ 0     -1/sqrt(df)  0       1/sqrt(df) ]
//   b = [ 1/f0  -a          1/T_pfr  0          ]
//
// which is the same set as u * v >= (P_loss - EFR)^2 / (4 df) with
// u = H/f0 - a EFR >= 0 and v = PFR/T_pfr >= 0.

#ifndef ASCOST_FREQUENCY_HPP
#define ASCOST_FREQUENCY_HPP

#include <array>

#include "ascost/scenario.hpp"

namespace ascost {

struct NadirCone {
  std::array<std::array<double, 4>, 2> a;
  std::array<double, 4> b;

  // (A z, b'z) for z = (H, EFR, PFR, P_loss).
  [[nodiscard]] std::array<double, 3> evaluate(const std::array<double, 4>& z) const;
};

NadirCone nadir_cone(const SystemParams& params);

// Coefficients of the supporting half-space b'z - n'Az >= 0 for a unit
// normal n, ordered as z.
std::array<double, 4> nadir_cut(const NadirCone& cone, double n1, double n2);

// Cone membership ||Az|| <= b'z, evaluated exactly as written.
bool nadir_feasible(double h, double efr, double pfr, double p_loss, const SystemParams& params);

// ||Az|| - b'z; positive when the nadir limit is violated.
double nadir_violation(double h, double efr, double pfr, double p_loss, const SystemParams& params);

// Smallest H (MWs) satisfying the nadir limit for given EFR, PFR and loss;
// infinite when PFR = 0 and the loss differs from EFR.
double nadir_min_inertia(double efr, double pfr, double p_loss, const SystemParams& params);

// P_loss * f0 / (2 RoCoF_max).
double rocof_min_inertia(double p_loss, const SystemParams& params);

}  // namespace ascost

#endif  // ASCOST_FREQUENCY_HPP
