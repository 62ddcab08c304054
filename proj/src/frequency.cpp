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

#include "ascost/frequency.hpp"

#include <cmath>
#include <limits>

namespace ascost {

NadirCone nadir_cone(const SystemParams& p) {
  const double a = p.t_efr / (4.0 * p.delta_f_max);
  const double r = 1.0 / std::sqrt(p.delta_f_max);
  NadirCone c;
  c.a[0] = {1.0 / p.f0, -a, -1.0 / p.t_pfr, 0.0};
  c.a[1] = {0.0, -r, 0.0, r};
  c.b = {1.0 / p.f0, -a, 1.0 / p.t_pfr, 0.0};
  return c;
}

std::array<double, 3> NadirCone::evaluate(const std::array<double, 4>& z) const {
  std::array<double, 3> out{};
  for (int j = 0; j < 4; ++j) {
    out[0] += a[0][j] * z[j];
    out[1] += a[1][j] * z[j];
    out[2] += b[j] * z[j];
  }
  return out;
}

std::array<double, 4> nadir_cut(const NadirCone& cone, double n1, double n2) {
  std::array<double, 4> row{};
  for (int j = 0; j < 4; ++j) row[j] = cone.b[j] - n1 * cone.a[0][j] - n2 * cone.a[1][j];
  return row;
}

double nadir_violation(double h, double efr, double pfr, double p_loss, const SystemParams& params) {
  const auto v = nadir_cone(params).evaluate({h, efr, pfr, p_loss});
  return std::hypot(v[0], v[1]) - v[2];
}

bool nadir_feasible(double h, double efr, double pfr, double p_loss, const SystemParams& params) {
  return nadir_violation(h, efr, pfr, p_loss, params) <= 0.0;
}

double nadir_min_inertia(double efr, double pfr, double p_loss, const SystemParams& p) {
  const double a = p.t_efr / (4.0 * p.delta_f_max);
  const double gap = p_loss - efr;
  if (gap == 0.0) return p.f0 * a * efr;
  if (pfr <= 0.0) return std::numeric_limits<double>::infinity();
  return p.f0 * (a * efr + gap * gap * p.t_pfr / (4.0 * p.delta_f_max * pfr));
}

double rocof_min_inertia(double p_loss, const SystemParams& params) {
  return p_loss * params.f0 / (2.0 * params.rocof_max);
}

}  // namespace ascost
