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

// Future-GB template fleet. Unit counts are uniform splits of the installed
// capacities; see docs/scenario_format.md for the full table and the profile
// recipe. The week is generated from a fixed seed, so the template is
// identical on every platform (only raw mt19937 output is used).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ascost/scenario.hpp"

namespace ascost {
namespace {

constexpr int kHours = 168;
constexpr std::uint32_t kProfileSeed = 20260317;
constexpr double kPeakDemandMw = 62700.0;

// Uniform in [-1, 1) from raw engine output.
double noise(std::mt19937& rng) { return static_cast<double>(rng()) / 2147483648.0 - 1.0; }

std::string unit_id(const std::string& prefix, int i, int count) {
  if (count == 1) return prefix;
  const int width = count >= 100 ? 3 : (count >= 10 ? 2 : 1);
  std::string num = std::to_string(i + 1);
  return prefix + "-" + std::string(width - num.size(), '0') + num;
}

struct ThermalClass {
  const char* technology;
  const char* prefix;
  int count;
  double p_max;
  double p_msg;
  double pfr_share;
  double lambda_e;
  double lambda_h;
  double lambda_pfr;
  int t_mut;
  int t_mdt;
  int t_st;
  bool initially_on;
};

// Inertia constant 5 s for every synchronous unit.
constexpr ThermalClass kThermal[] = {
    {"Big Nuclear", "BIGNUC", 1, 1800, 1800, 0.0, 78, 1, 0, 24, 24, 4, true},
    {"Nuclear", "NUC", 2, 1600, 1600, 0.0, 78, 1, 0, 24, 24, 4, true},
    {"CCGT", "CCGT", 25, 1000, 500, 0.30, 99, 2, 3, 4, 4, 1, false},
    {"OCGT", "OCGT", 10, 100, 50, 0.30, 222, 5, 7, 1, 1, 0, false},
    {"Biomass", "BIO", 6, 500, 450, 0.20, 98, 4, 4.5, 6, 6, 2, false},
    {"BECCS", "BECCS", 2, 500, 450, 0.20, 138, 3.5, 4.5, 6, 6, 2, false},
};

std::vector<double> demand_profile() {
  std::mt19937 rng(kProfileSeed);
  std::vector<double> d(kHours);
  for (int t = 0; t < kHours; ++t) {
    const int hour = t % 24;
    const int day = t / 24;
    const double s = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * (hour - 4) / 24.0);
    const double weekday = day >= 5 ? 0.9 : 1.0;
    d[t] = std::round((0.62 + 0.38 * s) * weekday * kPeakDemandMw * (1.0 + 0.01 * noise(rng)));
  }
  return d;
}

// Slowly varying weather front plus hourly jitter, clipped to [0, 1].
std::vector<double> wind_profile(std::mt19937& rng, double mean, double phase) {
  std::vector<double> cf(kHours);
  for (int t = 0; t < kHours; ++t) {
    const double front = std::sin(2 * std::numbers::pi * t / 96.0 + phase);
    const double v = mean + 0.25 * front + 0.05 * noise(rng);
    cf[t] = std::round(std::clamp(v, 0.0, 1.0) * 1e4) / 1e4;
  }
  return cf;
}

std::vector<double> solar_profile(std::mt19937& rng) {
  std::vector<double> cf(kHours);
  for (int t = 0; t < kHours; ++t) {
    const int hour = t % 24;
    const double sun = std::sin(std::numbers::pi * (hour - 6) / 12.0);
    const double v = hour >= 6 && hour <= 18 ? 0.7 * sun * (0.85 + 0.15 * noise(rng)) : 0.0;
    cf[t] = std::round(std::clamp(v, 0.0, 1.0) * 1e4) / 1e4;
  }
  return cf;
}

}  // namespace

Scenario gb_template() {
  Scenario s;
  s.name = "gb-template";
  s.horizon = kHours;
  s.params = SystemParams{50.0, 1.0, 0.8, 1.0, 10.0};
  s.demand = demand_profile();

  for (const ThermalClass& c : kThermal) {
    for (int i = 0; i < c.count; ++i) {
      GeneratorSpec g;
      g.id = unit_id(c.prefix, i, c.count);
      g.technology = c.technology;
      g.p_max = c.p_max;
      g.p_msg = c.p_msg;
      g.h = 5.0;
      g.pfr_max = c.pfr_share * c.p_max;
      g.lambda_e = c.lambda_e;
      g.lambda_h = c.lambda_h;
      g.lambda_pfr = c.lambda_pfr;
      g.t_mut = c.t_mut;
      g.t_mdt = c.t_mdt;
      g.t_st = c.t_st;
      g.initially_on = c.initially_on;
      s.generators.push_back(std::move(g));
    }
  }

  std::mt19937 rng(kProfileSeed + 1);
  // Farms within a class share one weather profile with a small site offset.
  auto add_res = [&](const char* tech, const char* prefix, int count, double p_max, double lambda_e,
                     auto&& profile) {
    for (int i = 0; i < count; ++i) {
      ResSpec r;
      r.id = unit_id(prefix, i, count);
      r.technology = tech;
      r.p_max = p_max;
      r.cf = profile(i);
      r.lambda_e = lambda_e;
      s.res_units.push_back(std::move(r));
    }
  };
  add_res("Offshore Wind", "OFW", 28, 1800, 47, [&](int i) { return wind_profile(rng, 0.45, 0.05 * i); });
  add_res("Onshore Wind", "ONW", 50, 600, 45, [&](int i) { return wind_profile(rng, 0.30, 0.8 + 0.03 * i); });
  add_res("Solar PV", "PV", 168, 250, 39, [&](int) { return solar_profile(rng); });

  for (int i = 0; i < 12; ++i) {
    StorageSpec u;
    u.id = unit_id("PHES", i, 12);
    u.technology = "PHES";
    u.kind = StorageKind::kPhes;
    u.p_max = 400;
    u.e_max = 6 * 400;
    u.e_ini = u.e_end = 0.5 * u.e_max;
    u.eta_cha = u.eta_dis = 0.87;
    u.h = 5.0;
    u.pfr_max = 0.20 * 400;
    u.lambda_e = 60;
    u.lambda_h = 1;
    u.lambda_pfr = 5;
    s.storage_units.push_back(std::move(u));
  }
  for (int i = 0; i < 200; ++i) {
    StorageSpec u;
    u.id = unit_id("BESS", i, 200);
    u.technology = "BESS";
    u.kind = StorageKind::kBess;
    u.p_max = 100;
    u.e_max = 2 * 100;
    u.e_ini = u.e_end = 0.5 * u.e_max;
    u.eta_cha = u.eta_dis = 0.95;
    u.efr_max = 0.05 * 100;
    u.lambda_e = 50;
    u.lambda_efr = 10;
    s.storage_units.push_back(std::move(u));
  }
  return s;
}

}  // namespace ascost
