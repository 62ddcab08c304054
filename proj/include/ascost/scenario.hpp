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

// Market instance: fleets, hourly profiles and frequency-security limits.
//
// Scenario documents are JSON with units spelled out in the key names
// (e.g. "p_max_mw", "inertia_offer_gbp_per_mws"). The layout is described
// in docs/scenario_format.md and versioned through "schema_version".

#ifndef ASCOST_SCENARIO_HPP
#define ASCOST_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ascost {

inline constexpr int kScenarioSchemaVersion = 1;

struct SystemParams {
  double f0 = 50.0;           // Hz
  double rocof_max = 1.0;     // Hz/s
  double delta_f_max = 0.8;   // Hz
  double t_efr = 1.0;         // s
  double t_pfr = 10.0;        // s

  bool operator==(const SystemParams&) const = default;
};

struct GeneratorSpec {
  std::string id;
  std::string technology;
  double p_max = 0.0;       // MW
  double p_msg = 0.0;       // MW
  double h = 0.0;           // inertia constant, s
  double pfr_max = 0.0;     // MW
  double lambda_e = 0.0;    // GBP/MWh
  double lambda_h = 0.0;    // GBP/MWs
  double lambda_pfr = 0.0;  // GBP/MW
  int t_mut = 0;            // h
  int t_mdt = 0;            // h
  int t_st = 0;             // h
  bool loss_eligible = true;
  bool initially_on = false;

  bool operator==(const GeneratorSpec&) const = default;
};

struct ResSpec {
  std::string id;
  std::string technology;
  double p_max = 0.0;
  std::vector<double> cf;
  double lambda_e = 0.0;
  bool loss_eligible = true;

  bool operator==(const ResSpec&) const = default;
};

enum class StorageKind { kPhes, kBess };

std::string_view to_string(StorageKind kind);

struct StorageSpec {
  std::string id;
  std::string technology;
  StorageKind kind = StorageKind::kBess;
  double p_max = 0.0;
  double p_msg = 0.0;
  double e_min = 0.0;  // MWh
  double e_max = 0.0;
  double e_ini = 0.0;
  double e_end = 0.0;
  double eta_cha = 1.0;
  double eta_dis = 1.0;
  double h = 0.0;
  double pfr_max = 0.0;
  double efr_max = 0.0;
  double lambda_e = 0.0;
  double lambda_h = 0.0;
  double lambda_pfr = 0.0;
  double lambda_efr = 0.0;
  bool loss_eligible = true;

  bool operator==(const StorageSpec&) const = default;
};

struct Scenario {
  std::string name;
  SystemParams params;
  std::vector<GeneratorSpec> generators;
  std::vector<ResSpec> res_units;
  std::vector<StorageSpec> storage_units;
  std::vector<double> demand;  // MW per hour
  int horizon = 0;
  // Credible-loss floor per hour (MW); used by the fixed-profile loss rule.
  std::optional<std::vector<double>> p_loss_cap;

  [[nodiscard]] std::size_t unit_count() const {
    return generators.size() + res_units.size() + storage_units.size();
  }
  // Copy restricted to the first `hours` hours.
  [[nodiscard]] Scenario truncated(int hours) const;

  bool operator==(const Scenario&) const = default;
};

struct Diagnostic {
  std::string path;
  std::string message;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document (not JSON, wrong schema version).
class ParseError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

// File could not be read or written.
class IoError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

class ValidationError : public ScenarioError {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Every violated invariant, each tagged with the field path. Empty when valid.
std::vector<Diagnostic> validate(const Scenario& scenario);

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string write_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Stable 64-bit FNV-1a digest of the canonical document, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

// Future-GB style fleet with a deterministic synthetic week of demand and
// capacity factors.
Scenario gb_template();

}  // namespace ascost

#endif  // ASCOST_SCENARIO_HPP
