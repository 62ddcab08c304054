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

#include "ascost/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ascost {

using nlohmann::json;

std::string_view to_string(StorageKind kind) { return kind == StorageKind::kPhes ? "PHES" : "BESS"; }

namespace {

std::string join_messages(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  os << "scenario validation failed (" << diags.size() << " issue" << (diags.size() == 1 ? "" : "s") << ")";
  for (const auto& d : diags) os << "\n  " << d.path << ": " << d.message;
  return os.str();
}

// Reads typed fields from a JSON object, recording problems instead of
// throwing so that one pass reports every issue.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

  const json* field(const json& obj, const std::string& path, const char* key, bool required) {
    if (!obj.is_object()) {
      diags_.push_back({path, "expected an object"});
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) diags_.push_back({join(path, key), "missing required field"});
      return nullptr;
    }
    return &*it;
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (v == nullptr) return fallback;
    if (!v->is_number()) {
      diags_.push_back({join(path, key), "expected a number"});
      return fallback;
    }
    return v->get<double>();
  }

  int integer(const json& obj, const std::string& path, const char* key, int fallback, bool required = false) {
    const json* v = field(obj, path, key, required);
    if (v == nullptr) return fallback;
    if (v->is_number_integer()) return v->get<int>();
    if (v->is_number() && std::floor(v->get<double>()) == v->get<double>()) return static_cast<int>(v->get<double>());
    diags_.push_back({join(path, key), "expected an integer"});
    return fallback;
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
    const json* v = field(obj, path, key, false);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) {
      diags_.push_back({join(path, key), "expected true or false"});
      return fallback;
    }
    return v->get<bool>();
  }

  std::string string(const json& obj, const std::string& path, const char* key, std::string fallback,
                     bool required = true) {
    const json* v = field(obj, path, key, required);
    if (v == nullptr) return fallback;
    if (!v->is_string()) {
      diags_.push_back({join(path, key), "expected a string"});
      return fallback;
    }
    return v->get<std::string>();
  }

  std::vector<double> series(const json& obj, const std::string& path, const char* key, bool required = true) {
    std::vector<double> out;
    const json* v = field(obj, path, key, required);
    if (v == nullptr) return out;
    if (!v->is_array()) {
      diags_.push_back({join(path, key), "expected an array of numbers"});
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        diags_.push_back({join(path, key) + "[" + std::to_string(i) + "]", "expected a number"});
        out.push_back(0.0);
      } else {
        out.push_back((*v)[i].get<double>());
      }
    }
    return out;
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

 private:
  std::vector<Diagnostic>& diags_;
};

void check(std::vector<Diagnostic>& diags, bool ok, std::string path, std::string message) {
  if (!ok) diags.push_back({std::move(path), std::move(message)});
}

std::string at(std::string_view base, std::size_t i) { return std::string(base) + "[" + std::to_string(i) + "]"; }

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : ScenarioError(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Scenario Scenario::truncated(int hours) const {
  Scenario out = *this;
  if (hours <= 0 || hours >= horizon) return out;
  out.horizon = hours;
  out.demand.resize(hours);
  for (auto& r : out.res_units) r.cf.resize(std::min<std::size_t>(r.cf.size(), hours));
  if (out.p_loss_cap) out.p_loss_cap->resize(std::min<std::size_t>(out.p_loss_cap->size(), hours));
  return out;
}

std::vector<Diagnostic> validate(const Scenario& s) {
  std::vector<Diagnostic> d;
  const SystemParams& p = s.params;
  check(d, p.f0 > 0, "system.f0_hz", "must be > 0");
  check(d, p.rocof_max > 0, "system.rocof_max_hz_per_s", "must be > 0");
  check(d, p.delta_f_max > 0, "system.delta_f_max_hz", "must be > 0");
  check(d, p.t_efr > 0, "system.t_efr_s", "must be > 0");
  check(d, p.t_pfr > 0, "system.t_pfr_s", "must be > 0");
  check(d, p.t_efr < p.t_pfr, "system.t_efr_s", "must be smaller than t_pfr_s");
  check(d, p.delta_f_max < p.f0, "system.delta_f_max_hz", "must be smaller than f0_hz");

  check(d, s.horizon >= 1, "horizon_h", "must be at least 1");
  check(d, static_cast<int>(s.demand.size()) == s.horizon, "demand_mw",
        "length " + std::to_string(s.demand.size()) + " differs from horizon " + std::to_string(s.horizon));
  for (std::size_t t = 0; t < s.demand.size(); ++t) {
    check(d, std::isfinite(s.demand[t]) && s.demand[t] > 0, at("demand_mw", t), "demand must be > 0");
  }
  if (s.p_loss_cap) {
    check(d, static_cast<int>(s.p_loss_cap->size()) == s.horizon, "p_loss_cap_mw", "length differs from horizon");
    for (std::size_t t = 0; t < s.p_loss_cap->size(); ++t)
      check(d, (*s.p_loss_cap)[t] >= 0, at("p_loss_cap_mw", t), "must be >= 0");
  }
  check(d, s.unit_count() > 0, "generators", "fleet is empty (no generators, res or storage)");

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id, const std::string& path) {
    check(d, !id.empty(), path + ".id", "must be non-empty");
    check(d, ids.insert(id).second || id.empty(), path + ".id", "duplicate unit id '" + id + "'");
  };

  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    const auto& g = s.generators[i];
    const std::string base = at("generators", i);
    check_id(g.id, base);
    check(d, g.p_max > 0, base + ".p_max_mw", "must be > 0");
    check(d, g.p_msg >= 0 && g.p_msg <= g.p_max, base + ".p_msg_mw", "must satisfy 0 <= p_msg <= p_max");
    check(d, g.pfr_max >= 0 && g.pfr_max <= g.p_max, base + ".pfr_max_mw", "must satisfy 0 <= pfr_max <= p_max");
    check(d, g.h >= 0, base + ".inertia_h_s", "must be >= 0");
    check(d, g.t_mut >= 0, base + ".min_up_h", "must be >= 0");
    check(d, g.t_mdt >= 0, base + ".min_down_h", "must be >= 0");
    check(d, g.t_st >= 0, base + ".startup_h", "must be >= 0");
    check(d, std::isfinite(g.lambda_e) && std::isfinite(g.lambda_h) && std::isfinite(g.lambda_pfr),
          base + ".energy_offer_gbp_per_mwh", "offers must be finite");
  }
  for (std::size_t i = 0; i < s.res_units.size(); ++i) {
    const auto& r = s.res_units[i];
    const std::string base = at("res", i);
    check_id(r.id, base);
    check(d, r.p_max >= 0, base + ".p_max_mw", "must be >= 0");
    check(d, static_cast<int>(r.cf.size()) == s.horizon, base + ".capacity_factor",
          "length " + std::to_string(r.cf.size()) + " differs from horizon " + std::to_string(s.horizon));
    for (std::size_t t = 0; t < r.cf.size(); ++t)
      check(d, r.cf[t] >= 0 && r.cf[t] <= 1, at(base + ".capacity_factor", t), "must lie in [0, 1]");
    check(d, std::isfinite(r.lambda_e), base + ".energy_offer_gbp_per_mwh", "must be finite");
  }
  for (std::size_t i = 0; i < s.storage_units.size(); ++i) {
    const auto& u = s.storage_units[i];
    const std::string base = at("storage", i);
    check_id(u.id, base);
    check(d, u.p_max > 0, base + ".p_max_mw", "must be > 0");
    check(d, u.p_msg >= 0 && u.p_msg <= u.p_max, base + ".p_msg_mw", "must satisfy 0 <= p_msg <= p_max");
    check(d, u.e_min >= 0 && u.e_min <= u.e_max, base + ".e_min_mwh", "must satisfy 0 <= e_min <= e_max");
    check(d, u.e_ini >= u.e_min && u.e_ini <= u.e_max, base + ".e_ini_mwh", "must lie in [e_min, e_max]");
    check(d, u.e_end >= u.e_min && u.e_end <= u.e_max, base + ".e_end_mwh", "must lie in [e_min, e_max]");
    check(d, u.eta_cha > 0 && u.eta_cha <= 1, base + ".eta_cha", "must lie in (0, 1]");
    check(d, u.eta_dis > 0 && u.eta_dis <= 1, base + ".eta_dis", "must lie in (0, 1]");
    check(d, u.h >= 0, base + ".inertia_h_s", "must be >= 0");
    check(d, u.pfr_max >= 0 && u.pfr_max <= u.p_max, base + ".pfr_max_mw", "must satisfy 0 <= pfr_max <= p_max");
    check(d, u.efr_max >= 0 && u.efr_max <= u.p_max, base + ".efr_max_mw", "must satisfy 0 <= efr_max <= p_max");
    if (u.kind == StorageKind::kBess) {
      check(d, u.pfr_max == 0, base + ".pfr_max_mw", "BESS provides EFR only; pfr_max must be 0");
      check(d, u.h == 0, base + ".inertia_h_s", "BESS has no synchronous inertia; must be 0");
    } else {
      check(d, u.efr_max == 0, base + ".efr_max_mw", "PHES provides PFR only; efr_max must be 0");
    }
  }
  return d;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("malformed scenario document: top level must be an object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    throw ParseError("malformed scenario document: missing integer schema_version");
  }
  if (doc["schema_version"].get<int>() != kScenarioSchemaVersion) {
    throw ParseError("unsupported schema_version " + std::to_string(doc["schema_version"].get<int>()) +
                     " (expected " + std::to_string(kScenarioSchemaVersion) + ")");
  }

  std::vector<Diagnostic> diags;
  Reader rd(diags);
  Scenario s;
  s.name = rd.string(doc, "", "name", "", false);
  s.horizon = rd.integer(doc, "", "horizon_h", 0, true);
  if (const json* sys = rd.field(doc, "", "system", true)) {
    s.params.f0 = rd.number(*sys, "system", "f0_hz", 0);
    s.params.rocof_max = rd.number(*sys, "system", "rocof_max_hz_per_s", 0);
    s.params.delta_f_max = rd.number(*sys, "system", "delta_f_max_hz", 0);
    s.params.t_efr = rd.number(*sys, "system", "t_efr_s", 0);
    s.params.t_pfr = rd.number(*sys, "system", "t_pfr_s", 0);
  }
  s.demand = rd.series(doc, "", "demand_mw");
  if (doc.contains("p_loss_cap_mw")) s.p_loss_cap = rd.series(doc, "", "p_loss_cap_mw");

  auto list = [&](const char* key) -> std::vector<const json*> {
    std::vector<const json*> out;
    const json* v = rd.field(doc, "", key, false);
    if (v == nullptr) return out;
    if (!v->is_array()) {
      diags.push_back({key, "expected an array"});
      return out;
    }
    for (const auto& e : *v) out.push_back(&e);
    return out;
  };

  const auto gens = list("generators");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const json& o = *gens[i];
    const std::string b = at("generators", i);
    GeneratorSpec g;
    g.id = rd.string(o, b, "id", "");
    g.technology = rd.string(o, b, "technology", "", false);
    g.p_max = rd.number(o, b, "p_max_mw", 0);
    g.p_msg = rd.number(o, b, "p_msg_mw", 0);
    g.h = rd.number(o, b, "inertia_h_s", 0);
    g.pfr_max = rd.number(o, b, "pfr_max_mw", 0, false);
    g.lambda_e = rd.number(o, b, "energy_offer_gbp_per_mwh", 0);
    g.lambda_h = rd.number(o, b, "inertia_offer_gbp_per_mws", 0, false);
    g.lambda_pfr = rd.number(o, b, "pfr_offer_gbp_per_mw", 0, false);
    g.t_mut = rd.integer(o, b, "min_up_h", 0);
    g.t_mdt = rd.integer(o, b, "min_down_h", 0);
    g.t_st = rd.integer(o, b, "startup_h", 0);
    g.loss_eligible = rd.boolean(o, b, "loss_eligible", true);
    g.initially_on = rd.boolean(o, b, "initially_on", false);
    s.generators.push_back(std::move(g));
  }
  const auto res = list("res");
  for (std::size_t i = 0; i < res.size(); ++i) {
    const json& o = *res[i];
    const std::string b = at("res", i);
    ResSpec r;
    r.id = rd.string(o, b, "id", "");
    r.technology = rd.string(o, b, "technology", "", false);
    r.p_max = rd.number(o, b, "p_max_mw", 0);
    r.cf = rd.series(o, b, "capacity_factor");
    r.lambda_e = rd.number(o, b, "energy_offer_gbp_per_mwh", 0);
    r.loss_eligible = rd.boolean(o, b, "loss_eligible", true);
    s.res_units.push_back(std::move(r));
  }
  const auto sto = list("storage");
  for (std::size_t i = 0; i < sto.size(); ++i) {
    const json& o = *sto[i];
    const std::string b = at("storage", i);
    StorageSpec u;
    u.id = rd.string(o, b, "id", "");
    u.technology = rd.string(o, b, "technology", "", false);
    const std::string kind = rd.string(o, b, "kind", "BESS");
    if (kind == "PHES") {
      u.kind = StorageKind::kPhes;
    } else if (kind == "BESS") {
      u.kind = StorageKind::kBess;
    } else {
      diags.push_back({b + ".kind", "must be \"PHES\" or \"BESS\""});
    }
    u.p_max = rd.number(o, b, "p_max_mw", 0);
    u.p_msg = rd.number(o, b, "p_msg_mw", 0, false);
    u.e_min = rd.number(o, b, "e_min_mwh", 0, false);
    u.e_max = rd.number(o, b, "e_max_mwh", 0);
    u.e_ini = rd.number(o, b, "e_ini_mwh", 0);
    u.e_end = rd.number(o, b, "e_end_mwh", 0);
    u.eta_cha = rd.number(o, b, "eta_cha", 1);
    u.eta_dis = rd.number(o, b, "eta_dis", 1);
    u.h = rd.number(o, b, "inertia_h_s", 0, false);
    u.pfr_max = rd.number(o, b, "pfr_max_mw", 0, false);
    u.efr_max = rd.number(o, b, "efr_max_mw", 0, false);
    u.lambda_e = rd.number(o, b, "energy_offer_gbp_per_mwh", 0);
    u.lambda_h = rd.number(o, b, "inertia_offer_gbp_per_mws", 0, false);
    u.lambda_pfr = rd.number(o, b, "pfr_offer_gbp_per_mw", 0, false);
    u.lambda_efr = rd.number(o, b, "efr_offer_gbp_per_mw", 0, false);
    u.loss_eligible = rd.boolean(o, b, "loss_eligible", true);
    s.storage_units.push_back(std::move(u));
  }

  for (auto& d : validate(s)) diags.push_back(std::move(d));
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

json to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = s.name;
  doc["horizon_h"] = s.horizon;
  doc["system"] = {{"f0_hz", s.params.f0},
                   {"rocof_max_hz_per_s", s.params.rocof_max},
                   {"delta_f_max_hz", s.params.delta_f_max},
                   {"t_efr_s", s.params.t_efr},
                   {"t_pfr_s", s.params.t_pfr}};
  doc["demand_mw"] = s.demand;
  if (s.p_loss_cap) doc["p_loss_cap_mw"] = *s.p_loss_cap;
  doc["generators"] = json::array();
  for (const auto& g : s.generators) {
    doc["generators"].push_back({{"id", g.id},
                                 {"technology", g.technology},
                                 {"p_max_mw", g.p_max},
                                 {"p_msg_mw", g.p_msg},
                                 {"inertia_h_s", g.h},
                                 {"pfr_max_mw", g.pfr_max},
                                 {"energy_offer_gbp_per_mwh", g.lambda_e},
                                 {"inertia_offer_gbp_per_mws", g.lambda_h},
                                 {"pfr_offer_gbp_per_mw", g.lambda_pfr},
                                 {"min_up_h", g.t_mut},
                                 {"min_down_h", g.t_mdt},
                                 {"startup_h", g.t_st},
                                 {"loss_eligible", g.loss_eligible},
                                 {"initially_on", g.initially_on}});
  }
  doc["res"] = json::array();
  for (const auto& r : s.res_units) {
    doc["res"].push_back({{"id", r.id},
                          {"technology", r.technology},
                          {"p_max_mw", r.p_max},
                          {"capacity_factor", r.cf},
                          {"energy_offer_gbp_per_mwh", r.lambda_e},
                          {"loss_eligible", r.loss_eligible}});
  }
  doc["storage"] = json::array();
  for (const auto& u : s.storage_units) {
    doc["storage"].push_back({{"id", u.id},
                              {"technology", u.technology},
                              {"kind", std::string(to_string(u.kind))},
                              {"p_max_mw", u.p_max},
                              {"p_msg_mw", u.p_msg},
                              {"e_min_mwh", u.e_min},
                              {"e_max_mwh", u.e_max},
                              {"e_ini_mwh", u.e_ini},
                              {"e_end_mwh", u.e_end},
                              {"eta_cha", u.eta_cha},
                              {"eta_dis", u.eta_dis},
                              {"inertia_h_s", u.h},
                              {"pfr_max_mw", u.pfr_max},
                              {"efr_max_mw", u.efr_max},
                              {"energy_offer_gbp_per_mwh", u.lambda_e},
                              {"inertia_offer_gbp_per_mws", u.lambda_h},
                              {"pfr_offer_gbp_per_mw", u.lambda_pfr},
                              {"efr_offer_gbp_per_mw", u.lambda_efr},
                              {"loss_eligible", u.loss_eligible}});
  }
  return doc;
}

}  // namespace

std::string write_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scenario file '" + path.string() + "'");
  out << write_scenario(s);
}

std::string scenario_hash(const Scenario& s) {
  const std::string canon = to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ascost
