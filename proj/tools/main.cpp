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

// ascost: validate scenarios, run the scheduling, pricing and allocation
// pipeline, and allocate stand-alone cost tables.
//
// Exit codes: 0 ok, 1 invalid input, 2 infeasible, 3 internal, 4 I/O.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ascost/allocation.hpp"
#include "json.hpp"
#include "output.hpp"

namespace ascost::tools {
namespace {

enum Exit { kOk = 0, kInvalid = 1, kInfeasible = 2, kInternal = 3, kIo = 4 };

using nlohmann::json;

int report(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    for (const auto& d : v->diagnostics()) std::cerr << "  " << d.path << ": " << d.message << "\n";
  }
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const OutputError*>(&e) ||
      dynamic_cast<const std::filesystem::filesystem_error*>(&e))
    return kIo;
  if (dynamic_cast<const ScenarioError*>(&e) || dynamic_cast<const AllocationError*>(&e) ||
      dynamic_cast<const CLI::Error*>(&e))
    return kInvalid;
  if (dynamic_cast<const InfeasibleError*>(&e)) return kInfeasible;
  return kInternal;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path) {
  try {
    const Scenario s = load_scenario(path);
    std::cout << "ok: " << s.name << ", " << s.horizon << " h, " << s.generators.size() << " generators, "
              << s.res_units.size() << " renewable farms, " << s.storage_units.size() << " storage units\n";
    return kOk;
  } catch (const std::exception& e) {
    return report(e);
  }
}

// ---------------------------------------------------------------- run

struct RunFlags {
  std::string scenario;
  std::string out_dir;
  std::string rule = "all";
  std::string loss_rule = "endogenous";
  int hours = 0;
  double gap = 1e-6;
  int node_limit = 100;
  double time_limit = 0;  // 0: none
  double feasibility_tol = 1e-6;
  double cone_tol = 1e-6;
  double dispatch_tol = 1e-6;
  double zero_clamp = 1e-8;
  double group_tol = 1e-9;
  double audit_tol = 1e-5;
  double omega_tol = 1e-6;
  int threads = 0;
};

LossRule parse_loss_rule(const std::string& text, const Scenario& s) {
  if (text == "endogenous") return LossRule::endogenous_max();
  if (text == "fixed") {
    if (!s.p_loss_cap) throw ScenarioError("--loss-rule fixed needs p_loss_cap_mw in the scenario, or fixed:<MW>");
    return LossRule::fixed(*s.p_loss_cap);
  }
  if (text.rfind("fixed:", 0) == 0) {
    std::vector<double> v;
    std::stringstream ss(text.substr(6));
    for (std::string item; std::getline(ss, item, ',');) {
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size() || !std::isfinite(x) || x < 0) throw ScenarioError("bad loss value '" + item + "'");
      v.push_back(x);
    }
    if (v.size() == 1) v.assign(s.horizon, v[0]);
    if (static_cast<int>(v.size()) != s.horizon) throw ScenarioError("loss profile length differs from horizon");
    return LossRule::fixed(std::move(v));
  }
  throw ScenarioError("unknown loss rule '" + text + "' (endogenous, fixed, fixed:<MW>[,<MW>...])");
}

std::vector<Rule> parse_rules(const std::string& text) {
  if (text == "all") return {Rule::kProportional, Rule::kShapley, Rule::kNucleolus};
  return {parse_rule(text)};
}

struct Stage {
  std::string name;
  std::string status = "pending";
  std::string started, finished;
  std::string error;
};

class Run {
 public:
  Run(RunFlags flags, std::filesystem::path out) : f_(std::move(flags)), out_(std::move(out)) {}

  int execute();

 private:
  void stage(const std::string& name, const std::function<void()>& body);
  void emit(const CsvTable& table, const std::string& name);
  void write_manifest(const std::string& status);

  void write_schedule();
  void write_prices();
  void write_audit();
  void write_standalone();
  void write_allocation(Rule rule);

  RunFlags f_;
  std::filesystem::path out_;
  std::string run_id_ = "unassigned";
  std::string scenario_hash_;
  std::string started_;
  std::vector<Stage> stages_;
  json files_ = json::array();

  Scenario s_;
  LossRule rule_;
  SolveOptions solve_;
  MipResult mip_;
  RelaxedResult relaxed_;
  AsPrices prices_;
  std::optional<MarketBreakdown> audit_;
  StandAloneCosts standalone_;
};

void Run::stage(const std::string& name, const std::function<void()>& body) {
  Stage& st = stages_.emplace_back();
  st.name = name;
  st.started = utc_now();
  try {
    body();
    st.status = "ok";
    st.finished = utc_now();
  } catch (const std::exception& e) {
    st.status = "failed";
    st.error = e.what();
    st.finished = utc_now();
    throw;
  }
}

void Run::emit(const CsvTable& table, const std::string& name) {
  const std::string text = table.write(out_, name);
  files_.push_back({{"name", name}, {"rows", table.rows()}, {"bytes", text.size()}, {"fnv1a", hex(fnv1a(text))}});
}

void Run::write_manifest(const std::string& status) {
  json stages = json::array();
  for (const auto& st : stages_) {
    json j{{"name", st.name}, {"status", st.status}, {"started", st.started}, {"finished", st.finished}};
    if (!st.error.empty()) j["error"] = st.error;
    stages.push_back(j);
  }
  json m{
      {"run_id", run_id_},
      {"status", status},
      {"tool", "ascost"},
      {"version", ASCOST_VERSION},
      {"scenario", {{"path", f_.scenario}, {"fnv1a", scenario_hash_}, {"name", s_.name}, {"hours", s_.horizon}}},
      {"loss_rule", f_.loss_rule},
      {"rules", f_.rule},
      {"tolerances",
       {{"mip_gap", f_.gap},
        {"node_limit", f_.node_limit},
        {"time_limit_seconds", f_.time_limit},
        {"feasibility", f_.feasibility_tol},
        {"cone", f_.cone_tol},
        {"dispatch", f_.dispatch_tol},
        {"zero_clamp", f_.zero_clamp},
        {"group", f_.group_tol},
        {"audit", f_.audit_tol},
        {"omega", f_.omega_tol}}},
      {"started", started_},
      {"finished", utc_now()},
      {"stages", stages},
      {"files", files_},
  };
  std::ofstream out(out_ / "manifest.json");
  out << m.dump(2) << "\n";
  if (!out) throw OutputError("cannot write " + (out_ / "manifest.json").string());
}

int Run::execute() {
  started_ = utc_now();
  std::string scenario_text;
  try {
    scenario_text = read_file(f_.scenario);
  } catch (const OutputError&) {
    std::cerr << "error: cannot read scenario " << f_.scenario << "\n";
    return kIo;
  }
  try {
    std::filesystem::create_directories(out_);
  } catch (const std::exception& e) {
    return report(e);
  }
  scenario_hash_ = hex(fnv1a(scenario_text));

  int code = kOk;
  try {
    stage("load", [&] {
      s_ = load_scenario(f_.scenario);
      if (f_.hours > 0) {
        if (f_.hours > s_.horizon) throw ScenarioError("--hours exceeds the scenario horizon");
        s_ = s_.truncated(f_.hours);
      }
      rule_ = parse_loss_rule(f_.loss_rule, s_);
      (void)parse_rules(f_.rule);
      // Inputs that change numbers feed the id; output location does not.
      std::ostringstream key;
      key << ASCOST_VERSION << '|' << f_.rule << '|' << f_.loss_rule << '|' << f_.hours << '|' << f_.gap << '|'
          << f_.node_limit << '|' << f_.time_limit << '|' << f_.feasibility_tol << '|' << f_.cone_tol << '|'
          << f_.dispatch_tol << '|' << f_.zero_clamp << '|' << f_.group_tol;
      run_id_ = hex(fnv1a(key.str(), fnv1a(scenario_text)));
      solve_.rel_gap = f_.gap;
      solve_.node_limit = f_.node_limit;
      solve_.time_limit_seconds = f_.time_limit > 0 ? f_.time_limit : std::numeric_limits<double>::infinity();
      solve_.feasibility_tolerance = f_.feasibility_tol;
      solve_.cone_tolerance = f_.cone_tol;
    });
    stage("schedule", [&] {
      mip_ = solve_mip(build_uc(s_, rule_, false), solve_);
      write_schedule();
    });
    stage("prices", [&] {
      UCModel m = build_uc(s_, rule_, true);
      relaxed_ = solve_relaxed(m, solve_);
      prices_ = as_prices_from_duals(relaxed_.duals, s_.params);
      write_prices();
    });
    stage("audit", [&] {
      try {
        audit_ = duality_audit(relaxed_, s_, f_.audit_tol, f_.omega_tol);
      } catch (const AuditError& e) {
        audit_ = e.breakdown();
        write_audit();
        throw;
      }
      write_audit();
    });
    stage("standalone", [&] {
      StandAloneOptions opt;
      opt.solve = solve_;
      opt.threads = f_.threads;
      opt.dispatch_tol = f_.dispatch_tol;
      opt.zero_clamp = f_.zero_clamp;
      standalone_ = standalone_markets(s_, mip_.dispatch, opt);
      write_standalone();
    });
    stage("allocation", [&] {
      for (Rule r : parse_rules(f_.rule)) write_allocation(r);
    });
  } catch (const std::exception& e) {
    code = report(e);
  }
  try {
    write_manifest(code == kOk ? "ok" : "failed");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  if (code == kOk) {
    std::cout << "run " << run_id_ << ": " << files_.size() << " tables in " << out_.string() << "\n";
    if (!mip_.stats.gap_reached)
      std::cout << "note: schedule stopped at the node budget with MIP gap " << mip_.stats.mip_gap << "\n";
  }
  return code;
}

void Run::write_schedule() {
  const auto& x = mip_.dispatch;
  const auto& c = mip_.schedule;
  CsvTable commit(run_id_, {"unit", "technology", "hour", "on", "starting", "start", "stop", "charging", "discharging"});
  CsvTable dispatch(run_id_,
                    {"unit", "technology", "hour", "output_mw", "charge_mw", "pfr_mw", "efr_mw", "energy_mwh"});
  auto bit = [](double v) { return static_cast<int>(std::lround(v)); };
  for (std::size_t g = 0; g < s_.generators.size(); ++g) {
    const auto& u = s_.generators[g];
    for (int t = 0; t < s_.horizon; ++t) {
      commit.add({u.id, u.technology, t, bit(c.y[g][t]), bit(c.st[g][t]), bit(c.sg[g][t]), bit(c.sd[g][t]), 0, 0});
      dispatch.add({u.id, u.technology, t, x.gen_p[g][t], 0.0, x.gen_pfr[g][t], 0.0, 0.0});
    }
  }
  for (std::size_t r = 0; r < s_.res_units.size(); ++r) {
    const auto& u = s_.res_units[r];
    for (int t = 0; t < s_.horizon; ++t) dispatch.add({u.id, u.technology, t, x.res_p[r][t], 0.0, 0.0, 0.0, 0.0});
  }
  for (std::size_t k = 0; k < s_.storage_units.size(); ++k) {
    const auto& u = s_.storage_units[k];
    for (int t = 0; t < s_.horizon; ++t) {
      commit.add({u.id, u.technology, t, 0, 0, 0, 0, bit(c.ycha[k][t]), bit(c.ydis[k][t])});
      dispatch.add({u.id, u.technology, t, x.sto_dis[k][t], x.sto_cha[k][t], x.sto_pfr[k][t], x.sto_efr[k][t],
                    x.sto_e[k][t + 1]});
    }
  }
  CsvTable system(run_id_, {"hour", "demand_mw", "inertia_mws", "pfr_mw", "efr_mw", "loss_mw"});
  for (int t = 0; t < s_.horizon; ++t) system.add({t, s_.demand[t], x.h[t], x.pfr[t], x.efr[t], x.p_loss[t]});
  emit(commit, "commitment.csv");
  emit(dispatch, "dispatch.csv");
  emit(system, "system.csv");
}

void Run::write_prices() {
  CsvTable t(run_id_, {"hour", "lambda_e", "lambda_h", "lambda_pfr", "lambda_efr", "omega_loss"});
  for (int h = 0; h < s_.horizon; ++h)
    t.add({h, prices_.lambda_e[h], prices_.lambda_h[h], prices_.lambda_pfr[h], prices_.lambda_efr[h],
           prices_.omega_loss[h]});
  emit(t, "prices.csv");
}

void Run::write_audit() {
  const MarketBreakdown& b = *audit_;
  CsvTable t(run_id_, {"item", "value"});
  const std::pair<const char*, double> items[] = {
      {"energy_payments", b.energy_payments},
      {"as_payments", b.as_payments},
      {"lhs", b.lhs},
      {"system_costs", b.system_costs},
      {"thermal_profits", b.thermal_profits},
      {"renewable_profits", b.renewable_profits},
      {"storage_profits", b.storage_profits},
      {"rhs_displayed", b.rhs_displayed},
      {"omitted_terms", b.omitted_terms},
      {"loss_link_charges", b.loss_link_charges},
      {"rhs_full", b.rhs_full},
      {"residual_full", b.residual_full},
      {"residual_displayed", b.residual_displayed},
      {"max_omega_residual", b.max_omega_residual},
      {"tolerance_full", f_.audit_tol},
      {"tolerance_omega", f_.omega_tol},
  };
  for (const auto& [k, v] : items) t.add({std::string(k), v});
  emit(t, "audit.csv");

  CsvTable tech(run_id_, {"technology", "energy_revenue", "inertia_revenue", "pfr_revenue", "efr_revenue", "cost"});
  for (const auto& e : b.by_technology)
    tech.add({e.technology, e.energy_revenue, e.inertia_revenue, e.pfr_revenue, e.efr_revenue, e.cost});
  emit(tech, "audit_technology.csv");
}

void Run::write_standalone() {
  // Unit rows in fleet order, one column per hour; empty where not dispatched.
  std::vector<std::string> header{"unit", "technology"};
  for (int t = 0; t < s_.horizon; ++t) header.push_back("h" + std::to_string(t));
  CsvTable t(run_id_, header);
  std::vector<std::pair<std::string, std::string>> units;
  std::map<std::string, std::vector<std::optional<double>>> omega;
  for (int h = 0; h < s_.horizon; ++h) {
    for (const auto& e : standalone_.hours[h]) {
      auto [it, inserted] = omega.try_emplace(e.unit_id, std::vector<std::optional<double>>(s_.horizon));
      if (inserted) units.emplace_back(e.unit_id, e.technology);
      it->second[h] = e.omega;
    }
  }
  auto fleet_pos = [&](const std::string& id) {
    std::size_t k = 0;
    for (const auto& g : s_.generators) {
      if (g.id == id) return k;
      ++k;
    }
    for (const auto& r : s_.res_units) {
      if (r.id == id) return k;
      ++k;
    }
    for (const auto& u : s_.storage_units) {
      if (u.id == id) return k;
      ++k;
    }
    return k;
  };
  std::stable_sort(units.begin(), units.end(),
                   [&](const auto& a, const auto& b) { return fleet_pos(a.first) < fleet_pos(b.first); });
  for (const auto& [id, tech] : units) {
    std::vector<Cell> row{id, tech};
    for (const auto& v : omega[id]) row.emplace_back(v ? format_number(*v) : std::string());
    t.add(std::move(row));
  }
  emit(t, "standalone.csv");
}

void Run::write_allocation(Rule rule) {
  const HourlyAllocation a = allocate_hourly(standalone_, rule, f_.group_tol);
  const std::string name(to_string(rule));
  CsvTable units(run_id_, {"hour", "unit", "technology", "omega", "phi"});
  for (int h = 0; h < s_.horizon; ++h)
    for (const auto& u : a.hours[h]) units.add({h, u.unit_id, u.technology, u.omega, u.phi});
  std::vector<std::string> header{"technology", "total"};
  for (int h = 0; h < s_.horizon; ++h) header.push_back("h" + std::to_string(h));
  CsvTable tech(run_id_, header);
  for (const auto& ts : a.by_technology) {
    std::vector<Cell> row{ts.technology, ts.total};
    for (double v : ts.hourly) row.emplace_back(v);
    tech.add(std::move(row));
  }
  CsvTable hourly(run_id_, {"hour", "headline_omega", "allocated", "efficiency_gap"});
  for (int h = 0; h < s_.horizon; ++h) {
    double sum = 0;
    for (const auto& u : a.hours[h]) sum += u.phi;
    hourly.add({h, a.headline[h], sum, a.efficiency_gap[h]});
  }
  emit(units, "allocation_" + name + ".csv");
  emit(tech, "allocation_" + name + "_technology.csv");
  emit(hourly, "allocation_" + name + "_hourly.csv");
}

// ---------------------------------------------------------------- game

AirportGame read_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<Player> players;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ScenarioError(path + ":" + std::to_string(line_no) + ": expected id,cost");
    const std::string id = line.substr(0, comma), value = line.substr(comma + 1);
    std::size_t used = 0;
    double cost = 0;
    try {
      cost = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      if (players.empty() && line_no == 1) continue;  // header
      throw ScenarioError(path + ":" + std::to_string(line_no) + ": bad cost '" + value + "'");
    }
    players.push_back({id, cost});
  }
  if (players.empty()) throw ScenarioError(path + ": no players");
  return AirportGame(std::move(players));
}

int cmd_game(const std::string& path, const std::string& rule_text, bool oracle, int max_n, double group_tol) {
  try {
    const AirportGame game = read_game(path);
    const std::vector<Rule> rules = parse_rules(rule_text);
    if (oracle) {
      for (Rule r : rules)
        if (r == Rule::kProportional && rules.size() == 1)
          throw AllocationError("--oracle: proportional has no brute-force counterpart");
    }
    std::vector<Allocation> out;
    for (Rule r : rules) out.push_back(allocate(game, r, group_tol));

    std::cout << "id,cost";
    for (const auto& a : out) std::cout << "," << a.rule;
    std::cout << "\n";
    for (int i = 0; i < game.size(); ++i) {
      std::cout << game.players()[i].id << "," << format_number(game.cost(i));
      for (const auto& a : out) std::cout << "," << format_number(a.phi[i]);
      std::cout << "\n";
    }
    for (const auto& a : out) {
      if (game.size() <= 20) {
        const CoreReport c = core_check(a, game);
        std::cout << "# " << a.rule << " core " << (c.passed() ? "pass" : "fail")
                  << " worst_excess=" << format_number(c.worst_excess) << "\n";
      }
      if (!oracle || a.rule == "proportional") continue;
      const Allocation ref =
          a.rule == "shapley" ? shapley_bruteforce(game, max_n > 0 ? max_n : 12) : nucleolus_lp_oracle(game, max_n > 0 ? max_n : 8);
      double dev = 0;
      for (int i = 0; i < game.size(); ++i) dev = std::max(dev, std::abs(a.phi[i] - ref.phi[i]));
      std::cout << "# " << a.rule << " oracle max deviation " << format_number(dev) << "\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    return report(e);
  }
}

}  // namespace
}  // namespace ascost::tools

int main(int argc, char** argv) {
  using namespace ascost::tools;
  CLI::App app{"Frequency-containment service scheduling, pricing and cost allocation"};
  app.set_version_flag("--version", std::string(ASCOST_VERSION));
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", validate_path, "Scenario JSON")->required();

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Schedule, price, size stand-alone markets and allocate");
  run->add_option("scenario", rf.scenario, "Scenario JSON")->required();
  run->add_option("out_dir", rf.out_dir, "Output directory (default: $ASCOST_OUT_DIR, else ./ascost-out)");
  run->add_option("--rule", rf.rule, "proportional, shapley, nucleolus or all")->capture_default_str();
  run->add_option("--loss-rule", rf.loss_rule, "endogenous, fixed (scenario profile) or fixed:<MW>[,<MW>...]")
      ->capture_default_str();
  run->add_option("--hours", rf.hours, "Use only the first N hours (0: all)")->check(CLI::NonNegativeNumber);
  run->add_option("--gap", rf.gap, "Relative MIP gap")->capture_default_str()->check(CLI::NonNegativeNumber);
  run->add_option("--node-limit", rf.node_limit, "Branch-and-bound node budget")->capture_default_str();
  run->add_option("--time-limit", rf.time_limit, "Seconds for branch-and-bound (0: none; makes runs timing-dependent)")
      ->capture_default_str();
  run->add_option("--feasibility-tol", rf.feasibility_tol)->capture_default_str();
  run->add_option("--cone-tol", rf.cone_tol)->capture_default_str();
  run->add_option("--dispatch-tol", rf.dispatch_tol, "MW below which a unit is not dispatched")->capture_default_str();
  run->add_option("--zero-clamp", rf.zero_clamp, "Relative size below which Omega is zero")->capture_default_str();
  run->add_option("--group-tol", rf.group_tol, "Nucleolus type grouping tolerance")->capture_default_str();
  run->add_option("--audit-tol", rf.audit_tol)->capture_default_str();
  run->add_option("--omega-tol", rf.omega_tol)->capture_default_str();
  run->add_option("--threads", rf.threads, "Stand-alone solver threads (0: all cores)")->capture_default_str();

  std::string game_path, game_rule = "shapley";
  bool game_oracle = false;
  int game_max_n = 0;
  double game_group_tol = 1e-9;
  auto* game = app.add_subcommand("game", "Allocate a table of id,cost rows");
  game->add_option("costs", game_path, "CSV of id,cost")->required();
  game->add_option("--rule", game_rule, "proportional, shapley, nucleolus or all")->capture_default_str();
  game->add_flag("--oracle", game_oracle, "Compare with the brute-force counterpart");
  game->add_option("--max-n", game_max_n, "Oracle size limit (default 12 Shapley, 8 nucleolus)");
  game->add_option("--group-tol", game_group_tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (*validate) return cmd_validate(validate_path);
  if (*game) return cmd_game(game_path, game_rule, game_oracle, game_max_n, game_group_tol);
  if (rf.out_dir.empty()) {
    const char* env = std::getenv("ASCOST_OUT_DIR");
    rf.out_dir = env && *env ? env : "ascost-out";
  }
  Run r(rf, rf.out_dir);
  return r.execute();
}
