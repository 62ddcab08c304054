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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ascost/allocation.hpp"
#include "ascost/frequency.hpp"

namespace py = pybind11;

namespace ascost {
namespace {

LossRule to_loss_rule(const py::object& loss, const Scenario& s) {
  if (loss.is_none()) return LossRule::endogenous_max();
  if (py::isinstance<py::float_>(loss) || py::isinstance<py::int_>(loss))
    return LossRule::fixed(std::vector<double>(s.horizon, loss.cast<double>()));
  return LossRule::fixed(loss.cast<std::vector<double>>());
}

AirportGame to_game(const py::object& costs) {
  if (py::isinstance<py::dict>(costs)) {
    std::vector<Player> players;
    for (const auto& [k, v] : costs.cast<py::dict>()) players.push_back({py::str(k), v.cast<double>()});
    return AirportGame(std::move(players));
  }
  return AirportGame::from_costs(costs.cast<std::vector<double>>());
}

// Results keyed by player id.
py::dict to_dict(const Allocation& a) {
  py::dict d;
  for (std::size_t i = 0; i < a.ids.size(); ++i) d[py::str(a.ids[i])] = a.phi[i];
  return d;
}

py::dict prices_dict(const RelaxedResult& r, const Scenario& s) {
  const AsPrices p = as_prices_from_duals(r.duals, s.params);
  py::dict d;
  d["objective"] = r.dispatch.objective;
  d["lambda_e"] = p.lambda_e;
  d["lambda_h"] = p.lambda_h;
  d["lambda_pfr"] = p.lambda_pfr;
  d["lambda_efr"] = p.lambda_efr;
  d["omega_loss"] = p.omega_loss;
  d["inertia"] = r.dispatch.h;
  d["pfr"] = r.dispatch.pfr;
  d["efr"] = r.dispatch.efr;
  d["p_loss"] = r.dispatch.p_loss;
  return d;
}

}  // namespace
}  // namespace ascost

PYBIND11_MODULE(_core, m) {
  using namespace ascost;
  m.doc() = "Frequency-containment service scheduling, pricing and cost allocation";
  m.attr("__version__") = ASCOST_VERSION;

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<AllocationError>(m, "AllocationError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("f0", &SystemParams::f0)
      .def_readwrite("rocof_max", &SystemParams::rocof_max)
      .def_readwrite("delta_f_max", &SystemParams::delta_f_max)
      .def_readwrite("t_efr", &SystemParams::t_efr)
      .def_readwrite("t_pfr", &SystemParams::t_pfr);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("horizon", &Scenario::horizon)
      .def_readonly("demand", &Scenario::demand)
      .def_readonly("params", &Scenario::params)
      .def_property_readonly("unit_count", &Scenario::unit_count)
      .def("truncated", &Scenario::truncated, py::arg("hours"))
      .def("__repr__", [](const Scenario& s) {
        return "<Scenario " + s.name + ", " + std::to_string(s.horizon) + " h, " + std::to_string(s.unit_count()) +
               " units>";
      });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("gb_template", &gb_template);

  m.def("nadir_feasible", &nadir_feasible, py::arg("h"), py::arg("efr"), py::arg("pfr"), py::arg("p_loss"),
        py::arg("params") = SystemParams{});
  m.def("nadir_min_inertia", &nadir_min_inertia, py::arg("efr"), py::arg("pfr"), py::arg("p_loss"),
        py::arg("params") = SystemParams{});
  m.def("rocof_min_inertia", &rocof_min_inertia, py::arg("p_loss"), py::arg("params") = SystemParams{});

  m.def(
      "solve_relaxed",
      [](const Scenario& s, const py::object& loss) {
        UCModel model = build_uc(s, to_loss_rule(loss, s), true);
        RelaxedResult r;
        {
          py::gil_scoped_release release;
          r = solve_relaxed(model);
        }
        return prices_dict(r, s);
      },
      py::arg("scenario"), py::arg("loss") = py::none(),
      "Relaxed schedule and prices. loss: None (largest unit), a MW value, or a per-hour list.");

  m.def(
      "standalone_markets",
      [](const Scenario& s, int threads) {
        UCModel model = build_uc(s, LossRule::endogenous_max(), true);
        StandAloneCosts c;
        {
          py::gil_scoped_release release;
          const RelaxedResult r = solve_relaxed(model);
          StandAloneOptions opt;
          opt.threads = threads;
          c = standalone_markets(s, r.dispatch, opt);
        }
        py::list hours;
        for (const auto& h : c.hours) {
          py::dict d;
          for (const auto& e : h) d[py::str(e.unit_id)] = e.omega;
          hours.append(d);
        }
        return hours;
      },
      py::arg("scenario"), py::arg("threads") = 0,
      "Per-hour stand-alone market sizes (GBP) of the units dispatched in the relaxed schedule.");

  m.def("proportional", [](const py::object& c) { return to_dict(proportional(to_game(c))); }, py::arg("costs"));
  m.def("shapley", [](const py::object& c) { return to_dict(shapley_airport(to_game(c))); }, py::arg("costs"));
  m.def(
      "shapley_bruteforce", [](const py::object& c, int n) { return to_dict(shapley_bruteforce(to_game(c), n)); },
      py::arg("costs"), py::arg("max_n") = 12);
  m.def(
      "nucleolus", [](const py::object& c, double tol) { return to_dict(nucleolus_airport(to_game(c), tol)); },
      py::arg("costs"), py::arg("tol") = 1e-9);
  m.def(
      "nucleolus_lp_oracle", [](const py::object& c, int n) { return to_dict(nucleolus_lp_oracle(to_game(c), n)); },
      py::arg("costs"), py::arg("max_n") = 8);
  m.def(
      "core_check",
      [](const py::object& c, const std::string& rule) {
        const AirportGame g = to_game(c);
        const CoreReport r = core_check(allocate(g, parse_rule(rule)), g);
        py::dict d;
        d["passed"] = r.passed();
        d["efficient"] = r.efficient;
        d["individually_rational"] = r.individually_rational;
        d["coalitionally_rational"] = r.coalitionally_rational;
        d["worst_excess"] = r.worst_excess;
        d["worst_members"] = r.worst_members;
        return d;
      },
      py::arg("costs"), py::arg("rule"));
}
