# Copyright 2026 The ascost Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Frequency-containment service scheduling, pricing and cost allocation."""

from ascost._core import (
    AllocationError,
    InfeasibleError,
    Scenario,
    ScenarioError,
    SystemParams,
    __version__,
    core_check,
    gb_template,
    load_scenario,
    nadir_feasible,
    nadir_min_inertia,
    nucleolus,
    nucleolus_lp_oracle,
    proportional,
    rocof_min_inertia,
    shapley,
    shapley_bruteforce,
    solve_relaxed,
    standalone_markets,
)

__all__ = [
    "AllocationError",
    "InfeasibleError",
    "Scenario",
    "ScenarioError",
    "SystemParams",
    "__version__",
    "core_check",
    "gb_template",
    "load_scenario",
    "nadir_feasible",
    "nadir_min_inertia",
    "nucleolus",
    "nucleolus_lp_oracle",
    "proportional",
    "rocof_min_inertia",
    "shapley",
    "shapley_bruteforce",
    "solve_relaxed",
    "standalone_markets",
]
