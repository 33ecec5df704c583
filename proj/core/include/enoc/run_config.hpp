/*
 Copyright 2026 The enoc authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef ENOC_RUN_CONFIG_HPP
#define ENOC_RUN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enoc/solver.hpp"

namespace enoc {

// A fully resolved run description: which model, on what grid, with which
// ensemble-size schedule, seed, solver options and output directory.
// Produced from a JSON file by parse_config; round-trips through
// normalize_config.
struct RunConfig {
  std::string model = "sit";
  std::map<std::string, double> params;  // model parameter overrides
  int grid_n = 900;
  std::optional<double> u_min;  // unset = model default
  std::optional<double> u_max;
  std::vector<std::size_t> schedule;  // expanded, strictly increasing
  std::uint64_t seed = 1;
  double tol_J = 0.0;  // early-stop tolerances; 0 disables
  double tol_u = 0.0;
  SolverOptions solver;  // solver.grid_n mirrors grid_n
  std::string out_dir = "out";
};

// Strict JSON parsing: unknown keys anywhere are rejected naming the key,
// type errors and malformed schedules name the field, and syntax errors
// report line and column.  Missing optional fields take the documented
// defaults (sit model, 900 steps, schedule 2..26, seed 1).
RunConfig parse_config(const std::string& path);

// Same parser on an in-memory document; `origin` labels error messages.
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<memory>");

// Canonical JSON document with every default materialized.  Feeding the
// output back through parse_config_text reproduces the same RunConfig.
std::string normalize_config(const RunConfig& config);

}  // namespace enoc

#endif  // ENOC_RUN_CONFIG_HPP
