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

#ifndef ENOC_RUNNER_HPP
#define ENOC_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "enoc/run_config.hpp"

namespace enoc {

// Builds the problem a config describes: the named built-in model with the
// config's parameter overrides and control-bound overrides applied.  Throws
// ValidationError naming the offending field (e.g. "u_max" when the bounds
// are inverted).
ProblemSpec problem_from_config(const RunConfig& config);

// Executes a config end to end: solve the schedule, print the per-iteration
// metric table to `out`, and write summary.json, convergence.csv and
// control.csv into config.out_dir.  Returns a process exit code: 0 success,
// 2 solver failure (partial table is still printed), 3 output I/O failure.
int run(const RunConfig& config, std::ostream& out);

// Output writers (also used by the acceptance checks).  All numbers are
// printed with 17 significant digits so files round-trip to the exact
// doubles; non-finite metrics print as "nan"/"inf".
void write_summary_json(const std::string& path, const RunConfig& config,
                        const SolveReport& report);
void write_convergence_csv(const std::string& path, const SolveReport& report);
void write_control_csv(const std::string& path, const SolveReport& report);

// gnuplot script that renders the two CSVs (convergence curves and the final
// control with its switching function and singular-formula overlay).
std::string plot_script();

}  // namespace enoc

#endif  // ENOC_RUNNER_HPP
