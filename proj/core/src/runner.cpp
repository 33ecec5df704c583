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

#include "enoc/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "enoc/errors.hpp"
#include "enoc/models.hpp"

namespace enoc {

namespace {

// 17 significant digits round-trip any double exactly.
std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("failed while writing '" + path + "'");
  }
}

void print_table(std::ostream& out, const SolveReport& report) {
  out << std::setw(6) << "k" << std::setw(24) << "J" << std::setw(14)
      << "rel_J" << std::setw(14) << "rel_u" << std::setw(8) << "inner"
      << "\n";
  for (const auto& rec : report.iterations) {
    std::ostringstream j_txt, rel_j_txt, rel_u_txt;
    j_txt << std::setprecision(12) << rec.cost;
    rel_j_txt << std::setprecision(4) << rec.rel_J;
    rel_u_txt << std::setprecision(4) << rec.rel_u;
    out << std::setw(6) << rec.k << std::setw(24) << j_txt.str()
        << std::setw(14) << rel_j_txt.str() << std::setw(14)
        << rel_u_txt.str() << std::setw(8) << rec.inner_iterations << "\n";
  }
}

}  // namespace

ProblemSpec problem_from_config(const RunConfig& config) {
  ProblemSpec spec = make_problem(config.model, config.params);
  if (config.u_min) spec.u_min = *config.u_min;
  if (config.u_max) spec.u_max = *config.u_max;
  if (!(spec.u_min < spec.u_max)) {
    throw ValidationError("config field 'u_max' must exceed u_min");
  }
  spec.validate();
  return spec;
}

void write_summary_json(const std::string& path, const RunConfig& config,
                        const SolveReport& report) {
  nlohmann::json doc;
  doc["model"] = config.model;
  doc["seed"] = config.seed;
  doc["grid_n"] = config.grid_n;
  doc["schedule"] = config.schedule;
  doc["final_cost"] = report.final_cost;
  doc["wall_seconds"] = report.wall_seconds;
  doc["iterations"] = nlohmann::json::array();
  for (const auto& rec : report.iterations) {
    doc["iterations"].push_back({{"k", rec.k},
                                 {"J", rec.cost},
                                 {"rel_J", rec.rel_J},
                                 {"rel_u", rec.rel_u},
                                 {"inner_iterations", rec.inner_iterations}});
  }
  doc["arcs"] = nlohmann::json::array();
  for (const auto& arc : report.arcs.intervals) {
    doc["arcs"].push_back({{"label", to_string(arc.label)},
                           {"first_node", arc.first_node},
                           {"last_node", arc.last_node},
                           {"t_first", report.psi.grid.node(arc.first_node)},
                           {"t_last", report.psi.grid.node(arc.last_node)}});
  }
  int singular_defined = 0;
  for (Eigen::Index j = 0; j < report.singular_values.size(); ++j) {
    if (!std::isnan(report.singular_values[j])) ++singular_defined;
  }
  doc["singular_formula_nodes"] = singular_defined;
  doc["outputs"] = {{"convergence_csv", "convergence.csv"},
                    {"control_csv", "control.csv"}};

  auto out = open_for_write(path);
  // NaN metrics (the first outer row) serialize as JSON null.
  out << doc.dump(2) << "\n";
  finish_write(out, path);
}

void write_convergence_csv(const std::string& path,
                           const SolveReport& report) {
  auto out = open_for_write(path);
  out << "k,rel_J,rel_u\n";
  for (const auto& rec : report.iterations) {
    out << rec.k << "," << g17(rec.rel_J) << "," << g17(rec.rel_u) << "\n";
  }
  finish_write(out, path);
}

void write_control_csv(const std::string& path, const SolveReport& report) {
  auto out = open_for_write(path);
  out << "t,u,psi,arc,singular_u\n";
  const TimeGrid& grid = report.control.grid;
  for (int j = 0; j < grid.node_count(); ++j) {
    out << g17(grid.node(j)) << "," << g17(report.control.values[j]) << ","
        << g17(report.psi.psi[j]) << ","
        << to_string(report.arcs.labels[static_cast<std::size_t>(j)]) << ","
        << g17(report.singular_values[j]) << "\n";
  }
  finish_write(out, path);
}

std::string plot_script() {
  return R"(# Renders the solver outputs written next to this script:
#   convergence.csv  outer-iteration metrics
#   control.csv      final control, switching function, singular formula
# Usage: gnuplot plots.gp   (writes SVG files into the same directory)

set datafile separator ','
set datafile missing 'nan'
set key autotitle columnhead
set terminal svg size 900,540 background 'white'
set grid

set output 'convergence.svg'
set logscale y
set xlabel 'ensemble size k'
set ylabel 'relative change between consecutive iterates'
plot 'convergence.csv' using 1:2 with linespoints lw 2 title 'cost', \
     'convergence.csv' using 1:3 with linespoints lw 2 title 'control'

set output 'control.svg'
unset logscale
set xlabel 't'
set ylabel 'control'
set y2label 'switching function'
set y2tics
set ytics nomirror
plot 'control.csv' using 1:2 with lines lw 2 lc rgb 'grey40' title 'control', \
     'control.csv' using 1:5 with lines dashtype 2 lw 2 lc rgb 'red' title 'singular formula', \
     'control.csv' using 1:3 with lines lw 1 lc rgb 'blue' title 'switching function' axes x1y2
)";
}

int run(const RunConfig& config, std::ostream& out) {
  const ProblemSpec spec = problem_from_config(config);

  SaaSchedule schedule;
  schedule.sizes = config.schedule;
  schedule.base_seed = config.seed;
  schedule.tol_J = config.tol_J;
  schedule.tol_u = config.tol_u;

  SolverOptions options = config.solver;
  options.grid_n = config.grid_n;

  SolveReport report;
  try {
    report = saa_solve(spec, schedule, options);
  } catch (const SolveAborted& err) {
    out << "solver aborted: " << err.what() << "\n";
    print_table(out, err.partial());
    return 2;
  }

  print_table(out, report);
  out << "final cost " << std::setprecision(12) << report.final_cost << " ("
      << std::setprecision(3) << report.wall_seconds << " s)\n";

  try {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
      throw IoError("cannot create output directory '" + config.out_dir +
                    "': " + ec.message());
    }
    const std::filesystem::path dir(config.out_dir);
    write_summary_json((dir / "summary.json").string(), config, report);
    write_convergence_csv((dir / "convergence.csv").string(), report);
    write_control_csv((dir / "control.csv").string(), report);
  } catch (const IoError& err) {
    out << "output error: " << err.what() << "\n";
    return 3;
  }
  out << "wrote " << config.out_dir << "/summary.json, convergence.csv, "
      << "control.csv\n";
  return 0;
}

}  // namespace enoc
