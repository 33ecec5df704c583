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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "enoc/errors.hpp"
#include "enoc/runner.hpp"

namespace {

// Exit codes: 0 success, 1 configuration/usage error, 2 solver failure,
// 3 output I/O failure.
constexpr int kExitConfig = 1;
constexpr int kExitIo = 3;

int run_solve(const std::string& config_path, std::uint64_t seed,
              bool seed_given, int samples, int grid, const std::string& out,
              bool dry_run) {
  enoc::RunConfig config = enoc::parse_config(config_path);
  if (seed_given) config.seed = seed;
  if (samples > 0) {
    // Rebuild the schedule up to the requested largest ensemble, keeping the
    // configured starting size.
    const std::size_t k_min = config.schedule.front();
    if (static_cast<std::size_t>(samples) < k_min) {
      throw enoc::ValidationError(
          "--samples must be at least the first scheduled ensemble size");
    }
    config.schedule.clear();
    for (std::size_t k = k_min; k <= static_cast<std::size_t>(samples); ++k) {
      config.schedule.push_back(k);
    }
  }
  if (grid > 0) {
    config.grid_n = grid;
    config.solver.grid_n = grid;
  }
  if (!out.empty()) config.out_dir = out;

  if (dry_run) {
    std::cout << enoc::normalize_config(config);
    return 0;
  }
  return enoc::run(config, std::cout);
}

int run_plotscript(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw enoc::IoError("cannot create output directory '" + out_dir +
                        "': " + ec.message());
  }
  const auto path = (std::filesystem::path(out_dir) / "plots.gp").string();
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw enoc::IoError("cannot open '" + path + "' for writing");
  }
  file << enoc::plot_script();
  file.flush();
  if (!file) {
    throw enoc::IoError("failed while writing '" + path + "'");
  }
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble optimal control of control-affine systems with "
               "random parameters"};
  app.require_subcommand(1);

  auto* solve =
      app.add_subcommand("solve", "Run the sample-average scheme on a config");
  std::string config_path;
  std::uint64_t seed = 0;
  int samples = 0;
  int grid = 0;
  std::string out_dir;
  bool dry_run = false;
  solve->add_option("--config", config_path, "JSON problem configuration")
      ->required();
  auto* seed_opt =
      solve->add_option("--seed", seed, "Override the base sampling seed");
  solve->add_option("--samples", samples,
                    "Override the largest scheduled ensemble size")
      ->check(CLI::PositiveNumber);
  solve->add_option("--grid", grid, "Override the number of time steps")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", out_dir, "Override the output directory");
  solve->add_flag("--dry-run", dry_run,
                  "Echo the normalized configuration and exit");

  auto* plot = app.add_subcommand(
      "plotscript", "Write a gnuplot script rendering a run's outputs");
  std::string plot_dir = "out";
  plot->add_option("--out", plot_dir,
                   "Directory holding the run outputs (default: out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return run_solve(config_path, seed, seed_opt->count() > 0, samples,
                       grid, out_dir, dry_run);
    }
    return run_plotscript(plot_dir);
  } catch (const enoc::IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  } catch (const enoc::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  }
}
