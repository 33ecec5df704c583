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

#include "enoc/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "enoc/errors.hpp"

namespace enoc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Trapezoid quadrature weights: h/2 at the ends, h inside.
Eigen::VectorXd trapezoid_weights(const TimeGrid& grid) {
  Eigen::VectorXd w =
      Eigen::VectorXd::Constant(grid.node_count(), grid.dt());
  w[0] *= 0.5;
  w[grid.node_count() - 1] *= 0.5;
  return w;
}

struct SweepResult {
  std::vector<StatePath> paths;
  double cost = 0.0;
};

SweepResult forward_all(const ProblemSpec& spec, const Ensemble& ensemble,
                        const ControlGrid& u) {
  SweepResult result;
  result.paths.reserve(ensemble.size());
  std::vector<double> costs;
  costs.reserve(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const ParamSample& w = ensemble.samples[i];
    try {
      result.paths.push_back(integrate_forward(spec, u, w));
    } catch (const IntegrationError& err) {
      std::ostringstream msg;
      msg << err.what() << " [sample " << i << "]";
      throw IntegrationError(msg.str(), err.time(), err.step());
    }
    costs.push_back(spec.terminal_cost(result.paths.back().terminal(), w));
  }
  result.cost = expectation(costs, ensemble);
  return result;
}

std::vector<AdjointPath> adjoint_all(const ProblemSpec& spec,
                                     const Ensemble& ensemble,
                                     const ControlGrid& u,
                                     const std::vector<StatePath>& paths) {
  std::vector<AdjointPath> adjoints;
  adjoints.reserve(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    try {
      adjoints.push_back(
          integrate_adjoint(spec, u, paths[i], ensemble.samples[i]));
    } catch (const IntegrationError& err) {
      std::ostringstream msg;
      msg << err.what() << " [sample " << i << "]";
      throw IntegrationError(msg.str(), err.time(), err.step());
    }
  }
  return adjoints;
}

}  // namespace

void SolverOptions::validate() const {
  if (max_inner_iters < 1) {
    throw ValidationError("solver option max_inner_iters must be >= 1");
  }
  if (!(eta0 >= 0.0)) {
    throw ValidationError("solver option eta0 must be non-negative");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw ValidationError("solver option backtrack must lie in (0,1)");
  }
  if (!(armijo_c > 0.0)) {
    throw ValidationError("solver option armijo_c must be positive");
  }
  if (max_backtracks < 0) {
    throw ValidationError("solver option max_backtracks must be >= 0");
  }
  if (!(tol_inner >= 0.0)) {
    throw ValidationError("solver option tol_inner must be non-negative");
  }
  if (grid_n < 1) {
    throw ValidationError("solver option grid_n must be >= 1");
  }
  if (!(eps_sing_rel >= 0.0)) {
    throw ValidationError("solver option eps_sing must be non-negative");
  }
  if (!(delta_den_rel >= 0.0)) {
    throw ValidationError("solver option delta_den must be non-negative");
  }
}

void SaaSchedule::validate() const {
  if (sizes.empty()) {
    throw ValidationError("schedule: no ensemble sizes");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) {
      throw ValidationError("schedule: ensemble sizes must be >= 1");
    }
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      throw ValidationError("schedule: ensemble sizes must increase strictly");
    }
  }
  if (!(tol_J >= 0.0) || !(tol_u >= 0.0)) {
    throw ValidationError("schedule: tolerances must be non-negative");
  }
}

double cost_evaluate(const ProblemSpec& spec, const Ensemble& ensemble,
                     const ControlGrid& u) {
  return forward_all(spec, ensemble, u).cost;
}

FixedEnsembleSolution solve_fixed_ensemble(const ProblemSpec& spec,
                                           const Ensemble& ensemble,
                                           const SolverOptions& options,
                                           const ControlGrid* warm_start) {
  options.validate();
  spec.validate();
  if (ensemble.size() == 0) {
    throw ValidationError("solve_fixed_ensemble: empty ensemble");
  }

  const TimeGrid grid =
      TimeGrid::uniform(spec.t0, spec.t_final, options.grid_n);
  const Eigen::VectorXd node_w = trapezoid_weights(grid);

  ControlGrid u;
  if (warm_start != nullptr) {
    u = resample_linear(*warm_start, grid);
    u.clamp(spec.u_min, spec.u_max);
  } else {
    u = constant_control(grid, 0.5 * (spec.u_min + spec.u_max));
  }

  SweepResult sweep = forward_all(spec, ensemble, u);
  double cost = sweep.cost;

  FixedEnsembleSolution sol;
  sol.diagnostics.cost_history.push_back(cost);

  double eta = options.eta0;
  int iter = 0;
  while (iter < options.max_inner_iters) {
    ++iter;
    const std::vector<AdjointPath> adjoints =
        adjoint_all(spec, ensemble, u, sweep.paths);
    const SwitchingProfile profile = switching_function(
        spec.fields, sweep.paths, adjoints, ensemble, options.eps_sing_rel);
    const double psi_max = profile.psi.cwiseAbs().maxCoeff();
    if (!(psi_max > 0.0)) {
      // The cost does not depend on the control at all: already optimal.
      sol.diagnostics.converged = true;
      break;
    }
    if (!(eta > 0.0)) {
      // First step: scale so the farthest node can cross the whole box.
      eta = (spec.u_max - spec.u_min) / psi_max;
    }

    // Armijo backtracking on the projected step u <- P(u + eta * Psi).
    bool accepted = false;
    bool at_fixed_point = false;
    ControlGrid trial;
    trial.grid = grid;
    SweepResult trial_sweep;
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      trial.values = (u.values + eta * profile.psi)
                         .cwiseMax(spec.u_min)
                         .cwiseMin(spec.u_max);
      const Eigen::VectorXd du = trial.values - u.values;
      const double step_sq = du.cwiseProduct(du).dot(node_w);
      if (!(step_sq > 0.0)) {
        // Projection returned the same control: KKT fixed point.
        at_fixed_point = true;
        break;
      }
      trial_sweep = forward_all(spec, ensemble, trial);
      if (trial_sweep.cost <= cost - (options.armijo_c / eta) * step_sq) {
        accepted = true;
        break;
      }
      eta *= options.backtrack;
    }
    if (at_fixed_point) {
      sol.diagnostics.converged = true;
      break;
    }
    if (!accepted) {
      sol.diagnostics.stalled = true;
      break;
    }

    const double decrease = cost - trial_sweep.cost;
    const double rel_decrease =
        decrease / std::max(std::abs(cost), 1e-300);
    if (rel_decrease < options.tol_inner) {
      // Negligible improvement: keep the incumbent so warm restarts are
      // exact no-ops.
      sol.diagnostics.converged = true;
      break;
    }
    u = trial;
    sweep = std::move(trial_sweep);
    cost = sweep.cost;
    sol.diagnostics.cost_history.push_back(cost);
    sol.diagnostics.eta_final = eta;
    // Let the step grow again so a few cautious backtracks do not freeze
    // later iterations at a tiny step.
    eta /= options.backtrack;
  }
  sol.diagnostics.iterations = iter;
  if (sol.diagnostics.eta_final == 0.0) sol.diagnostics.eta_final = eta;
  sol.control = std::move(u);
  sol.cost = cost;
  return sol;
}

SolveReport saa_solve(const ProblemSpec& spec, const SaaSchedule& schedule,
                      const SolverOptions& options) {
  schedule.validate();
  options.validate();
  spec.validate();
  const auto t_start = std::chrono::steady_clock::now();

  SolveReport report;
  SolverOptions inner_options = options;
  ControlGrid incumbent;
  bool have_incumbent = false;
  double prev_cost = kNaN;
  Ensemble final_ensemble;

  for (std::size_t idx = 0; idx < schedule.sizes.size(); ++idx) {
    const std::size_t k = schedule.sizes[idx];
    Ensemble ensemble;
    FixedEnsembleSolution sol;
    try {
      // Same seed for every outer iteration: with sample-major draw order the
      // size-k ensemble is a prefix of the size-(k+1) one, so consecutive
      // iterates differ by the new samples only and the successive-distance
      // metrics decay like 1/k instead of plateauing at the resampling noise.
      ensemble = sample_ensemble(spec.distributions, k, schedule.base_seed);
      sol = solve_fixed_ensemble(spec, ensemble, inner_options,
                                 have_incumbent ? &incumbent : nullptr);
    } catch (const std::exception& err) {
      report.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        t_start)
              .count();
      std::ostringstream msg;
      msg << "outer iteration k=" << k << " aborted: " << err.what();
      throw SolveAborted(msg.str(), std::move(report));
    }

    OuterRecord record;
    record.k = k;
    record.cost = sol.cost;
    record.inner_iterations = sol.diagnostics.iterations;
    if (!have_incumbent) {
      record.rel_J = kNaN;
      record.rel_u = kNaN;
    } else {
      const double denom_J = std::abs(prev_cost);
      const double diff_J = std::abs(prev_cost - sol.cost);
      record.rel_J = denom_J > 0.0
                         ? diff_J / denom_J
                         : (diff_J > 0.0
                                ? std::numeric_limits<double>::infinity()
                                : 0.0);
      const double denom_u = grid_l2_norm(incumbent.grid, incumbent.values);
      const double diff_u = grid_l2_norm(
          sol.control.grid, sol.control.values - incumbent.values);
      record.rel_u = denom_u > 0.0
                         ? diff_u / denom_u
                         : (diff_u > 0.0
                                ? std::numeric_limits<double>::infinity()
                                : 0.0);
    }
    report.iterations.push_back(record);

    incumbent = sol.control;
    have_incumbent = true;
    prev_cost = sol.cost;
    final_ensemble = std::move(ensemble);
    // Carry the accepted step scale so the next warm-started solve does not
    // restart from an over-long step.
    inner_options.eta0 = sol.diagnostics.eta_final;

    if (schedule.tol_J > 0.0 && schedule.tol_u > 0.0 &&
        record.rel_J <= schedule.tol_J && record.rel_u <= schedule.tol_u) {
      break;
    }
  }

  // First-order diagnostics of the final control on the final ensemble.
  try {
    SweepResult sweep = forward_all(spec, final_ensemble, incumbent);
    const std::vector<AdjointPath> adjoints =
        adjoint_all(spec, final_ensemble, incumbent, sweep.paths);
    report.psi = switching_function(spec.fields, sweep.paths, adjoints,
                                    final_ensemble, options.eps_sing_rel);
    report.arcs = classify_arcs(report.psi);
    report.singular_values = singular_feedback_profile(
        spec, sweep.paths, adjoints, final_ensemble, options.delta_den_rel);
  } catch (const std::exception& err) {
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    throw SolveAborted(std::string("final diagnostics aborted: ") + err.what(),
                       std::move(report));
  }

  report.control = std::move(incumbent);
  report.final_cost = prev_cost;
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
  return report;
}

}  // namespace enoc
