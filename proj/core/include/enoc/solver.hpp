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

#ifndef ENOC_SOLVER_HPP
#define ENOC_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "enoc/pmp.hpp"

namespace enoc {

// Projected-gradient inner solver options.  The descent direction is the
// switching function itself (the cost gradient w.r.t. the nodal control is
// -Psi weighted by the trapezoid rule), projected onto the control box.
struct SolverOptions {
  int max_inner_iters = 300;
  double eta0 = 0.0;         // initial step size; 0 means auto-scale from Psi
  double backtrack = 0.5;    // step shrink factor in (0,1)
  double armijo_c = 1e-4;    // sufficient-decrease constant
  int max_backtracks = 40;
  double tol_inner = 1e-12;  // stop when the relative cost decrease drops below
  int grid_n = 900;         // time steps of the control/state grid
  double eps_sing_rel = 1e-3;   // relative dead-band of the arc classifier
  double delta_den_rel = 1e-8;  // relative guard of the singular denominator
  void validate() const;
};

// Ensemble-size schedule of the outer sample-average scheme.  Every
// iteration draws its samples from the start of the same base-seeded stream,
// so the size-k ensemble is a prefix of any larger one and consecutive
// iterates differ only by the newly appended samples.  Each inner solve
// warm-starts from the previous control.  Early stop triggers only when both
// tolerances are positive and both consecutive-iterate metrics fall below
// them.
struct SaaSchedule {
  std::vector<std::size_t> sizes;  // strictly increasing, all >= 1
  std::uint64_t base_seed = 1;
  double tol_J = 0.0;
  double tol_u = 0.0;
  void validate() const;
};

struct InnerDiagnostics {
  int iterations = 0;      // gradient evaluations performed
  bool converged = false;  // negligible relative decrease or a KKT fixed point
  bool stalled = false;    // backtracking exhausted without descent
  double eta_final = 0.0;  // last accepted step size (seed for warm restarts)
  std::vector<double> cost_history;  // accepted costs, strictly non-increasing
};

struct FixedEnsembleSolution {
  ControlGrid control;
  double cost = 0.0;
  InnerDiagnostics diagnostics;
};

// One row of the outer iteration table.  rel_J and rel_u compare consecutive
// outer iterates and are NaN on the first row.
struct OuterRecord {
  std::size_t k = 0;
  double cost = 0.0;
  double rel_J = 0.0;
  double rel_u = 0.0;
  int inner_iterations = 0;
};

struct SolveReport {
  std::vector<OuterRecord> iterations;
  ControlGrid control;
  SwitchingProfile psi;        // at the final control on the final ensemble
  ArcClassification arcs;
  Eigen::VectorXd singular_values;  // singular formula per node, NaN = undefined
  double final_cost = 0.0;
  double wall_seconds = 0.0;
};

// Raised when an outer iteration aborts (e.g. an integration blow-up); the
// rows completed so far remain available for diagnosis.
class SolveAborted : public std::runtime_error {
 public:
  SolveAborted(const std::string& what, SolveReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SolveReport& partial() const { return partial_; }

 private:
  SolveReport partial_;
};

// Ensemble-average terminal cost of one control: forward sweeps in sample
// order, then the weighted average.  Integration aborts are re-raised with
// the sample index attached.
double cost_evaluate(const ProblemSpec& spec, const Ensemble& ensemble,
                     const ControlGrid& u);

// Projected-gradient descent with Armijo backtracking on a fixed ensemble.
// Starts from `warm_start` when given (resampled onto the solver grid if
// needed), else from the box midpoint.  Monotone by construction: a trial
// step is only accepted on sufficient decrease; when the accepted decrease is
// negligible the previous iterate is kept, so re-solving from a solution is a
// no-op.  Exhausted backtracking returns the current iterate flagged stalled.
FixedEnsembleSolution solve_fixed_ensemble(const ProblemSpec& spec,
                                           const Ensemble& ensemble,
                                           const SolverOptions& options,
                                           const ControlGrid* warm_start = nullptr);

// Outer sample-average scheme over the schedule: nested prefix ensembles
// (see SaaSchedule), warm-started inner solves, per-iteration record of
//   rel_J = |J_prev - J| / |J_prev|,
//   rel_u = |u - u_prev|_L2 / |u_prev|_L2  (trapezoid norm).
// The report carries the final control with its switching profile, arc
// classification and singular-formula values on the last ensemble.
SolveReport saa_solve(const ProblemSpec& spec, const SaaSchedule& schedule,
                      const SolverOptions& options);

}  // namespace enoc

#endif  // ENOC_SOLVER_HPP
