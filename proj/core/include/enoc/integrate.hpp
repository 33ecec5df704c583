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

#ifndef ENOC_INTEGRATE_HPP
#define ENOC_INTEGRATE_HPP

#include <vector>

#include "enoc/dynamics.hpp"

namespace enoc {

// Uniform time grid with `steps` intervals, hence steps+1 nodes.  node(steps)
// returns t_final exactly so grid ends are not subject to rounding.
struct TimeGrid {
  double t0 = 0.0;
  double t_final = 1.0;
  int steps = 1;

  static TimeGrid uniform(double t0, double t_final, int steps);

  double dt() const { return (t_final - t0) / steps; }
  int node_count() const { return steps + 1; }
  double node(int j) const { return j == steps ? t_final : t0 + j * dt(); }

  bool operator==(const TimeGrid&) const = default;
};

// Piecewise-linear scalar control sampled at the grid nodes.
struct ControlGrid {
  TimeGrid grid;
  Eigen::VectorXd values;  // length grid.node_count()

  void clamp(double lo, double hi);
};

ControlGrid constant_control(const TimeGrid& grid, double value);

// Linear resampling of a control onto another grid over the same horizon
// (exact copy when the grids coincide).
ControlGrid resample_linear(const ControlGrid& u, const TimeGrid& target);

// Trapezoid-weighted L2 norm of nodal values: the discrete analogue of
// (integral v(t)^2 dt)^(1/2) on the grid.
double grid_l2_norm(const TimeGrid& grid, const Eigen::VectorXd& values);

// State trajectory of one parameter sample on a grid.
struct StatePath {
  TimeGrid grid;
  std::vector<Vec> states;  // length grid.node_count()
  ParamSample sample;

  const Vec& terminal() const { return states.back(); }
};

// Costate trajectory of one parameter sample on the same grid.
struct AdjointPath {
  TimeGrid grid;
  std::vector<Vec> costates;  // length grid.node_count()
  ParamSample sample;
};

// Classic fixed-step RK4 sweep of  x' = f0 + f1*u  from spec.x0 over the
// control's grid.  Stage controls: u_j at the left node, the midpoint average
// (u_j + u_{j+1})/2 for the two half-step stages, u_{j+1} at the right node.
// A non-finite state or a model abort raises IntegrationError carrying the
// time and step index; values are never clamped.
StatePath integrate_forward(const ProblemSpec& spec, const ControlGrid& u,
                            const ParamSample& w);

// Backward RK4 sweep of the costate equation  p' = -(d(f0+f1*u)/dx)^T p  with
// terminal condition p(T) = -grad terminal_cost(x(T)).  Stage states are
// interpolated linearly between the stored forward nodes.
AdjointPath integrate_adjoint(const ProblemSpec& spec, const ControlGrid& u,
                              const StatePath& path, const ParamSample& w);

// A-priori sup-norm ceiling (|x0| + c*(T-t0)) * exp(c*(T-t0)) with
// c = growth_k0 + |u|_inf * growth_k1, valid wherever the declared
// linear-growth constants hold.  May overflow to +infinity for stiff scales;
// the ceiling then holds trivially.
double gronwall_bound(const ProblemSpec& spec, const ControlGrid& u);

}  // namespace enoc

#endif  // ENOC_INTEGRATE_HPP
