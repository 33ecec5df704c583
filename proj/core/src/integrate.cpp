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

#include "enoc/integrate.hpp"

#include <cmath>
#include <sstream>

#include "enoc/errors.hpp"

namespace enoc {

TimeGrid TimeGrid::uniform(double t0, double t_final, int steps) {
  if (steps < 1) {
    throw ValidationError("TimeGrid: steps must be at least 1");
  }
  if (!(t_final > t0)) {
    throw ValidationError("TimeGrid: t_final must exceed t0");
  }
  TimeGrid grid;
  grid.t0 = t0;
  grid.t_final = t_final;
  grid.steps = steps;
  return grid;
}

void ControlGrid::clamp(double lo, double hi) {
  values = values.cwiseMax(lo).cwiseMin(hi);
}

ControlGrid constant_control(const TimeGrid& grid, double value) {
  ControlGrid u;
  u.grid = grid;
  u.values = Eigen::VectorXd::Constant(grid.node_count(), value);
  return u;
}

ControlGrid resample_linear(const ControlGrid& u, const TimeGrid& target) {
  if (u.values.size() != u.grid.node_count()) {
    throw ValidationError("resample_linear: control/grid length mismatch");
  }
  if (u.grid == target) return u;
  ControlGrid out;
  out.grid = target;
  out.values.resize(target.node_count());
  const double h = u.grid.dt();
  for (int j = 0; j < target.node_count(); ++j) {
    const double t = target.node(j);
    double s = (t - u.grid.t0) / h;
    int cell = static_cast<int>(std::floor(s));
    if (cell < 0) cell = 0;
    if (cell > u.grid.steps - 1) cell = u.grid.steps - 1;
    const double frac = s - cell;
    out.values[j] =
        (1.0 - frac) * u.values[cell] + frac * u.values[cell + 1];
  }
  return out;
}

double grid_l2_norm(const TimeGrid& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.node_count()) {
    throw ValidationError("grid_l2_norm: values/grid length mismatch");
  }
  const double h = grid.dt();
  double acc = 0.5 * (values[0] * values[0] +
                      values[values.size() - 1] * values[values.size() - 1]);
  for (Eigen::Index j = 1; j + 1 < values.size(); ++j) {
    acc += values[j] * values[j];
  }
  return std::sqrt(h * acc);
}

namespace {

[[noreturn]] void rethrow_with_context(const IntegrationError& err,
                                       const char* sweep, double t, int step) {
  std::ostringstream msg;
  msg << err.what() << " (" << sweep << " sweep at t=" << t << ", step "
      << step << ")";
  throw IntegrationError(msg.str(), t, step);
}

[[noreturn]] void throw_nonfinite(const char* sweep, double t, int step) {
  std::ostringstream msg;
  msg << "non-finite state in " << sweep << " sweep at t=" << t << ", step "
      << step;
  throw IntegrationError(msg.str(), t, step);
}

}  // namespace

StatePath integrate_forward(const ProblemSpec& spec, const ControlGrid& u,
                            const ParamSample& w) {
  if (u.values.size() != u.grid.node_count()) {
    throw ValidationError("integrate_forward: control/grid length mismatch");
  }
  const TimeGrid& grid = u.grid;
  const double h = grid.dt();

  StatePath path;
  path.grid = grid;
  path.sample = w;
  path.states.resize(static_cast<std::size_t>(grid.node_count()));
  path.states[0] = spec.x0;

  Vec x = spec.x0;
  for (int j = 0; j < grid.steps; ++j) {
    const double t = grid.node(j);
    const double u0 = u.values[j];
    const double u1 = u.values[j + 1];
    const double um = 0.5 * (u0 + u1);
    try {
      const Vec k1 = eval_rhs(spec.fields, x, u0, w);
      const Vec k2 = eval_rhs(spec.fields, x + (0.5 * h) * k1, um, w);
      const Vec k3 = eval_rhs(spec.fields, x + (0.5 * h) * k2, um, w);
      const Vec k4 = eval_rhs(spec.fields, x + h * k3, u1, w);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const IntegrationError& err) {
      rethrow_with_context(err, "forward", t, j);
    }
    if (!x.allFinite()) {
      throw_nonfinite("forward", grid.node(j + 1), j + 1);
    }
    path.states[static_cast<std::size_t>(j + 1)] = x;
  }
  return path;
}

AdjointPath integrate_adjoint(const ProblemSpec& spec, const ControlGrid& u,
                              const StatePath& path, const ParamSample& w) {
  if (u.values.size() != u.grid.node_count()) {
    throw ValidationError("integrate_adjoint: control/grid length mismatch");
  }
  if (!(path.grid == u.grid)) {
    throw ValidationError("integrate_adjoint: state path is on another grid");
  }
  if (path.states.size() != static_cast<std::size_t>(u.grid.node_count())) {
    throw ValidationError("integrate_adjoint: path/grid length mismatch");
  }
  const TimeGrid& grid = u.grid;
  const double h = grid.dt();

  AdjointPath adj;
  adj.grid = grid;
  adj.sample = w;
  adj.costates.resize(static_cast<std::size_t>(grid.node_count()));

  // p' = -(J0 + u J1)^T p, integrated backward; the terminal condition makes
  // descent along +Psi reduce the ensemble cost.
  const Vec grad = spec.terminal_cost_grad(path.terminal(), w);
  if (grad.size() != spec.fields.state_dim) {
    throw ValidationError("integrate_adjoint: terminal gradient dimension");
  }
  Vec p = -grad;
  adj.costates[static_cast<std::size_t>(grid.steps)] = p;

  auto rhs = [&](const Vec& x, const Vec& pv, double uv) -> Vec {
    const Mat jac =
        spec.fields.f0.jac(x, w) + uv * spec.fields.f1.jac(x, w);
    return -(jac.transpose() * pv);
  };

  for (int j = grid.steps; j > 0; --j) {
    const double t = grid.node(j);
    const Vec& x1 = path.states[static_cast<std::size_t>(j)];
    const Vec& x0 = path.states[static_cast<std::size_t>(j - 1)];
    const Vec xm = 0.5 * (x0 + x1);
    const double u1 = u.values[j];
    const double u0 = u.values[j - 1];
    const double um = 0.5 * (u0 + u1);
    try {
      // RK4 with step -h: stage states interpolate the stored forward path.
      const Vec k1 = rhs(x1, p, u1);
      const Vec k2 = rhs(xm, p - (0.5 * h) * k1, um);
      const Vec k3 = rhs(xm, p - (0.5 * h) * k2, um);
      const Vec k4 = rhs(x0, p - h * k3, u0);
      p -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const IntegrationError& err) {
      rethrow_with_context(err, "adjoint", t, j);
    }
    if (!p.allFinite()) {
      throw_nonfinite("adjoint", grid.node(j - 1), j - 1);
    }
    adj.costates[static_cast<std::size_t>(j - 1)] = p;
  }
  return adj;
}

double gronwall_bound(const ProblemSpec& spec, const ControlGrid& u) {
  if (u.values.size() != u.grid.node_count()) {
    throw ValidationError("gronwall_bound: control/grid length mismatch");
  }
  const double u_inf = u.values.cwiseAbs().maxCoeff();
  const double c = spec.growth_k0 + u_inf * spec.growth_k1;
  const double span = u.grid.t_final - u.grid.t0;
  return (spec.x0.norm() + c * span) * std::exp(c * span);
}

}  // namespace enoc
