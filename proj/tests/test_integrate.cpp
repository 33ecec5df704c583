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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "enoc/errors.hpp"
#include "enoc/integrate.hpp"
#include "enoc/models.hpp"
#include "oracles.hpp"

using enoc::ControlGrid;
using enoc::IntegrationError;
using enoc::LqToyParams;
using enoc::Mat;
using enoc::ParamDistribution;
using enoc::ParamSample;
using enoc::ProblemSpec;
using enoc::TimeGrid;
using enoc::ValidationError;
using enoc::Vec;

namespace {

ParamSample midpoint_sample(const ProblemSpec& spec) {
  auto names = std::make_shared<std::vector<std::string>>();
  ParamSample s;
  s.weight = 1.0;
  for (const auto& d : spec.distributions) {
    names->push_back(d.name);
    s.values.push_back(d.kind == ParamDistribution::Kind::Uniform
                           ? 0.5 * (d.lo + d.hi)
                           : d.value);
  }
  s.names = names;
  return s;
}

ProblemSpec linear_problem(double theta, double x0, double horizon,
                           double u_lo = -10.0, double u_hi = 10.0) {
  LqToyParams prm;
  prm.theta_lo = prm.theta_hi = theta;
  prm.x0 = x0;
  prm.horizon = horizon;
  prm.u_min = u_lo;
  prm.u_max = u_hi;
  return enoc::lq_toy_problem(prm);
}

}  // namespace

TEST_CASE("time grids expose exact endpoints") {
  const auto grid = TimeGrid::uniform(0.0, 90.0, 900);
  CHECK(grid.node(0) == 0.0);
  CHECK(grid.node(900) == 90.0);
  CHECK(grid.dt() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(grid.node_count() == 901);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0), ValidationError);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 1.0, 10), ValidationError);
}

TEST_CASE("control grids clamp into the box") {
  auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 4), 0.0);
  u.values << -3.0, -0.5, 0.0, 0.5, 3.0;
  u.clamp(-1.0, 1.0);
  CHECK(u.values[0] == -1.0);
  CHECK(u.values[1] == -0.5);
  CHECK(u.values[4] == 1.0);
}

TEST_CASE("trapezoid norm is exact for constants and converges for ramps") {
  const auto grid = TimeGrid::uniform(0.0, 4.0, 100);
  CHECK(enoc::grid_l2_norm(grid, Eigen::VectorXd::Constant(101, 3.0)) ==
        doctest::Approx(3.0 * 2.0).epsilon(1e-14));  // 3 * sqrt(4)

  const auto fine = TimeGrid::uniform(0.0, 1.0, 1000);
  Eigen::VectorXd ramp(fine.node_count());
  for (int j = 0; j < fine.node_count(); ++j) ramp[j] = fine.node(j);
  // integral of t^2 over [0,1] is 1/3.
  CHECK(enoc::grid_l2_norm(fine, ramp) ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-5));
}

TEST_CASE("linear resampling is exact on matching grids and ramps") {
  const auto coarse = TimeGrid::uniform(0.0, 2.0, 10);
  ControlGrid u;
  u.grid = coarse;
  u.values.resize(coarse.node_count());
  for (int j = 0; j < coarse.node_count(); ++j) {
    u.values[j] = 3.0 * coarse.node(j) - 1.0;
  }
  const auto same = enoc::resample_linear(u, coarse);
  for (int j = 0; j < coarse.node_count(); ++j) {
    CHECK(same.values[j] == u.values[j]);
  }
  const auto fine = TimeGrid::uniform(0.0, 2.0, 64);
  const auto res = enoc::resample_linear(u, fine);
  for (int j = 0; j < fine.node_count(); ++j) {
    CHECK(res.values[j] ==
          doctest::Approx(3.0 * fine.node(j) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero fields leave the state constant") {
  auto spec = linear_problem(0.0, 7.5, 1.0);
  // theta = 0 and u = 0: the state never moves.
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 50), 0.0);
  const auto path = enoc::integrate_forward(spec, u, midpoint_sample(spec));
  for (const auto& x : path.states) {
    CHECK(x[0] == 7.5);
  }
}

TEST_CASE("forward sweep reproduces the linear closed form") {
  const double theta = -2.0, x0 = 1.0, horizon = 3.0, u_const = 0.5;
  const auto spec = linear_problem(theta, x0, horizon);
  const auto w = midpoint_sample(spec);
  const double exact =
      oracles::linear_ode_solution(x0, theta, 1.0, u_const, 0.0, horizon);

  const auto u =
      enoc::constant_control(TimeGrid::uniform(0.0, horizon, 1000), u_const);
  const auto path = enoc::integrate_forward(spec, u, w);
  CHECK(std::abs(path.terminal()[0] - exact) / std::abs(exact) < 1e-8);
}

TEST_CASE("forward sweep converges at fourth order") {
  const double theta = -2.0, x0 = 1.0, horizon = 3.0, u_const = 0.5;
  const auto spec = linear_problem(theta, x0, horizon);
  const auto w = midpoint_sample(spec);
  const double exact =
      oracles::linear_ode_solution(x0, theta, 1.0, u_const, 0.0, horizon);

  std::vector<double> errors;
  for (int steps : {250, 500, 1000}) {
    const auto u = enoc::constant_control(
        TimeGrid::uniform(0.0, horizon, steps), u_const);
    const auto path = enoc::integrate_forward(spec, u, w);
    errors.push_back(std::abs(path.terminal()[0] - exact));
  }
  // Halving the step should shrink the error by about 2^4 = 16.
  const double ratio_1 = errors[0] / errors[1];
  const double ratio_2 = errors[1] / errors[2];
  CHECK(ratio_1 > 12.0);
  CHECK(ratio_1 < 20.0);
  CHECK(ratio_2 > 12.0);
  CHECK(ratio_2 < 20.0);
}

TEST_CASE("population sweep is grid-converged at the default resolution") {
  const auto spec = enoc::sit_problem();
  const auto w = midpoint_sample(spec);
  const auto coarse = enoc::integrate_forward(
      spec, enoc::constant_control(TimeGrid::uniform(0.0, 90.0, 900), 0.0), w);
  const auto fine = enoc::integrate_forward(
      spec, enoc::constant_control(TimeGrid::uniform(0.0, 90.0, 1800), 0.0),
      w);
  const double rel = (coarse.terminal() - fine.terminal()).norm() /
                     fine.terminal().norm();
  CHECK(rel < 1e-6);
}

TEST_CASE("blow-ups abort with grid context instead of clamping") {
  ProblemSpec spec = linear_problem(0.0, 10.0, 2.0);
  spec.fields.f0.eval = [](const Vec& x, const ParamSample&) {
    return Vec::Constant(1, x[0] * x[0]);
  };
  spec.fields.f0.jac = [](const Vec& x, const ParamSample&) {
    return Mat::Constant(1, 1, 2.0 * x[0]);
  };
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 2.0, 100), 0.0);
  const auto w = midpoint_sample(spec);
  bool thrown = false;
  try {
    enoc::integrate_forward(spec, u, w);
  } catch (const IntegrationError& err) {
    thrown = true;
    CHECK(err.step() >= 0);
    CHECK(err.time() >= 0.0);
    CHECK(err.time() <= 2.0);
    CHECK(std::string(err.what()).find("non-finite") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("guarded model degeneracies abort with grid context") {
  // Starting with no males makes the mating fraction 0/0 at t = 0.
  enoc::SitParams prm;
  prm.m0 = 0.0;
  prm.ms0 = 0.0;
  const auto spec = enoc::sit_problem(prm);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 90.0, 10), 0.0);
  bool thrown = false;
  try {
    enoc::integrate_forward(spec, u, midpoint_sample(spec));
  } catch (const IntegrationError& err) {
    thrown = true;
    CHECK(err.step() == 0);
    CHECK(err.time() == 0.0);
    CHECK(std::string(err.what()).find("denominator") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("adjoint terminal condition is exact") {
  const auto spec = enoc::sit_problem();
  const auto w = midpoint_sample(spec);
  const auto u =
      enoc::constant_control(TimeGrid::uniform(0.0, 90.0, 300), 1000.0);
  const auto path = enoc::integrate_forward(spec, u, w);
  const auto adj = enoc::integrate_adjoint(spec, u, path, w);
  const Vec expect = -spec.terminal_cost_grad(path.terminal(), w);
  CHECK((adj.costates.back() - expect).norm() == 0.0);
}

TEST_CASE("constant-gradient-free costs give a zero adjoint") {
  auto spec = linear_problem(0.7, 1.0, 2.0);
  spec.terminal_cost = [](const Vec&, const ParamSample&) { return 42.0; };
  spec.terminal_cost_grad = [](const Vec&, const ParamSample&) {
    return Vec::Zero(1);
  };
  const auto w = midpoint_sample(spec);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 2.0, 100), 0.3);
  const auto path = enoc::integrate_forward(spec, u, w);
  const auto adj = enoc::integrate_adjoint(spec, u, path, w);
  for (const auto& p : adj.costates) {
    CHECK(p.norm() == 0.0);
  }
}

TEST_CASE("constant fields keep the costate constant") {
  ProblemSpec spec = linear_problem(0.0, 0.0, 1.0);
  // theta = 0: both Jacobians vanish, so p stays at its terminal value.
  const auto w = midpoint_sample(spec);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 64), 0.9);
  const auto path = enoc::integrate_forward(spec, u, w);
  const auto adj = enoc::integrate_adjoint(spec, u, path, w);
  for (const auto& p : adj.costates) {
    CHECK(p[0] == -1.0);
  }
}

TEST_CASE("adjoint sweep reproduces the linear closed form") {
  const double theta = -1.1, horizon = 2.0;
  const auto spec = linear_problem(theta, 1.0, horizon);
  const auto w = midpoint_sample(spec);
  const auto grid = TimeGrid::uniform(0.0, horizon, 1000);
  const auto u = enoc::constant_control(grid, 0.4);
  const auto path = enoc::integrate_forward(spec, u, w);
  const auto adj = enoc::integrate_adjoint(spec, u, path, w);
  // p' = -theta p with p(T) = -1 gives p(t) = -exp(theta (T - t)).
  for (int j = 0; j <= grid.steps; ++j) {
    const double expect = -std::exp(theta * (horizon - grid.node(j)));
    CHECK(std::abs(adj.costates[j][0] - expect) / std::abs(expect) < 1e-8);
  }
}

TEST_CASE("a-priori ceiling has the closed form (|x0| + cT) exp(cT)") {
  // |x0| = 1, no drift growth, unit channel growth, |u| = 1, T = 1:
  // the ceiling is exactly 2e.
  const auto spec = linear_problem(0.0, 1.0, 1.0);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 10), 1.0);
  CHECK(enoc::gronwall_bound(spec, u) ==
        doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("trajectories respect the a-priori ceiling") {
  struct Case {
    const char* model;
    double u_value;
    int steps;
  };
  for (const auto& c : std::initializer_list<Case>{
           {"lq_toy", 1.0, 200},
           {"double_integrator", -1.0, 200},
           {"harvest", 0.7, 400},
           {"sit", 1.0e5, 900}}) {
    CAPTURE(c.model);
    const auto spec = enoc::make_problem(c.model);
    const auto w = midpoint_sample(spec);
    const auto u = enoc::constant_control(
        TimeGrid::uniform(spec.t0, spec.t_final, c.steps), c.u_value);
    const double ceiling = enoc::gronwall_bound(spec, u);
    const auto path = enoc::integrate_forward(spec, u, w);
    for (const auto& x : path.states) {
      CHECK(x.norm() <= ceiling);
    }
  }
}

TEST_CASE("nearby controls give proportionally nearby population paths") {
  const auto spec = enoc::sit_problem();
  const auto w = midpoint_sample(spec);
  double prev_ratio = 0.0;
  for (int steps : {300, 600}) {
    const auto grid = TimeGrid::uniform(0.0, 90.0, steps);
    auto u = enoc::constant_control(grid, 1.0e4);
    auto v = u;
    for (int j = 0; j < grid.node_count(); ++j) {
      v.values[j] += 100.0 * std::sin(grid.node(j) / 9.0);
    }
    const auto path_u = enoc::integrate_forward(spec, u, w);
    const auto path_v = enoc::integrate_forward(spec, v, w);
    double sup = 0.0;
    for (int j = 0; j < grid.node_count(); ++j) {
      sup = std::max(
          sup, (path_u.states[j] - path_v.states[j]).lpNorm<Eigen::Infinity>());
    }
    const double l2 = enoc::grid_l2_norm(grid, v.values - u.values);
    const double ratio = sup / l2;
    if (prev_ratio != 0.0) {
      // The Lipschitz ratio is a property of the dynamics, not the grid.
      CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.05));
    }
    prev_ratio = ratio;
  }
}

TEST_CASE("paths vary continuously with the parameters") {
  const auto spec = enoc::sit_problem();
  const auto base = midpoint_sample(spec);
  const auto u =
      enoc::constant_control(TimeGrid::uniform(0.0, 90.0, 450), 5.0e4);
  const auto base_path = enoc::integrate_forward(spec, u, base);

  // Bump the emergence rate by increasing amounts: the sup distance between
  // the perturbed and the base path must grow monotonically from zero.
  auto sup_dist = [&](double bump) {
    auto w = base;
    w.values[0] += bump;
    const auto path = enoc::integrate_forward(spec, u, w);
    double sup = 0.0;
    for (std::size_t j = 0; j < path.states.size(); ++j) {
      sup = std::max(sup, (path.states[j] - base_path.states[j])
                              .lpNorm<Eigen::Infinity>());
    }
    return sup;
  };
  const double d_near = sup_dist(0.002);
  const double d_mid = sup_dist(0.005);
  const double d_far = sup_dist(0.010);
  CHECK(d_near > 0.0);
  CHECK(d_near < d_mid);
  CHECK(d_mid < d_far);
}
