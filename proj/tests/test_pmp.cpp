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
#include "enoc/models.hpp"
#include "enoc/pmp.hpp"
#include "oracles.hpp"

using enoc::AdjointPath;
using enoc::ArcLabel;
using enoc::ControlGrid;
using enoc::Ensemble;
using enoc::ParamDistribution;
using enoc::ParamSample;
using enoc::ProblemSpec;
using enoc::StatePath;
using enoc::SwitchingProfile;
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

// Forward + adjoint sweeps of every ensemble member at one control.
struct Sweeps {
  std::vector<StatePath> paths;
  std::vector<AdjointPath> adjoints;
};

Sweeps sweep_all(const ProblemSpec& spec, const Ensemble& ensemble,
                 const ControlGrid& u) {
  Sweeps s;
  for (const auto& w : ensemble.samples) {
    s.paths.push_back(enoc::integrate_forward(spec, u, w));
    s.adjoints.push_back(enoc::integrate_adjoint(spec, u, s.paths.back(), w));
  }
  return s;
}

// Constant state/costate histories for hand-built scenarios.
Sweeps constant_sweeps(const TimeGrid& grid, const Vec& x, const Vec& p,
                       const ParamSample& sample) {
  Sweeps s;
  StatePath path;
  path.grid = grid;
  path.sample = sample;
  path.states.assign(static_cast<std::size_t>(grid.node_count()), x);
  AdjointPath adj;
  adj.grid = grid;
  adj.sample = sample;
  adj.costates.assign(static_cast<std::size_t>(grid.node_count()), p);
  s.paths.push_back(std::move(path));
  s.adjoints.push_back(std::move(adj));
  return s;
}

SwitchingProfile manual_profile(const TimeGrid& grid,
                                const Eigen::VectorXd& psi, double eps) {
  SwitchingProfile profile;
  profile.grid = grid;
  profile.psi = psi;
  profile.eps_sing = eps;
  return profile;
}

}  // namespace

TEST_CASE("a zero control channel makes the switching function vanish") {
  auto spec = enoc::lq_toy_problem();
  spec.fields.f1.eval = [](const Vec&, const ParamSample&) {
    return Vec::Zero(1);
  };
  const auto ens = enoc::sample_ensemble(spec.distributions, 3, 1);
  const auto u =
      enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 20), 0.25);
  const auto sweeps = sweep_all(spec, ens, u);
  const auto profile = enoc::switching_function(spec.fields, sweeps.paths,
                                                sweeps.adjoints, ens);
  CHECK(profile.psi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(profile.eps_sing == 0.0);
  // Identically-zero switching classifies as one singular interval.
  const auto arcs = enoc::classify_arcs(profile);
  REQUIRE(arcs.intervals.size() == 1);
  CHECK(arcs.intervals[0].label == ArcLabel::Singular);
}

TEST_CASE("constant unit pairing gives a unit switching function") {
  // Costate fixed at e4 against the release channel (0,0,0,1,c1): the pairing
  // is exactly 1 at every node.
  const auto spec = enoc::sit_problem();
  const auto ens = enoc::sample_ensemble(spec.distributions, 1, 9);
  const auto grid = TimeGrid::uniform(0.0, 90.0, 30);
  const Vec p = (Vec(5) << 0.0, 0.0, 0.0, 1.0, 0.0).finished();
  const auto sweeps =
      constant_sweeps(grid, spec.x0, p, ens.samples[0]);
  const auto profile = enoc::switching_function(spec.fields, sweeps.paths,
                                                sweeps.adjoints, ens);
  for (int j = 0; j < grid.node_count(); ++j) {
    CHECK(profile.psi[j] == doctest::Approx(1.0).epsilon(1e-15));
  }
  const auto arcs = enoc::classify_arcs(profile);
  REQUIRE(arcs.intervals.size() == 1);
  CHECK(arcs.intervals[0].label == ArcLabel::Max);
  CHECK(arcs.intervals[0].first_node == 0);
  CHECK(arcs.intervals[0].last_node == grid.node_count() - 1);
}

TEST_CASE("driftless linear toy pins the switching function at -1") {
  enoc::LqToyParams prm;
  prm.theta_lo = prm.theta_hi = 0.0;
  const auto spec = enoc::lq_toy_problem(prm);
  const auto ens = enoc::sample_ensemble(spec.distributions, 2, 5);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 50), 0.2);
  const auto sweeps = sweep_all(spec, ens, u);
  const auto profile = enoc::switching_function(spec.fields, sweeps.paths,
                                                sweeps.adjoints, ens);
  for (int j = 0; j < profile.psi.size(); ++j) {
    CHECK(profile.psi[j] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  const auto arcs = enoc::classify_arcs(profile);
  REQUIRE(arcs.intervals.size() == 1);
  CHECK(arcs.intervals[0].label == ArcLabel::Min);
}

TEST_CASE("hamiltonian is the costate pairing of the right-hand side") {
  const auto spec = enoc::lq_toy_problem();
  const auto w = midpoint_sample(spec);
  const Vec x = Vec::Constant(1, 2.0);
  SUBCASE("zero costate gives zero") {
    CHECK(enoc::hamiltonian(spec.fields, x, Vec::Zero(1), 3.0, w) == 0.0);
  }
  SUBCASE("matches the explicit affine expression") {
    const Vec p = Vec::Constant(1, -1.5);
    // H = p (theta x + u) with theta = 0.5.
    CHECK(enoc::hamiltonian(spec.fields, x, p, 0.7, w) ==
          doctest::Approx(-1.5 * (0.5 * 2.0 + 0.7)).epsilon(1e-15));
  }
  SUBCASE("is affine in the control") {
    const Vec p = Vec::Constant(1, 2.5);
    const double h0 = enoc::hamiltonian(spec.fields, x, p, 0.0, w);
    const double h1 = enoc::hamiltonian(spec.fields, x, p, 1.0, w);
    const double h_half = enoc::hamiltonian(spec.fields, x, p, 0.5, w);
    CHECK(std::abs(h_half - 0.5 * (h0 + h1)) < 1e-12);
  }
}

TEST_CASE("switching function equals the control slope of the mean hamiltonian") {
  const auto spec = enoc::sit_problem();
  const auto ens = enoc::sample_ensemble(spec.distributions, 3, 2);
  const auto u =
      enoc::constant_control(TimeGrid::uniform(0.0, 90.0, 90), 5.0e4);
  const auto sweeps = sweep_all(spec, ens, u);
  const auto profile = enoc::switching_function(spec.fields, sweeps.paths,
                                                sweeps.adjoints, ens);
  const double scale = profile.psi.cwiseAbs().maxCoeff();
  for (int j : {0, 17, 45, 90}) {
    double slope = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const auto& x = sweeps.paths[i].states[static_cast<std::size_t>(j)];
      const auto& p = sweeps.adjoints[i].costates[static_cast<std::size_t>(j)];
      slope += ens.samples[i].weight *
               (enoc::hamiltonian(spec.fields, x, p, 1.0, ens.samples[i]) -
                enoc::hamiltonian(spec.fields, x, p, 0.0, ens.samples[i]));
    }
    CHECK(std::abs(profile.psi[j] - slope) / scale < 1e-10);
  }
}

TEST_CASE("time derivative of the switching function is the bracket pairing") {
  // Along any trajectory d/dt <p, f1> = <p, [f0, f1]>; summed over the
  // ensemble this identifies the orientation of the bracket.  The central
  // difference of psi must converge to the pairing at second order.
  const auto spec = enoc::make_problem("harvest");
  const auto ens = enoc::sample_ensemble(spec.distributions, 1, 3);

  auto defect = [&](int steps) {
    const auto grid = TimeGrid::uniform(0.0, 10.0, steps);
    const auto u = enoc::constant_control(grid, 0.3);
    const auto sweeps = sweep_all(spec, ens, u);
    const auto profile = enoc::switching_function(spec.fields, sweeps.paths,
                                                  sweeps.adjoints, ens);
    const double h = grid.dt();
    double worst = 0.0;
    double scale = 0.0;
    for (int j = 1; j < grid.node_count() - 1; ++j) {
      const double diff =
          (profile.psi[j + 1] - profile.psi[j - 1]) / (2.0 * h);
      double pairing = 0.0;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto& x = sweeps.paths[i].states[static_cast<std::size_t>(j)];
        const auto& p =
            sweeps.adjoints[i].costates[static_cast<std::size_t>(j)];
        pairing += ens.samples[i].weight *
                   p.dot(enoc::lie_bracket(spec.fields.f0, spec.fields.f1, x,
                                           ens.samples[i]));
      }
      worst = std::max(worst, std::abs(diff - pairing));
      scale = std::max(scale, std::abs(pairing));
    }
    return worst / scale;
  };

  const double coarse = defect(200);
  const double fine = defect(400);
  CHECK(fine < 1e-3);
  // Second-order convergence: halving the step quarters the defect.
  CHECK(coarse / fine > 2.5);
  CHECK(coarse / fine < 6.0);
}

TEST_CASE("costate magnitudes are stable under grid refinement") {
  const auto spec = enoc::sit_problem();
  const auto ens = enoc::sample_ensemble(spec.distributions, 2, 11);
  auto sup_costate = [&](int steps) {
    const auto u = enoc::constant_control(
        TimeGrid::uniform(0.0, 90.0, steps), 1.0e5);
    const auto sweeps = sweep_all(spec, ens, u);
    double sup = 0.0;
    for (const auto& adj : sweeps.adjoints) {
      for (const auto& p : adj.costates) {
        sup = std::max(sup, p.lpNorm<Eigen::Infinity>());
      }
    }
    return sup;
  };
  const double coarse = sup_costate(450);
  const double fine = sup_costate(900);
  CHECK(std::abs(coarse - fine) / fine < 0.01);
}

TEST_CASE("classification thresholds by the dead-band") {
  const auto grid = TimeGrid::uniform(0.0, 1.0, 5);
  Eigen::VectorXd psi(6);
  psi << 1.0, 1.0, 5e-4, -5e-4, -1.0, -1.0;
  const auto arcs = enoc::classify_arcs(manual_profile(grid, psi, 1e-3), 1);
  REQUIRE(arcs.labels.size() == 6);
  CHECK(arcs.labels[0] == ArcLabel::Max);
  CHECK(arcs.labels[1] == ArcLabel::Max);
  CHECK(arcs.labels[2] == ArcLabel::Singular);
  CHECK(arcs.labels[3] == ArcLabel::Singular);
  CHECK(arcs.labels[4] == ArcLabel::Min);
  CHECK(arcs.labels[5] == ArcLabel::Min);
  REQUIRE(arcs.intervals.size() == 3);
  CHECK(arcs.intervals[0].label == ArcLabel::Max);
  CHECK(arcs.intervals[1].label == ArcLabel::Singular);
  CHECK(arcs.intervals[2].label == ArcLabel::Min);
}

TEST_CASE("intervals partition the grid in time order") {
  const auto grid = TimeGrid::uniform(0.0, 1.0, 40);
  Eigen::VectorXd psi(41);
  for (int j = 0; j <= 40; ++j) {
    psi[j] = std::sin(0.7 * j) * (j % 7 == 0 ? 0.0005 : 1.0);
  }
  const auto arcs = enoc::classify_arcs(manual_profile(grid, psi, 1e-3));
  int expected_start = 0;
  for (const auto& iv : arcs.intervals) {
    CHECK(iv.first_node == expected_start);
    CHECK(iv.last_node >= iv.first_node);
    expected_start = iv.last_node + 1;
  }
  CHECK(expected_start == 41);
  // Node labels agree with the interval they fall in.
  for (const auto& iv : arcs.intervals) {
    for (int j = iv.first_node; j <= iv.last_node; ++j) {
      CHECK(arcs.labels[static_cast<std::size_t>(j)] == iv.label);
    }
  }
}

TEST_CASE("one-node blips are absorbed by the longer neighbour") {
  const auto grid = TimeGrid::uniform(0.0, 1.0, 20);
  Eigen::VectorXd psi(21);
  for (int j = 0; j <= 20; ++j) psi[j] = -1.0;
  psi[10] = 1.0;  // lone MAX spike inside a MIN plateau
  const auto arcs = enoc::classify_arcs(manual_profile(grid, psi, 1e-3), 2);
  REQUIRE(arcs.intervals.size() == 1);
  CHECK(arcs.intervals[0].label == ArcLabel::Min);
  CHECK(arcs.intervals[0].first_node == 0);
  CHECK(arcs.intervals[0].last_node == 20);
}

TEST_CASE("classification is invariant under positive rescaling") {
  const auto grid = TimeGrid::uniform(0.0, 1.0, 30);
  Eigen::VectorXd psi(31);
  for (int j = 0; j <= 30; ++j) psi[j] = std::sin(j * 0.4) - 0.2;
  const double eps_rel = 1e-3;
  const double scale_a = psi.cwiseAbs().maxCoeff();
  const auto arcs_a =
      enoc::classify_arcs(manual_profile(grid, psi, eps_rel * scale_a));
  const Eigen::VectorXd scaled = 1000.0 * psi;
  const auto arcs_b = enoc::classify_arcs(
      manual_profile(grid, scaled, eps_rel * scaled.cwiseAbs().maxCoeff()));
  REQUIRE(arcs_a.labels.size() == arcs_b.labels.size());
  for (std::size_t j = 0; j < arcs_a.labels.size(); ++j) {
    CHECK(arcs_a.labels[j] == arcs_b.labels[j]);
  }
}

TEST_CASE("degenerate bracket structure reports an undefined singular value") {
  const auto spec = enoc::make_problem("double_integrator");
  const auto ens = enoc::sample_ensemble(spec.distributions, 1, 1);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 10), 0.5);
  const auto sweeps = sweep_all(spec, ens, u);
  for (int j : {0, 5, 10}) {
    CHECK(!enoc::singular_feedback(spec, sweeps.paths, sweeps.adjoints, ens, j)
               .has_value());
  }
  const auto profile = enoc::singular_feedback_profile(
      spec, sweeps.paths, sweeps.adjoints, ens);
  for (int j = 0; j < profile.size(); ++j) {
    CHECK(std::isnan(profile[j]));
  }
}

TEST_CASE("singular feedback reproduces the hand value on the harvest arc") {
  // On the stock's singular arc x = 1/2 with costate (1,-1) the iterated
  // brackets pair to numerator -1/4 and denominator 1/2, so the feedback is
  // exactly 1/2 (= rho/2, the value that freezes the stock).
  const auto spec = enoc::make_problem("harvest");
  const auto ens = enoc::sample_ensemble(spec.distributions, 1, 1);
  const auto grid = TimeGrid::uniform(0.0, 10.0, 1);
  const Vec x = (Vec(2) << 0.5, 0.0).finished();
  const Vec p = (Vec(2) << 1.0, -1.0).finished();
  const auto sweeps = constant_sweeps(grid, x, p, ens.samples[0]);
  const auto value =
      enoc::singular_feedback(spec, sweeps.paths, sweeps.adjoints, ens, 0);
  REQUIRE(value.has_value());
  CHECK(*value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("singular feedback clamps into the control box") {
  // Same costate but a stock far from the arc pushes the raw formula outside
  // [0, 1]; the reported candidate must be clamped, never out of range.
  const auto spec = enoc::make_problem("harvest");
  const auto ens = enoc::sample_ensemble(spec.distributions, 1, 1);
  const auto grid = TimeGrid::uniform(0.0, 10.0, 1);
  const Vec x = (Vec(2) << 0.05, 0.0).finished();
  const Vec p = (Vec(2) << -5.0, -1.0).finished();
  const auto sweeps = constant_sweeps(grid, x, p, ens.samples[0]);
  const auto value =
      enoc::singular_feedback(spec, sweeps.paths, sweeps.adjoints, ens, 0);
  if (value.has_value()) {
    CHECK(*value >= spec.u_min);
    CHECK(*value <= spec.u_max);
  }
}

TEST_CASE("singular profile marks undefined nodes as NaN") {
  // With costate (1,-1) the harvest denominator is x (4x - 1): it vanishes
  // at x = 1/4 and is healthy at x = 1/2.
  const auto spec = enoc::make_problem("harvest");
  const auto ens = enoc::sample_ensemble(spec.distributions, 1, 1);
  const auto grid = TimeGrid::uniform(0.0, 10.0, 1);
  const Vec p = (Vec(2) << 1.0, -1.0).finished();

  Sweeps sweeps;
  StatePath path;
  path.grid = grid;
  path.sample = ens.samples[0];
  path.states = {(Vec(2) << 0.25, 0.0).finished(),
                 (Vec(2) << 0.5, 0.0).finished()};
  AdjointPath adj;
  adj.grid = grid;
  adj.sample = ens.samples[0];
  adj.costates = {p, p};
  sweeps.paths.push_back(path);
  sweeps.adjoints.push_back(adj);

  const auto profile = enoc::singular_feedback_profile(
      spec, sweeps.paths, sweeps.adjoints, ens);
  REQUIRE(profile.size() == 2);
  CHECK(std::isnan(profile[0]));
  CHECK(profile[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ensemble sweep mismatches are rejected") {
  const auto spec = enoc::lq_toy_problem();
  const auto ens = enoc::sample_ensemble(spec.distributions, 2, 1);
  const auto u = enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 10), 0.0);
  auto sweeps = sweep_all(spec, ens, u);

  SUBCASE("missing adjoint") {
    sweeps.adjoints.pop_back();
    CHECK_THROWS_AS(enoc::switching_function(spec.fields, sweeps.paths,
                                             sweeps.adjoints, ens),
                    ValidationError);
  }
  SUBCASE("grid mismatch") {
    const auto other =
        enoc::constant_control(TimeGrid::uniform(0.0, 1.0, 11), 0.0);
    sweeps.paths[1] = enoc::integrate_forward(spec, other, ens.samples[1]);
    CHECK_THROWS_AS(enoc::switching_function(spec.fields, sweeps.paths,
                                             sweeps.adjoints, ens),
                    ValidationError);
  }
  SUBCASE("node out of range") {
    CHECK_THROWS_AS(enoc::singular_feedback(spec, sweeps.paths,
                                            sweeps.adjoints, ens, 11),
                    ValidationError);
  }
}
