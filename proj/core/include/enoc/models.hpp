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

#ifndef ENOC_MODELS_HPP
#define ENOC_MODELS_HPP

#include <map>
#include <string>
#include <vector>

#include "enoc/dynamics.hpp"

namespace enoc {

// --- Sterile insect release planning -----------------------------------
//
// Mosquito population with a sterile-male release rate as the control.
// States: A  aquatic stage, F  fertilized females, M  wild males,
//         Ms sterile males, z  accumulated release effort (z' = c1 * u).
// Uncertain parameters: emergence rate nu and the four death rates
// mu_A, mu_F, mu_M, mu_S, each uniform on a literature-derived interval.
// The cost  z(T) + c2 * (F(T) + M(T))  trades total release effort against
// the fertile population left at the horizon.
struct SitParams {
  double horizon = 90.0;
  double alpha = 6.66;        // eggs per fertilized female per unit time
  double gamma = 0.91;        // sterile-male mating competitiveness
  double r = 0.5;             // female fraction among emerging adults
  double carrying = 20000.0;  // aquatic-stage carrying capacity
  double c1 = 0.15;           // running cost weight on the release rate
  double c2 = 200.0;          // terminal weight on the fertile population
  double u_min = 0.0;
  double u_max = 2.0e5;
  double a0 = 19941.0;
  double f0 = 14956.0;
  double m0 = 12962.0;
  double ms0 = 0.0;
};

ProblemSpec sit_problem(const SitParams& params = {});

// --- Scalar linear toy ---------------------------------------------------
//
// x' = theta * x + u,  cost x(T).  With theta a point mass the optimal
// control and cost are known in closed form, which makes this the main
// gradient- and solver-verification model.
struct LqToyParams {
  double horizon = 1.0;
  double x0 = 0.0;
  double u_min = -1.0;
  double u_max = 1.0;
  double theta_lo = 0.5;  // theta_lo == theta_hi declares a point mass
  double theta_hi = 0.5;
};

ProblemSpec lq_toy_problem(const LqToyParams& params = {});

// --- Double integrator ---------------------------------------------------
//
// x1' = gain * x2, x2' = u, cost x1(T).  Its bracket structure degenerates
// ([f1,[f0,f1]] vanishes identically), so it exercises the undefined branch
// of the singular control formula.
struct DoubleIntegratorParams {
  double horizon = 1.0;
  double x1_0 = 0.0;
  double x2_0 = 0.0;
  double u_min = -1.0;
  double u_max = 1.0;
  double gain_lo = 1.0;  // gain_lo == gain_hi declares a point mass
  double gain_hi = 1.0;
};

ProblemSpec double_integrator_problem(const DoubleIntegratorParams& params = {});

// --- Logistic harvest ----------------------------------------------------
//
// x' = rho * x * (1 - x) - x * u,  z' = -x * u,  cost z(T) (maximize yield).
// The optimal policy holds the stock at x = 1/2, a genuine first-order
// singular arc with u = rho/2 on it, so this model provides a known-answer
// check of the singular feedback formula.
struct HarvestParams {
  double horizon = 10.0;
  double x0 = 0.3;
  double u_min = 0.0;
  double u_max = 1.0;
  double rho_lo = 1.0;  // rho_lo == rho_hi declares a point mass
  double rho_hi = 1.0;
};

ProblemSpec harvest_problem(const HarvestParams& params = {});

// Builds a built-in model by name ("sit", "lq_toy", "double_integrator",
// "harvest") applying scalar parameter overrides.  Unknown model names and
// unknown override keys raise ValidationError naming the offender.
ProblemSpec make_problem(const std::string& name,
                         const std::map<std::string, double>& overrides = {});

std::vector<std::string> model_names();

}  // namespace enoc

#endif  // ENOC_MODELS_HPP
