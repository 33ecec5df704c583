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

#ifndef ENOC_DYNAMICS_HPP
#define ENOC_DYNAMICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "enoc/ensemble.hpp"

namespace enoc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using FieldFn = std::function<Vec(const Vec& x, const ParamSample& w)>;
using JacobianFn = std::function<Mat(const Vec& x, const ParamSample& w)>;
// Second derivatives of each component: hess(x,w)[i](j,l) = d2 f_i / dx_j dx_l.
using HessianFn = std::function<std::vector<Mat>(const Vec& x, const ParamSample& w)>;

// A parameter-dependent, autonomous vector field with its state Jacobian.
// `hess` is optional; when absent, operations that need one more derivative
// order (nested Lie brackets) fall back to central finite differences.
struct VectorField {
  FieldFn eval;
  JacobianFn jac;
  HessianFn hess;  // may be empty
};

// Control-affine right-hand side  x' = f0(x,w) + f1(x,w) * u.
struct FieldPair {
  int state_dim = 0;
  VectorField f0;  // drift
  VectorField f1;  // control channel
};

// x' = f0 + f1*u at one point.  Throws ValidationError on dimension mismatch
// between x, the declared state_dim, and the field outputs.
Vec eval_rhs(const FieldPair& fields, const Vec& x, double u, const ParamSample& w);

// Lie bracket [a,b](x) = Jb(x) a(x) - Ja(x) b(x).
Vec lie_bracket(const VectorField& a, const VectorField& b, const Vec& x,
                const ParamSample& w);

// The two iterated brackets entering the first-order singular control
// formula  u = -<p, numerator_field> / <p, denominator_field>:
//   numerator_field   = [f0, [f0, f1]]
//   denominator_field = [f1, [f0, f1]]
// The inner bracket's Jacobian uses analytic Hessians when both fields carry
// them; otherwise it is formed by central finite differences of the bracket
// with per-coordinate steps h_j = max(1e-6, 1e-6 * |x_j|).
struct NestedBrackets {
  std::function<Vec(const Vec& x, const ParamSample& w)> numerator_field;
  std::function<Vec(const Vec& x, const ParamSample& w)> denominator_field;
};

NestedBrackets nested_bracket_fields(const FieldPair& fields);

// A complete ensemble control problem: control-affine dynamics with random
// parameters, box-constrained scalar control, and a terminal cost averaged
// over the parameter ensemble.
struct ProblemSpec {
  std::string name;
  FieldPair fields;
  double t0 = 0.0;
  double t_final = 1.0;
  Vec x0;
  double u_min = 0.0;
  double u_max = 1.0;
  std::function<double(const Vec& x, const ParamSample& w)> terminal_cost;
  std::function<Vec(const Vec& x, const ParamSample& w)> terminal_cost_grad;
  std::vector<ParamDistribution> distributions;
  // Linear-growth constants of the fields on the model's operating region,
  // |f0(x,w)| <= growth_k0 * (1 + |x|) and |f1(x,w)| <= growth_k1 * (1 + |x|);
  // they feed the a-priori trajectory ceiling (see gronwall_bound).
  double growth_k0 = 0.0;
  double growth_k1 = 0.0;

  // Throws ValidationError on an inconsistent problem: t_final <= t0,
  // u_min >= u_max, x0 size != state_dim, missing callables, malformed or
  // duplicated distributions, negative growth constants.
  void validate() const;
};

}  // namespace enoc

#endif  // ENOC_DYNAMICS_HPP
