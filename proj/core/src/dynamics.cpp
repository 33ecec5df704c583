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

#include "enoc/dynamics.hpp"

#include <cmath>

#include "enoc/errors.hpp"

namespace enoc {

Vec eval_rhs(const FieldPair& fields, const Vec& x, double u,
             const ParamSample& w) {
  if (x.size() != fields.state_dim) {
    throw ValidationError("eval_rhs: state has " + std::to_string(x.size()) +
                          " components, expected " +
                          std::to_string(fields.state_dim));
  }
  Vec drift = fields.f0.eval(x, w);
  Vec channel = fields.f1.eval(x, w);
  if (drift.size() != fields.state_dim || channel.size() != fields.state_dim) {
    throw ValidationError("eval_rhs: field output dimension mismatch");
  }
  return drift + u * channel;
}

Vec lie_bracket(const VectorField& a, const VectorField& b, const Vec& x,
                const ParamSample& w) {
  const Vec a_val = a.eval(x, w);
  const Vec b_val = b.eval(x, w);
  const Mat a_jac = a.jac(x, w);
  const Mat b_jac = b.jac(x, w);
  const auto n = x.size();
  if (a_val.size() != n || b_val.size() != n || a_jac.rows() != n ||
      a_jac.cols() != n || b_jac.rows() != n || b_jac.cols() != n) {
    throw ValidationError("lie_bracket: field dimension mismatch");
  }
  return b_jac * a_val - a_jac * b_val;
}

namespace {

Vec bracket01(const FieldPair& fields, const Vec& x, const ParamSample& w) {
  return lie_bracket(fields.f0, fields.f1, x, w);
}

// Jacobian of [f0,f1] from the component Hessians of both fields:
//   d[f0,f1]_i/dx_j = sum_k ( H1_i(k,j) f0_k + J1_ik J0_kj
//                           - H0_i(k,j) f1_k - J0_ik J1_kj ).
Mat bracket01_jacobian_analytic(const FieldPair& fields, const Vec& x,
                                const ParamSample& w) {
  const Vec v0 = fields.f0.eval(x, w);
  const Vec v1 = fields.f1.eval(x, w);
  const Mat j0 = fields.f0.jac(x, w);
  const Mat j1 = fields.f1.jac(x, w);
  const std::vector<Mat> h0 = fields.f0.hess(x, w);
  const std::vector<Mat> h1 = fields.f1.hess(x, w);
  const auto n = x.size();
  Mat out = j1 * j0 - j0 * j1;
  for (Eigen::Index i = 0; i < n; ++i) {
    // Component Hessians are symmetric, so H*v gives the row of mixed terms.
    out.row(i) += (h1[static_cast<std::size_t>(i)] * v0 -
                   h0[static_cast<std::size_t>(i)] * v1)
                      .transpose();
  }
  return out;
}

Mat bracket01_jacobian_fd(const FieldPair& fields, const Vec& x,
                          const ParamSample& w) {
  const auto n = x.size();
  Mat out(n, n);
  Vec xp = x;
  Vec xm = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = std::max(1e-6, 1e-6 * std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    out.col(j) = (bracket01(fields, xp, w) - bracket01(fields, xm, w)) /
                 (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return out;
}

}  // namespace

NestedBrackets nested_bracket_fields(const FieldPair& fields) {
  if (!fields.f0.eval || !fields.f0.jac || !fields.f1.eval || !fields.f1.jac) {
    throw ValidationError("nested_bracket_fields: fields need eval and jac");
  }
  const bool analytic = static_cast<bool>(fields.f0.hess) &&
                        static_cast<bool>(fields.f1.hess);

  VectorField inner;
  inner.eval = [fields](const Vec& x, const ParamSample& w) {
    return bracket01(fields, x, w);
  };
  if (analytic) {
    inner.jac = [fields](const Vec& x, const ParamSample& w) {
      return bracket01_jacobian_analytic(fields, x, w);
    };
  } else {
    inner.jac = [fields](const Vec& x, const ParamSample& w) {
      return bracket01_jacobian_fd(fields, x, w);
    };
  }

  NestedBrackets out;
  out.numerator_field = [fields, inner](const Vec& x, const ParamSample& w) {
    return lie_bracket(fields.f0, inner, x, w);
  };
  out.denominator_field = [fields, inner](const Vec& x, const ParamSample& w) {
    return lie_bracket(fields.f1, inner, x, w);
  };
  return out;
}

void ProblemSpec::validate() const {
  if (!(t_final > t0)) {
    throw ValidationError("problem '" + name + "': t_final must exceed t0");
  }
  if (!(u_min < u_max)) {
    throw ValidationError("problem '" + name + "': u_min must be below u_max");
  }
  if (fields.state_dim <= 0) {
    throw ValidationError("problem '" + name + "': state_dim must be positive");
  }
  if (x0.size() != fields.state_dim) {
    throw ValidationError("problem '" + name + "': x0 has " +
                          std::to_string(x0.size()) + " components, expected " +
                          std::to_string(fields.state_dim));
  }
  if (!fields.f0.eval || !fields.f0.jac || !fields.f1.eval || !fields.f1.jac) {
    throw ValidationError("problem '" + name +
                          "': fields must provide eval and jac");
  }
  if (!terminal_cost || !terminal_cost_grad) {
    throw ValidationError("problem '" + name +
                          "': terminal cost and gradient are required");
  }
  if (distributions.empty()) {
    throw ValidationError("problem '" + name + "': no parameter distributions");
  }
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    distributions[i].validate();
    for (std::size_t j = i + 1; j < distributions.size(); ++j) {
      if (distributions[i].name == distributions[j].name) {
        throw ValidationError("problem '" + name +
                              "': duplicate parameter name '" +
                              distributions[i].name + "'");
      }
    }
  }
  if (growth_k0 < 0.0 || growth_k1 < 0.0) {
    throw ValidationError("problem '" + name +
                          "': growth constants must be non-negative");
  }
}

}  // namespace enoc
