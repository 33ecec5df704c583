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

#include "enoc/models.hpp"

#include <cmath>
#include <utility>

#include "enoc/errors.hpp"

namespace enoc {

namespace {

ParamDistribution law(const std::string& name, double lo, double hi) {
  return lo == hi ? ParamDistribution::point(name, lo)
                  : ParamDistribution::uniform(name, lo, hi);
}

std::vector<Mat> zero_hessians(Eigen::Index n) {
  return std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n));
}

}  // namespace

ProblemSpec sit_problem(const SitParams& prm) {
  if (!(prm.carrying > 0.0)) {
    throw ValidationError("sit: carrying capacity must be positive");
  }
  if (!(prm.gamma > 0.0)) {
    throw ValidationError("sit: sterile-male competitiveness must be positive");
  }

  // Parameter draw layout (declaration order).
  constexpr int kNu = 0;    // aquatic -> adult emergence rate
  constexpr int kMuA = 1;   // aquatic death rate
  constexpr int kMuF = 2;   // fertilized female death rate
  constexpr int kMuM = 3;   // wild male death rate
  constexpr int kMuS = 4;   // sterile male death rate

  const double alpha = prm.alpha;
  const double gamma = prm.gamma;
  const double r = prm.r;
  const double carrying = prm.carrying;

  ProblemSpec spec;
  spec.name = "sit";
  spec.fields.state_dim = 5;  // (A, F, M, Ms, z)

  spec.fields.f0.eval = [alpha, gamma, r, carrying](const Vec& x,
                                                    const ParamSample& w) {
    const double a = x[0], f = x[1], m = x[2], ms = x[3];
    const double denom = m + gamma * ms;
    if (std::abs(denom) < 1e-12) {
      // No males at all: the mating fraction M/(M + gamma*Ms) degenerates.
      throw IntegrationError("sit: male population denominator underflow");
    }
    const double mating = alpha * m * f / denom;
    const double room = 1.0 - a / carrying;
    Vec out(5);
    out[0] = mating * room - (w[kMuA] + w[kNu]) * a;
    out[1] = r * w[kNu] * a - w[kMuF] * f;
    out[2] = (1.0 - r) * w[kNu] * a - w[kMuM] * m;
    out[3] = -w[kMuS] * ms;
    out[4] = 0.0;
    return out;
  };

  spec.fields.f0.jac = [alpha, gamma, r, carrying](const Vec& x,
                                                   const ParamSample& w) {
    const double a = x[0], f = x[1], m = x[2], ms = x[3];
    const double denom = m + gamma * ms;
    if (std::abs(denom) < 1e-12) {
      throw IntegrationError("sit: male population denominator underflow");
    }
    const double mating = alpha * m * f / denom;
    const double room = 1.0 - a / carrying;
    Mat jac = Mat::Zero(5, 5);
    jac(0, 0) = -mating / carrying - (w[kMuA] + w[kNu]);
    jac(0, 1) = alpha * m / denom * room;
    jac(0, 2) = alpha * f * gamma * ms / (denom * denom) * room;
    jac(0, 3) = -alpha * m * f * gamma / (denom * denom) * room;
    jac(1, 0) = r * w[kNu];
    jac(1, 1) = -w[kMuF];
    jac(2, 0) = (1.0 - r) * w[kNu];
    jac(2, 2) = -w[kMuM];
    jac(3, 3) = -w[kMuS];
    return jac;
  };

  const Vec channel = (Vec(5) << 0.0, 0.0, 0.0, 1.0, prm.c1).finished();
  spec.fields.f1.eval = [channel](const Vec&, const ParamSample&) {
    return channel;
  };
  spec.fields.f1.jac = [](const Vec&, const ParamSample&) {
    return Mat::Zero(5, 5);
  };
  // No f0 Hessian is supplied, so nested brackets fall back to finite
  // differences of the analytic Jacobians.

  spec.t0 = 0.0;
  spec.t_final = prm.horizon;
  spec.x0 = (Vec(5) << prm.a0, prm.f0, prm.m0, prm.ms0, 0.0).finished();
  spec.u_min = prm.u_min;
  spec.u_max = prm.u_max;

  const double c2 = prm.c2;
  spec.terminal_cost = [c2](const Vec& x, const ParamSample&) {
    return x[4] + c2 * (x[1] + x[2]);
  };
  spec.terminal_cost_grad = [c2](const Vec&, const ParamSample&) {
    return (Vec(5) << 0.0, c2, c2, 0.0, 1.0).finished();
  };

  spec.distributions = {
      ParamDistribution::uniform("nu", 0.09, 0.11),
      ParamDistribution::uniform("mu_A", 0.009, 0.01),
      ParamDistribution::uniform("mu_F", 0.0625, 0.0714),
      ParamDistribution::uniform("mu_M", 0.0714, 0.083),
      ParamDistribution::uniform("mu_S", 0.111, 0.125),
  };

  // Valid on the operating region (non-negative states, A below carrying):
  // the mating term is bounded by alpha*|x| there and every loss rate is
  // below 0.2.
  spec.growth_k0 = alpha + 0.2;
  spec.growth_k1 = std::sqrt(1.0 + prm.c1 * prm.c1);
  spec.validate();
  return spec;
}

ProblemSpec lq_toy_problem(const LqToyParams& prm) {
  ProblemSpec spec;
  spec.name = "lq_toy";
  spec.fields.state_dim = 1;

  spec.fields.f0.eval = [](const Vec& x, const ParamSample& w) {
    return Vec::Constant(1, w[0] * x[0]);
  };
  spec.fields.f0.jac = [](const Vec&, const ParamSample& w) {
    return Mat::Constant(1, 1, w[0]);
  };
  spec.fields.f0.hess = [](const Vec&, const ParamSample&) {
    return zero_hessians(1);
  };
  spec.fields.f1.eval = [](const Vec&, const ParamSample&) {
    return Vec::Constant(1, 1.0);
  };
  spec.fields.f1.jac = [](const Vec&, const ParamSample&) {
    return Mat::Zero(1, 1);
  };
  spec.fields.f1.hess = [](const Vec&, const ParamSample&) {
    return zero_hessians(1);
  };

  spec.t0 = 0.0;
  spec.t_final = prm.horizon;
  spec.x0 = Vec::Constant(1, prm.x0);
  spec.u_min = prm.u_min;
  spec.u_max = prm.u_max;
  spec.terminal_cost = [](const Vec& x, const ParamSample&) { return x[0]; };
  spec.terminal_cost_grad = [](const Vec&, const ParamSample&) {
    return Vec::Constant(1, 1.0);
  };
  spec.distributions = {law("theta", prm.theta_lo, prm.theta_hi)};
  spec.growth_k0 = std::max(std::abs(prm.theta_lo), std::abs(prm.theta_hi));
  spec.growth_k1 = 1.0;
  spec.validate();
  return spec;
}

ProblemSpec double_integrator_problem(const DoubleIntegratorParams& prm) {
  ProblemSpec spec;
  spec.name = "double_integrator";
  spec.fields.state_dim = 2;

  spec.fields.f0.eval = [](const Vec& x, const ParamSample& w) {
    return (Vec(2) << w[0] * x[1], 0.0).finished();
  };
  spec.fields.f0.jac = [](const Vec&, const ParamSample& w) {
    Mat jac = Mat::Zero(2, 2);
    jac(0, 1) = w[0];
    return jac;
  };
  spec.fields.f0.hess = [](const Vec&, const ParamSample&) {
    return zero_hessians(2);
  };
  spec.fields.f1.eval = [](const Vec&, const ParamSample&) {
    return (Vec(2) << 0.0, 1.0).finished();
  };
  spec.fields.f1.jac = [](const Vec&, const ParamSample&) {
    return Mat::Zero(2, 2);
  };
  spec.fields.f1.hess = [](const Vec&, const ParamSample&) {
    return zero_hessians(2);
  };

  spec.t0 = 0.0;
  spec.t_final = prm.horizon;
  spec.x0 = (Vec(2) << prm.x1_0, prm.x2_0).finished();
  spec.u_min = prm.u_min;
  spec.u_max = prm.u_max;
  spec.terminal_cost = [](const Vec& x, const ParamSample&) { return x[0]; };
  spec.terminal_cost_grad = [](const Vec&, const ParamSample&) {
    return (Vec(2) << 1.0, 0.0).finished();
  };
  spec.distributions = {law("gain", prm.gain_lo, prm.gain_hi)};
  spec.growth_k0 = std::max(std::abs(prm.gain_lo), std::abs(prm.gain_hi));
  spec.growth_k1 = 1.0;
  spec.validate();
  return spec;
}

ProblemSpec harvest_problem(const HarvestParams& prm) {
  ProblemSpec spec;
  spec.name = "harvest";
  spec.fields.state_dim = 2;  // (x, z): stock and negated accumulated yield

  spec.fields.f0.eval = [](const Vec& x, const ParamSample& w) {
    return (Vec(2) << w[0] * x[0] * (1.0 - x[0]), 0.0).finished();
  };
  spec.fields.f0.jac = [](const Vec& x, const ParamSample& w) {
    Mat jac = Mat::Zero(2, 2);
    jac(0, 0) = w[0] * (1.0 - 2.0 * x[0]);
    return jac;
  };
  spec.fields.f0.hess = [](const Vec&, const ParamSample& w) {
    std::vector<Mat> h = zero_hessians(2);
    h[0](0, 0) = -2.0 * w[0];
    return h;
  };
  spec.fields.f1.eval = [](const Vec& x, const ParamSample&) {
    return (Vec(2) << -x[0], -x[0]).finished();
  };
  spec.fields.f1.jac = [](const Vec&, const ParamSample&) {
    Mat jac = Mat::Zero(2, 2);
    jac(0, 0) = -1.0;
    jac(1, 0) = -1.0;
    return jac;
  };
  spec.fields.f1.hess = [](const Vec&, const ParamSample&) {
    return zero_hessians(2);
  };

  spec.t0 = 0.0;
  spec.t_final = prm.horizon;
  spec.x0 = (Vec(2) << prm.x0, 0.0).finished();
  spec.u_min = prm.u_min;
  spec.u_max = prm.u_max;
  spec.terminal_cost = [](const Vec& x, const ParamSample&) { return x[1]; };
  spec.terminal_cost_grad = [](const Vec&, const ParamSample&) {
    return (Vec(2) << 0.0, 1.0).finished();
  };
  spec.distributions = {law("rho", prm.rho_lo, prm.rho_hi)};
  // On the stock interval [0,1] the drift is bounded by rho and the harvest
  // channel by sqrt(2)*|x|.
  spec.growth_k0 = std::max(std::abs(prm.rho_lo), std::abs(prm.rho_hi));
  spec.growth_k1 = 1.5;
  spec.validate();
  return spec;
}

namespace {

class OverrideReader {
 public:
  OverrideReader(std::string model, const std::map<std::string, double>& src)
      : model_(std::move(model)), pending_(src) {}

  double take(const char* key, double fallback) {
    auto it = pending_.find(key);
    if (it == pending_.end()) return fallback;
    const double v = it->second;
    pending_.erase(it);
    return v;
  }

  void finish() const {
    if (!pending_.empty()) {
      throw ValidationError("unknown parameter '" + pending_.begin()->first +
                            "' for model '" + model_ + "'");
    }
  }

 private:
  std::string model_;
  std::map<std::string, double> pending_;
};

}  // namespace

ProblemSpec make_problem(const std::string& name,
                         const std::map<std::string, double>& overrides) {
  OverrideReader reader(name, overrides);
  ProblemSpec spec;
  if (name == "sit") {
    SitParams p;
    p.horizon = reader.take("T", p.horizon);
    p.alpha = reader.take("alpha", p.alpha);
    p.gamma = reader.take("gamma", p.gamma);
    p.r = reader.take("r", p.r);
    p.carrying = reader.take("k", p.carrying);
    p.c1 = reader.take("c1", p.c1);
    p.c2 = reader.take("c2", p.c2);
    reader.finish();
    spec = sit_problem(p);
  } else if (name == "lq_toy") {
    LqToyParams p;
    p.horizon = reader.take("T", p.horizon);
    p.x0 = reader.take("x0", p.x0);
    p.theta_lo = reader.take("theta_lo", p.theta_lo);
    p.theta_hi = reader.take("theta_hi", p.theta_hi);
    reader.finish();
    spec = lq_toy_problem(p);
  } else if (name == "double_integrator") {
    DoubleIntegratorParams p;
    p.horizon = reader.take("T", p.horizon);
    p.x1_0 = reader.take("x1_0", p.x1_0);
    p.x2_0 = reader.take("x2_0", p.x2_0);
    p.gain_lo = reader.take("gain_lo", p.gain_lo);
    p.gain_hi = reader.take("gain_hi", p.gain_hi);
    reader.finish();
    spec = double_integrator_problem(p);
  } else if (name == "harvest") {
    HarvestParams p;
    p.horizon = reader.take("T", p.horizon);
    p.x0 = reader.take("x0", p.x0);
    p.rho_lo = reader.take("rho_lo", p.rho_lo);
    p.rho_hi = reader.take("rho_hi", p.rho_hi);
    reader.finish();
    spec = harvest_problem(p);
  } else {
    throw ValidationError(
        "unknown model '" + name +
        "' (available: sit, lq_toy, double_integrator, harvest)");
  }
  return spec;
}

std::vector<std::string> model_names() {
  return {"sit", "lq_toy", "double_integrator", "harvest"};
}

}  // namespace enoc
