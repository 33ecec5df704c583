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

#include "enoc/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enoc/errors.hpp"

namespace enoc {

const char* to_string(ArcLabel label) {
  switch (label) {
    case ArcLabel::Max:
      return "MAX";
    case ArcLabel::Min:
      return "MIN";
    case ArcLabel::Singular:
      return "SINGULAR";
  }
  return "?";
}

namespace {

void check_sweeps(const std::vector<StatePath>& paths,
                  const std::vector<AdjointPath>& adjoints,
                  const Ensemble& ensemble) {
  if (paths.size() != ensemble.size() || adjoints.size() != ensemble.size()) {
    throw ValidationError("ensemble sweep mismatch: " +
                          std::to_string(paths.size()) + " paths / " +
                          std::to_string(adjoints.size()) + " adjoints for " +
                          std::to_string(ensemble.size()) + " samples");
  }
  if (paths.empty()) {
    throw ValidationError("ensemble sweep mismatch: no samples");
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!(paths[i].grid == paths[0].grid) ||
        !(adjoints[i].grid == paths[0].grid)) {
      throw ValidationError("ensemble sweep mismatch: grids differ");
    }
  }
}

}  // namespace

SwitchingProfile switching_function(const FieldPair& fields,
                                    const std::vector<StatePath>& paths,
                                    const std::vector<AdjointPath>& adjoints,
                                    const Ensemble& ensemble, double eps_rel) {
  check_sweeps(paths, adjoints, ensemble);
  if (!(eps_rel >= 0.0)) {
    throw ValidationError("switching_function: eps_rel must be non-negative");
  }
  const TimeGrid grid = paths[0].grid;
  const int nodes = grid.node_count();

  SwitchingProfile profile;
  profile.grid = grid;
  profile.psi = Eigen::VectorXd::Zero(nodes);
  for (int j = 0; j < nodes; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const auto& x = paths[i].states[static_cast<std::size_t>(j)];
      const auto& p = adjoints[i].costates[static_cast<std::size_t>(j)];
      acc += ensemble.samples[i].weight *
             p.dot(fields.f1.eval(x, ensemble.samples[i]));
    }
    profile.psi[j] = acc;
  }
  profile.eps_sing = eps_rel * profile.psi.cwiseAbs().maxCoeff();
  return profile;
}

double hamiltonian(const FieldPair& fields, const Vec& x, const Vec& p,
                   double u, const ParamSample& w) {
  if (p.size() != fields.state_dim) {
    throw ValidationError("hamiltonian: costate dimension mismatch");
  }
  return p.dot(eval_rhs(fields, x, u, w));
}

ArcClassification classify_arcs(const SwitchingProfile& profile,
                                int min_interval_nodes) {
  const Eigen::Index nodes = profile.psi.size();
  if (nodes < 1) {
    throw ValidationError("classify_arcs: empty switching profile");
  }
  if (min_interval_nodes < 1) {
    throw ValidationError("classify_arcs: min_interval_nodes must be >= 1");
  }
  const double eps = profile.eps_sing;

  ArcClassification out;
  out.labels.resize(static_cast<std::size_t>(nodes));
  for (Eigen::Index j = 0; j < nodes; ++j) {
    const double psi = profile.psi[j];
    out.labels[static_cast<std::size_t>(j)] =
        psi > eps ? ArcLabel::Max : (psi < -eps ? ArcLabel::Min
                                                : ArcLabel::Singular);
  }

  auto rebuild_intervals = [&out, nodes]() {
    out.intervals.clear();
    Eigen::Index start = 0;
    for (Eigen::Index j = 1; j <= nodes; ++j) {
      if (j == nodes ||
          out.labels[static_cast<std::size_t>(j)] !=
              out.labels[static_cast<std::size_t>(start)]) {
        out.intervals.push_back(ArcInterval{
            static_cast<int>(start), static_cast<int>(j - 1),
            out.labels[static_cast<std::size_t>(start)]});
        start = j;
      }
    }
  };
  rebuild_intervals();

  // Absorb short blips (classifier noise at sign changes) into the longer
  // neighbouring interval until every interval is long enough.  A lone
  // interval is kept regardless of length.
  auto interval_len = [](const ArcInterval& iv) {
    return iv.last_node - iv.first_node + 1;
  };
  while (out.intervals.size() > 1) {
    std::size_t victim = out.intervals.size();
    for (std::size_t i = 0; i < out.intervals.size(); ++i) {
      if (interval_len(out.intervals[i]) < min_interval_nodes) {
        victim = i;
        break;
      }
    }
    if (victim == out.intervals.size()) break;

    const bool has_prev = victim > 0;
    const bool has_next = victim + 1 < out.intervals.size();
    std::size_t donor;
    if (has_prev && has_next) {
      donor = interval_len(out.intervals[victim - 1]) >=
                      interval_len(out.intervals[victim + 1])
                  ? victim - 1
                  : victim + 1;
    } else {
      donor = has_prev ? victim - 1 : victim + 1;
    }
    const ArcLabel new_label = out.intervals[donor].label;
    for (int j = out.intervals[victim].first_node;
         j <= out.intervals[victim].last_node; ++j) {
      out.labels[static_cast<std::size_t>(j)] = new_label;
    }
    rebuild_intervals();
  }
  return out;
}

namespace {

struct SingularTerms {
  double numerator = 0.0;
  double denominator = 0.0;
};

SingularTerms singular_terms(const NestedBrackets& brackets,
                             const std::vector<StatePath>& paths,
                             const std::vector<AdjointPath>& adjoints,
                             const Ensemble& ensemble, int node) {
  SingularTerms terms;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& x = paths[i].states[static_cast<std::size_t>(node)];
    const auto& p = adjoints[i].costates[static_cast<std::size_t>(node)];
    const double w = ensemble.samples[i].weight;
    terms.numerator += w * p.dot(brackets.numerator_field(x, ensemble.samples[i]));
    terms.denominator +=
        w * p.dot(brackets.denominator_field(x, ensemble.samples[i]));
  }
  return terms;
}

std::optional<double> singular_value_at(const NestedBrackets& brackets,
                                        const ProblemSpec& spec,
                                        const std::vector<StatePath>& paths,
                                        const std::vector<AdjointPath>& adjoints,
                                        const Ensemble& ensemble, int node,
                                        double delta_den_rel) {
  const SingularTerms terms =
      singular_terms(brackets, paths, adjoints, ensemble, node);
  const double guard = delta_den_rel * (std::abs(terms.numerator) + 1.0);
  if (!(std::abs(terms.denominator) > guard)) {
    return std::nullopt;
  }
  const double u = -terms.numerator / terms.denominator;
  return std::clamp(u, spec.u_min, spec.u_max);
}

}  // namespace

std::optional<double> singular_feedback(const ProblemSpec& spec,
                                        const std::vector<StatePath>& paths,
                                        const std::vector<AdjointPath>& adjoints,
                                        const Ensemble& ensemble, int node,
                                        double delta_den_rel) {
  check_sweeps(paths, adjoints, ensemble);
  if (node < 0 || node >= paths[0].grid.node_count()) {
    throw ValidationError("singular_feedback: node index out of range");
  }
  const NestedBrackets brackets = nested_bracket_fields(spec.fields);
  return singular_value_at(brackets, spec, paths, adjoints, ensemble, node,
                           delta_den_rel);
}

Eigen::VectorXd singular_feedback_profile(
    const ProblemSpec& spec, const std::vector<StatePath>& paths,
    const std::vector<AdjointPath>& adjoints, const Ensemble& ensemble,
    double delta_den_rel) {
  check_sweeps(paths, adjoints, ensemble);
  const NestedBrackets brackets = nested_bracket_fields(spec.fields);
  const int nodes = paths[0].grid.node_count();
  Eigen::VectorXd out =
      Eigen::VectorXd::Constant(nodes, std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < nodes; ++j) {
    const auto value = singular_value_at(brackets, spec, paths, adjoints,
                                         ensemble, j, delta_den_rel);
    if (value) out[j] = *value;
  }
  return out;
}

}  // namespace enoc
