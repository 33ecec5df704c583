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

#ifndef ENOC_PMP_HPP
#define ENOC_PMP_HPP

#include <optional>
#include <vector>

#include "enoc/integrate.hpp"

namespace enoc {

// First-order optimality data of an ensemble control problem: the switching
// function  Psi(t) = sum_i w_i <p_i(t), f1(x_i(t), w_i)>  decides between the
// control bounds (Psi > 0 pushes to u_max, Psi < 0 to u_min) and flags
// candidate singular arcs where it vanishes.

enum class ArcLabel { Max, Min, Singular };

const char* to_string(ArcLabel label);

struct SwitchingProfile {
  TimeGrid grid;
  Eigen::VectorXd psi;  // one value per node
  double eps_sing = 0.0;  // dead-band actually used: eps_rel * max|psi|
};

struct ArcInterval {
  int first_node = 0;
  int last_node = 0;  // inclusive
  ArcLabel label = ArcLabel::Singular;
};

struct ArcClassification {
  std::vector<ArcLabel> labels;        // one per node
  std::vector<ArcInterval> intervals;  // maximal runs, in time order
};

// Ensemble switching function on the common grid of the given sweeps.  The
// dead-band is relative: eps_sing = eps_rel * max_j |psi_j|.  Throws
// ValidationError when the sweep collections and the ensemble disagree in
// size or grid.
SwitchingProfile switching_function(const FieldPair& fields,
                                    const std::vector<StatePath>& paths,
                                    const std::vector<AdjointPath>& adjoints,
                                    const Ensemble& ensemble,
                                    double eps_rel = 1e-3);

// Pointwise Hamiltonian <p, f0(x,w) + f1(x,w) u> of one sample.
double hamiltonian(const FieldPair& fields, const Vec& x, const Vec& p,
                   double u, const ParamSample& w);

// Thresholds psi into MAX / MIN / SINGULAR node labels and merges them into
// maximal intervals.  Intervals shorter than min_interval_nodes are absorbed
// into the longer neighbour (the earlier one on ties) until every interval
// is long enough, which suppresses one-node chattering at sign changes.
ArcClassification classify_arcs(const SwitchingProfile& profile,
                                int min_interval_nodes = 2);

// First-order singular control candidate at one grid node:
//   u = -E[<p, [f0,[f0,f1]]>] / E[<p, [f1,[f0,f1]]>],
// clamped to the control box.  Returns std::nullopt when the denominator
// magnitude is below delta_den_rel * (|numerator| + 1), i.e. the formula is
// undefined there; that is a reportable value, not an error.
std::optional<double> singular_feedback(const ProblemSpec& spec,
                                        const std::vector<StatePath>& paths,
                                        const std::vector<AdjointPath>& adjoints,
                                        const Ensemble& ensemble, int node,
                                        double delta_den_rel = 1e-8);

// singular_feedback evaluated at every node; NaN marks undefined nodes.
Eigen::VectorXd singular_feedback_profile(const ProblemSpec& spec,
                                          const std::vector<StatePath>& paths,
                                          const std::vector<AdjointPath>& adjoints,
                                          const Ensemble& ensemble,
                                          double delta_den_rel = 1e-8);

}  // namespace enoc

#endif  // ENOC_PMP_HPP
