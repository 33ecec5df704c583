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

// Microbenchmarks of the hot paths: the RK4 sweeps that dominate every
// solve, the switching-function assembly, the nested-bracket feedback
// evaluation, and one end-to-end inner solve for scale.

#include <benchmark/benchmark.h>

#include <vector>

#include "enoc/dynamics.hpp"
#include "enoc/ensemble.hpp"
#include "enoc/integrate.hpp"
#include "enoc/models.hpp"
#include "enoc/pmp.hpp"
#include "enoc/solver.hpp"

namespace {

using enoc::AdjointPath;
using enoc::ControlGrid;
using enoc::StatePath;
using enoc::TimeGrid;
using enoc::Vec;

ControlGrid mid_control(const enoc::ProblemSpec& spec, int steps) {
  const auto grid = TimeGrid::uniform(spec.t0, spec.t_final, steps);
  return enoc::constant_control(grid, 0.5 * (spec.u_min + spec.u_max));
}

void BM_ForwardSweep(benchmark::State& state) {
  const auto spec = enoc::sit_problem();
  const auto ensemble = enoc::sample_ensemble(spec.distributions, 1, 1);
  const ControlGrid u = mid_control(spec, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto path = enoc::integrate_forward(spec, u, ensemble.samples[0]);
    benchmark::DoNotOptimize(path.states.back());
  }
}
BENCHMARK(BM_ForwardSweep)->Arg(300)->Arg(900);

void BM_AdjointSweep(benchmark::State& state) {
  const auto spec = enoc::sit_problem();
  const auto ensemble = enoc::sample_ensemble(spec.distributions, 1, 1);
  const ControlGrid u = mid_control(spec, static_cast<int>(state.range(0)));
  const auto path = enoc::integrate_forward(spec, u, ensemble.samples[0]);
  for (auto _ : state) {
    auto adjoint =
        enoc::integrate_adjoint(spec, u, path, ensemble.samples[0]);
    benchmark::DoNotOptimize(adjoint.costates.front());
  }
}
BENCHMARK(BM_AdjointSweep)->Arg(300)->Arg(900);

void BM_SwitchingFunction(benchmark::State& state) {
  const auto spec = enoc::sit_problem();
  const auto ensemble = enoc::sample_ensemble(
      spec.distributions, static_cast<std::size_t>(state.range(0)), 1);
  const ControlGrid u = mid_control(spec, 900);
  std::vector<StatePath> paths;
  std::vector<AdjointPath> adjoints;
  for (const auto& w : ensemble.samples) {
    paths.push_back(enoc::integrate_forward(spec, u, w));
    adjoints.push_back(enoc::integrate_adjoint(spec, u, paths.back(), w));
  }
  for (auto _ : state) {
    auto profile =
        enoc::switching_function(spec.fields, paths, adjoints, ensemble);
    benchmark::DoNotOptimize(profile.psi);
  }
}
BENCHMARK(BM_SwitchingFunction)->Arg(8)->Arg(26);

void BM_NestedBrackets(benchmark::State& state) {
  const auto spec = enoc::sit_problem();
  const auto ensemble = enoc::sample_ensemble(spec.distributions, 1, 1);
  const auto nested = enoc::nested_bracket_fields(spec.fields);
  Vec x(5);
  x << 15000.0, 12000.0, 11000.0, 5e4, 3e4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nested.numerator_field(x, ensemble.samples[0]));
    benchmark::DoNotOptimize(
        nested.denominator_field(x, ensemble.samples[0]));
  }
}
BENCHMARK(BM_NestedBrackets);

void BM_CostEvaluate(benchmark::State& state) {
  const auto spec = enoc::sit_problem();
  const auto ensemble = enoc::sample_ensemble(spec.distributions, 8, 1);
  const ControlGrid u = mid_control(spec, 900);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enoc::cost_evaluate(spec, ensemble, u));
  }
}
BENCHMARK(BM_CostEvaluate);

void BM_FixedEnsembleSolve(benchmark::State& state) {
  enoc::LqToyParams params;
  params.theta_lo = 0.2;
  params.theta_hi = 0.8;
  const auto spec = enoc::lq_toy_problem(params);
  const auto ensemble = enoc::sample_ensemble(spec.distributions, 4, 1);
  enoc::SolverOptions options;
  options.grid_n = 200;
  options.max_inner_iters = 50;
  for (auto _ : state) {
    auto solution = enoc::solve_fixed_ensemble(spec, ensemble, options);
    benchmark::DoNotOptimize(solution.cost);
  }
}
BENCHMARK(BM_FixedEnsembleSolve);

}  // namespace

BENCHMARK_MAIN();
