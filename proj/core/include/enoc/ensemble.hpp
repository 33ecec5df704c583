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

#ifndef ENOC_ENSEMBLE_HPP
#define ENOC_ENSEMBLE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace enoc {

// Law of one scalar model parameter.  Uniform draws cover [lo, hi); a point
// mass is an exact constant and consumes no generator state when sampled.
struct ParamDistribution {
  enum class Kind { Uniform, Point };

  std::string name;
  Kind kind = Kind::Point;
  double lo = 0.0;     // Uniform only
  double hi = 0.0;     // Uniform only
  double value = 0.0;  // Point only

  static ParamDistribution uniform(std::string name, double lo, double hi);
  static ParamDistribution point(std::string name, double value);

  // Throws ValidationError naming this parameter on malformed bounds
  // (lo >= hi, non-finite endpoints or value, empty name).
  void validate() const;
};

// One joint draw of all model parameters.  `values` follows the declaration
// order of the distributions that produced the ensemble; `names` is shared by
// every sample of an ensemble so lookups stay cheap.
struct ParamSample {
  std::shared_ptr<const std::vector<std::string>> names;
  std::vector<double> values;
  double weight = 0.0;

  // Lookup by declared name; throws ValidationError for unknown names.
  double value(std::string_view name) const;
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

// A finite, equally weighted parameter ensemble together with the seed that
// produced it.  Re-sampling with the same (distributions, size, seed) yields
// bit-identical samples.
struct Ensemble {
  std::vector<ParamSample> samples;
  std::uint64_t seed = 0;

  std::size_t size() const { return samples.size(); }
};

// Derives the seed for outer iteration `k` from a base seed.  splitmix64
// mixing keeps distinct iterations statistically independent while staying
// reproducible across platforms.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k);

// Draws `k` i.i.d. joint samples of the given parameter laws with weights
// 1/k.  Draw order is sample-major, then declaration order within a sample,
// using std::mt19937_64 with a fixed 53-bit mantissa mapping, so results are
// bit-reproducible for a given seed on any platform.
Ensemble sample_ensemble(const std::vector<ParamDistribution>& distributions,
                         std::size_t k, std::uint64_t seed);

// Weighted average sum_i w_i * values[i], accumulated in sample order so the
// result is deterministic.  Throws ValidationError when the lengths differ.
double expectation(std::span<const double> values, const Ensemble& ensemble);

}  // namespace enoc

#endif  // ENOC_ENSEMBLE_HPP
