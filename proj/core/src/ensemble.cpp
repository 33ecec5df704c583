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

#include "enoc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "enoc/errors.hpp"

namespace enoc {

ParamDistribution ParamDistribution::uniform(std::string name, double lo,
                                             double hi) {
  ParamDistribution d;
  d.name = std::move(name);
  d.kind = Kind::Uniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

ParamDistribution ParamDistribution::point(std::string name, double value) {
  ParamDistribution d;
  d.name = std::move(name);
  d.kind = Kind::Point;
  d.value = value;
  return d;
}

void ParamDistribution::validate() const {
  if (name.empty()) {
    throw ValidationError("parameter distribution with empty name");
  }
  if (kind == Kind::Uniform) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw ValidationError("uniform law for '" + name +
                            "' has non-finite bounds");
    }
    if (!(lo < hi)) {
      throw ValidationError("uniform law for '" + name +
                            "' requires lo < hi");
    }
  } else {
    if (!std::isfinite(value)) {
      throw ValidationError("point mass for '" + name +
                            "' has a non-finite value");
    }
  }
}

double ParamSample::value(std::string_view name) const {
  if (names) {
    for (std::size_t i = 0; i < names->size(); ++i) {
      if ((*names)[i] == name) return values[i];
    }
  }
  throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

namespace {

// Top 53 bits of the generator word scaled into [0,1).  Both mt19937_64 and
// this mapping are fully specified, so draws are bit-identical everywhere.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
  return splitmix64(base ^ splitmix64(k));
}

Ensemble sample_ensemble(const std::vector<ParamDistribution>& distributions,
                         std::size_t k, std::uint64_t seed) {
  if (k < 1) {
    throw ValidationError("sample_ensemble: ensemble size must be at least 1");
  }
  if (distributions.empty()) {
    throw ValidationError("sample_ensemble: empty distribution list");
  }
  auto names = std::make_shared<std::vector<std::string>>();
  names->reserve(distributions.size());
  for (const auto& d : distributions) {
    d.validate();
    if (std::find(names->begin(), names->end(), d.name) != names->end()) {
      throw ValidationError("duplicate parameter name '" + d.name + "'");
    }
    names->push_back(d.name);
  }

  std::mt19937_64 rng(seed);
  Ensemble ensemble;
  ensemble.seed = seed;
  ensemble.samples.reserve(k);
  const double weight = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) {
    ParamSample s;
    s.names = names;
    s.weight = weight;
    s.values.reserve(distributions.size());
    for (const auto& d : distributions) {
      if (d.kind == ParamDistribution::Kind::Uniform) {
        s.values.push_back(d.lo + unit_interval(rng) * (d.hi - d.lo));
      } else {
        // Point masses consume no generator state, so adding one to a model
        // does not shift the draws of the other parameters.
        s.values.push_back(d.value);
      }
    }
    ensemble.samples.push_back(std::move(s));
  }
  return ensemble;
}

double expectation(std::span<const double> values, const Ensemble& ensemble) {
  if (values.size() != ensemble.size()) {
    throw ValidationError("expectation: " + std::to_string(values.size()) +
                          " values for " + std::to_string(ensemble.size()) +
                          " samples");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += ensemble.samples[i].weight * values[i];
  }
  return acc;
}

}  // namespace enoc
