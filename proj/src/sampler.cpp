// Copyright 2026 The Coreset Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coreset/sampler.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

#include "coreset/rng.hpp"

namespace coreset {

namespace {

void check_unit_interval(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

std::uint64_t coreset_size(double total_sensitivity, std::size_t dim,
                           double eps, double delta) {
  check_unit_interval(eps, "coreset_size: eps");
  check_unit_interval(delta, "coreset_size: delta");
  if (dim == 0) throw Error("coreset_size: dimension must be positive");
  if (!(total_sensitivity > 1.0) || !std::isfinite(total_sensitivity)) {
    throw Error("coreset_size: total sensitivity must exceed 1 (ln t <= 0 "
                "makes the bound vacuous); pass an explicit size instead");
  }
  const double t = total_sensitivity;
  const double m = 10.0 * t / (eps * eps) *
                   (static_cast<double>(dim) * std::log(t) + std::log(1.0 / delta));
  const double c = std::ceil(m);
  if (c >= 9.0e18) throw Error("coreset_size: sample size overflows");
  return static_cast<std::uint64_t>(c);
}

DiscreteSampler::DiscreteSampler(std::span<const double> masses) {
  if (masses.empty()) throw Error("DiscreteSampler: no outcomes");
  cumulative_.resize(masses.size());
  KahanSum sum;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const double m = masses[i];
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error("DiscreteSampler: masses must be finite and non-negative");
    }
    sum.add(m);
    cumulative_[i] = sum.value();
  }
  const double total = sum.value();
  if (!(total > 0.0)) throw Error("DiscreteSampler: total mass is zero");
  probabilities_.resize(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) probabilities_[i] = masses[i] / total;
}

std::size_t DiscreteSampler::draw(Rng& rng) const {
  const double target = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i >= cumulative_.size()) i = cumulative_.size() - 1;
  // Skip zero-mass outcomes sharing a cumulative value.
  while (probabilities_[i] == 0.0 && i + 1 < cumulative_.size()) ++i;
  return i;
}

namespace {

Coreset sample_with(const WeightedPointSet& set, const DiscreteSampler& sampler,
                    std::size_t size, std::uint64_t seed) {
  if (size == 0) throw Error("sample size must be at least 1");
  Coreset out(set.dim());
  out.set.reserve(size);
  out.source_indices.reserve(size);
  out.probabilities.reserve(size);
  out.seed = seed;
  out.requested_size = size;
  Rng rng(seed);
  const double m = static_cast<double>(size);
  for (std::size_t s = 0; s < size; ++s) {
    const std::size_t i = sampler.draw(rng);
    const double prob = sampler.probability(i);
    out.set.add(set.point(i), set.weight(i) / (m * prob));
    out.source_indices.push_back(i);
    out.probabilities.push_back(prob);
  }
  return out;
}

}  // namespace

Coreset build_coreset(const WeightedPointSet& set,
                      const SensitivityProfile& profile, std::size_t size,
                      std::uint64_t seed) {
  if (profile.size() != set.size()) {
    throw Error("build_coreset: profile does not match the point set");
  }
  if (set.empty()) throw Error("build_coreset: empty point set");
  if (!(profile.total > 0.0)) throw Error("build_coreset: zero total sensitivity");
  const DiscreteSampler sampler(profile.bounds);
  Coreset out = sample_with(set, sampler, size, seed);
  out.total_sensitivity = profile.total;
  out.weighted_heuristic = profile.weighted_heuristic;
  return out;
}

Coreset uniform_sample(const WeightedPointSet& set, std::size_t size,
                       std::uint64_t seed) {
  if (set.empty()) throw Error("uniform_sample: empty point set");
  if (size == 0) throw Error("uniform_sample: size must be at least 1");
  Coreset out(set.dim());
  out.set.reserve(size);
  out.seed = seed;
  out.requested_size = size;
  Rng rng(seed);
  const double n = static_cast<double>(set.size());
  const double prob = 1.0 / n;
  const double scale = n / static_cast<double>(size);
  for (std::size_t s = 0; s < size; ++s) {
    const auto i = static_cast<std::size_t>(rng.below(set.size()));
    out.set.add(set.point(i), set.weight(i) * scale);
    out.source_indices.push_back(i);
    out.probabilities.push_back(prob);
  }
  return out;
}

Coreset monotonic_coreset(const WeightedPointSet& set, const KernelSpec& spec,
                          double eps, double delta, std::uint64_t seed,
                          std::optional<std::size_t> explicit_size) {
  check_unit_interval(eps, "monotonic_coreset: eps");
  check_unit_interval(delta, "monotonic_coreset: delta");
  if (set.empty()) throw Error("monotonic_coreset: empty point set");
  const SensitivityProfile profile = weighted_sensitivity_profile(set, spec);
  std::uint64_t formula = 0;
  std::size_t size = 0;
  if (explicit_size) {
    if (*explicit_size == 0) throw Error("monotonic_coreset: size must be at least 1");
    size = *explicit_size;
  } else {
    formula = coreset_size(profile.total, set.dim(), eps, delta);
    size = static_cast<std::size_t>(
        std::min<std::uint64_t>(formula, set.size()));
  }
  Coreset out = build_coreset(set, profile, size, seed);
  out.eps = eps;
  out.delta = delta;
  out.formula_size = formula;
  return out;
}

Coreset compact(const Coreset& coreset) {
  Coreset out(coreset.set.dim());
  out.eps = coreset.eps;
  out.delta = coreset.delta;
  out.seed = coreset.seed;
  out.requested_size = coreset.requested_size;
  out.formula_size = coreset.formula_size;
  out.total_sensitivity = coreset.total_sensitivity;
  out.weighted_heuristic = coreset.weighted_heuristic;
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<double> weights;
  std::vector<std::size_t> first;
  for (std::size_t e = 0; e < coreset.size(); ++e) {
    const std::size_t src = coreset.source_indices[e];
    auto [it, inserted] = slot.emplace(src, weights.size());
    if (inserted) {
      weights.push_back(coreset.set.weight(e));
      first.push_back(e);
    } else {
      weights[it->second] += coreset.set.weight(e);
    }
  }
  for (std::size_t s = 0; s < first.size(); ++s) {
    const std::size_t e = first[s];
    out.set.add(coreset.set.point(e), weights[s]);
    out.source_indices.push_back(coreset.source_indices[e]);
    out.probabilities.push_back(coreset.probabilities[e]);
  }
  return out;
}

}  // namespace coreset
