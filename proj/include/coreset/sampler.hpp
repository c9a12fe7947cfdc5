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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coreset/core.hpp"
#include "coreset/rng.hpp"
#include "coreset/sensitivity.hpp"

namespace coreset {

/// A sampled weighted subset (Q, u) with its provenance.
///
/// Entries are i.i.d. draws with replacement; a point drawn twice appears
/// twice. `probabilities[i]` is the sampling probability of the input point
/// behind entry i, and `source_indices[i]` its index in the input.
struct Coreset {
  WeightedPointSet set;
  std::vector<std::size_t> source_indices;
  std::vector<double> probabilities;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::size_t requested_size = 0;
  /// Sample size given by the size formula before clamping to n (0 when an
  /// explicit size was requested).
  std::uint64_t formula_size = 0;
  /// Total sensitivity of the profile the sample was drawn from.
  double total_sensitivity = 0.0;
  bool weighted_heuristic = false;

  explicit Coreset(std::size_t dim) : set(dim) {}
  std::size_t size() const noexcept { return set.size(); }
};

/// ceil(10 t / eps^2 (d ln t + ln(1/delta))). Requires t > 1 and
/// eps, delta in (0, 1).
std::uint64_t coreset_size(double total_sensitivity, std::size_t dim,
                           double eps, double delta);

/// Inverse-CDF sampler over a cumulative table; O(n) build, O(log n) draw.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> masses);
  std::size_t draw(Rng& rng) const;
  double probability(std::size_t i) const { return probabilities_[i]; }
  std::size_t size() const noexcept { return probabilities_.size(); }

 private:
  std::vector<double> cumulative_;
  std::vector<double> probabilities_;
};

/// Draws `size` i.i.d. indices with probability s(p)/t and weights
/// u = w(p) / (size * Prob(p)). Deterministic given `seed`.
Coreset build_coreset(const WeightedPointSet& set,
                      const SensitivityProfile& profile, std::size_t size,
                      std::uint64_t seed);

/// Uniform i.i.d. sample: probabilities 1/n, weights w(p) n / size.
Coreset uniform_sample(const WeightedPointSet& set, std::size_t size,
                       std::uint64_t seed);

/// Sort by norm, bound sensitivities, size the sample with coreset_size
/// (or `explicit_size` when given), clamp to n, and sample.
/// Weighted inputs use weighted_sensitivity_profile.
Coreset monotonic_coreset(const WeightedPointSet& set, const KernelSpec& spec,
                          double eps, double delta, std::uint64_t seed,
                          std::optional<std::size_t> explicit_size = {});

/// Merges duplicate draws of the same source index by summing weights.
/// Order of first appearance is kept.
Coreset compact(const Coreset& coreset);

}  // namespace coreset
