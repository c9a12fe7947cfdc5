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

namespace coreset {

/// Per-point sensitivity upper bounds s(p) and their total t.
///
/// `bounds` is indexed like the input points. `order[r]` is the input index
/// of the point with 1-indexed norm rank r + 1, so the formulas' rank j for
/// input point order[j - 1] is j.
struct SensitivityProfile {
  std::vector<double> bounds;
  std::vector<std::size_t> order;
  double total = 0.0;
  std::optional<KernelSpec> spec;
  /// True when the profile came from the cumulative-weight-rank extension
  /// for weighted inputs, which carries no proof.
  bool weighted_heuristic = false;

  std::size_t size() const noexcept { return bounds.size(); }
  /// Bound of the point at 1-indexed rank `rank`.
  double bound_at_rank(std::size_t rank) const;
};

/// Stable permutation sorting points by non-decreasing Euclidean norm.
std::vector<std::size_t> sort_by_norm(const WeightedPointSet& set);

/// s(p_j) = (132 sqrt(k) |p_j| + 2) / j on unit-weight input.
SensitivityProfile sigmoid_sensitivity(const WeightedPointSet& set, double k);

/// s(p_j) = log(1 + e^R) (b_j + 1) / (j log 2), with
/// b_j = 3 log(2 e^{|p_j| R}) / log 2 * sqrt(k) |p_j|, on unit-weight input.
SensitivityProfile logistic_sensitivity(const WeightedPointSet& set, double k,
                                        double radius);

/// s(p_j) = 4 (168 sqrt(k) |p_j| + 1) / j: the generic bound with M = 1,
/// f(0) = 1/4 and the squared-sigmoid ratio certificate.
SensitivityProfile sigmoid_squared_sensitivity(const WeightedPointSet& set,
                                               double k);

/// s(p_j) = (M / f0) (b_j + 1) / j for caller-supplied certificates b
/// (input order). b must be non-decreasing along the norm order.
SensitivityProfile generic_sensitivity(const WeightedPointSet& set, double M,
                                       double f0, std::span<const double> b);

/// Ratio certificate b_p of a point with the given norm for `spec`.
double ratio_certificate(const KernelSpec& spec, double point_norm);

/// Dispatch on spec.kind. Requires unit weights.
SensitivityProfile sensitivity_profile(const WeightedPointSet& set,
                                       const KernelSpec& spec);

/// Extension to weighted input used when recompressing merged coresets:
/// s(p_j) = w_j (M / f0) (b_j + 1) / W_j, where W_j is the cumulative
/// weight of ranks 1..j. Equal to sensitivity_profile on unit weights.
SensitivityProfile weighted_sensitivity_profile(const WeightedPointSet& set,
                                                const KernelSpec& spec);

struct EmpiricalSensitivityOptions {
  /// Random queries on top of the fixed multistart grid.
  std::size_t budget = 10000;
  std::size_t directions = 64;
  std::size_t radii = 32;
  double min_radius = 1e-2;
  double max_radius = 1e3;
  std::size_t ascent_steps = 50;
  /// Best grid queries per point used as gradient-ascent starts.
  std::size_t refine_starts = 4;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Extra queries evaluated for every point (e.g. known witnesses).
  std::vector<Vector> extra_queries;
};

/// Lower estimates of sup_x w(p) c(p, x) / C(P, w, x) for every point.
/// Queries are restricted to |x| <= R for logistic kernels. Estimates are
/// non-decreasing in options.budget for a fixed seed.
std::vector<double> empirical_sensitivities(
    const WeightedPointSet& set, const KernelSpec& spec,
    const EmpiricalSensitivityOptions& options = {});

double empirical_sensitivity(const WeightedPointSet& set,
                             const KernelSpec& spec, std::size_t index,
                             std::size_t budget = 10000);

}  // namespace coreset
