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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coreset/core.hpp"

namespace coreset::verify {

using Link = std::function<double(double)>;

Link link_of(KernelKind kind);

/// Root of h(x) = f(-c sqrt(k) x) - x^2 on (0, sqrt(f(0) + 1)].
struct IntersectionResult {
  double x_kc = 0.0;
  /// h(x_kc).
  double residual = 0.0;
  /// Final bisection bracket; lo < x_kc < hi.
  double lo = 0.0;
  double hi = 0.0;
  std::size_t iterations = 0;
};

/// Bisection to |h| <= tol. Throws Error when h does not change sign over
/// the bracket, i.e. when f is not positive, increasing and bounded by
/// f(0) on the negative axis.
IntersectionResult find_intersection(const Link& link, double c, double k,
                                     double tol = 1e-12);
IntersectionResult find_intersection(KernelKind kind, double c, double k,
                                     double tol = 1e-12);

struct SignPatternReport {
  std::size_t checked = 0;
  /// Grid points with x < x_kc but f(-c sqrt(k) x) <= x^2, or x > x_kc but
  /// f(-c sqrt(k) x) >= x^2.
  std::size_t violations = 0;
};

/// Checks the sign pattern of h on `points` evenly spaced points of
/// (0, 2 * x_kc].
SignPatternReport intersection_sign_pattern(const Link& link, double c,
                                            double k, double x_kc,
                                            std::size_t points = 10000);

struct SweepGrid {
  double lo = 1e-6;
  double hi = 1e3;
  std::size_t points = 100000;
  bool logarithmic = true;
  bool include_zero = true;

  std::vector<double> values() const;
  std::string describe() const;
};

struct RatioSweepReport {
  double sup_ratio = 0.0;
  double argmax_x = 0.0;
  double bound = 0.0;
  /// bound - sup_ratio; a passing sweep has margin >= 0.
  double margin = 0.0;
  std::string grid;
  bool passed() const noexcept { return margin >= 0.0; }
};

/// max{2, 2 / x11^2}.
double ratio_simple_bound(double x11);

/// Sweeps (f(x) + x^2) / (f(-x) + x^2) against max{2, 2 / x11^2}.
RatioSweepReport ratio_simple_sweep(const Link& link, double x11,
                                    const SweepGrid& grid = {});

/// 66 c sqrt(k) (sigmoid), 168 c sqrt(k) (squared sigmoid), or
/// 3 log(2 e^{cR}) / log 2 * sqrt(k) c (logistic, R required).
double regularized_ratio_bound(KernelKind kind, double c, double k,
                               std::optional<double> radius);

/// Sweeps (f(cx) + x^2/k) / (f(-cx) + x^2/k) over x >= 0: the default log
/// grid [1e-6, 1e3] plus 0, or [1e-6, R] plus 0 for logistic.
RatioSweepReport regularized_ratio_sweep(KernelKind kind, double c, double k,
                                         std::optional<double> radius = {},
                                         std::size_t points = 100000);

/// Points in convex position, each separable from the rest by a linear
/// functional.
struct SeparableSet {
  WeightedPointSet points;
  /// witnesses[i] = y_i with y_i . p_i = -R and y_i . q >= R for q != p_i.
  std::vector<Vector> witnesses;
  double radius = 0.0;
};

/// Vertices of a regular n-gon in the first two coordinates, lifted by a
/// constant 1 in the last coordinate so that affine separation of a vertex
/// becomes linear. Needs n >= 3 and d >= 3 (the plane through the origin
/// admits at most two linearly separable vertices). Throws Error when the
/// angular margin of the polygon underflows.
SeparableSet build_separable_set(std::size_t n, std::size_t d, double radius);

/// w(p) f(p . x_p) / sum_q w(q) f(q . x_p) at the witness query x_p = -y_p,
/// without regularization.
std::vector<double> witness_sensitivities(const WeightedPointSet& set,
                                          KernelKind kind,
                                          std::span<const Vector> witnesses);

/// f(-R) / f(R).
double saturation_ratio(KernelKind kind, double radius);

struct LowerBoundRow {
  double radius = 0.0;
  double min_sensitivity = 0.0;
  /// min_p 1 / (1 + (n - 1) w_max f(-R) / (w(p) f(R))).
  double guaranteed = 0.0;
  double saturation = 0.0;
};

/// Minimum witness sensitivity of the separable set for each radius.
/// Optional `weights` (one per point) replace the unit weights.
std::vector<LowerBoundRow> lower_bound_demo(
    std::size_t n, std::size_t d, std::span<const double> radii,
    KernelKind kind = KernelKind::Sigmoid,
    std::span<const double> weights = {});

}  // namespace coreset::verify
