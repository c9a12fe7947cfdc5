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

#include "coreset/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace coreset::verify {

Link link_of(KernelKind kind) {
  return [kind](double z) { return link_eval(kind, z); };
}

IntersectionResult find_intersection(const Link& link, double c, double k,
                                     double tol) {
  if (!(c > 0.0) || !(k > 0.0) || !std::isfinite(c) || !std::isfinite(k)) {
    throw Error("find_intersection: c and k must be positive and finite");
  }
  const double scale = c * std::sqrt(k);
  auto h = [&](double x) { return link(-scale * x) - x * x; };
  const double f0 = link(0.0);
  double lo = 0.0;
  double hi = std::sqrt(f0 + 1.0);
  const double h_lo = h(lo);
  const double h_hi = h(hi);
  if (!(h_lo > 0.0) || !(h_hi < 0.0)) {
    std::ostringstream msg;
    msg << "find_intersection: bracket does not straddle a root (h(0) = "
        << h_lo << ", h(" << hi << ") = " << h_hi << ")";
    throw Error(msg.str());
  }
  IntersectionResult r;
  for (std::size_t it = 1; it <= 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    r = {mid, hm, lo, hi, it};
    if (std::abs(hm) <= tol || mid <= lo || mid >= hi) break;
    if (hm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return r;
}

IntersectionResult find_intersection(KernelKind kind, double c, double k,
                                     double tol) {
  return find_intersection(link_of(kind), c, k, tol);
}

SignPatternReport intersection_sign_pattern(const Link& link, double c,
                                            double k, double x_kc,
                                            std::size_t points) {
  const double scale = c * std::sqrt(k);
  SignPatternReport rep;
  for (std::size_t i = 1; i <= points; ++i) {
    const double x = 2.0 * x_kc * static_cast<double>(i) / static_cast<double>(points);
    if (std::abs(x - x_kc) <= 1e-12 * x_kc) continue;
    const double f = link(-scale * x);
    ++rep.checked;
    if (x < x_kc && !(f > x * x)) ++rep.violations;
    if (x > x_kc && !(f < x * x)) ++rep.violations;
  }
  return rep;
}

std::vector<double> SweepGrid::values() const {
  std::vector<double> v;
  v.reserve(points + 1);
  if (include_zero) v.push_back(0.0);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    v.push_back(logarithmic ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
  }
  return v;
}

std::string SweepGrid::describe() const {
  std::ostringstream s;
  s << (logarithmic ? "log" : "linear") << " grid of " << points
    << " points over [" << lo << ", " << hi << "]"
    << (include_zero ? " plus x=0" : "");
  return s.str();
}

namespace {

template <typename Ratio>
RatioSweepReport sweep(const SweepGrid& grid, double bound, Ratio&& ratio) {
  RatioSweepReport rep;
  rep.bound = bound;
  rep.grid = grid.describe();
  rep.sup_ratio = -std::numeric_limits<double>::infinity();
  for (double x : grid.values()) {
    const double r = ratio(x);
    if (r > rep.sup_ratio || std::isnan(r)) {
      rep.sup_ratio = r;
      rep.argmax_x = x;
      if (std::isnan(r)) break;
    }
  }
  rep.margin = rep.bound - rep.sup_ratio;
  if (std::isnan(rep.margin)) rep.margin = -std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace

double ratio_simple_bound(double x11) { return std::max(2.0, 2.0 / (x11 * x11)); }

RatioSweepReport ratio_simple_sweep(const Link& link, double x11,
                                    const SweepGrid& grid) {
  return sweep(grid, ratio_simple_bound(x11), [&](double x) {
    return (link(x) + x * x) / (link(-x) + x * x);
  });
}

double regularized_ratio_bound(KernelKind kind, double c, double k,
                               std::optional<double> radius) {
  const double a = c * std::sqrt(k);
  switch (kind) {
    case KernelKind::Sigmoid:
      return 66.0 * a;
    case KernelKind::SigmoidSquared:
      return 168.0 * a;
    case KernelKind::Logistic:
      if (!radius) throw Error("regularized_ratio_bound: logistic needs R");
      return 3.0 * (std::log(2.0) + c * *radius) / std::log(2.0) * a;
  }
  return 0.0;
}

RatioSweepReport regularized_ratio_sweep(KernelKind kind, double c, double k,
                                         std::optional<double> radius,
                                         std::size_t points) {
  if (!(c > 0.0) || !(k > 0.0)) throw Error("regularized_ratio_sweep: c, k must be positive");
  SweepGrid grid;
  grid.points = points;
  if (kind == KernelKind::Logistic) {
    if (!radius || !(*radius > grid.lo)) throw Error("regularized_ratio_sweep: logistic needs R > 1e-6");
    grid.hi = *radius;
  }
  const double bound = regularized_ratio_bound(kind, c, k, radius);
  return sweep(grid, bound, [&](double x) {
    const double reg = x * x / k;
    return (link_eval(kind, c * x) + reg) / (link_eval(kind, -c * x) + reg);
  });
}

SeparableSet build_separable_set(std::size_t n, std::size_t d, double radius) {
  if (n < 3) throw Error("build_separable_set: need n >= 3");
  if (d < 3) {
    throw Error("build_separable_set: need d >= 3 (polygon plane plus the "
                "lift coordinate)");
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error("build_separable_set: radius must be finite and >= 0");
  }
  const double phi = 2.0 * std::numbers::pi / static_cast<double>(n);
  // 1 - cos(phi), computed without cancellation.
  const double s = std::sin(0.5 * phi);
  const double gap = 2.0 * s * s;
  if (gap < 1e-10) {
    throw Error("build_separable_set: n too large, the polygon's angular "
                "margin underflows double precision");
  }
  const double beta = 1.0 - 0.5 * gap;  // (1 + cos(phi)) / 2
  const double alpha = 2.0 * radius / gap;

  SeparableSet out{WeightedPointSet(d), {}, radius};
  out.points.reserve(n);
  std::vector<double> p(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = phi * static_cast<double>(i);
    std::fill(p.begin(), p.end(), 0.0);
    p[0] = std::cos(theta);
    p[1] = std::sin(theta);
    p[d - 1] = 1.0;
    out.points.add(p);
    Vector y(d, 0.0);
    y[0] = -alpha * p[0];
    y[1] = -alpha * p[1];
    y[d - 1] = alpha * beta;
    out.witnesses.push_back(std::move(y));
  }
  return out;
}

std::vector<double> witness_sensitivities(const WeightedPointSet& set,
                                          KernelKind kind,
                                          std::span<const Vector> witnesses) {
  if (witnesses.size() != set.size()) {
    throw Error("witness_sensitivities: need one witness per point");
  }
  std::vector<double> out(set.size());
  std::vector<double> terms(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& y = witnesses[i];
    if (y.size() != set.dim()) throw Error("witness_sensitivities: witness dimension mismatch");
    KahanSum total;
    for (std::size_t q = 0; q < set.size(); ++q) {
      terms[q] = set.weight(q) * link_eval(kind, -dot(set.point(q), y));
      total.add(terms[q]);
    }
    out[i] = terms[i] / total.value();
  }
  return out;
}

double saturation_ratio(KernelKind kind, double radius) {
  return link_eval(kind, -radius) / link_eval(kind, radius);
}

std::vector<LowerBoundRow> lower_bound_demo(std::size_t n, std::size_t d,
                                            std::span<const double> radii,
                                            KernelKind kind,
                                            std::span<const double> weights) {
  if (!weights.empty() && weights.size() != n) {
    throw Error("lower_bound_demo: need one weight per point");
  }
  std::vector<LowerBoundRow> rows;
  for (double r : radii) {
    SeparableSet sep = build_separable_set(n, d, r);
    WeightedPointSet set = sep.points;
    if (!weights.empty()) {
      set = WeightedPointSet(d, sep.points.coords(),
                             std::vector<double>(weights.begin(), weights.end()));
    }
    const auto s = witness_sensitivities(set, kind, sep.witnesses);
    LowerBoundRow row;
    row.radius = r;
    row.min_sensitivity = *std::min_element(s.begin(), s.end());
    row.saturation = saturation_ratio(kind, r);
    double w_max = 0.0;
    double w_min = std::numeric_limits<double>::infinity();
    for (double w : set.weights()) {
      w_max = std::max(w_max, w);
      w_min = std::min(w_min, w);
    }
    row.guaranteed = 1.0 / (1.0 + static_cast<double>(n - 1) * w_max *
                                      row.saturation / w_min);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace coreset::verify
