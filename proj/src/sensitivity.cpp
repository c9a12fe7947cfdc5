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

#include "coreset/sensitivity.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "coreset/rng.hpp"

namespace coreset {

namespace {

void require_unit_weights(const WeightedPointSet& set, const char* what) {
  if (!set.is_unit_weight()) {
    throw Error(std::string(what) +
                ": sensitivity bounds are only proven for unit weights; use "
                "weighted_sensitivity_profile for weighted sets");
  }
}

void require_positive_finite(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(std::string(what) + " must be positive and finite");
  }
}

std::vector<double> norms_of(const WeightedPointSet& set) {
  std::vector<double> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = norm(set.point(i));
  return out;
}

// bounds[order[j-1]] = scale * (b + 1) * w / W_j; W_j == j for unit weights.
SensitivityProfile rank_bounds(const WeightedPointSet& set, double scale,
                               std::span<const double> b,
                               std::vector<std::size_t> order,
                               bool weighted) {
  SensitivityProfile profile;
  profile.bounds.assign(set.size(), 0.0);
  KahanSum cumulative;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t i = order[r];
    double rank = static_cast<double>(r + 1);
    double w = 1.0;
    if (weighted) {
      w = set.weight(i);
      cumulative.add(w);
      rank = cumulative.value();
    }
    profile.bounds[i] = w * (scale * (b[i] + 1.0)) / rank;
  }
  KahanSum total;
  for (double s : profile.bounds) total.add(s);
  profile.total = total.value();
  profile.order = std::move(order);
  profile.weighted_heuristic = weighted;
  return profile;
}

std::vector<double> certificates(const KernelSpec& spec,
                                 const std::vector<double>& norms) {
  std::vector<double> b(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    b[i] = ratio_certificate(spec, norms[i]);
  }
  return b;
}

}  // namespace

double SensitivityProfile::bound_at_rank(std::size_t rank) const {
  if (rank == 0 || rank > order.size()) throw Error("bound_at_rank: rank out of range");
  return bounds[order[rank - 1]];
}

std::vector<std::size_t> sort_by_norm(const WeightedPointSet& set) {
  const auto n = norms_of(set);
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return n[a] < n[b]; });
  return order;
}

double ratio_certificate(const KernelSpec& spec, double point_norm) {
  const double root_k = std::sqrt(spec.k);
  const double a = root_k * point_norm;
  switch (spec.kind) {
    case KernelKind::Sigmoid:
      return 66.0 * a;
    case KernelKind::SigmoidSquared:
      return 168.0 * a;
    case KernelKind::Logistic: {
      // log(2 e^{|p| R}) = log 2 + |p| R
      const double r = *spec.query_radius;
      return 3.0 * (std::log(2.0) + point_norm * r) / std::log(2.0) * a;
    }
  }
  return 0.0;
}

SensitivityProfile generic_sensitivity(const WeightedPointSet& set, double M,
                                       double f0, std::span<const double> b) {
  require_positive_finite(M, "generic_sensitivity: M");
  require_positive_finite(f0, "generic_sensitivity: f(0)");
  if (b.size() != set.size()) {
    throw Error("generic_sensitivity: need one certificate per point");
  }
  for (double v : b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error("generic_sensitivity: certificates must be finite and >= 0");
    }
  }
  auto order = sort_by_norm(set);
  for (std::size_t r = 1; r < order.size(); ++r) {
    if (b[order[r]] < b[order[r - 1]]) {
      throw Error("generic_sensitivity: certificates must be non-decreasing "
                  "in point norm (violated at rank " +
                  std::to_string(r + 1) + ")");
    }
  }
  return rank_bounds(set, M / f0, b, std::move(order), false);
}

SensitivityProfile sigmoid_sensitivity(const WeightedPointSet& set, double k) {
  require_unit_weights(set, "sigmoid_sensitivity");
  require_positive_finite(k, "sigmoid_sensitivity: k");
  const KernelSpec spec{KernelKind::Sigmoid, k, std::nullopt};
  const auto b = certificates(spec, norms_of(set));
  auto profile = rank_bounds(set, 2.0, b, sort_by_norm(set), false);
  profile.spec = spec;
  return profile;
}

SensitivityProfile sigmoid_squared_sensitivity(const WeightedPointSet& set,
                                               double k) {
  require_unit_weights(set, "sigmoid_squared_sensitivity");
  require_positive_finite(k, "sigmoid_squared_sensitivity: k");
  const KernelSpec spec{KernelKind::SigmoidSquared, k, std::nullopt};
  const auto b = certificates(spec, norms_of(set));
  auto profile = rank_bounds(set, 4.0, b, sort_by_norm(set), false);
  profile.spec = spec;
  return profile;
}

SensitivityProfile logistic_sensitivity(const WeightedPointSet& set, double k,
                                        double radius) {
  require_unit_weights(set, "logistic_sensitivity");
  require_positive_finite(k, "logistic_sensitivity: k");
  require_positive_finite(radius, "logistic_sensitivity: R");
  const KernelSpec spec{KernelKind::Logistic, k, radius};
  const auto b = certificates(spec, norms_of(set));
  auto profile = rank_bounds(set, spec.link_max() / spec.link_at_zero(), b,
                             sort_by_norm(set), false);
  profile.spec = spec;
  return profile;
}

SensitivityProfile sensitivity_profile(const WeightedPointSet& set,
                                       const KernelSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case KernelKind::Sigmoid:
      return sigmoid_sensitivity(set, spec.k);
    case KernelKind::SigmoidSquared:
      return sigmoid_squared_sensitivity(set, spec.k);
    case KernelKind::Logistic:
      return logistic_sensitivity(set, spec.k, *spec.query_radius);
  }
  throw Error("sensitivity_profile: unknown kernel");
}

SensitivityProfile weighted_sensitivity_profile(const WeightedPointSet& set,
                                                const KernelSpec& spec) {
  spec.validate();
  if (set.is_unit_weight()) return sensitivity_profile(set, spec);
  require_positive_finite(spec.k, "weighted_sensitivity_profile: k");
  const auto b = certificates(spec, norms_of(set));
  auto profile = rank_bounds(set, spec.link_max() / spec.link_at_zero(), b,
                             sort_by_norm(set), true);
  profile.spec = spec;
  return profile;
}

// ---------------------------------------------------------------------------
// Empirical sensitivity.

namespace {

class RatioEvaluator {
 public:
  RatioEvaluator(const WeightedPointSet& set, const KernelSpec& spec)
      : set_(set), spec_(spec), terms_(set.size()) {}

  // Fills ratios[i] = w_i c_i(x) / C(x) for every point.
  void all_ratios(std::span<const double> x, std::vector<double>& ratios) {
    const double total = fill_terms(x);
    ratios.resize(set_.size());
    for (std::size_t i = 0; i < set_.size(); ++i) ratios[i] = terms_[i] / total;
  }

  double ratio(std::span<const double> x, std::size_t i) {
    const double total = fill_terms(x);
    return terms_[i] / total;
  }

  // Gradient of log(w_i c_i(x)) - log C(x).
  void log_ratio_gradient(std::span<const double> x, std::size_t i,
                          std::vector<double>& grad) {
    const std::size_t d = set_.dim();
    const double xx = squared_norm(x);
    const double reg = spec_.regularized() ? xx / spec_.k : 0.0;
    const double reg_d = spec_.regularized() ? 2.0 / spec_.k : 0.0;
    grad.assign(d, 0.0);
    std::vector<double> g_total(d, 0.0);
    double total = 0.0;
    double weight_sum = 0.0;
    double ci = 0.0;
    double fi_prime = 0.0;
    for (std::size_t j = 0; j < set_.size(); ++j) {
      const auto p = set_.point(j);
      const double z = dot(p, x);
      const double w = set_.weight(j);
      const double c = link_eval(spec_.kind, z) + reg;
      const double fp = link_derivative(spec_.kind, z);
      total += w * c;
      weight_sum += w;
      for (std::size_t a = 0; a < d; ++a) g_total[a] += w * fp * p[a];
      if (j == i) {
        ci = c;
        fi_prime = fp;
      }
    }
    const auto pi = set_.point(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double gci = fi_prime * pi[a] + reg_d * x[a];
      const double gC = g_total[a] + weight_sum * reg_d * x[a];
      grad[a] = gci / ci - gC / total;
    }
  }

 private:
  double fill_terms(std::span<const double> x) {
    const double xx = squared_norm(x);
    const double reg = spec_.regularized() ? xx / spec_.k : 0.0;
    KahanSum total;
    for (std::size_t i = 0; i < set_.size(); ++i) {
      terms_[i] =
          set_.weight(i) * (link_eval(spec_.kind, dot(set_.point(i), x)) + reg);
      total.add(terms_[i]);
    }
    return total.value();
  }

  const WeightedPointSet& set_;
  const KernelSpec& spec_;
  std::vector<double> terms_;
};

void project_to_ball(std::vector<double>& x, double radius) {
  const double nx = norm(x);
  if (nx > radius) {
    const double s = radius / nx;
    for (double& v : x) v *= s;
  }
}

struct TopK {
  std::vector<std::pair<double, std::size_t>> items;  // (ratio, candidate)
  std::size_t capacity = 0;

  void offer(double ratio, std::size_t candidate) {
    if (capacity == 0) return;
    if (items.size() < capacity) {
      items.emplace_back(ratio, candidate);
    } else if (ratio > items.back().first) {
      items.back() = {ratio, candidate};
    } else {
      return;
    }
    for (std::size_t k = items.size() - 1; k > 0 && items[k].first > items[k - 1].first; --k) {
      std::swap(items[k], items[k - 1]);
    }
  }
};

double ascend(RatioEvaluator& eval, std::vector<double> x, std::size_t i,
              double start_ratio, std::size_t steps,
              std::optional<double> ball) {
  double best = start_ratio;
  double step = 0.1 * std::max(norm(x), 1e-2);
  std::vector<double> grad;
  std::vector<double> trial(x.size());
  for (std::size_t s = 0; s < steps; ++s) {
    eval.log_ratio_gradient(x, i, grad);
    const double gn = norm(grad);
    if (!(gn > 0.0) || !std::isfinite(gn)) break;
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      for (std::size_t a = 0; a < x.size(); ++a) trial[a] = x[a] + step * grad[a] / gn;
      if (ball) project_to_ball(trial, *ball);
      const double r = eval.ratio(trial, i);
      if (r > best) {
        best = r;
        x = trial;
        step *= 2.0;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return best;
}

std::vector<double> empirical_impl(const WeightedPointSet& set,
                                   const KernelSpec& spec,
                                   const EmpiricalSensitivityOptions& opt,
                                   std::optional<std::size_t> only) {
  spec.validate();
  const std::size_t n = set.size();
  const std::size_t d = set.dim();
  std::vector<double> best(n, 0.0);
  if (n == 0) return best;

  std::optional<double> ball;
  if (spec.kind == KernelKind::Logistic) ball = *spec.query_radius;
  const double r_max = ball ? std::min(opt.max_radius, *ball) : opt.max_radius;
  const double r_min = std::min(opt.min_radius, r_max);

  RatioEvaluator eval(set, spec);
  std::vector<double> ratios;
  std::vector<TopK> starts(n);
  for (auto& t : starts) t.capacity = opt.refine_starts;
  std::vector<std::vector<double>> grid;

  auto consider = [&](const std::vector<double>& x, bool keep) {
    eval.all_ratios(x, ratios);
    const std::size_t id = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::max(best[i], ratios[i]);
      if (keep) starts[i].offer(ratios[i], id);
    }
    if (keep) grid.push_back(x);
  };

  std::vector<double> radii(opt.radii);
  for (std::size_t r = 0; r < opt.radii; ++r) {
    const double t = opt.radii == 1 ? 1.0 : static_cast<double>(r) / static_cast<double>(opt.radii - 1);
    radii[r] = r_min * std::pow(r_max / r_min, t);
  }

  // Fixed grid: origin, random directions, and the directions +-p_i.
  consider(std::vector<double>(d, 0.0), true);
  Rng grid_rng(derive_seed(opt.seed, 0));
  std::vector<std::vector<double>> directions;
  for (std::size_t k = 0; k < opt.directions; ++k) {
    directions.push_back(random_direction(grid_rng, d));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = set.point(i);
    const double np = norm(p);
    if (np == 0.0) continue;
    std::vector<double> u(p.begin(), p.end());
    for (double& v : u) v /= np;
    directions.push_back(u);
    for (double& v : u) v = -v;
    directions.push_back(std::move(u));
  }
  std::vector<double> x(d);
  for (const auto& u : directions) {
    for (double r : radii) {
      for (std::size_t a = 0; a < d; ++a) x[a] = r * u[a];
      consider(x, true);
    }
  }
  for (const auto& q : opt.extra_queries) {
    if (q.size() != d) throw Error("empirical_sensitivity: extra query dimension mismatch");
    std::vector<double> xq = q;
    if (ball) project_to_ball(xq, *ball);
    consider(xq, true);
  }

  // Refinement from the best grid queries of each point.
  for (std::size_t i = 0; i < n; ++i) {
    if (only && *only != i) continue;
    for (const auto& [ratio, id] : starts[i].items) {
      best[i] = std::max(best[i], ascend(eval, grid[id], i, ratio,
                                         opt.ascent_steps, ball));
    }
  }

  // Random budget: a fixed-seed prefix, so larger budgets only add queries.
  Rng rng(derive_seed(opt.seed, 1));
  const double log_lo = std::log(r_min);
  const double log_hi = std::log(r_max);
  for (std::size_t b = 0; b < opt.budget; ++b) {
    auto u = random_direction(rng, d);
    const double r = std::exp(rng.uniform(log_lo, log_hi));
    for (std::size_t a = 0; a < d; ++a) x[a] = r * u[a];
    consider(x, false);
  }
  for (double& v : best) v = std::min(v, 1.0);
  return best;
}

}  // namespace

std::vector<double> empirical_sensitivities(
    const WeightedPointSet& set, const KernelSpec& spec,
    const EmpiricalSensitivityOptions& options) {
  return empirical_impl(set, spec, options, std::nullopt);
}

double empirical_sensitivity(const WeightedPointSet& set,
                             const KernelSpec& spec, std::size_t index,
                             std::size_t budget) {
  if (index >= set.size()) throw Error("empirical_sensitivity: index out of range");
  EmpiricalSensitivityOptions opt;
  opt.budget = budget;
  return empirical_impl(set, spec, opt, index)[index];
}

}  // namespace coreset
