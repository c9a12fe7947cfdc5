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

#include "coreset/solver.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>

#include "coreset/rng.hpp"

namespace coreset {

namespace {

struct Objective {
  const WeightedPointSet& set;
  const KernelSpec& spec;

  double operator()(std::span<const double> x, std::span<double> g) const {
    const double v = total_cost_and_gradient(set, spec, x, g);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "minimize: non-finite objective " << v << " at x = (";
      for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
      msg << ")";
      throw Error(msg.str());
    }
    return v;
  }
};

void project(std::span<double> x, std::optional<double> ball) {
  if (!ball) return;
  const double nx = norm(x);
  if (nx > *ball) {
    const double s = *ball / nx;
    for (double& v : x) v *= s;
  }
}

// |x - P(x - g)|: the gradient norm for unconstrained problems.
double stationarity(std::span<const double> x, std::span<const double> g,
                    std::optional<double> ball) {
  if (!ball) return norm(g);
  Vector t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) t[i] = x[i] - g[i];
  project(t, ball);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - t[i]) * (x[i] - t[i]);
  return std::sqrt(s);
}

struct Correction {
  Vector s;
  Vector y;
  double rho;
};

// Two-loop recursion: returns -H g.
Vector lbfgs_direction(std::span<const double> g,
                       const std::deque<Correction>& history) {
  Vector q(g.begin(), g.end());
  std::vector<double> alpha(history.size());
  for (std::size_t k = history.size(); k-- > 0;) {
    const auto& c = history[k];
    alpha[k] = c.rho * dot(c.s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * c.y[i];
  }
  if (!history.empty()) {
    const auto& last = history.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < history.size(); ++k) {
    const auto& c = history[k];
    const double beta = c.rho * dot(c.y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * c.s[i];
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

SolveResult minimize(const WeightedPointSet& set, const KernelSpec& spec,
                     std::span<const double> init,
                     const SolverOptions& options) {
  spec.validate();
  if (!(options.tol > 0.0)) throw Error("minimize: tol must be positive");
  if (init.size() != set.dim()) throw Error("minimize: initial point has the wrong dimension");
  std::optional<double> ball;
  if (spec.kind == KernelKind::Logistic) ball = *spec.query_radius;

  const Objective objective{set, spec};
  const std::size_t d = set.dim();
  Vector x(init.begin(), init.end());
  project(x, ball);
  Vector g(d);
  double f = objective(x, g);

  std::deque<Correction> history;
  Vector x_new(d);
  Vector g_new(d);
  SolveResult result;
  std::size_t iter = 0;
  for (; iter < options.max_iter; ++iter) {
    if (stationarity(x, g, ball) <= options.tol) {
      result.converged = true;
      break;
    }
    Vector dir = lbfgs_direction(g, history);
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      history.clear();
      dir = lbfgs_direction(g, history);
      slope = dot(g, dir);
    }
    double step = 1.0;
    if (history.empty()) step = std::min(1.0, 1.0 / norm(g));

    bool accepted = false;
    double f_new = f;
    double step_len = 0.0;
    while (true) {
      for (std::size_t i = 0; i < d; ++i) x_new[i] = x[i] + step * dir[i];
      project(x_new, ball);
      double predicted = 0.0;
      step_len = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        predicted += g[i] * (x_new[i] - x[i]);
        step_len += (x_new[i] - x[i]) * (x_new[i] - x[i]);
      }
      step_len = std::sqrt(step_len);
      if (step_len <= options.min_step) break;
      f_new = objective(x_new, g_new);
      if (f_new < f && f_new <= f + options.armijo * predicted) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease along a step longer than min_step: x is stationary to
      // working precision.
      result.converged = true;
      break;
    }

    Correction c{Vector(d), Vector(d), 0.0};
    for (std::size_t i = 0; i < d; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-12 * std::max(1e-300, dot(c.y, c.y))) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (history.size() > options.history) history.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (step_len <= options.min_step) {
      result.converged = true;
      ++iter;
      break;
    }
  }
  if (!result.converged && stationarity(x, g, ball) <= options.tol) {
    result.converged = true;
  }
  result.x_star = std::move(x);
  result.value = f;
  result.iterations = iter;
  result.gradient_norm = norm(g);
  return result;
}

Vector multistart_start(std::uint64_t seed, std::size_t index, std::size_t dim,
                        const KernelSpec& spec) {
  Rng rng(derive_seed(seed, index));
  double radius = 1.0;
  if (spec.kind == KernelKind::Logistic) radius = std::min(radius, *spec.query_radius);
  return random_in_ball(rng, dim, radius);
}

SolveResult multistart_minimize(const WeightedPointSet& set,
                                const KernelSpec& spec, std::size_t starts,
                                std::uint64_t seed,
                                const SolverOptions& options,
                                bool include_origin) {
  if (starts == 0 && !include_origin) throw Error("multistart_minimize: no starts");
  std::optional<SolveResult> best;
  auto keep = [&](SolveResult r) {
    if (!best || r.value < best->value) best = std::move(r);
  };
  if (include_origin) keep(minimize(set, spec, Vector(set.dim(), 0.0), options));
  for (std::size_t i = 0; i < starts; ++i) {
    keep(minimize(set, spec, multistart_start(seed, i, set.dim(), spec), options));
  }
  return *best;
}

}  // namespace coreset
