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

#include "coreset/core.hpp"

#include <limits>
#include <string>

namespace coreset {

namespace {

void check_dims(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(std::string(what) + ": dimension mismatch (" +
                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

// Relative slack on the logistic ball so that projected iterates with
// |x| == R up to rounding are accepted.
constexpr double kBallSlack = 1e-12;

void check_query(const KernelSpec& spec, double x_sq_norm) {
  if (spec.kind != KernelKind::Logistic) return;
  const double r = *spec.query_radius;
  if (std::sqrt(x_sq_norm) > r * (1.0 + kBallSlack)) {
    throw Error("logistic query outside the ball |x| <= R (|x| = " +
                std::to_string(std::sqrt(x_sq_norm)) +
                ", R = " + std::to_string(r) + ")");
  }
}

double regularizer(const KernelSpec& spec, double x_sq_norm) {
  return spec.regularized() ? x_sq_norm / spec.k : 0.0;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

WeightedPointSet::WeightedPointSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error("WeightedPointSet: dim must be positive");
}

WeightedPointSet::WeightedPointSet(std::size_t dim, std::vector<double> coords,
                                   std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim == 0) throw Error("WeightedPointSet: dim must be positive");
  if (coords_.size() != weights_.size() * dim_) {
    throw Error("WeightedPointSet: " + std::to_string(coords_.size()) +
                " coordinates do not form " + std::to_string(weights_.size()) +
                " points of dimension " + std::to_string(dim_));
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw Error("WeightedPointSet: non-finite coordinate");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error("WeightedPointSet: weights must be finite and positive");
    }
  }
}

WeightedPointSet WeightedPointSet::unit(std::size_t dim,
                                        std::vector<double> coords) {
  if (dim == 0) throw Error("WeightedPointSet: dim must be positive");
  const std::size_t n = coords.size() / dim;
  return WeightedPointSet(dim, std::move(coords), std::vector<double>(n, 1.0));
}

void WeightedPointSet::add(std::span<const double> point, double weight) {
  check_dims(point.size(), dim_, "WeightedPointSet::add");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error("WeightedPointSet::add: weight must be finite and positive");
  }
  for (double c : point) {
    if (!std::isfinite(c)) throw Error("WeightedPointSet::add: non-finite coordinate");
  }
  coords_.insert(coords_.end(), point.begin(), point.end());
  weights_.push_back(weight);
}

void WeightedPointSet::reserve(std::size_t n) {
  coords_.reserve(n * dim_);
  weights_.reserve(n);
}

double WeightedPointSet::total_weight() const {
  KahanSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

bool WeightedPointSet::is_unit_weight() const noexcept {
  for (double w : weights_) {
    if (w != 1.0) return false;
  }
  return true;
}

WeightedPointSet WeightedPointSet::scaled_weights(double factor) const {
  std::vector<double> w = weights_;
  for (double& v : w) v *= factor;
  return WeightedPointSet(dim_, coords_, std::move(w));
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Sigmoid:
      return "sigmoid";
    case KernelKind::Logistic:
      return "logistic";
    case KernelKind::SigmoidSquared:
      return "sigmoid2";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "sigmoid") return KernelKind::Sigmoid;
  if (name == "logistic") return KernelKind::Logistic;
  if (name == "sigmoid2" || name == "sigmoid-squared" ||
      name == "sigmoid_squared") {
    return KernelKind::SigmoidSquared;
  }
  throw Error("unknown kernel '" + std::string(name) +
              "' (expected sigmoid, logistic or sigmoid2)");
}

KernelSpec KernelSpec::sigmoid(double k) {
  KernelSpec s{KernelKind::Sigmoid, k, std::nullopt};
  s.validate();
  return s;
}

KernelSpec KernelSpec::sigmoid_squared(double k) {
  KernelSpec s{KernelKind::SigmoidSquared, k, std::nullopt};
  s.validate();
  return s;
}

KernelSpec KernelSpec::logistic(double k, double radius) {
  KernelSpec s{KernelKind::Logistic, k, radius};
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (!(k > 0.0) || std::isnan(k)) {
    throw Error("kernel: regularization constant k must be positive");
  }
  if (query_radius) {
    const double r = *query_radius;
    if (!(r > 0.0) || std::isnan(r)) throw Error("kernel: query radius must be positive");
  }
  if (kind == KernelKind::Logistic &&
      (!query_radius || !std::isfinite(*query_radius))) {
    throw Error("kernel: logistic kernel requires a finite query radius R");
  }
}

double KernelSpec::link_max() const {
  switch (kind) {
    case KernelKind::Sigmoid:
    case KernelKind::SigmoidSquared:
      return 1.0;
    case KernelKind::Logistic:
      return softplus(*query_radius);
  }
  return 1.0;
}

double KernelSpec::link_at_zero() const {
  switch (kind) {
    case KernelKind::Sigmoid:
      return 0.5;
    case KernelKind::SigmoidSquared:
      return 0.25;
    case KernelKind::Logistic:
      return std::log(2.0);
  }
  return 0.5;
}

bool KernelSpec::regularized() const noexcept { return std::isfinite(k); }

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) noexcept {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double link_eval(KernelKind kind, double z) noexcept {
  switch (kind) {
    case KernelKind::Sigmoid:
      return sigmoid(z);
    case KernelKind::Logistic:
      return softplus(z);
    case KernelKind::SigmoidSquared: {
      const double s = sigmoid(z);
      return s * s;
    }
  }
  return 0.0;
}

double link_derivative(KernelKind kind, double z) noexcept {
  switch (kind) {
    case KernelKind::Sigmoid: {
      const double s = sigmoid(z);
      return s * sigmoid(-z);
    }
    case KernelKind::Logistic:
      return sigmoid(z);
    case KernelKind::SigmoidSquared: {
      const double s = sigmoid(z);
      return 2.0 * s * (s * sigmoid(-z));
    }
  }
  return 0.0;
}

double cost(const KernelSpec& spec, std::span<const double> p,
            std::span<const double> x) {
  check_dims(p.size(), x.size(), "cost");
  const double xx = squared_norm(x);
  check_query(spec, xx);
  return link_eval(spec.kind, dot(p, x)) + regularizer(spec, xx);
}

double total_cost(const WeightedPointSet& set, const KernelSpec& spec,
                  std::span<const double> x) {
  check_dims(set.dim(), x.size(), "total_cost");
  const double xx = squared_norm(x);
  check_query(spec, xx);
  const double reg = regularizer(spec, xx);
  KahanSum sum;
  for (std::size_t i = 0; i < set.size(); ++i) {
    sum.add(set.weight(i) * (link_eval(spec.kind, dot(set.point(i), x)) + reg));
  }
  return sum.value();
}

double total_cost_and_gradient(const WeightedPointSet& set,
                               const KernelSpec& spec,
                               std::span<const double> x,
                               std::span<double> grad) {
  check_dims(set.dim(), x.size(), "total_cost_gradient");
  check_dims(grad.size(), x.size(), "total_cost_gradient");
  const double xx = squared_norm(x);
  check_query(spec, xx);
  const double reg = regularizer(spec, xx);
  const std::size_t d = set.dim();
  KahanSum value;
  std::vector<KahanSum> g(d);
  KahanSum weight_sum;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto p = set.point(i);
    const double w = set.weight(i);
    const double z = dot(p, x);
    value.add(w * (link_eval(spec.kind, z) + reg));
    const double s = w * link_derivative(spec.kind, z);
    for (std::size_t j = 0; j < d; ++j) g[j].add(s * p[j]);
    weight_sum.add(w);
  }
  const double reg_scale =
      spec.regularized() ? 2.0 * weight_sum.value() / spec.k : 0.0;
  for (std::size_t j = 0; j < d; ++j) grad[j] = g[j].value() + reg_scale * x[j];
  return value.value();
}

Vector total_cost_gradient(const WeightedPointSet& set, const KernelSpec& spec,
                           std::span<const double> x) {
  Vector grad(x.size(), 0.0);
  total_cost_and_gradient(set, spec, x, grad);
  return grad;
}

}  // namespace coreset
