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

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coreset {

/// Thrown for every contract violation in the library (bad dimensions,
/// out-of-domain parameters, malformed input files).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = std::vector<double>;

// Neumaier variant of Kahan summation. Order of add() calls is the
// summation order; results are reproducible for a fixed order.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

/// A weighted set (P, w): n points in R^d stored row-major, each with a
/// strictly positive weight. Coresets are WeightedPointSets too.
class WeightedPointSet {
 public:
  explicit WeightedPointSet(std::size_t dim);
  /// `coords` is row-major with coords.size() == weights.size() * dim.
  WeightedPointSet(std::size_t dim, std::vector<double> coords,
                   std::vector<double> weights);

  /// Unit-weight set (P, 1).
  static WeightedPointSet unit(std::size_t dim, std::vector<double> coords);

  void add(std::span<const double> point, double weight = 1.0);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }

  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double total_weight() const;
  bool is_unit_weight() const noexcept;

  /// Same points, every weight multiplied by `factor` (> 0).
  WeightedPointSet scaled_weights(double factor) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

enum class KernelKind { Sigmoid, Logistic, SigmoidSquared };

std::string_view to_string(KernelKind kind);
/// Accepts "sigmoid", "logistic", "sigmoid2" / "sigmoid-squared".
KernelKind parse_kernel_kind(std::string_view name);

/// A monotonic bounded kernel c(p, x) = f(p.x) + |x|^2 / k.
///
/// `k == +inf` drops the regularizer, which is only meaningful for the
/// lower-bound constructions; sensitivity formulas require finite k.
/// Logistic kernels need a finite query radius R; queries must satisfy
/// |x| <= R.
struct KernelSpec {
  KernelKind kind = KernelKind::Sigmoid;
  double k = 1.0;
  std::optional<double> query_radius;

  static KernelSpec sigmoid(double k);
  static KernelSpec sigmoid_squared(double k);
  static KernelSpec logistic(double k, double radius);

  /// Throws Error when the invariants (k > 0, logistic radius) fail.
  void validate() const;

  /// sup f: 1 for the sigmoid links, log(1 + e^R) for logistic.
  double link_max() const;
  /// f(0): 1/2, 1/4, log 2.
  double link_at_zero() const;
  bool regularized() const noexcept;
};

/// Numerically stable logistic sigmoid 1 / (1 + e^-z).
double sigmoid(double z) noexcept;
/// log(1 + e^z) without overflow.
double softplus(double z) noexcept;

double link_eval(KernelKind kind, double z) noexcept;
double link_derivative(KernelKind kind, double z) noexcept;
inline double link_eval(const KernelSpec& spec, double z) noexcept {
  return link_eval(spec.kind, z);
}

/// c(p, x) = f(p.x) + |x|^2 / k.
double cost(const KernelSpec& spec, std::span<const double> p,
            std::span<const double> x);

/// C(P, w, x) = sum_p w(p) c(p, x), accumulated in input order with
/// compensated summation. Returns 0 for an empty set.
double total_cost(const WeightedPointSet& set, const KernelSpec& spec,
                  std::span<const double> x);

/// Gradient of total_cost with respect to x.
Vector total_cost_gradient(const WeightedPointSet& set, const KernelSpec& spec,
                           std::span<const double> x);

/// Value and gradient in one pass.
double total_cost_and_gradient(const WeightedPointSet& set,
                               const KernelSpec& spec,
                               std::span<const double> x,
                               std::span<double> grad);

}  // namespace coreset
