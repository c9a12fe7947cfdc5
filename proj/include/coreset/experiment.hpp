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
#include <string>
#include <vector>

#include "coreset/core.hpp"
#include "coreset/dataset.hpp"
#include "coreset/solver.hpp"

namespace coreset::bench {

enum class Method { Coreset, Uniform, Full };

std::string to_string(Method m);
Method parse_method(const std::string& name);

struct ExperimentConfig {
  KernelKind kernel = KernelKind::Sigmoid;
  double k = 500.0;
  std::optional<double> radius;
  double eps = 0.3;
  double delta = 0.1;
  /// Sample sizes m = round(alpha * ln n) for each multiplier alpha.
  std::vector<double> size_schedule{5.0, 10.0, 15.0, 20.0};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::Coreset, Method::Uniform, Method::Full};
  /// Logistic mode only.
  double test_fraction = 0.2;
  /// Random starts (plus the origin) for the full-data ground truth.
  std::size_t ground_truth_starts = 8;
  /// Random starts (plus the origin) when solving on samples.
  std::size_t sample_starts = 0;
  SolverOptions solver;
  /// Worker threads for trials; 0 reads CORESET_THREADS (default: all cores).
  std::size_t threads = 0;
  /// Wall-clock timings make reports non-reproducible byte for byte, so
  /// they are only recorded on request.
  bool record_timings = false;

  KernelSpec kernel_spec() const;
  void validate() const;
};

struct TrialRecord {
  Method method = Method::Coreset;
  std::size_t m = 0;
  std::size_t trial = 0;
  /// Sigmoid: full-data objective at the method's minimizer.
  /// Logistic: mean negative test log-likelihood.
  double value = 0.0;
  /// |value / reference - 1| with the full-data reference.
  double error = 0.0;
};

struct AggregateRecord {
  Method method = Method::Coreset;
  std::size_t m = 0;
  std::size_t trials = 0;
  double mean_value = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;
};

struct Timings {
  double total_seconds = 0.0;
  double ground_truth_seconds = 0.0;
};

struct ExperimentReport {
  static constexpr int kSchemaVersion = 1;
  std::string mode;
  std::string dataset;
  std::size_t n = 0;
  std::size_t dim = 0;
  ExperimentConfig config;
  std::vector<std::size_t> sizes;
  /// Sigmoid: C^k. Logistic: mean over repeats of the full-data test NLL.
  double reference = 0.0;
  std::vector<TrialRecord> trials;
  std::vector<AggregateRecord> aggregates;
  std::optional<Timings> timings;

  const AggregateRecord& aggregate(Method method, std::size_t m) const;
};

/// m = max(1, round(alpha * ln n)) for each multiplier.
std::vector<std::size_t> schedule_sizes(const std::vector<double>& multipliers,
                                        std::size_t n);

/// Sets TrialRecord-derived aggregates (mean and population standard
/// deviation per method and size) in (method, m) order.
void aggregate(ExperimentReport& report);

/// Regularized-loss experiment: ground truth C^k by multistart on the full
/// data, then for every size and trial a coreset and a uniform sample of
/// size m are solved and scored by the full-data objective at their
/// minimizers. `data` must be normalized to the unit ball.
ExperimentReport run_sigmoid_experiment(const Dataset& data,
                                        const ExperimentConfig& config);

/// Logistic-regression experiment on labeled data: every repeat draws a
/// seeded train/test split, folds labels (unless already folded), solves
/// on the full train set and on coreset/uniform samples of it, and records
/// the mean negative test log-likelihood of each solution. Requires a
/// logistic kernel with radius and data normalized to the unit ball.
ExperimentReport run_logistic_experiment(const Dataset& data,
                                         const ExperimentConfig& config);

/// Mean of log(1 + e^{p.x}) over folded test points.
double negative_log_likelihood(const WeightedPointSet& folded_test,
                               std::span<const double> x);

/// Threads to use: `requested` if non-zero, else CORESET_THREADS, else the
/// hardware concurrency.
std::size_t worker_threads(std::size_t requested);

}  // namespace coreset::bench
