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
#include <span>

#include "coreset/core.hpp"

namespace coreset {

struct SolveResult {
  Vector x_star;
  /// total_cost at x_star.
  double value = 0.0;
  std::size_t iterations = 0;
  /// Euclidean norm of the (unprojected) gradient at x_star.
  double gradient_norm = 0.0;
  bool converged = false;
};

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 500;
  std::size_t history = 10;
  double armijo = 1e-4;
  double min_step = 1e-12;
};

/// Limited-memory BFGS with Armijo backtracking (halving) on total_cost.
///
/// For logistic kernels every trial point is projected onto |x| <= R and
/// the stopping test uses the projected gradient. Stops when the gradient
/// norm drops to `tol` or an accepted step is shorter than min_step.
/// Throws Error if the objective becomes non-finite.
SolveResult minimize(const WeightedPointSet& set, const KernelSpec& spec,
                     std::span<const double> init,
                     const SolverOptions& options = {});

/// Deterministic start number `index` for multistart_minimize: a uniform
/// point of the unit ball (clipped to the logistic ball).
Vector multistart_start(std::uint64_t seed, std::size_t index, std::size_t dim,
                        const KernelSpec& spec);

/// Best of `starts` minimize runs from multistart_start(seed, 0..starts-1),
/// plus a run from the origin when `include_origin` is set. Ties keep the
/// earlier run.
SolveResult multistart_minimize(const WeightedPointSet& set,
                                const KernelSpec& spec, std::size_t starts,
                                std::uint64_t seed,
                                const SolverOptions& options = {},
                                bool include_origin = true);

}  // namespace coreset
