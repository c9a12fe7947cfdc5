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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "coreset/rng.hpp"
#include "coreset/sensitivity.hpp"
#include "coreset/verifier.hpp"

using namespace coreset;

namespace {

// Harmonic number summed smallest-term first in long double.
double harmonic(std::size_t n) {
  long double h = 0.0L;
  for (std::size_t j = n; j >= 1; --j) h += 1.0L / static_cast<long double>(j);
  return static_cast<double>(h);
}

WeightedPointSet unit_sphere(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  WeightedPointSet s(d);
  for (std::size_t i = 0; i < n; ++i) s.add(random_direction(rng, d));
  return s;
}

WeightedPointSet unit_ball(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  WeightedPointSet s(d);
  for (std::size_t i = 0; i < n; ++i) s.add(random_in_ball(rng, d, 1.0));
  return s;
}

}  // namespace

TEST(SortByNorm, Examples) {
  const auto s = WeightedPointSet::unit(2, {3, 4, 0, 1, 1, 1});
  EXPECT_EQ(sort_by_norm(s), (std::vector<std::size_t>{1, 2, 0}));
  const auto sorted = WeightedPointSet::unit(1, {0, 1, 2, 3});
  EXPECT_EQ(sort_by_norm(sorted), (std::vector<std::size_t>{0, 1, 2, 3}));
  const auto ties = WeightedPointSet::unit(2, {0, 1, 1, 0, 0, -1});
  EXPECT_EQ(sort_by_norm(ties), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(SigmoidSensitivity, Examples) {
  auto p = sigmoid_sensitivity(WeightedPointSet::unit(1, {1}), 1.0);
  EXPECT_DOUBLE_EQ(p.bounds[0], 134.0);
  EXPECT_DOUBLE_EQ(p.total, 134.0);

  p = sigmoid_sensitivity(WeightedPointSet::unit(1, {1, 0}), 4.0);
  EXPECT_DOUBLE_EQ(p.bounds[1], 2.0);
  EXPECT_DOUBLE_EQ(p.bounds[0], 133.0);
  EXPECT_DOUBLE_EQ(p.total, 135.0);
  EXPECT_DOUBLE_EQ(p.bound_at_rank(1), 2.0);
  EXPECT_THROW(p.bound_at_rank(0), Error);
  EXPECT_THROW(p.bound_at_rank(3), Error);
}

TEST(SigmoidSensitivity, UnitSphereTotalIsHarmonic) {
  const auto p = sigmoid_sensitivity(unit_sphere(1000, 3, 5), 1.0);
  const double oracle = 134.0 * harmonic(1000);
  EXPECT_NEAR(oracle, 1003.0530953137462, 1e-9);
  EXPECT_NEAR(p.total, oracle, 1e-9 * oracle);
  for (double k : {4.0, 100.0}) {
    const auto q = sigmoid_sensitivity(unit_sphere(257, 2, 6), k);
    const double exact = (132.0 * std::sqrt(k) + 2.0) * harmonic(257);
    EXPECT_NEAR(q.total, exact, 1e-9 * exact);
  }
}

TEST(SigmoidSensitivity, ZeroNormPointsGetTwoOverRank) {
  const auto p = sigmoid_sensitivity(WeightedPointSet::unit(2, std::vector<double>(10, 0.0)), 50.0);
  for (std::size_t r = 1; r <= 5; ++r) EXPECT_DOUBLE_EQ(p.bound_at_rank(r), 2.0 / r);
}

TEST(LogisticSensitivity, Examples) {
  auto p = logistic_sensitivity(WeightedPointSet::unit(1, {0}), 7.0, 1.0);
  EXPECT_NEAR(p.bounds[0], 1.8946361239720115, 1e-12);

  const KernelSpec spec = KernelSpec::logistic(1.0, 1.0);
  EXPECT_NEAR(ratio_certificate(spec, 1.0), 7.32808512266689, 1e-12);
  p = logistic_sensitivity(WeightedPointSet::unit(1, {1}), 1.0, 1.0);
  EXPECT_NEAR(p.bounds[0], 15.77869091691857, 1e-10);
}

TEST(LogisticSensitivity, DoublingRankHalvesBound) {
  // Equal norms so the certificate is identical at every rank.
  const auto p = logistic_sensitivity(unit_sphere(16, 2, 7), 10.0, 2.0);
  for (std::size_t j = 1; j <= 8; ++j) {
    EXPECT_NEAR(p.bound_at_rank(2 * j), p.bound_at_rank(j) / 2.0, 1e-12 * p.bound_at_rank(j));
  }
}

TEST(Sensitivity, RejectsBadInput) {
  const WeightedPointSet weighted(1, {1, 2}, {1.0, 2.0});
  EXPECT_THROW(sigmoid_sensitivity(weighted, 1.0), Error);
  EXPECT_THROW(logistic_sensitivity(weighted, 1.0, 1.0), Error);
  EXPECT_THROW(sensitivity_profile(weighted, KernelSpec::sigmoid(1.0)), Error);
  const auto unit = WeightedPointSet::unit(1, {1, 2});
  EXPECT_THROW(sigmoid_sensitivity(unit, 0.0), Error);
  EXPECT_THROW(sigmoid_sensitivity(unit, -3.0), Error);
  EXPECT_THROW(logistic_sensitivity(unit, 1.0, 0.0), Error);
  EXPECT_THROW(logistic_sensitivity(unit, 0.0, 1.0), Error);
}

TEST(GenericSensitivity, ReproducesSpecificFormulas) {
  const auto set = unit_ball(60, 3, 8);
  std::vector<double> norms;
  for (std::size_t i = 0; i < set.size(); ++i) norms.push_back(norm(set.point(i)));

  const double k = 250.0;
  std::vector<double> b;
  for (double r : norms) b.push_back(66.0 * std::sqrt(k) * r);
  const auto g = generic_sensitivity(set, 1.0, 0.5, b);
  const auto s = sigmoid_sensitivity(set, k);
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_DOUBLE_EQ(g.bounds[i], s.bounds[i]);

  const double R = 3.0;
  b.clear();
  for (double r : norms) b.push_back(3.0 * std::log(2.0 * std::exp(r * R)) / std::log(2.0) * std::sqrt(k) * r);
  const auto gl = generic_sensitivity(set, std::log1p(std::exp(R)), std::log(2.0), b);
  const auto l = logistic_sensitivity(set, k, R);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_NEAR(gl.bounds[i], l.bounds[i], 1e-12 * l.bounds[i]);
  }
}

TEST(GenericSensitivity, ZeroCertificatesGiveHarmonicTotal) {
  const auto set = unit_ball(40, 2, 9);
  const std::vector<double> b(40, 0.0);
  const auto g = generic_sensitivity(set, 3.0, 0.5, b);
  EXPECT_NEAR(g.total, 6.0 * harmonic(40), 1e-12 * g.total);
}

TEST(GenericSensitivity, RejectsNonMonotoneCertificates) {
  const auto set = WeightedPointSet::unit(1, {1, 2, 3});
  const std::vector<double> bad{1.0, 0.5, 2.0};
  EXPECT_THROW(generic_sensitivity(set, 1.0, 0.5, bad), Error);
  const std::vector<double> short_b{1.0};
  EXPECT_THROW(generic_sensitivity(set, 1.0, 0.5, short_b), Error);
  const std::vector<double> ok{0.0, 1.0, 1.0};
  EXPECT_NO_THROW(generic_sensitivity(set, 1.0, 0.5, ok));
  EXPECT_THROW(generic_sensitivity(set, 0.0, 0.5, ok), Error);
}

TEST(SensitivityProfileProperties, TotalRankAndCorollary) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = unit_ball(100 + seed, 3, 100 + seed);
    for (const KernelSpec& spec :
         {KernelSpec::sigmoid(100.0), KernelSpec::sigmoid_squared(30.0), KernelSpec::logistic(10.0, 2.0)}) {
      const auto p = sensitivity_profile(set, spec);
      KahanSum sum;
      for (double v : p.bounds) {
        EXPECT_GT(v, 0.0);
        sum.add(v);
      }
      EXPECT_DOUBLE_EQ(p.total, sum.value());
      for (std::size_t j = 2; j <= p.size(); ++j) {
        EXPECT_GE(p.bound_at_rank(j) * j, p.bound_at_rank(j - 1) * (j - 1) * (1 - 1e-15));
      }
    }
    const double k = 100.0;
    EXPECT_LE(sigmoid_sensitivity(set, k).total, (132.0 * std::sqrt(k) + 2.0) * harmonic(set.size()));
  }
}

TEST(WeightedProfile, MatchesUnitFormulaOnUnitWeights) {
  const auto set = unit_ball(50, 2, 10);
  const auto spec = KernelSpec::logistic(20.0, 3.0);
  const auto a = weighted_sensitivity_profile(set, spec);
  const auto b = sensitivity_profile(set, spec);
  EXPECT_EQ(a.bounds, b.bounds);
  EXPECT_FALSE(a.weighted_heuristic);
}

TEST(WeightedProfile, IntegerWeightsMatchReplicatedRanksAtBlockEnds) {
  // A point of weight 2 at cumulative rank W_j gets 2 (b + 1) / W_j.
  const WeightedPointSet set(1, {0.5, 1.0}, {2.0, 3.0});
  const auto p = weighted_sensitivity_profile(set, KernelSpec::sigmoid(4.0));
  EXPECT_TRUE(p.weighted_heuristic);
  EXPECT_DOUBLE_EQ(p.bounds[0], 2.0 * (132.0 * 2.0 * 0.5 + 2.0) / 2.0);
  EXPECT_DOUBLE_EQ(p.bounds[1], 3.0 * (132.0 * 2.0 * 1.0 + 2.0) / 5.0);
}

TEST(EmpiricalSensitivity, TrivialCases) {
  const auto single = WeightedPointSet::unit(2, {0.3, -0.2});
  EXPECT_DOUBLE_EQ(empirical_sensitivity(single, KernelSpec::sigmoid(10.0), 0, 200), 1.0);
  const auto twins = WeightedPointSet::unit(2, {0.3, -0.2, 0.3, -0.2});
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(empirical_sensitivity(twins, KernelSpec::sigmoid(10.0), i, 200), 0.5);
  }
  EXPECT_THROW(empirical_sensitivity(twins, KernelSpec::sigmoid(10.0), 2, 10), Error);
}

TEST(EmpiricalSensitivity, NonDecreasingInBudget) {
  const auto set = unit_ball(30, 2, 11);
  const auto spec = KernelSpec::sigmoid(100.0);
  EmpiricalSensitivityOptions small, large;
  small.budget = 100;
  large.budget = 2000;
  const auto a = empirical_sensitivities(set, spec, small);
  const auto b = empirical_sensitivities(set, spec, large);
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_LE(a[i], b[i]);
}

TEST(EmpiricalSensitivity, SeparableSetReachesOne) {
  const auto sep = verify::build_separable_set(10, 3, 1e6);
  const KernelSpec spec = KernelSpec::sigmoid(std::numeric_limits<double>::infinity());
  EmpiricalSensitivityOptions opts;
  opts.budget = 1000;
  for (const auto& y : sep.witnesses) {
    Vector x(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) x[j] = -y[j];
    opts.extra_queries.push_back(x);
  }
  for (double s : empirical_sensitivities(sep.points, spec, opts)) EXPECT_GE(s, 0.99);
}

TEST(EmpiricalSensitivity, DominatedByBoundOnSmallInstances) {
  for (std::uint64_t t = 0; t < 6; ++t) {
    Rng rng(200 + t);
    const auto set = unit_ball(5 + rng.below(40), 1 + rng.below(3), 300 + t);
    const KernelSpec spec = t % 2 ? KernelSpec::logistic(100.0, 2.0) : KernelSpec::sigmoid(1000.0);
    EmpiricalSensitivityOptions opts;
    opts.budget = 2000;
    const auto emp = empirical_sensitivities(set, spec, opts);
    const auto bound = sensitivity_profile(set, spec);
    for (std::size_t i = 0; i < set.size(); ++i) {
      EXPECT_GT(emp[i], 0.0);
      EXPECT_LE(emp[i], 1.0);
      EXPECT_LE(emp[i], bound.bounds[i]);
    }
  }
}
