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

#include "coreset/core.hpp"
#include "coreset/rng.hpp"

using namespace coreset;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

KernelSpec spec_of(int which, double k, double radius = 5.0) {
  switch (which % 3) {
    case 0: return KernelSpec::sigmoid(k);
    case 1: return KernelSpec::sigmoid_squared(k);
    default: return KernelSpec::logistic(k, radius);
  }
}

}  // namespace

TEST(Link, ValuesAtZero) {
  EXPECT_DOUBLE_EQ(link_eval(KernelKind::Sigmoid, 0.0), 0.5);
  EXPECT_NEAR(link_eval(KernelKind::Logistic, 0.0), 0.6931471805599453, 1e-15);
  EXPECT_DOUBLE_EQ(link_eval(KernelKind::SigmoidSquared, 0.0), 0.25);
}

TEST(Link, SaturatesWithoutOverflow) {
  for (KernelKind kind : {KernelKind::Sigmoid, KernelKind::Logistic, KernelKind::SigmoidSquared}) {
    for (double z : {-1e4, -800.0, -710.0, 710.0, 800.0, 1e4}) {
      EXPECT_TRUE(std::isfinite(link_eval(kind, z))) << z;
      EXPECT_TRUE(std::isfinite(link_derivative(kind, z))) << z;
    }
  }
  EXPECT_DOUBLE_EQ(sigmoid(800.0), 1.0);
  EXPECT_DOUBLE_EQ(softplus(800.0), 800.0);
  EXPECT_GT(softplus(-700.0), 0.0);
}

TEST(Link, MonotoneOnRandomPairs) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    double a = rng.uniform(-50.0, 50.0), b = rng.uniform(-50.0, 50.0);
    if (a > b) std::swap(a, b);
    for (KernelKind kind : {KernelKind::Sigmoid, KernelKind::Logistic, KernelKind::SigmoidSquared}) {
      EXPECT_LE(link_eval(kind, a), link_eval(kind, b));
    }
  }
}

TEST(Link, Identities) {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const double z = rng.uniform(-60.0, 60.0);
    EXPECT_NEAR(sigmoid(z) + sigmoid(-z), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(link_eval(KernelKind::SigmoidSquared, z), sigmoid(z) * sigmoid(z));
    EXPECT_NEAR(softplus(z) - softplus(-z), z, 1e-9);
  }
}

TEST(Link, DerivativesMatchDifferences) {
  for (KernelKind kind : {KernelKind::Sigmoid, KernelKind::Logistic, KernelKind::SigmoidSquared}) {
    for (double z : {-7.0, -1.0, -0.1, 0.0, 0.3, 2.0, 9.0}) {
      const double h = 1e-6;
      const double fd = (link_eval(kind, z + h) - link_eval(kind, z - h)) / (2 * h);
      EXPECT_NEAR(link_derivative(kind, z), fd, 1e-8 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(KernelSpecTest, Constants) {
  EXPECT_DOUBLE_EQ(KernelSpec::sigmoid(3).link_max(), 1.0);
  EXPECT_DOUBLE_EQ(KernelSpec::sigmoid(3).link_at_zero(), 0.5);
  EXPECT_DOUBLE_EQ(KernelSpec::sigmoid_squared(3).link_at_zero(), 0.25);
  EXPECT_NEAR(KernelSpec::logistic(3, 4).link_max(), std::log1p(std::exp(4.0)), 1e-15);
  EXPECT_NEAR(KernelSpec::logistic(3, 4).link_at_zero(), std::log(2.0), 1e-15);
}

TEST(KernelSpecTest, Validation) {
  EXPECT_THROW(KernelSpec::sigmoid(0.0), Error);
  EXPECT_THROW(KernelSpec::sigmoid(-1.0), Error);
  EXPECT_THROW(KernelSpec::logistic(1.0, 0.0), Error);
  EXPECT_THROW(KernelSpec::logistic(1.0, kInf), Error);
  KernelSpec bad{KernelKind::Logistic, 1.0, std::nullopt};
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_FALSE(KernelSpec::sigmoid(kInf).regularized());
  EXPECT_TRUE(KernelSpec::sigmoid(10).regularized());
}

TEST(KernelSpecTest, ParseKind) {
  EXPECT_EQ(parse_kernel_kind("sigmoid"), KernelKind::Sigmoid);
  EXPECT_EQ(parse_kernel_kind("logistic"), KernelKind::Logistic);
  EXPECT_EQ(parse_kernel_kind("sigmoid2"), KernelKind::SigmoidSquared);
  EXPECT_THROW(parse_kernel_kind("tanh"), Error);
  for (KernelKind k : {KernelKind::Sigmoid, KernelKind::Logistic, KernelKind::SigmoidSquared}) {
    EXPECT_EQ(parse_kernel_kind(to_string(k)), k);
  }
}

TEST(WeightedPointSetTest, Invariants) {
  EXPECT_THROW(WeightedPointSet(0), Error);
  EXPECT_THROW(WeightedPointSet(2, {1, 2, 3}, {1.0}), Error);
  EXPECT_THROW(WeightedPointSet(1, {1.0}, {0.0}), Error);
  EXPECT_THROW(WeightedPointSet(1, {1.0}, {-2.0}), Error);
  EXPECT_THROW(WeightedPointSet(1, {std::nan("")}, {1.0}), Error);
  WeightedPointSet s(2);
  EXPECT_TRUE(s.empty());
  EXPECT_THROW(s.add(std::vector<double>{1.0}), Error);
  s.add(std::vector<double>{1.0, 2.0}, 3.0);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s.total_weight(), 3.0);
  EXPECT_FALSE(s.is_unit_weight());
  EXPECT_THROW(s.scaled_weights(0.0), Error);
}

TEST(Cost, Examples) {
  const std::vector<double> p{1, 0}, x{0, 2};
  EXPECT_DOUBLE_EQ(cost(KernelSpec::sigmoid(4), p, x), 1.5);
  const std::vector<double> z{0, 0};
  EXPECT_DOUBLE_EQ(cost(KernelSpec::sigmoid(1), z, z), 0.5);
  EXPECT_NEAR(cost(KernelSpec::logistic(2, 1), std::vector<double>{1}, std::vector<double>{0}),
              0.693147, 1e-6);
}

TEST(Cost, Errors) {
  EXPECT_THROW(cost(KernelSpec::sigmoid(1), std::vector<double>{1, 2}, std::vector<double>{1}), Error);
  EXPECT_THROW(cost(KernelSpec::logistic(1, 1), std::vector<double>{1}, std::vector<double>{1.5}),
               Error);
  EXPECT_NO_THROW(cost(KernelSpec::logistic(1, 1), std::vector<double>{1}, std::vector<double>{1.0}));
}

TEST(TotalCost, Examples) {
  const auto zeros = WeightedPointSet::unit(2, {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(total_cost(zeros, KernelSpec::sigmoid(1), std::vector<double>{0, 0}), 1.0);
  const WeightedPointSet one(2, {1, 0}, {2.0});
  EXPECT_DOUBLE_EQ(total_cost(one, KernelSpec::sigmoid(4), std::vector<double>{0, 2}), 3.0);
  const auto pm = WeightedPointSet::unit(1, {1, -1});
  for (double t : {-30.0, -1.0, 0.0, 0.7, 12.0}) {
    EXPECT_NEAR(total_cost(pm, KernelSpec::sigmoid(kInf), std::vector<double>{t}), 1.0, 1e-15);
  }
  EXPECT_EQ(total_cost(WeightedPointSet(3), KernelSpec::sigmoid(1), std::vector<double>{1, 2, 3}), 0.0);
}

TEST(TotalCost, LinearInWeights) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    WeightedPointSet s(3);
    for (int i = 0; i < 40; ++i) s.add(random_in_ball(rng, 3, 2.0), rng.uniform(0.1, 3.0));
    const auto spec = spec_of(t, 50.0);
    const auto x = random_in_ball(rng, 3, 2.0);
    const double a = total_cost(s, spec, x);
    const double b = total_cost(s.scaled_weights(2.0), spec, x);
    EXPECT_NEAR(b, 2.0 * a, 1e-12 * b);
    EXPECT_GT(a, 0.0);
  }
}

TEST(Gradient, Examples) {
  const auto zero = WeightedPointSet::unit(1, {0});
  EXPECT_EQ(total_cost_gradient(zero, KernelSpec::sigmoid(1), std::vector<double>{0})[0], 0.0);
  const auto one = WeightedPointSet::unit(1, {1});
  EXPECT_DOUBLE_EQ(total_cost_gradient(one, KernelSpec::logistic(kInf, 1), std::vector<double>{0})[0], 0.5);
}

// Central differences with step 1e-6 as the oracle.
TEST(Gradient, MatchesFiniteDifferences) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    WeightedPointSet s(3);
    for (int i = 0; i < 20; ++i) s.add(random_in_ball(rng, 3, 1.5), rng.uniform(0.5, 2.0));
    const auto x = random_in_ball(rng, 3, 2.0);
    const auto spec = spec_of(t, rng.uniform(1.0, 500.0));
    const auto g = total_cost_gradient(s, spec, x);
    std::vector<double> gv(3);
    const double v = total_cost_and_gradient(s, spec, x, gv);
    EXPECT_DOUBLE_EQ(v, total_cost(s, spec, x));
    double diff = 0.0, gn = 0.0;
    for (int j = 0; j < 3; ++j) {
      auto xp = x, xm = x;
      xp[j] += 1e-6;
      xm[j] -= 1e-6;
      const double fd = (total_cost(s, spec, xp) - total_cost(s, spec, xm)) / 2e-6;
      diff += (fd - g[j]) * (fd - g[j]);
      gn += g[j] * g[j];
      EXPECT_DOUBLE_EQ(g[j], gv[j]);
    }
    EXPECT_LE(std::sqrt(diff), 1e-5 * std::max(std::sqrt(gn), 1e-8)) << "instance " << t;
  }
}

TEST(KahanSumTest, CompensatesCancellation) {
  KahanSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}
