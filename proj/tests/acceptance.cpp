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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "coreset/core.hpp"
#include "coreset/dataset.hpp"
#include "coreset/experiment.hpp"
#include "coreset/rng.hpp"
#include "coreset/sampler.hpp"
#include "coreset/sensitivity.hpp"
#include "coreset/stream.hpp"
#include "coreset/verifier.hpp"

using namespace coreset;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

WeightedPointSet random_unit_ball_set(Rng& rng, std::size_t n, std::size_t d) {
  WeightedPointSet set(d);
  for (std::size_t i = 0; i < n; ++i) set.add(random_in_ball(rng, d, 1.0));
  return set;
}

bench::Dataset normalized_synthetic(std::uint64_t seed) {
  auto data = bench::make_synthetic(seed);
  bench::normalize_unit_ball(data);
  return data;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome sample_size_formula() {
  const auto m = coreset_size(10.0, 2, 0.5, 0.1);
  return {m == 2764, fmt("coreset_size(10, 2, 0.5, 0.1) = %llu, expected 2764",
                         static_cast<unsigned long long>(m))};
}

Outcome sensitivity_dominance() {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest empirical / bound
  for (std::size_t inst = 0; inst < 50; ++inst) {
    Rng rng(derive_seed(2024, inst));
    const std::size_t n = 1 + rng.below(200);
    const std::size_t d = 1 + rng.below(3);
    const double k = inst % 2 == 0 ? 100.0 : 1000.0;
    const auto set = random_unit_ball_set(rng, n, d);
    for (KernelSpec spec : {KernelSpec::sigmoid(k), KernelSpec::logistic(k, 1.0 + 3.0 * rng.uniform())}) {
      const auto profile = sensitivity_profile(set, spec);
      EmpiricalSensitivityOptions opts;
      opts.seed = derive_seed(77, inst);
      const auto emp = empirical_sensitivities(set, spec, opts);
      for (std::size_t i = 0; i < n; ++i) {
        ++points;
        worst = std::max(worst, emp[i] / profile.bounds[i]);
        if (emp[i] > profile.bounds[i]) ++violations;
      }
    }
  }
  return {violations == 0,
          fmt("%zu of %zu point estimates exceed their bound; max empirical/bound = %.4f",
              violations, points, worst)};
}

Outcome unbiasedness() {
  Rng rng(31337);
  const auto set = random_unit_ball_set(rng, 100, 2);
  const auto spec = KernelSpec::sigmoid(100.0);
  const Vector x{0.6, -0.4};
  const double truth = total_cost(set, spec, x);
  const auto profile = sensitivity_profile(set, spec);
  constexpr std::size_t kReps = 10000;
  KahanSum sum, sq;
  for (std::size_t r = 0; r < kReps; ++r) {
    const auto c = build_coreset(set, profile, 50, derive_seed(99, r));
    const double v = total_cost(c.set, spec, x);
    sum.add(v);
    sq.add(v * v);
  }
  const double mean = sum.value() / kReps;
  const double var = (sq.value() / kReps - mean * mean) * kReps / (kReps - 1);
  const double se = std::sqrt(var / kReps);
  const double z = (mean - truth) / se;
  return {std::abs(z) <= 3.0,
          fmt("mean %.6f vs C(P,1,x) = %.6f, standard error %.2e, z = %.2f", mean, truth, se, z)};
}

Outcome epsilon_coreset() {
  const auto data = normalized_synthetic(7);
  const auto spec = KernelSpec::sigmoid(500.0);
  const double eps = 0.3, delta = 0.1;
  std::size_t pairs = 0, violations = 0;
  std::size_t size = 0;
  std::uint64_t formula = 0;
  double worst = 0.0;
  Rng qrng(4242);
  std::vector<Vector> queries;
  for (int q = 0; q < 200; ++q) queries.push_back(random_in_ball(qrng, 2, 1.0));
  std::vector<double> truth;
  for (const auto& x : queries) truth.push_back(total_cost(data.set, spec, x));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = monotonic_coreset(data.set, spec, eps, delta, derive_seed(555, seed));
    size = c.size();
    formula = c.formula_size;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const double err = std::abs(total_cost(c.set, spec, queries[q]) - truth[q]) / truth[q];
      worst = std::max(worst, err);
      ++pairs;
      if (err > eps) ++violations;
    }
  }
  const double frac = static_cast<double>(violations) / static_cast<double>(pairs);
  return {frac <= delta,
          fmt("m = %zu (formula %llu, n = %zu); violation fraction %.4f over %zu pairs, "
              "max relative error %.4f",
              size, static_cast<unsigned long long>(formula), data.set.size(), frac, pairs, worst)};
}

Outcome coreset_beats_uniform() {
  const auto data = normalized_synthetic(11);
  bench::ExperimentConfig cfg;
  cfg.kernel = KernelKind::Sigmoid;
  cfg.k = 500.0;
  cfg.size_schedule = {20.0};
  cfg.trials = 100;
  cfg.seed = 2026;
  cfg.methods = {bench::Method::Coreset, bench::Method::Uniform};
  const auto rep = bench::run_sigmoid_experiment(data, cfg);
  const std::size_t m = rep.sizes.front();
  const auto& c = rep.aggregate(bench::Method::Coreset, m);
  const auto& u = rep.aggregate(bench::Method::Uniform, m);
  return {c.mean_error <= u.mean_error,
          fmt("m = %zu: mean E coreset %.3e (sd %.1e) vs uniform %.3e (sd %.1e), C^k = %.6f", m,
              c.mean_error, c.std_error, u.mean_error, u.std_error, rep.reference)};
}

Outcome logistic_small_sample() {
  auto data = bench::make_wine_like(3);
  bench::normalize_unit_ball(data);
  bench::ExperimentConfig cfg;
  cfg.kernel = KernelKind::Logistic;
  cfg.k = 500.0;
  cfg.radius = 4.0;
  cfg.size_schedule = {5.0, 40.0};
  cfg.trials = 20;
  cfg.seed = 2026;
  cfg.methods = {bench::Method::Coreset, bench::Method::Uniform, bench::Method::Full};
  const auto rep = bench::run_logistic_experiment(data, cfg);
  const std::size_t small = rep.sizes[0], large = rep.sizes[1];
  const double cs = rep.aggregate(bench::Method::Coreset, small).mean_value;
  const double us = rep.aggregate(bench::Method::Uniform, small).mean_value;
  const double cl = rep.aggregate(bench::Method::Coreset, large).mean_value;
  const double ul = rep.aggregate(bench::Method::Uniform, large).mean_value;
  const double gap = std::abs(cl / ul - 1.0);
  return {cs <= us && gap <= 0.02,
          fmt("m = %zu: NLL coreset %.5f vs uniform %.5f; m = %zu: coreset %.5f vs uniform "
              "%.5f (gap %.2f%%); full-data NLL %.5f",
              small, cs, us, large, cl, ul, 100.0 * gap, rep.reference)};
}

Outcome ratio_certificates() {
  std::size_t sweeps = 0, failed = 0;
  std::string first_fail;
  for (KernelKind kind : {KernelKind::Sigmoid, KernelKind::SigmoidSquared, KernelKind::Logistic}) {
    std::vector<std::optional<double>> radii{std::nullopt};
    if (kind == KernelKind::Logistic) radii = {1.0, 4.0};
    for (double c : {0.1, 1.0, 10.0}) {
      for (double k : {100.0, 1e4}) {
        if (c * c * k < 1.0) continue;
        for (auto r : radii) {
          const auto rep = verify::regularized_ratio_sweep(kind, c, k, r);
          ++sweeps;
          if (!(rep.passed() && rep.margin > 0.0)) {
            if (failed++ == 0) {
              first_fail = fmt("%s c=%g k=%g R=%g: sup %.1f at x=%g > bound %.1f",
                               std::string(to_string(kind)).c_str(), c, k, r.value_or(0.0),
                               rep.sup_ratio, rep.argmax_x, rep.bound);
            }
          }
        }
      }
    }
  }
  std::string detail = fmt("%zu of %zu sweeps with positive margin", sweeps - failed, sweeps);
  if (failed) detail += "; first failure " + first_fail;
  return {failed == 0, detail};
}

Outcome intersection_lemma() {
  const auto link = verify::link_of(KernelKind::Sigmoid);
  const auto r = verify::find_intersection(link, 1.0, 1.0);
  const bool in_range = r.x_kc >= std::sqrt(std::log(1.2)) && r.x_kc <= std::sqrt(1.5);
  const bool residual = std::abs(r.residual) <= 1e-12;
  const auto signs = verify::intersection_sign_pattern(link, 1.0, 1.0, r.x_kc, 10000);
  bool root_bound = true;
  std::string iv;
  for (double k : {1e2, 1e4, 1e6}) {
    const double x = verify::find_intersection(link, 1.0, k).x_kc;
    root_bound = root_bound && x >= 1.0 / std::sqrt(k);
    iv += fmt(" k=%g: %.5f >= %.5f;", k, x, 1.0 / std::sqrt(k));
  }
  return {in_range && residual && signs.violations == 0 && root_bound,
          fmt("x_11 = %.6f, h = %.1e, sign violations %zu/%zu; x_kc >= 1/sqrt(k) at c=1:", r.x_kc,
              r.residual, signs.violations, signs.checked) + iv};
}

Outcome lower_bound() {
  const std::vector<double> radii{1.0, 10.0, 1e2, 1e4, 1e6};
  const auto rows = verify::lower_bound_demo(10, 3, radii);
  bool monotone = true;
  std::string curve;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].min_sensitivity < rows[i - 1].min_sensitivity) monotone = false;
    curve += fmt(" %.6f", rows[i].min_sensitivity);
  }
  return {monotone && rows.back().min_sensitivity >= 0.99,
          "min witness sensitivity over R = 1, 10, 1e2, 1e4, 1e6:" + curve};
}

Outcome gradient_check() {
  double worst = 0.0;
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(1010, t));
    const std::size_t n = 1 + rng.below(30);
    const std::size_t d = 1 + rng.below(5);
    WeightedPointSet set(d);
    for (std::size_t i = 0; i < n; ++i) set.add(random_in_ball(rng, d, 3.0), rng.uniform(0.5, 2.0));
    Vector x = random_in_ball(rng, d, 2.0);
    const double k = std::exp(rng.uniform(std::log(0.5), std::log(1000.0)));
    KernelSpec spec;
    switch (t % 3) {
      case 0: spec = KernelSpec::sigmoid(k); break;
      case 1: spec = KernelSpec::sigmoid_squared(k); break;
      default: spec = KernelSpec::logistic(k, norm(x) + 1.0); break;
    }
    const Vector g = total_cost_gradient(set, spec, x);
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (total_cost(set, spec, xp) - total_cost(set, spec, xm)) / (2.0 * h);
      diff2 += (g[j] - fd) * (g[j] - fd);
      norm2 += g[j] * g[j];
    }
    worst = std::max(worst, std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-8));
  }
  return {worst <= 1e-5, fmt("max relative error %.2e over 100 instances", worst)};
}

Outcome streaming() {
  const auto data = normalized_synthetic(13);
  const auto spec = KernelSpec::sigmoid(500.0);
  const std::size_t n = data.set.size();
  const std::size_t batch = (n + 7) / 8;
  std::vector<WeightedPointSet> batches;
  for (std::size_t b = 0; b < 8; ++b) {
    WeightedPointSet part(2);
    for (std::size_t i = b * batch; i < std::min(n, (b + 1) * batch); ++i) part.add(data.set.point(i));
    batches.push_back(std::move(part));
  }
  MergeTreeConfig cfg;
  cfg.leaf_size = batch;
  cfg.sample_size = 400;
  cfg.recompress_threshold = 800;

  Rng qrng(8080);
  std::vector<Vector> queries;
  std::vector<double> truth;
  for (int q = 0; q < 200; ++q) {
    queries.push_back(random_in_ball(qrng, 2, 1.0));
    truth.push_back(total_cost(data.set, spec, queries.back()));
  }
  auto mean_error = [&](const WeightedPointSet& s) {
    KahanSum e;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      e.add(std::abs(total_cost(s, spec, queries[q]) / truth[q] - 1.0));
    }
    return e.value() / static_cast<double>(queries.size());
  };

  KahanSum streamed, offline;
  std::size_t peak = 0, height = 0, size = 0;
  constexpr int kSeeds = 10;
  for (int s = 0; s < kSeeds; ++s) {
    cfg.seed = derive_seed(321, s);
    const auto r = stream_coreset(batches, spec, cfg);
    peak = std::max(peak, r.peak_resident);
    height = r.tree_height;
    size = r.coreset.size();
    streamed.add(mean_error(r.coreset.set));
    const auto off = monotonic_coreset(data.set, spec, cfg.eps_leaf, cfg.delta_leaf,
                                       derive_seed(654, s), r.coreset.size());
    offline.add(mean_error(off.set));
  }
  const double es = streamed.value() / kSeeds;
  const double eo = offline.value() / kSeeds;
  const double ratio = es / eo;
  const std::size_t cap = cfg.recompress_threshold * 4;
  return {std::isfinite(ratio) && peak <= cap,
          fmt("final size %zu, tree height %zu; mean query error streamed %.3e vs offline %.3e "
              "(ratio %.2f, within 2x: %s); peak resident %zu <= %zu",
              size, height, es, eo, ratio, ratio <= 2.0 ? "yes" : "no", peak, cap)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "sample-size formula", sample_size_formula},
      {2, "sensitivity dominance", sensitivity_dominance},
      {3, "estimator unbiasedness", unbiasedness},
      {4, "epsilon-coreset guarantee", epsilon_coreset},
      {5, "coreset beats uniform (sigmoid, synthetic)", coreset_beats_uniform},
      {6, "logistic small-sample advantage (wine-like)", logistic_small_sample},
      {7, "ratio bound certificates", ratio_certificates},
      {8, "intersection lemma", intersection_lemma},
      {9, "separable-set lower bound", lower_bound},
      {10, "gradient correctness", gradient_check},
      {11, "streaming sanity", streaming},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.passed) ++failures;
    std::printf("criterion %2d %s  %s: %s (%.1fs)\n", c.id, o.passed ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
