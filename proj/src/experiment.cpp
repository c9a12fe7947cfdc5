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

#include "coreset/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "coreset/rng.hpp"
#include "coreset/sampler.hpp"
#include "coreset/sensitivity.hpp"

namespace coreset::bench {

namespace {

// Seed streams. Every random draw in a run is keyed by (purpose, index)
// so results do not depend on thread scheduling.
constexpr std::uint64_t kGroundTruthStream = 0x9d;
constexpr std::uint64_t kSplitStream = 0x51;
constexpr std::uint64_t kSampleStream = 0x5a;

std::uint64_t sample_seed(std::uint64_t seed, std::size_t size_index,
                          std::size_t trial, Method method, bool solver) {
  std::uint64_t s = derive_seed(seed, kSampleStream);
  s = derive_seed(s, size_index);
  s = derive_seed(s, trial);
  s = derive_seed(s, static_cast<std::uint64_t>(method));
  return solver ? derive_seed(s, 1) : s;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

void require_unit_ball(const Dataset& data) {
  for (std::size_t i = 0; i < data.set.size(); ++i) {
    if (norm(data.set.point(i)) > 1.0 + 1e-12) {
      throw Error("experiment: data must be normalized to the unit ball");
    }
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Coreset:
      return "coreset";
    case Method::Uniform:
      return "uniform";
    case Method::Full:
      return "full";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "coreset") return Method::Coreset;
  if (name == "uniform") return Method::Uniform;
  if (name == "full") return Method::Full;
  throw Error("unknown method '" + name + "' (expected coreset, uniform or full)");
}

KernelSpec ExperimentConfig::kernel_spec() const {
  KernelSpec spec{kernel, k, radius};
  spec.validate();
  return spec;
}

void ExperimentConfig::validate() const {
  kernel_spec();
  if (!(eps > 0.0 && eps < 1.0)) throw Error("config: eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("config: delta must lie in (0, 1)");
  if (size_schedule.empty()) throw Error("config: size_schedule is empty");
  for (double a : size_schedule) {
    if (!(a > 0.0)) throw Error("config: size multipliers must be positive");
  }
  if (trials == 0) throw Error("config: trials must be at least 1");
  if (methods.empty()) throw Error("config: no methods selected");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("config: test_fraction must lie in (0, 1)");
  }
}

const AggregateRecord& ExperimentReport::aggregate(Method method,
                                                   std::size_t m) const {
  for (const auto& a : aggregates) {
    if (a.method == method && a.m == m) return a;
  }
  throw Error("report has no aggregate for " + to_string(method) + " at m = " +
              std::to_string(m));
}

std::vector<std::size_t> schedule_sizes(const std::vector<double>& multipliers,
                                        std::size_t n) {
  std::vector<std::size_t> out;
  const double ln_n = std::log(static_cast<double>(n));
  for (double a : multipliers) {
    out.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(a * ln_n))));
  }
  return out;
}

void aggregate(ExperimentReport& report) {
  report.aggregates.clear();
  for (Method method : report.config.methods) {
    for (std::size_t m : report.sizes) {
      AggregateRecord a;
      a.method = method;
      a.m = m;
      KahanSum value;
      KahanSum error;
      for (const auto& t : report.trials) {
        if (t.method != method || t.m != m) continue;
        ++a.trials;
        value.add(t.value);
        error.add(t.error);
      }
      if (a.trials == 0) continue;
      const double cnt = static_cast<double>(a.trials);
      a.mean_value = value.value() / cnt;
      a.mean_error = error.value() / cnt;
      KahanSum var;
      for (const auto& t : report.trials) {
        if (t.method != method || t.m != m) continue;
        const double dev = t.error - a.mean_error;
        var.add(dev * dev);
      }
      a.std_error = std::sqrt(var.value() / cnt);
      report.aggregates.push_back(a);
    }
  }
}

double negative_log_likelihood(const WeightedPointSet& folded_test,
                               std::span<const double> x) {
  if (folded_test.empty()) throw Error("negative_log_likelihood: empty test set");
  KahanSum s;
  for (std::size_t i = 0; i < folded_test.size(); ++i) {
    s.add(softplus(dot(folded_test.point(i), x)));
  }
  return s.value() / static_cast<double>(folded_test.size());
}

std::size_t worker_threads(std::size_t requested) {
  if (requested > 0) return requested;
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CORESET_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) hw = std::min(hw, static_cast<std::size_t>(v));
  }
  return hw;
}

ExperimentReport run_sigmoid_experiment(const Dataset& data,
                                        const ExperimentConfig& config) {
  config.validate();
  require_unit_ball(data);
  const auto t0 = std::chrono::steady_clock::now();
  const KernelSpec spec = config.kernel_spec();
  const WeightedPointSet& full = data.set;

  ExperimentReport report;
  report.mode = "sigmoid";
  report.dataset = data.name;
  report.n = full.size();
  report.dim = full.dim();
  report.config = config;
  report.sizes = schedule_sizes(config.size_schedule, full.size());

  const SolveResult truth = multistart_minimize(
      full, spec, config.ground_truth_starts,
      derive_seed(config.seed, kGroundTruthStream), config.solver);
  report.reference = truth.value;
  const double gt_seconds = seconds_since(t0);

  const SensitivityProfile profile = weighted_sensitivity_profile(full, spec);
  const std::size_t methods = config.methods.size();
  const std::size_t sizes = report.sizes.size();
  report.trials.resize(sizes * methods * config.trials);
  auto slot = [&](std::size_t mi, std::size_t meth, std::size_t trial) -> TrialRecord& {
    return report.trials[(mi * methods + meth) * config.trials + trial];
  };

  parallel_for(sizes * config.trials, worker_threads(config.threads), [&](std::size_t job) {
    const std::size_t mi = job / config.trials;
    const std::size_t trial = job % config.trials;
    const std::size_t m = report.sizes[mi];
    for (std::size_t meth = 0; meth < methods; ++meth) {
      const Method method = config.methods[meth];
      TrialRecord rec{method, m, trial, truth.value, 0.0};
      if (method != Method::Full) {
        const std::uint64_t s = sample_seed(config.seed, mi, trial, method, false);
        const Coreset sample = method == Method::Coreset
                                   ? build_coreset(full, profile, m, s)
                                   : uniform_sample(full, m, s);
        const SolveResult sol = multistart_minimize(
            sample.set, spec, config.sample_starts,
            sample_seed(config.seed, mi, trial, method, true), config.solver);
        rec.value = total_cost(full, spec, sol.x_star);
        rec.error = std::abs(rec.value / truth.value - 1.0);
      }
      slot(mi, meth, trial) = rec;
    }
  });
  aggregate(report);
  if (config.record_timings) report.timings = Timings{seconds_since(t0), gt_seconds};
  return report;
}

ExperimentReport run_logistic_experiment(const Dataset& data,
                                         const ExperimentConfig& config) {
  config.validate();
  if (config.kernel != KernelKind::Logistic) {
    throw Error("logistic experiment: kernel must be logistic");
  }
  if (!data.labels && !data.folded) {
    throw Error("logistic experiment: dataset has no labels");
  }
  require_unit_ball(data);
  const auto t0 = std::chrono::steady_clock::now();
  const KernelSpec spec = config.kernel_spec();

  ExperimentReport report;
  report.mode = "logistic";
  report.dataset = data.name;
  report.n = data.set.size();
  report.dim = data.set.dim();
  report.config = config;
  const auto n_test = static_cast<std::size_t>(
      std::llround(config.test_fraction * static_cast<double>(data.set.size())));
  if (n_test == 0 || n_test >= data.set.size()) {
    throw Error("logistic experiment: split leaves an empty side");
  }
  report.sizes = schedule_sizes(config.size_schedule, data.set.size() - n_test);

  const std::size_t methods = config.methods.size();
  const std::size_t sizes = report.sizes.size();
  report.trials.resize(sizes * methods * config.trials);
  std::vector<double> full_nll(config.trials, 0.0);
  auto slot = [&](std::size_t mi, std::size_t meth, std::size_t trial) -> TrialRecord& {
    return report.trials[(mi * methods + meth) * config.trials + trial];
  };

  parallel_for(config.trials, worker_threads(config.threads), [&](std::size_t trial) {
    auto [train, test] = train_test_split(
        data, config.test_fraction, derive_seed(derive_seed(config.seed, kSplitStream), trial));
    if (!train.folded) {
      fold_labels(train);
      fold_labels(test);
    }
    const Vector origin(train.set.dim(), 0.0);
    const SolveResult full_sol = minimize(train.set, spec, origin, config.solver);
    const double reference = negative_log_likelihood(test.set, full_sol.x_star);
    full_nll[trial] = reference;
    const SensitivityProfile profile = weighted_sensitivity_profile(train.set, spec);
    for (std::size_t mi = 0; mi < sizes; ++mi) {
      const std::size_t m = report.sizes[mi];
      for (std::size_t meth = 0; meth < methods; ++meth) {
        const Method method = config.methods[meth];
        TrialRecord rec{method, m, trial, reference, 0.0};
        if (method != Method::Full) {
          const std::uint64_t s = sample_seed(config.seed, mi, trial, method, false);
          const Coreset sample = method == Method::Coreset
                                     ? build_coreset(train.set, profile, m, s)
                                     : uniform_sample(train.set, m, s);
          const SolveResult sol = multistart_minimize(
              sample.set, spec, config.sample_starts,
              sample_seed(config.seed, mi, trial, method, true), config.solver);
          rec.value = negative_log_likelihood(test.set, sol.x_star);
          rec.error = std::abs(rec.value / reference - 1.0);
        }
        slot(mi, meth, trial) = rec;
      }
    }
  });
  KahanSum ref;
  for (double v : full_nll) ref.add(v);
  report.reference = ref.value() / static_cast<double>(config.trials);
  aggregate(report);
  if (config.record_timings) report.timings = Timings{seconds_since(t0), 0.0};
  return report;
}

}  // namespace coreset::bench
