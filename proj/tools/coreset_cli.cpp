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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coreset/core.hpp"
#include "coreset/dataset.hpp"
#include "coreset/experiment.hpp"
#include "coreset/report.hpp"
#include "coreset/rng.hpp"
#include "coreset/sampler.hpp"
#include "coreset/stream.hpp"
#include "coreset/verifier.hpp"

namespace fs = std::filesystem;
using namespace coreset;
using coreset::bench::Json;

namespace {

struct DataArgs {
  std::string input;
  std::optional<std::size_t> label_col;
  bool fold = false;
  bool normalize = false;

  void add(CLI::App* app) {
    app->add_option("--input", input, "Input CSV of numeric rows")->required();
    app->add_option("--label-col", label_col, "0-based label column (excluded from features)");
    app->add_flag("--fold-labels", fold, "Multiply each point by its label sign");
    app->add_flag("--normalize", normalize, "Scale all points into the unit ball");
  }

  bench::Dataset load() const {
    bench::CsvOptions opts;
    opts.label_column = label_col;
    opts.fold_labels = fold;
    opts.normalize = normalize ? bench::Normalization::UnitBall : bench::Normalization::None;
    return bench::load_csv(input, opts);
  }
};

struct KernelArgs {
  std::string kernel = "sigmoid";
  double k = 500.0;
  std::optional<double> radius;

  void add(CLI::App* app) {
    app->add_option("--kernel", kernel, "sigmoid, logistic or sigmoid2")
        ->check(CLI::IsMember({"sigmoid", "logistic", "sigmoid2"}));
    app->add_option("--k", k, "Regularization constant")->check(CLI::PositiveNumber);
    app->add_option("--radius", radius, "Query radius R (required for logistic)");
  }

  KernelSpec spec() const {
    KernelSpec s{parse_kernel_kind(kernel), k, radius};
    s.validate();
    return s;
  }
};

int cmd_build(const DataArgs& data, const KernelArgs& kernel, double eps, double delta,
              std::uint64_t seed, std::optional<std::size_t> size, bool do_compact,
              const std::string& output) {
  const auto ds = data.load();
  Coreset c = monotonic_coreset(ds.set, kernel.spec(), eps, delta, seed, size);
  if (do_compact) c = compact(c);
  bench::write_weighted_csv(output, c.set);
  Json j;
  j["n"] = ds.set.size();
  j["dim"] = ds.set.dim();
  j["total_sensitivity"] = c.total_sensitivity;
  j["formula_size"] = c.formula_size;
  j["size"] = c.size();
  j["weighted_heuristic"] = c.weighted_heuristic;
  j["output"] = output;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_eval(const DataArgs& data, const KernelArgs& kernel, const std::string& coreset_path,
             std::size_t queries, std::uint64_t seed, std::optional<double> query_radius) {
  const auto ds = data.load();
  const auto q = bench::read_weighted_csv(coreset_path);
  if (q.dim() != ds.set.dim()) throw Error("coreset and input dimensions differ");
  const KernelSpec spec = kernel.spec();
  double r = query_radius.value_or(spec.query_radius.value_or(1.0));
  if (spec.query_radius) r = std::min(r, *spec.query_radius);
  Rng rng(seed);
  double max_err = 0.0;
  KahanSum mean;
  for (std::size_t i = 0; i < queries; ++i) {
    const Vector x = random_in_ball(rng, ds.set.dim(), r);
    const double full = total_cost(ds.set, spec, x);
    const double err = std::abs(total_cost(q, spec, x) / full - 1.0);
    max_err = std::max(max_err, err);
    mean.add(err);
  }
  Json j;
  j["queries"] = queries;
  j["query_radius"] = r;
  j["max_relative_error"] = max_err;
  j["mean_relative_error"] = queries ? mean.value() / static_cast<double>(queries) : 0.0;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_bench(const std::string& mode, const std::string& input, const std::string& config_path,
              std::optional<std::size_t> label_col, const std::string& output,
              std::optional<std::string> format) {
  bench::ExperimentConfig config;
  if (!config_path.empty()) config = bench::load_config(config_path);
  if (mode == "logistic") config.kernel = KernelKind::Logistic;
  bench::Dataset data;
  if (input == "synthetic") {
    data = bench::make_synthetic(config.seed);
  } else if (input == "wine-like") {
    data = bench::make_wine_like(config.seed);
  } else {
    bench::CsvOptions opts;
    if (mode == "logistic") {
      // Default to the last column as the label.
      opts.label_column = label_col;
      if (!opts.label_column) {
        std::ifstream probe(input);
        std::string header;
        std::getline(probe, header);
        opts.label_column = static_cast<std::size_t>(std::count(header.begin(), header.end(), ','));
      }
    }
    data = bench::load_csv(input, opts);
  }
  bench::normalize_unit_ball(data);
  const auto report = mode == "logistic" ? bench::run_logistic_experiment(data, config)
                                         : bench::run_sigmoid_experiment(data, config);
  const std::string fmt =
      format.value_or(fs::path(output).extension() == ".csv" ? "csv" : "json");
  bench::emit_report(report, output, bench::parse_report_format(fmt));
  for (const auto& a : report.aggregates) {
    std::cout << bench::to_string(a.method) << " m=" << a.m << " mean_value=" << a.mean_value
              << " mean_error=" << a.mean_error << '\n';
  }
  return 0;
}

int cmd_stream(const DataArgs& data, const KernelArgs& kernel, const MergeTreeConfig& config,
               const std::string& output) {
  const auto ds = data.load();
  MergeReduceTree tree(kernel.spec(), config);
  tree.push(ds.set);
  const StreamResult r = tree.finish();
  bench::write_weighted_csv(output, r.coreset.set);
  Json j;
  j["n"] = ds.set.size();
  j["size"] = r.coreset.size();
  j["leaves"] = r.leaves;
  j["tree_height"] = r.tree_height;
  j["reduce_depth"] = r.reduce_depth;
  j["reduce_count"] = r.reduce_count;
  j["peak_resident"] = r.peak_resident;
  j["compounded_error_bound"] = r.compounded_error_bound(config.eps_leaf);
  j["weighted_heuristic"] = r.coreset.weighted_heuristic;
  j["output"] = output;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_lowerbound(std::size_t n, std::size_t d, const std::vector<double>& radii,
                   const std::string& kernel, bool weighted, std::uint64_t seed,
                   const std::string& output) {
  std::vector<double> weights;
  if (weighted) {
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) weights.push_back(rng.uniform(1.0, 2.0));
  }
  const auto rows = verify::lower_bound_demo(n, d, radii, parse_kernel_kind(kernel), weights);
  Json j;
  j["schema_version"] = 1;
  j["n"] = n;
  j["dim"] = d;
  j["kernel"] = kernel;
  j["weighted"] = weighted;
  j["rows"] = bench::lower_bound_to_json(rows);
  if (!output.empty()) bench::write_json(output, j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensitivity-sampling coresets for monotonic-kernel losses"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Build a coreset of a CSV dataset");
  DataArgs build_data;
  KernelArgs build_kernel;
  double build_eps = 0.3, build_delta = 0.1;
  std::uint64_t build_seed = 0;
  std::optional<std::size_t> build_size;
  bool build_compact = false;
  std::string build_out;
  build_data.add(build);
  build_kernel.add(build);
  build->add_option("--eps", build_eps)->check(CLI::Range(0.0, 1.0));
  build->add_option("--delta", build_delta)->check(CLI::Range(0.0, 1.0));
  build->add_option("--seed", build_seed);
  build->add_option("--size", build_size, "Explicit sample size (overrides the size formula)");
  build->add_flag("--compact", build_compact, "Merge duplicate draws");
  build->add_option("--output", build_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Relative cost error of a coreset over random queries");
  DataArgs eval_data;
  KernelArgs eval_kernel;
  std::string eval_coreset;
  std::size_t eval_queries = 1000;
  std::uint64_t eval_seed = 0;
  std::optional<double> eval_qr;
  eval_data.add(eval);
  eval_kernel.add(eval);
  eval->add_option("--coreset", eval_coreset)->required();
  eval->add_option("--queries", eval_queries);
  eval->add_option("--seed", eval_seed);
  eval->add_option("--query-radius", eval_qr,
                   "Queries are uniform in this ball (default 1, or R for logistic)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Coreset vs uniform sampling experiment");
  std::string bench_mode = "sigmoid", bench_input, bench_config, bench_out;
  std::optional<std::size_t> bench_label;
  std::optional<std::string> bench_format;
  bench_cmd->add_option("--mode", bench_mode)->check(CLI::IsMember({"sigmoid", "logistic"}));
  bench_cmd->add_option("--input", bench_input, "CSV path, 'synthetic' or 'wine-like'")->required();
  bench_cmd->add_option("--config", bench_config, "Experiment config JSON");
  bench_cmd->add_option("--label-col", bench_label, "Label column for logistic CSV input (default: last)");
  bench_cmd->add_option("--output", bench_out)->required();
  bench_cmd->add_option("--format", bench_format)->check(CLI::IsMember({"json", "csv"}));

  // stream
  auto* stream = app.add_subcommand("stream", "Merge-and-reduce coreset of a CSV dataset");
  DataArgs stream_data;
  KernelArgs stream_kernel;
  MergeTreeConfig tree;
  std::optional<std::size_t> stream_threshold;
  std::string stream_out;
  stream_data.add(stream);
  stream_kernel.add(stream);
  stream->add_option("--leaf-size", tree.leaf_size)->check(CLI::PositiveNumber);
  stream->add_option("--eps", tree.eps_leaf)->check(CLI::Range(0.0, 1.0));
  stream->add_option("--delta", tree.delta_leaf)->check(CLI::Range(0.0, 1.0));
  stream->add_option("--seed", tree.seed);
  stream->add_option("--size", tree.sample_size, "Explicit sample size per reduce");
  stream->add_option("--threshold", stream_threshold,
                     "Recompress threshold (default 2 * size, or 2 * leaf size)");
  stream->add_option("--output", stream_out)->required();

  // verify-bounds
  auto* vb = app.add_subcommand("verify-bounds", "Numeric checks of the ratio and intersection lemmas");
  std::string vb_matrix = "default", vb_out;
  std::size_t vb_points = 100000;
  vb->add_option("--matrix", vb_matrix)->check(CLI::IsMember({"default"}));
  vb->add_option("--points", vb_points, "Grid points per sweep");
  vb->add_option("--output", vb_out);

  // lowerbound-demo
  auto* lb = app.add_subcommand("lowerbound-demo", "Sensitivities on the separable set");
  std::size_t lb_n = 10, lb_d = 3;
  std::vector<double> lb_radii{1, 10, 1e2, 1e4, 1e6};
  std::string lb_kernel = "sigmoid", lb_out;
  bool lb_weighted = false;
  std::uint64_t lb_seed = 0;
  lb->add_option("--n", lb_n)->check(CLI::Range(3, 1 << 20));
  lb->add_option("--d", lb_d)->check(CLI::Range(3, 1 << 20));
  lb->add_option("--radii", lb_radii)->delimiter(',');
  lb->add_option("--kernel", lb_kernel)->check(CLI::IsMember({"sigmoid", "logistic", "sigmoid2"}));
  lb->add_flag("--weighted", lb_weighted, "Random weights in [1, 2]");
  lb->add_option("--seed", lb_seed);
  lb->add_option("--output", lb_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      return cmd_build(build_data, build_kernel, build_eps, build_delta, build_seed, build_size,
                       build_compact, build_out);
    }
    if (*eval) return cmd_eval(eval_data, eval_kernel, eval_coreset, eval_queries, eval_seed, eval_qr);
    if (*bench_cmd) {
      return cmd_bench(bench_mode, bench_input, bench_config, bench_label, bench_out, bench_format);
    }
    if (*stream) {
      tree.recompress_threshold =
          stream_threshold.value_or(2 * tree.sample_size.value_or(tree.leaf_size));
      return cmd_stream(stream_data, stream_kernel, tree, stream_out);
    }
    if (*vb) {
      const Json j = bench::bounds_report(vb_points);
      if (!vb_out.empty()) bench::write_json(vb_out, j);
      std::cout << j.dump(2) << '\n';
      return j.at("passed").get<bool>() ? 0 : 1;
    }
    if (*lb) return cmd_lowerbound(lb_n, lb_d, lb_radii, lb_kernel, lb_weighted, lb_seed, lb_out);
  } catch (const std::exception& e) {
    std::cerr << "coreset: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
