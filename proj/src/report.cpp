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

#include "coreset/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace coreset::bench {

namespace {

Json solver_to_json(const SolverOptions& s) {
  Json j;
  j["tol"] = s.tol;
  j["max_iter"] = s.max_iter;
  j["history"] = s.history;
  j["armijo"] = s.armijo;
  j["min_step"] = s.min_step;
  return j;
}

void reject_unknown(const Json& j, const std::set<std::string>& known,
                    const std::string& where) {
  if (!j.is_object()) throw Error(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(std::string("config key '") + key + "': " + e.what());
  }
}

SolverOptions solver_from_json(const Json& j) {
  reject_unknown(j, {"tol", "max_iter", "history", "armijo", "min_step"}, "solver");
  SolverOptions s;
  read(j, "tol", s.tol);
  read(j, "max_iter", s.max_iter);
  read(j, "history", s.history);
  read(j, "armijo", s.armijo);
  read(j, "min_step", s.min_step);
  return s;
}

Json trial_to_json(const TrialRecord& t) {
  Json j;
  j["method"] = to_string(t.method);
  j["m"] = t.m;
  j["trial"] = t.trial;
  j["value"] = t.value;
  j["error"] = t.error;
  return j;
}

Json aggregate_to_json(const AggregateRecord& a) {
  Json j;
  j["method"] = to_string(a.method);
  j["m"] = a.m;
  j["trials"] = a.trials;
  j["mean_value"] = a.mean_value;
  j["mean_error"] = a.mean_error;
  j["std_error"] = a.std_error;
  return j;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw Error("unknown report format '" + name + "' (expected json or csv)");
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["kernel"] = std::string(to_string(c.kernel));
  j["k"] = c.k;
  j["radius"] = c.radius ? Json(*c.radius) : Json(nullptr);
  j["eps"] = c.eps;
  j["delta"] = c.delta;
  j["size_schedule"] = c.size_schedule;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["test_fraction"] = c.test_fraction;
  j["ground_truth_starts"] = c.ground_truth_starts;
  j["sample_starts"] = c.sample_starts;
  j["solver"] = solver_to_json(c.solver);
  j["threads"] = c.threads;
  j["record_timings"] = c.record_timings;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  reject_unknown(j,
                 {"kernel", "k", "radius", "eps", "delta", "size_schedule", "trials",
                  "seed", "methods", "test_fraction", "ground_truth_starts",
                  "sample_starts", "solver", "threads", "record_timings"},
                 "config");
  ExperimentConfig c;
  if (j.contains("kernel")) c.kernel = parse_kernel_kind(j.at("kernel").get<std::string>());
  read(j, "k", c.k);
  if (j.contains("radius") && !j.at("radius").is_null()) c.radius = j.at("radius").get<double>();
  read(j, "eps", c.eps);
  read(j, "delta", c.delta);
  read(j, "size_schedule", c.size_schedule);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
  }
  read(j, "test_fraction", c.test_fraction);
  read(j, "ground_truth_starts", c.ground_truth_starts);
  read(j, "sample_starts", c.sample_starts);
  if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
  read(j, "threads", c.threads);
  read(j, "record_timings", c.record_timings);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["schema_version"] = ExperimentReport::kSchemaVersion;
  j["mode"] = r.mode;
  j["dataset"] = r.dataset;
  j["n"] = r.n;
  j["dim"] = r.dim;
  j["config"] = config_to_json(r.config);
  j["sizes"] = r.sizes;
  j["reference"] = r.reference;
  j["weighted_heuristic"] = false;
  Json trials = Json::array();
  for (const auto& t : r.trials) trials.push_back(trial_to_json(t));
  j["trials"] = trials;
  Json aggs = Json::array();
  for (const auto& a : r.aggregates) aggs.push_back(aggregate_to_json(a));
  j["aggregates"] = aggs;
  if (r.timings) {
    j["timings"] = Json{{"total_seconds", r.timings->total_seconds},
                        {"ground_truth_seconds", r.timings->ground_truth_seconds}};
  }
  return j;
}

ExperimentReport report_from_json(const Json& j) {
  if (j.value("schema_version", 0) != ExperimentReport::kSchemaVersion) {
    throw Error("report: unsupported schema_version");
  }
  ExperimentReport r;
  r.mode = j.at("mode").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.dim = j.at("dim").get<std::size_t>();
  r.config = config_from_json(j.at("config"));
  r.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  r.reference = j.at("reference").get<double>();
  for (const auto& t : j.at("trials")) {
    r.trials.push_back({parse_method(t.at("method").get<std::string>()),
                        t.at("m").get<std::size_t>(), t.at("trial").get<std::size_t>(),
                        t.at("value").get<double>(), t.at("error").get<double>()});
  }
  for (const auto& a : j.at("aggregates")) {
    r.aggregates.push_back({parse_method(a.at("method").get<std::string>()),
                            a.at("m").get<std::size_t>(), a.at("trials").get<std::size_t>(),
                            a.at("mean_value").get<double>(), a.at("mean_error").get<double>(),
                            a.at("std_error").get<double>()});
  }
  if (j.contains("timings")) {
    const auto& t = j.at("timings");
    r.timings = Timings{t.at("total_seconds").get<double>(),
                        t.at("ground_truth_seconds").get<double>()};
  }
  return r;
}

void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "kind,method,m,trial,value,error,trials,std_error\n";
  for (const auto& t : r.trials) {
    out << "trial," << to_string(t.method) << ',' << t.m << ',' << t.trial << ','
        << num(t.value) << ',' << num(t.error) << ",,\n";
  }
  for (const auto& a : r.aggregates) {
    out << "aggregate," << to_string(a.method) << ',' << a.m << ",," << num(a.mean_value)
        << ',' << num(a.mean_error) << ',' << a.trials << ',' << num(a.std_error) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("error writing " + path.string());
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  if (format == ReportFormat::Json) {
    write_json(path, report_to_json(report));
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_report_csv(out, report);
  if (!out) throw Error("error writing " + path.string());
}

Json sweep_to_json(const verify::RatioSweepReport& r) {
  Json j;
  j["sup_ratio"] = r.sup_ratio;
  j["argmax_x"] = r.argmax_x;
  j["bound"] = r.bound;
  j["margin"] = std::isfinite(r.margin) ? Json(r.margin) : Json(nullptr);
  j["grid"] = r.grid;
  j["passed"] = r.passed();
  return j;
}

Json lower_bound_to_json(const std::vector<verify::LowerBoundRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    out.push_back(Json{{"radius", row.radius},
                       {"min_sensitivity", row.min_sensitivity},
                       {"guaranteed", row.guaranteed},
                       {"saturation", row.saturation}});
  }
  return out;
}

Json bounds_report(std::size_t sweep_points) {
  using verify::find_intersection;
  bool all = true;
  Json j;
  j["schema_version"] = 1;

  Json sweeps = Json::array();
  const double cs[] = {0.1, 1.0, 10.0};
  const double ks[] = {100.0, 1e4};
  for (KernelKind kind : {KernelKind::Sigmoid, KernelKind::SigmoidSquared, KernelKind::Logistic}) {
    std::vector<std::optional<double>> radii{std::nullopt};
    if (kind == KernelKind::Logistic) radii = {1.0, 4.0};
    for (double c : cs) {
      for (double k : ks) {
        if (c * c * k < 1.0) continue;
        for (auto r : radii) {
          const auto rep = verify::regularized_ratio_sweep(kind, c, k, r, sweep_points);
          Json row;
          row["kernel"] = std::string(to_string(kind));
          row["c"] = c;
          row["k"] = k;
          row["radius"] = r ? Json(*r) : Json(nullptr);
          row["report"] = sweep_to_json(rep);
          all = all && rep.passed();
          sweeps.push_back(row);
        }
      }
    }
  }
  j["regularized_ratio"] = sweeps;

  Json simple = Json::array();
  for (KernelKind kind : {KernelKind::Sigmoid, KernelKind::SigmoidSquared}) {
    const double x11 = find_intersection(kind, 1.0, 1.0).x_kc;
    verify::SweepGrid grid;
    grid.points = sweep_points;
    const auto rep = verify::ratio_simple_sweep(verify::link_of(kind), x11, grid);
    const double cap = kind == KernelKind::Sigmoid ? 11.0 : 14.0;
    Json row;
    row["kernel"] = std::string(to_string(kind));
    row["x11"] = x11;
    row["stated_cap"] = cap;
    row["report"] = sweep_to_json(rep);
    const bool ok = rep.passed() && rep.bound <= cap;
    row["passed"] = ok;
    all = all && ok;
    simple.push_back(row);
  }
  j["simple_ratio"] = simple;

  Json inter = Json::array();
  for (double c : cs) {
    for (double k : {1.0, 1e2, 1e4, 1e6}) {
      const auto link = verify::link_of(KernelKind::Sigmoid);
      const auto r = find_intersection(link, c, k);
      const auto signs = verify::intersection_sign_pattern(link, c, k, r.x_kc);
      // x_kc >= 1/(c sqrt(k)) is asserted for large k only; c^2 k >= 1/f(-1)
      // is the regime where 1/(c sqrt(k)) lies left of the root.
      const bool large_k = c * c * k >= 1.0 / sigmoid(-1.0);
      const bool root_bound = r.x_kc >= 1.0 / (c * std::sqrt(k));
      Json row;
      row["c"] = c;
      row["k"] = k;
      row["x_kc"] = r.x_kc;
      row["residual"] = r.residual;
      row["sign_violations"] = signs.violations;
      row["large_k"] = large_k;
      row["root_bound"] = root_bound;
      const bool ok = std::abs(r.residual) <= 1e-12 && signs.violations == 0 &&
                      (!large_k || root_bound);
      row["passed"] = ok;
      all = all && ok;
      inter.push_back(row);
    }
  }
  j["intersection"] = inter;
  j["passed"] = all;
  return j;
}

}  // namespace coreset::bench
