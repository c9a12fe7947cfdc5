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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "coreset/core.hpp"
#include "coreset/dataset.hpp"
#include "coreset/experiment.hpp"
#include "coreset/report.hpp"
#include "coreset/sampler.hpp"
#include "coreset/sensitivity.hpp"
#include "coreset/solver.hpp"
#include "coreset/stream.hpp"
#include "coreset/verifier.hpp"

namespace py = pybind11;
using namespace coreset;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

WeightedPointSet set_from_numpy(const Array& points, std::optional<Array> weights) {
  if (points.ndim() != 2) throw Error("points must be a 2-d array of shape (n, d)");
  const auto n = static_cast<std::size_t>(points.shape(0));
  const auto d = static_cast<std::size_t>(points.shape(1));
  std::vector<double> coords(points.data(), points.data() + n * d);
  std::vector<double> w(n, 1.0);
  if (weights) {
    if (weights->ndim() != 1 || static_cast<std::size_t>(weights->shape(0)) != n) {
      throw Error("weights must be a 1-d array with one entry per point");
    }
    std::memcpy(w.data(), weights->data(), n * sizeof(double));
  }
  return WeightedPointSet(d, std::move(coords), std::move(w));
}

py::array_t<double> points_to_numpy(const WeightedPointSet& s) {
  py::array_t<double> out({static_cast<py::ssize_t>(s.size()), static_cast<py::ssize_t>(s.dim())});
  if (!s.coords().empty()) std::memcpy(out.mutable_data(), s.coords().data(), s.coords().size() * sizeof(double));
  return out;
}

py::array_t<double> vec_to_numpy(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  if (!v.empty()) std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

std::vector<double> vec_from(const Array& a) {
  if (a.ndim() != 1) throw Error("expected a 1-d array");
  return {a.data(), a.data() + a.shape(0)};
}

py::tuple dataset_tuple(const bench::Dataset& d) {
  py::object labels = py::none();
  if (d.labels) labels = vec_to_numpy(*d.labels);
  return py::make_tuple(points_to_numpy(d.set), labels);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sensitivity-sampling coresets for monotonic-kernel losses";
  py::register_exception<Error>(m, "CoresetError", PyExc_ValueError);

  py::class_<WeightedPointSet>(m, "WeightedPointSet")
      .def(py::init([](const Array& points, std::optional<Array> weights) {
             return set_from_numpy(points, std::move(weights));
           }),
           py::arg("points"), py::arg("weights") = py::none())
      .def_property_readonly("points", &points_to_numpy)
      .def_property_readonly("weights", [](const WeightedPointSet& s) { return vec_to_numpy(s.weights()); })
      .def_property_readonly("dim", &WeightedPointSet::dim)
      .def("total_weight", &WeightedPointSet::total_weight)
      .def("__len__", &WeightedPointSet::size);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init([](const std::string& kind, double k, std::optional<double> radius) {
             KernelSpec s{parse_kernel_kind(kind), k, radius};
             s.validate();
             return s;
           }),
           py::arg("kind"), py::arg("k"), py::arg("radius") = py::none())
      .def_property_readonly("kind", [](const KernelSpec& s) { return std::string(to_string(s.kind)); })
      .def_readonly("k", &KernelSpec::k)
      .def_readonly("radius", &KernelSpec::query_radius)
      .def("link_max", &KernelSpec::link_max)
      .def("link_at_zero", &KernelSpec::link_at_zero)
      .def("__repr__", [](const KernelSpec& s) {
        return "KernelSpec(" + std::string(to_string(s.kind)) + ", k=" + std::to_string(s.k) + ")";
      });

  m.def("link_eval", [](const KernelSpec& s, double z) { return link_eval(s, z); });
  m.def("cost", [](const KernelSpec& s, const Array& p, const Array& x) {
    return cost(s, vec_from(p), vec_from(x));
  });
  m.def("total_cost", [](const WeightedPointSet& set, const KernelSpec& s, const Array& x) {
    return total_cost(set, s, vec_from(x));
  });
  m.def("total_cost_gradient", [](const WeightedPointSet& set, const KernelSpec& s, const Array& x) {
    return vec_to_numpy(total_cost_gradient(set, s, vec_from(x)));
  });

  py::class_<SensitivityProfile>(m, "SensitivityProfile")
      .def_property_readonly("bounds", [](const SensitivityProfile& p) { return vec_to_numpy(p.bounds); })
      .def_readonly("order", &SensitivityProfile::order)
      .def_readonly("total", &SensitivityProfile::total)
      .def_readonly("weighted_heuristic", &SensitivityProfile::weighted_heuristic);

  m.def("sort_by_norm", &sort_by_norm);
  m.def("sensitivity_profile", &sensitivity_profile);
  m.def("weighted_sensitivity_profile", &weighted_sensitivity_profile);
  m.def("sigmoid_sensitivity", &sigmoid_sensitivity, py::arg("set"), py::arg("k"));
  m.def("logistic_sensitivity", &logistic_sensitivity, py::arg("set"), py::arg("k"), py::arg("radius"));
  m.def(
      "empirical_sensitivities",
      [](const WeightedPointSet& set, const KernelSpec& s, std::size_t budget, std::uint64_t seed) {
        EmpiricalSensitivityOptions o;
        o.budget = budget;
        o.seed = seed;
        return vec_to_numpy(empirical_sensitivities(set, s, o));
      },
      py::arg("set"), py::arg("spec"), py::arg("budget") = 10000, py::arg("seed") = 0x5eed5eedULL);

  py::class_<Coreset>(m, "Coreset")
      .def_readonly("set", &Coreset::set)
      .def_readonly("source_indices", &Coreset::source_indices)
      .def_property_readonly("probabilities", [](const Coreset& c) { return vec_to_numpy(c.probabilities); })
      .def_readonly("eps", &Coreset::eps)
      .def_readonly("delta", &Coreset::delta)
      .def_readonly("seed", &Coreset::seed)
      .def_readonly("requested_size", &Coreset::requested_size)
      .def_readonly("formula_size", &Coreset::formula_size)
      .def_readonly("total_sensitivity", &Coreset::total_sensitivity)
      .def_readonly("weighted_heuristic", &Coreset::weighted_heuristic)
      .def("__len__", &Coreset::size);

  m.def("coreset_size", &coreset_size, py::arg("t"), py::arg("dim"), py::arg("eps"), py::arg("delta"));
  m.def("build_coreset", &build_coreset, py::arg("set"), py::arg("profile"), py::arg("size"),
        py::arg("seed"));
  m.def("uniform_sample", &uniform_sample, py::arg("set"), py::arg("size"), py::arg("seed"));
  m.def("monotonic_coreset", &monotonic_coreset, py::arg("set"), py::arg("spec"), py::arg("eps"),
        py::arg("delta"), py::arg("seed"), py::arg("size") = py::none());
  m.def("compact", &compact);
  m.def("merge", &merge);

  m.def(
      "stream_coreset",
      [](const std::vector<WeightedPointSet>& batches, const KernelSpec& s, std::size_t leaf_size,
         double eps, double delta, std::size_t threshold, std::uint64_t seed,
         std::optional<std::size_t> size) {
        MergeTreeConfig c;
        c.leaf_size = leaf_size;
        c.eps_leaf = eps;
        c.delta_leaf = delta;
        c.recompress_threshold = threshold;
        c.seed = seed;
        c.sample_size = size;
        auto r = stream_coreset(batches, s, c);
        py::dict out;
        out["coreset"] = r.coreset;
        out["leaves"] = r.leaves;
        out["tree_height"] = r.tree_height;
        out["reduce_depth"] = r.reduce_depth;
        out["reduce_count"] = r.reduce_count;
        out["peak_resident"] = r.peak_resident;
        out["compounded_error_bound"] = r.compounded_error_bound(eps);
        return out;
      },
      py::arg("batches"), py::arg("spec"), py::arg("leaf_size") = 1024, py::arg("eps") = 0.3,
      py::arg("delta") = 0.1, py::arg("threshold") = 2048, py::arg("seed") = 0,
      py::arg("size") = py::none());

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("x_star", [](const SolveResult& r) { return vec_to_numpy(r.x_star); })
      .def_readonly("value", &SolveResult::value)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("gradient_norm", &SolveResult::gradient_norm)
      .def_readonly("converged", &SolveResult::converged);

  m.def(
      "minimize",
      [](const WeightedPointSet& set, const KernelSpec& s, std::optional<Array> init, double tol,
         std::size_t max_iter) {
        SolverOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        const Vector x0 = init ? vec_from(*init) : Vector(set.dim(), 0.0);
        return minimize(set, s, x0, o);
      },
      py::arg("set"), py::arg("spec"), py::arg("init") = py::none(), py::arg("tol") = 1e-8,
      py::arg("max_iter") = 500);
  m.def(
      "multistart_minimize",
      [](const WeightedPointSet& set, const KernelSpec& s, std::size_t starts, std::uint64_t seed) {
        return multistart_minimize(set, s, starts, seed);
      },
      py::arg("set"), py::arg("spec"), py::arg("starts") = 8, py::arg("seed") = 0);

  m.def(
      "find_intersection",
      [](const std::string& kind, double c, double k) {
        const auto r = verify::find_intersection(parse_kernel_kind(kind), c, k);
        py::dict out;
        out["x_kc"] = r.x_kc;
        out["residual"] = r.residual;
        out["lo"] = r.lo;
        out["hi"] = r.hi;
        return out;
      },
      py::arg("kind"), py::arg("c"), py::arg("k"));
  m.def(
      "regularized_ratio_sweep",
      [](const std::string& kind, double c, double k, std::optional<double> radius,
         std::size_t points) {
        return bench::sweep_to_json(
                   verify::regularized_ratio_sweep(parse_kernel_kind(kind), c, k, radius, points))
            .dump();
      },
      py::arg("kind"), py::arg("c"), py::arg("k"), py::arg("radius") = py::none(),
      py::arg("points") = 100000);
  m.def(
      "lower_bound_demo",
      [](std::size_t n, std::size_t d, const std::vector<double>& radii, const std::string& kind) {
        return bench::lower_bound_to_json(
                   verify::lower_bound_demo(n, d, radii, parse_kernel_kind(kind)))
            .dump();
      },
      py::arg("n"), py::arg("d"), py::arg("radii"), py::arg("kind") = "sigmoid");
  m.def(
      "bounds_report", [](std::size_t points) { return bench::bounds_report(points).dump(); },
      py::arg("points") = 100000);

  m.def("make_synthetic", [](std::uint64_t seed) { return dataset_tuple(bench::make_synthetic(seed)); },
        py::arg("seed") = 0);
  m.def("make_wine_like", [](std::uint64_t seed) { return dataset_tuple(bench::make_wine_like(seed)); },
        py::arg("seed") = 0);
  m.def(
      "run_experiment",
      [](const std::string& mode, const Array& points, std::optional<Array> labels,
         const std::string& config_json, const std::string& name) {
        bench::Dataset data;
        data.set = set_from_numpy(points, std::nullopt);
        data.name = name;
        if (labels) data.labels = vec_from(*labels);
        bench::normalize_unit_ball(data);
        auto config = bench::config_from_json(bench::Json::parse(config_json));
        if (mode == "logistic") config.kernel = KernelKind::Logistic;
        py::gil_scoped_release release;
        const auto rep = mode == "logistic" ? bench::run_logistic_experiment(data, config)
                                            : bench::run_sigmoid_experiment(data, config);
        return bench::report_to_json(rep).dump();
      },
      py::arg("mode"), py::arg("points"), py::arg("labels") = py::none(),
      py::arg("config_json") = "{}", py::arg("name") = "array");
}
