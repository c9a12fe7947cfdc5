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

#include "coreset/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string_view>

#include "coreset/rng.hpp"

namespace coreset::bench {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(const std::string& name, std::size_t line,
                       const std::string& what) {
  throw Error(name + ":" + std::to_string(line) + ": " + what);
}

// Lognormal draw with the given mean and standard deviation.
double lognormal(Rng& rng, double mean, double sd) {
  const double s2 = std::log1p((sd * sd) / (mean * mean));
  const double mu = std::log(mean) - 0.5 * s2;
  return std::exp(mu + std::sqrt(s2) * rng.normal());
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options,
                  std::string name) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool seen_first = false;
  std::vector<double> coords;
  std::vector<double> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    std::vector<double> values;
    values.reserve(cells.size());
    bool numeric = true;
    for (auto c : cells) {
      auto v = parse_number(c);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!seen_first) {
      seen_first = true;
      columns = cells.size();
      if (!numeric) continue;  // header row
    }
    if (cells.size() != columns) {
      fail(name, line_no, "expected " + std::to_string(columns) +
                              " columns, found " + std::to_string(cells.size()));
    }
    if (!numeric) fail(name, line_no, "non-numeric cell outside the header");
    for (double v : values) {
      if (!std::isfinite(v)) fail(name, line_no, "non-finite value");
    }
    if (options.label_column) {
      if (*options.label_column >= columns) {
        fail(name, line_no, "label column " + std::to_string(*options.label_column) +
                                " out of range");
      }
      labels.push_back(values[*options.label_column]);
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (options.label_column && j == *options.label_column) continue;
      coords.push_back(values[j]);
    }
    ++rows;
  }
  if (rows == 0) throw Error(name + ": no data rows");
  const std::size_t dim = columns - (options.label_column ? 1 : 0);
  if (dim == 0) throw Error(name + ": no feature columns");

  Dataset data;
  data.set = WeightedPointSet::unit(dim, std::move(coords));
  data.name = std::move(name);
  if (options.label_column) data.labels = std::move(labels);
  if (options.fold_labels) {
    if (!data.labels) throw Error(data.name + ": folding labels needs a label column");
    fold_labels(data);
  }
  if (options.normalize == Normalization::UnitBall) normalize_unit_ball(data);
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_csv(in, options, path.filename().string());
}

double label_sign(double label) {
  if (label == 1.0) return 1.0;
  if (label == 0.0 || label == -1.0) return -1.0;
  throw Error("label " + std::to_string(label) + " is not one of {0, 1} or {-1, +1}");
}

void fold_labels(Dataset& data) {
  if (!data.labels) throw Error("fold_labels: dataset has no labels");
  if (data.folded) return;
  const auto& labels = *data.labels;
  std::vector<double> coords = data.set.coords();
  const std::size_t d = data.set.dim();
  for (std::size_t i = 0; i < data.set.size(); ++i) {
    const double s = label_sign(labels[i]);
    for (std::size_t j = 0; j < d; ++j) coords[i * d + j] *= s;
  }
  data.set = WeightedPointSet(d, std::move(coords), data.set.weights());
  data.folded = true;
}

double normalize_unit_ball(Dataset& data) {
  double max_norm = 0.0;
  for (std::size_t i = 0; i < data.set.size(); ++i) {
    max_norm = std::max(max_norm, norm(data.set.point(i)));
  }
  if (max_norm > 0.0) {
    std::vector<double> coords = data.set.coords();
    for (double& c : coords) c /= max_norm;
    data.set = WeightedPointSet(data.set.dim(), std::move(coords), data.set.weights());
  } else {
    max_norm = 1.0;
  }
  data.normalization = Normalization::UnitBall;
  return max_norm;
}

Dataset make_synthetic(std::uint64_t seed) {
  Rng rng(seed);
  const double sd = std::sqrt(0.0025);
  std::vector<double> coords;
  coords.reserve(2 * 20010);
  for (int i = 0; i < 20000; ++i) {
    coords.push_back(10000.0 + sd * rng.normal());
    coords.push_back(10000.0 + sd * rng.normal());
  }
  for (int i = 0; i < 10; ++i) {
    coords.push_back(-9998.0 + sd * rng.normal());
    coords.push_back(-9998.0 + sd * rng.normal());
  }
  Dataset data;
  data.set = WeightedPointSet::unit(2, std::move(coords));
  data.name = "synthetic";
  return data;
}

Dataset make_wine_like(std::uint64_t seed) {
  struct Stat {
    double mean;
    double sd;
  };
  // fixed acidity, volatile acidity, citric acid, residual sugar, chlorides,
  // free SO2, total SO2, density, pH, sulphates, alcohol, quality
  static constexpr Stat kRed[12] = {
      {8.32, 1.74}, {0.528, 0.179}, {0.271, 0.195}, {2.54, 1.41},
      {0.0875, 0.047}, {15.9, 10.5}, {46.5, 32.9}, {0.9967, 0.0019},
      {3.31, 0.154}, {0.658, 0.170}, {10.42, 1.07}, {5.64, 0.81}};
  static constexpr Stat kWhite[12] = {
      {6.85, 0.84}, {0.278, 0.101}, {0.334, 0.121}, {6.39, 5.07},
      {0.0458, 0.0218}, {35.3, 17.0}, {138.4, 42.5}, {0.9940, 0.0030},
      {3.19, 0.151}, {0.490, 0.114}, {10.51, 1.23}, {5.88, 0.89}};
  constexpr int kReds = 1599;
  constexpr int kWhites = 4898;

  Rng rng(seed);
  std::vector<double> coords;
  std::vector<double> labels;
  coords.reserve(12 * (kReds + kWhites));
  auto emit = [&](const Stat* stats, double label) {
    for (int j = 0; j < 12; ++j) {
      double v = 0.0;
      if (j == 11) {
        v = std::clamp(std::round(stats[j].mean + stats[j].sd * rng.normal()), 3.0, 9.0);
      } else {
        v = lognormal(rng, stats[j].mean, stats[j].sd);
      }
      coords.push_back(v);
    }
    labels.push_back(label);
  };
  // Interleave classes in a seeded order, as in a shuffled export.
  std::vector<double> order(kReds + kWhites, 0.0);
  std::fill(order.begin(), order.begin() + kReds, 1.0);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  for (double label : order) emit(label == 1.0 ? kRed : kWhite, label);

  Dataset data;
  data.set = WeightedPointSet::unit(12, std::move(coords));
  data.labels = std::move(labels);
  data.name = "wine-like";
  return data;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("train_test_split: test fraction must lie in (0, 1)");
  }
  const std::size_t n = data.set.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) throw Error("train_test_split: split leaves an empty side");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  auto take = [&](std::size_t from, std::size_t to, const char* suffix) {
    Dataset part;
    part.set = WeightedPointSet(data.set.dim());
    part.set.reserve(to - from);
    std::vector<double> labels;
    for (std::size_t r = from; r < to; ++r) {
      part.set.add(data.set.point(perm[r]), data.set.weight(perm[r]));
      if (data.labels) labels.push_back((*data.labels)[perm[r]]);
    }
    if (data.labels) part.labels = std::move(labels);
    part.name = data.name + suffix;
    part.normalization = data.normalization;
    part.folded = data.folded;
    return part;
  };
  return {take(n_test, n, "/train"), take(0, n_test, "/test")};
}

void write_weighted_csv(std::ostream& out, const WeightedPointSet& set) {
  for (std::size_t j = 0; j < set.dim(); ++j) out << 'x' << j << ',';
  out << "weight\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (double v : set.point(i)) out << v << ',';
    out << set.weight(i) << '\n';
  }
}

void write_weighted_csv(const std::filesystem::path& path,
                        const WeightedPointSet& set) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_weighted_csv(out, set);
  if (!out) throw Error("error writing " + path.string());
}

WeightedPointSet read_weighted_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Dataset raw = parse_csv(in, {}, path.filename().string());
  const std::size_t cols = raw.set.dim();
  if (cols < 2) throw Error(path.string() + ": need point columns and a weight column");
  const std::size_t d = cols - 1;
  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(raw.set.size() * d);
  for (std::size_t i = 0; i < raw.set.size(); ++i) {
    const auto row = raw.set.point(i);
    coords.insert(coords.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(d));
    weights.push_back(row[d]);
  }
  return WeightedPointSet(d, std::move(coords), std::move(weights));
}

}  // namespace coreset::bench
