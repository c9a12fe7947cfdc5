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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coreset/core.hpp"

namespace coreset::bench {

enum class Normalization { None, UnitBall };

struct Dataset {
  WeightedPointSet set{1};
  /// Raw label per point, when a label column was read.
  std::optional<std::vector<double>> labels;
  std::string name;
  Normalization normalization = Normalization::None;
  /// Points already multiplied by their label sign.
  bool folded = false;
};

struct CsvOptions {
  /// 0-based column holding the label; excluded from the features.
  std::optional<std::size_t> label_column;
  bool fold_labels = false;
  Normalization normalize = Normalization::None;
};

/// Comma-separated numeric rows with an optional single header row
/// (detected as a first row containing a non-numeric cell). Empty lines are
/// skipped. Errors carry the 1-based line number.
Dataset parse_csv(std::istream& in, const CsvOptions& options,
                  std::string name = "csv");
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Maps a label to a sign: 0 -> -1, 1 -> +1, -1 -> -1.
double label_sign(double label);

/// Multiplies every point by label_sign of its label.
void fold_labels(Dataset& data);

/// Divides all points by the largest point norm; returns that norm (1 when
/// every point is zero).
double normalize_unit_ball(Dataset& data);

/// 20,000 draws from N((10000, 10000), 0.0025 I) followed by 10 draws from
/// N((-9998, -9998), 0.0025 I). Not normalized.
Dataset make_synthetic(std::uint64_t seed);

/// Labeled stand-in for the 6,497-record, 12-feature red/white wine data:
/// 1,599 "red" (label 1) and 4,898 "white" (label 0) records whose
/// per-class feature means and spreads follow the published summary
/// statistics of that dataset. Not normalized or folded.
Dataset make_wine_like(std::uint64_t seed);

/// Seeded shuffle split; test gets round(test_fraction * n) points.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double test_fraction,
                                             std::uint64_t seed);

/// Coreset file: d point columns then a `weight` column, with a header row
/// x0,...,x{d-1},weight.
void write_weighted_csv(const std::filesystem::path& path,
                        const WeightedPointSet& set);
void write_weighted_csv(std::ostream& out, const WeightedPointSet& set);
WeightedPointSet read_weighted_csv(const std::filesystem::path& path);

}  // namespace coreset::bench
