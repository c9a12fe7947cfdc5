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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "coreset/experiment.hpp"
#include "coreset/verifier.hpp"

namespace coreset::bench {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(const std::string& name);

Json config_to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are an error.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

Json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const Json& j);

/// CSV flattening: header
/// kind,method,m,trial,value,error,trials,std_error
/// with one "trial" row per (method, m, trial) followed by one "aggregate"
/// row per (method, m). Columns that do not apply are left empty.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

void emit_report(const ExperimentReport& report,
                 const std::filesystem::path& path, ReportFormat format);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

Json sweep_to_json(const verify::RatioSweepReport& r);
Json lower_bound_to_json(const std::vector<verify::LowerBoundRow>& rows);

/// The bound-certificate matrix behind `verify-bounds`: regularized ratio
/// sweeps for every kernel over c in {0.1, 1, 10} and k in {100, 1e4}
/// (pairs with c^2 k < 1 skipped; logistic at R in {1, 4}), the simple
/// ratio lemma, and the intersection checks. Top-level "passed" is the
/// conjunction of every entry.
Json bounds_report(std::size_t sweep_points = 100000);

}  // namespace coreset::bench
