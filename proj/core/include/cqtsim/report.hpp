// Copyright 2026 The cqtsim Authors
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

#ifndef CQTSIM_REPORT_HPP_
#define CQTSIM_REPORT_HPP_

#include <string>

#include "cqtsim/config.hpp"
#include "cqtsim/experiments.hpp"

namespace cqtsim {

struct ReportOptions {
  bool include_timestamp = true;
};

/// Executes the configured experiments under every requested engine and
/// renders the full JSON report: spec echo, tool version, seed, outcome
/// tables and derived statistics. Deterministic in (config, seed) when the
/// timestamp is suppressed.
std::string run_report_json(const ResolvedConfig& config,
                            const ReportOptions& options = {});

/// Same execution, rendered as a flat CSV outcome table (numeric values at
/// 17 significant digits).
std::string run_report_csv(const ResolvedConfig& config);

/// Executes the configured preset under both engines and renders the
/// comparison report with pass/fail verdicts. Requires a preset experiment
/// and engine choice "both".
std::string compare_report_json(const ResolvedConfig& config,
                                const ReportOptions& options = {});

/// Builds the comparison for a preset invocation (used by the CLI and the
/// acceptance suite).
ComparisonReport compare_for(const ResolvedConfig& config);

}  // namespace cqtsim

#endif  // CQTSIM_REPORT_HPP_
