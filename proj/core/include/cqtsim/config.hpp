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

#ifndef CQTSIM_CONFIG_HPP_
#define CQTSIM_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqtsim/engine.hpp"

namespace cqtsim {

enum class EngineChoice { Causal, Standard, Both };
enum class RunMode { Enumerate, Sample };
enum class OutputFormat { Json, Csv };

std::vector<EngineKind> engines_for(EngineChoice choice);

struct OutputSpec {
  std::string path;
  OutputFormat format = OutputFormat::Json;
};

/// A preset experiment by name plus fully resolved numeric parameters
/// (defaults filled in).
struct PresetInvocation {
  std::string name;
  std::map<std::string, double> params;
};

/// A parsed and resolved configuration document. `experiments` holds the
/// concrete sub-experiments (one, or four for the chsh preset); their
/// `engine` field is a placeholder that runners override per requested
/// engine.
struct ResolvedConfig {
  int schema_version = 1;
  std::optional<PresetInvocation> preset;  // nullopt for explicit experiments
  std::vector<ExperimentSpec> experiments;
  EngineChoice engine = EngineChoice::Both;
  RunMode mode = RunMode::Enumerate;
  std::optional<std::uint64_t> runs;
  std::uint64_t seed = 0;
  std::optional<OutputSpec> output;
};

/// Parses a configuration document. The schema is strict: unknown keys are
/// rejected, and every error message carries the JSON path at fault
/// (e.g. "$.experiment.params.epsilon"). Throws ConfigError.
ResolvedConfig parse_config_text(const std::string& json_text);
ResolvedConfig load_config_file(const std::string& path);

/// Serializes an experiment in the explicit (non-preset) config form:
/// factor_dims, initial_state, events and models with their parameters.
/// Only experiments built from the shipped model types can be serialized.
std::string experiment_to_json(const ExperimentSpec& spec);

/// Parses the explicit experiment form produced by experiment_to_json (or
/// written by hand in a config's "experiment" key).
ExperimentSpec experiment_from_json(const std::string& json_text);

/// Re-serializes either the preset invocation or the explicit experiment of
/// a resolved config; parsing the result reproduces the same experiments.
std::string config_experiment_echo(const ResolvedConfig& config);

}  // namespace cqtsim

#endif  // CQTSIM_CONFIG_HPP_
