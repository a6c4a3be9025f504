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

#ifndef CQTSIM_EXPERIMENTS_HPP_
#define CQTSIM_EXPERIMENTS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqtsim/engine.hpp"

namespace cqtsim {

/// Two spacelike-separated spin measurements on a singlet pair (factors
/// L = 0, R = 1), POVM epsilon-spin detectors along the z-axis. Events sit
/// at t = 0, x = -separation and +separation.
ExperimentSpec preset_singlet(double epsilon = 0.01, double separation = 1.0);

/// Two wings of n timelike-chained spin measurements each, the wings
/// mutually spacelike. Uses the paper-literal effect-pair spin model, whose
/// repeated-outcome conditionals drift towards certainty under the causal
/// rule while the other wing stays statistically invisible.
ExperimentSpec preset_sequential_drift(int n_per_wing = 2,
                                       double epsilon = 0.1);

/// The drift layout plus one extra measurement per wing placed late enough
/// that both wings' chains lie in its past light cone, where local
/// statistics revert towards the unconditioned singlet marginals.
/// n_per_wing = 0 degenerates to the bare post-merge pair.
ExperimentSpec preset_reversion(int n_per_wing = 3, double epsilon = 0.01);

/// A single particle in equal superposition over n spacelike-separated
/// boxes (one dimension-2 factor per box, basis {outside, inside}), each
/// watched by an efficiency-(1 - epsilon) click detector.
ExperimentSpec preset_n_box(int n_boxes = 4, double epsilon = 1e-3);

/// Analyzer angles for a CHSH run: {a, a_prime, b, b_prime}.
using ChshAngles = std::array<double, 4>;

ChshAngles default_chsh_angles();

/// Four singlet sub-experiments, one per analyzer-setting pair, in the
/// order (a,b), (a,b'), (a',b), (a',b'). S combines their correlators as
/// |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
struct ChshFamily {
  double epsilon = 0.0;
  ChshAngles angles{};
  std::vector<ExperimentSpec> settings;
};

ChshFamily preset_chsh(double epsilon = 1e-3,
                       const ChshAngles& angles = default_chsh_angles());

struct PresetParamInfo {
  std::string key;
  std::string summary;
  double default_value = 0.0;
};

struct PresetInfo {
  std::string name;
  std::string summary;
  std::vector<PresetParamInfo> params;
};

/// Static registry of the built-in presets, for the CLI and the config
/// loader.
const std::vector<PresetInfo>& preset_registry();

enum class ToleranceKind { Within, AtLeast, AtMost };

const char* tolerance_kind_name(ToleranceKind kind);

/// One compared statistic. `bound_engine` names the engine whose value the
/// verdict applies to; both engines' values are always recorded.
struct ComparisonRow {
  std::string statistic;
  EngineKind bound_engine = EngineKind::Causal;
  double causal_value = 0.0;
  double standard_value = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  ToleranceKind kind = ToleranceKind::Within;
  bool pass = false;
};

struct ComparisonReport {
  std::string experiment;
  std::vector<ComparisonRow> rows;
  bool all_pass = true;
};

/// Engine comparisons with pinned references and tolerances per preset.
/// Exact statistics come from enumeration; `runs`/`seed` additionally
/// enable the sampled click-histogram rows for the n-box preset.
ComparisonReport compare_singlet(double epsilon = 0.01,
                                 double separation = 1.0);
ComparisonReport compare_sequential_drift(int n_per_wing = 2,
                                          double epsilon = 0.1);
ComparisonReport compare_reversion(int n_per_wing = 3, double epsilon = 0.01);
ComparisonReport compare_n_box(int n_boxes = 4, double epsilon = 1e-3,
                               std::optional<std::uint64_t> runs = {},
                               std::uint64_t seed = 0);
ComparisonReport compare_chsh(double epsilon = 1e-3,
                              const ChshAngles& angles = default_chsh_angles());

}  // namespace cqtsim

#endif  // CQTSIM_EXPERIMENTS_HPP_
