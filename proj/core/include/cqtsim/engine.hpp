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

#ifndef CQTSIM_ENGINE_HPP_
#define CQTSIM_ENGINE_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cqtsim/models.hpp"
#include "cqtsim/spacetime.hpp"
#include "cqtsim/state.hpp"

namespace cqtsim {

/// The two rival outcome-assignment rules.
///   - Standard: each measurement's probabilities condition on all outcomes
///     at earlier lab-frame time (foliation order, ids as tie-break).
///   - Causal: each measurement's probabilities condition only on outcomes
///     inside its past light cone.
enum class EngineKind { Standard, Causal };

const char* engine_name(EngineKind kind);

/// A complete experiment: initial data plus measurement events and the rule
/// used to assign outcomes. Unit of configuration, enumeration and sampling.
struct ExperimentSpec {
  std::string label;
  std::vector<int> factor_dims;
  QuantumState initial_state;
  std::vector<SpacetimeEvent> events;
  std::map<std::string, MeasurementModel> models;
  EngineKind engine = EngineKind::Causal;
};

/// Checks internal consistency: unique event ids, resolvable model refs,
/// matching dimensions, no coincident same-factor events, and (for the
/// causal engine) the locality requirement that spacelike-separated events
/// act on distinct factors. Throws ConfigError with the offending detail.
void validate_experiment(const ExperimentSpec& spec);

/// Map event id -> outcome index. Complete over an experiment's events for
/// joint probabilities; restricted to a past cone for conditional states.
struct OutcomeAssignment {
  std::map<std::string, int> outcomes;
};

/// Exact table of (outcome tuple -> probability). Outcome tuples are
/// aligned with `event_order` (canonical topological order of event ids)
/// and listed lexicographically.
struct JointDistribution {
  std::vector<std::string> event_order;
  std::vector<std::pair<std::vector<int>, double>> rows;

  OutcomeAssignment assignment_at(std::size_t row) const;
  double total_probability() const;
};

/// Empirical counts from sampled runs, keyed by outcome tuple in
/// `event_order` alignment.
struct RunStatistics {
  std::vector<std::string> event_order;
  std::uint64_t total_runs = 0;
  std::uint64_t seed = 0;
  std::map<std::vector<int>, std::uint64_t> counts;
};

/// Default cap on the number of enumerated outcome tuples.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1}
                                                        << 20;

/// The state used by the causal rule to predict the outcome at `event_id`:
/// the initial state updated by the outcomes of exactly the events in the
/// past light cone of the event. `partial` must cover exactly that cone
/// (anything else throws std::logic_error: it indicates a caller bug, not a
/// configuration problem).
QuantumState conditional_state_causal(const ExperimentSpec& spec,
                                      const std::string& event_id,
                                      const OutcomeAssignment& partial);

/// Probability of a complete outcome assignment under the causal rule:
/// the product over events of the outcome probability evaluated on the
/// cone-conditioned state. Independent of event processing order.
double joint_probability_causal(const ExperimentSpec& spec,
                                const OutcomeAssignment& assignment);

/// As above, but processing events (and applying each cone's updates) in an
/// explicitly given linear extension of the causal order. Exposed so tests
/// can exercise order invariance; throws ConfigError if `extension` is not
/// a permutation of event indices respecting causal precedence.
double joint_probability_causal(const ExperimentSpec& spec,
                                const OutcomeAssignment& assignment,
                                std::span<const std::size_t> extension);

/// Probability of a complete outcome assignment under the standard rule:
/// conditional Born probabilities accumulated in foliation order (time,
/// then id). For POVM models on pure inputs this equals the squared norm of
/// the ordered Kraus product applied to the initial state.
double joint_probability_standard(const ExperimentSpec& spec,
                                  const OutcomeAssignment& assignment);

/// As above with an explicit processing order (for order-robustness tests).
double joint_probability_standard(const ExperimentSpec& spec,
                                  const OutcomeAssignment& assignment,
                                  std::span<const std::size_t> order);

/// Dispatches on spec.engine.
double joint_probability(const ExperimentSpec& spec,
                         const OutcomeAssignment& assignment);

/// Exhaustive joint distribution under spec.engine. Throws ConfigError when
/// the outcome-tuple count exceeds `max_assignments` (use sampling instead).
JointDistribution enumerate_joint(
    const ExperimentSpec& spec,
    std::uint64_t max_assignments = kDefaultEnumerationCap);

/// Samples `runs` complete outcome tuples under spec.engine. Deterministic
/// in (spec, runs, seed): run r draws from a counter-derived substream of
/// the master seed, so results do not depend on scheduling or batching.
RunStatistics sample_runs(const ExperimentSpec& spec, std::uint64_t runs,
                          std::uint64_t seed);

}  // namespace cqtsim

#endif  // CQTSIM_ENGINE_HPP_
