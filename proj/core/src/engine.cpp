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

#include "cqtsim/engine.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "cqtsim/errors.hpp"
#include "cqtsim/rng.hpp"

namespace cqtsim {

namespace {

// Carried weight below which the walker rescales its state. Probabilities
// are scale-invariant, so this only protects against gradual underflow on
// very long event chains.
constexpr double kRescaleFloor = 1e-150;
constexpr double kWeightUnderflow = 1e-300;

struct CompiledEvent {
  const SpacetimeEvent* event = nullptr;
  const MeasurementModel* model = nullptr;
  // Positions (into the canonical order) of the events in this event's past
  // light cone. Always earlier positions: the canonical order is a linear
  // extension of causal precedence.
  std::vector<std::size_t> cone;
};

struct CompiledExperiment {
  const ExperimentSpec* spec = nullptr;
  std::vector<std::size_t> order;      // canonical order, indices into events
  std::vector<CompiledEvent> compiled; // aligned with `order`

  std::size_t size() const { return compiled.size(); }
  std::vector<std::string> event_ids() const {
    std::vector<std::string> ids;
    ids.reserve(compiled.size());
    for (const auto& ce : compiled) ids.push_back(ce.event->id);
    return ids;
  }
};

const MeasurementModel& resolve_model(const ExperimentSpec& spec,
                                      const SpacetimeEvent& event) {
  auto it = spec.models.find(event.model_ref);
  if (it == spec.models.end()) {
    std::ostringstream msg;
    msg << "event '" << event.id << "' references unknown model '"
        << event.model_ref << "'";
    throw ConfigError(msg.str());
  }
  return it->second;
}

CompiledExperiment compile(const ExperimentSpec& spec) {
  validate_experiment(spec);
  CompiledExperiment ce;
  ce.spec = &spec;
  ce.order = topological_order(spec.events);
  ce.compiled.resize(ce.order.size());
  for (std::size_t pos = 0; pos < ce.order.size(); ++pos) {
    const SpacetimeEvent& event = spec.events[ce.order[pos]];
    ce.compiled[pos].event = &event;
    ce.compiled[pos].model = &resolve_model(spec, event);
    for (std::size_t prev = 0; prev < pos; ++prev) {
      if (causally_precedes(*ce.compiled[prev].event, event)) {
        ce.compiled[pos].cone.push_back(prev);
      }
    }
  }
  return ce;
}

// Unnormalized working state for the walkers. Outcome distributions are
// scale-invariant (weights are divided by their sum), so intermediate
// renormalization passes are skipped.
struct RawState {
  bool pure = true;
  Vector v;
  Matrix m;

  static RawState from(const QuantumState& qs) {
    RawState st;
    st.pure = qs.is_pure();
    if (st.pure) {
      st.v = qs.amplitudes();
    } else {
      st.m = qs.density();
    }
    return st;
  }

  double weight() const { return pure ? v.squaredNorm() : m.trace().real(); }
};

RawState apply_outcome(const CompiledExperiment& ce, std::size_t pos,
                       int outcome, const RawState& st) {
  const auto& dims = ce.spec->factor_dims;
  const int factor = ce.compiled[pos].event->factor_index;
  const Matrix& op = ce.compiled[pos].model->outcomes()[outcome].matrix;
  RawState out;
  out.pure = st.pure;
  if (st.pure) {
    out.v = apply_to_factor(op, factor, dims, st.v);
  } else {
    out.m = conjugate_on_factor(op, factor, dims, st.m);
  }
  const double w = out.weight();
  if (w < kWeightUnderflow) {
    throw NumericError(
        "post-measurement weight underflowed; the measurement model is too "
        "close to projective (increase epsilon)");
  }
  if (w < kRescaleFloor) {
    if (out.pure) {
      out.v /= std::sqrt(w);
    } else {
      out.m /= w;
    }
  }
  return out;
}

// Normalized outcome probabilities of the event at `pos` evaluated on `st`.
// Computed from the local density matrix of the target factor; weights are
// divided by their sum, which makes them invariant under state rescaling.
std::vector<double> outcome_distribution(const CompiledExperiment& ce,
                                         std::size_t pos,
                                         const RawState& st) {
  const auto& dims = ce.spec->factor_dims;
  const CompiledEvent& cev = ce.compiled[pos];
  const int factor = cev.event->factor_index;
  const Matrix rho_loc =
      st.pure ? local_density_matrix(dims, factor, st.v)
              : local_density_matrix(dims, factor, st.m);
  const auto& outcomes = cev.model->outcomes();
  std::vector<double> probs(outcomes.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Matrix& a = outcomes[i].matrix;
    double w;
    if (cev.model->rule() == ProbabilityRule::KrausWeight) {
      w = (a * rho_loc * a.adjoint()).trace().real();
    } else {
      w = (a * rho_loc).trace().real();
    }
    probs[i] = std::max(w, 0.0);
    sum += probs[i];
  }
  if (!(sum > 0.0)) {
    std::ostringstream msg;
    msg << "outcome weights at event '" << cev.event->id
        << "' sum to a nonpositive value " << sum;
    throw NumericError(msg.str());
  }
  for (double& p : probs) p /= sum;
  return probs;
}

// Cached cone-conditioned outcome distributions for the causal rule, keyed
// by (event position, outcomes of the events in its cone).
struct CausalMemo {
  std::vector<std::map<std::vector<int>, std::vector<double>>> per_event;

  explicit CausalMemo(std::size_t n_events) : per_event(n_events) {}
};

const std::vector<double>& causal_distribution(const CompiledExperiment& ce,
                                               CausalMemo& memo,
                                               std::size_t pos,
                                               const std::vector<int>& prefix) {
  const auto& cone = ce.compiled[pos].cone;
  std::vector<int> key;
  key.reserve(cone.size());
  for (std::size_t p : cone) key.push_back(prefix[p]);
  auto [it, inserted] = memo.per_event[pos].try_emplace(std::move(key));
  if (inserted) {
    RawState st = RawState::from(ce.spec->initial_state);
    for (std::size_t i = 0; i < cone.size(); ++i) {
      st = apply_outcome(ce, cone[i], it->first[i], st);
    }
    it->second = outcome_distribution(ce, pos, st);
  }
  return it->second;
}

std::vector<int> assignment_to_tuple(const CompiledExperiment& ce,
                                     const OutcomeAssignment& assignment) {
  if (assignment.outcomes.size() != ce.size()) {
    std::ostringstream msg;
    msg << "assignment covers " << assignment.outcomes.size()
        << " events but the experiment has " << ce.size();
    throw ConfigError(msg.str());
  }
  std::vector<int> tuple(ce.size());
  for (std::size_t pos = 0; pos < ce.size(); ++pos) {
    const CompiledEvent& cev = ce.compiled[pos];
    auto it = assignment.outcomes.find(cev.event->id);
    if (it == assignment.outcomes.end()) {
      std::ostringstream msg;
      msg << "assignment is missing event '" << cev.event->id << "'";
      throw ConfigError(msg.str());
    }
    if (it->second < 0 || it->second >= cev.model->outcome_count()) {
      std::ostringstream msg;
      msg << "assignment gives event '" << cev.event->id << "' outcome "
          << it->second << " but its model has "
          << cev.model->outcome_count() << " outcomes";
      throw ConfigError(msg.str());
    }
    tuple[pos] = it->second;
  }
  return tuple;
}

std::uint64_t checked_tuple_count(const CompiledExperiment& ce,
                                  std::uint64_t cap) {
  std::uint64_t count = 1;
  for (const auto& cev : ce.compiled) {
    const auto n = static_cast<std::uint64_t>(cev.model->outcome_count());
    if (count > cap / n) {
      std::ostringstream msg;
      msg << "experiment has more than " << cap
          << " outcome tuples; exact enumeration is not feasible, use "
             "sampling (mode \"sample\") instead";
      throw ConfigError(msg.str());
    }
    count *= n;
  }
  return count;
}

}  // namespace

const char* engine_name(EngineKind kind) {
  return kind == EngineKind::Standard ? "standard" : "causal";
}

void validate_experiment(const ExperimentSpec& spec) {
  if (spec.factor_dims.empty()) {
    throw ConfigError("experiment has no tensor factors");
  }
  if (spec.initial_state.factor_dims() != spec.factor_dims) {
    throw ConfigError(
        "initial state factor dimensions do not match the experiment's "
        "factor_dims");
  }
  std::set<std::string> ids;
  for (const auto& event : spec.events) {
    if (!ids.insert(event.id).second) {
      std::ostringstream msg;
      msg << "duplicate event id '" << event.id << "'";
      throw ConfigError(msg.str());
    }
    if (event.x.empty()) {
      std::ostringstream msg;
      msg << "event '" << event.id << "' has no spatial coordinates";
      throw ConfigError(msg.str());
    }
    if (event.x.size() != spec.events.front().x.size()) {
      std::ostringstream msg;
      msg << "event '" << event.id << "' has spatial dimension "
          << event.x.size() << " but event '" << spec.events.front().id
          << "' has " << spec.events.front().x.size();
      throw ConfigError(msg.str());
    }
    if (event.factor_index < 0 ||
        static_cast<std::size_t>(event.factor_index) >=
            spec.factor_dims.size()) {
      std::ostringstream msg;
      msg << "event '" << event.id << "' targets factor "
          << event.factor_index << " but the experiment has "
          << spec.factor_dims.size() << " factors";
      throw ConfigError(msg.str());
    }
    const MeasurementModel& model = resolve_model(spec, event);
    if (model.dim() != spec.factor_dims[event.factor_index]) {
      std::ostringstream msg;
      msg << "event '" << event.id << "': model '" << event.model_ref
          << "' acts on dimension " << model.dim() << " but factor "
          << event.factor_index << " has dimension "
          << spec.factor_dims[event.factor_index];
      throw ConfigError(msg.str());
    }
  }
  topological_order(spec.events);  // rejects coincident same-factor events
  if (spec.engine == EngineKind::Causal) {
    const LocalityReport report = validate_locality(spec.events);
    if (!report.ok) {
      std::ostringstream msg;
      msg << "causal engine requires spacelike-separated events to act on "
             "distinct factors; violated by:";
      for (const auto& v : report.violations) {
        msg << " ('" << v.first_id << "','" << v.second_id << "')";
      }
      throw ConfigError(msg.str());
    }
  }
}

OutcomeAssignment JointDistribution::assignment_at(std::size_t row) const {
  OutcomeAssignment assignment;
  const auto& tuple = rows.at(row).first;
  for (std::size_t i = 0; i < event_order.size(); ++i) {
    assignment.outcomes[event_order[i]] = tuple[i];
  }
  return assignment;
}

double JointDistribution::total_probability() const {
  double total = 0.0;
  for (const auto& row : rows) total += row.second;
  return total;
}

QuantumState conditional_state_causal(const ExperimentSpec& spec,
                                      const std::string& event_id,
                                      const OutcomeAssignment& partial) {
  validate_experiment(spec);
  const SpacetimeEvent* target = nullptr;
  for (const auto& event : spec.events) {
    if (event.id == event_id) target = &event;
  }
  if (target == nullptr) {
    std::ostringstream msg;
    msg << "unknown event id '" << event_id << "'";
    throw ConfigError(msg.str());
  }
  const std::vector<std::size_t> cone = past_cone(*target, spec.events);

  std::set<std::string> cone_ids;
  for (std::size_t i : cone) cone_ids.insert(spec.events[i].id);
  std::set<std::string> given_ids;
  for (const auto& [id, _] : partial.outcomes) given_ids.insert(id);
  if (cone_ids != given_ids) {
    throw std::logic_error(
        "conditional_state_causal: partial assignment must cover exactly the "
        "past light cone of the event");
  }

  // Apply cone outcomes in canonical (t, id) order.
  std::vector<std::size_t> cone_sorted = cone;
  std::sort(cone_sorted.begin(), cone_sorted.end(),
            [&](std::size_t a, std::size_t b) {
              if (spec.events[a].t != spec.events[b].t)
                return spec.events[a].t < spec.events[b].t;
              return spec.events[a].id < spec.events[b].id;
            });
  QuantumState state = spec.initial_state;
  for (std::size_t i : cone_sorted) {
    const SpacetimeEvent& event = spec.events[i];
    const MeasurementModel& model = resolve_model(spec, event);
    const int outcome = partial.outcomes.at(event.id);
    if (outcome < 0 || outcome >= model.outcome_count()) {
      throw std::logic_error(
          "conditional_state_causal: outcome index out of range");
    }
    state = apply_kraus_update(state, model.outcomes()[outcome],
                               event.factor_index)
                .state;
  }
  return state;
}

double joint_probability_causal(const ExperimentSpec& spec,
                                const OutcomeAssignment& assignment) {
  const CompiledExperiment ce = compile(spec);
  const std::vector<int> tuple = assignment_to_tuple(ce, assignment);
  CausalMemo memo(ce.size());
  double probability = 1.0;
  for (std::size_t pos = 0; pos < ce.size(); ++pos) {
    probability *= causal_distribution(ce, memo, pos, tuple)[tuple[pos]];
  }
  return probability;
}

double joint_probability_causal(const ExperimentSpec& spec,
                                const OutcomeAssignment& assignment,
                                std::span<const std::size_t> extension) {
  const CompiledExperiment ce = compile(spec);
  const std::vector<int> tuple = assignment_to_tuple(ce, assignment);
  const std::size_t n = ce.size();
  if (extension.size() != n) {
    throw ConfigError("extension must list every event exactly once");
  }
  // position of each raw event index within the canonical order
  std::vector<std::size_t> canon_pos(n);
  for (std::size_t pos = 0; pos < n; ++pos) canon_pos[ce.order[pos]] = pos;

  std::vector<bool> seen(n, false);
  std::vector<std::size_t> rank(n);  // canonical position -> rank in extension
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t raw = extension[r];
    if (raw >= n || seen[raw]) {
      throw ConfigError("extension must be a permutation of event indices");
    }
    seen[raw] = true;
    rank[canon_pos[raw]] = r;
  }
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t prev : ce.compiled[pos].cone) {
      if (rank[prev] > rank[pos]) {
        throw ConfigError(
            "extension is not a linear extension of the causal order");
      }
    }
  }

  double probability = 1.0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    // condition on the cone outcomes, applied in extension order
    std::vector<std::size_t> cone = ce.compiled[pos].cone;
    std::sort(cone.begin(), cone.end(), [&](std::size_t a, std::size_t b) {
      return rank[a] < rank[b];
    });
    RawState st = RawState::from(spec.initial_state);
    for (std::size_t p : cone) st = apply_outcome(ce, p, tuple[p], st);
    probability *= outcome_distribution(ce, pos, st)[tuple[pos]];
  }
  return probability;
}

double joint_probability_standard(const ExperimentSpec& spec,
                                  const OutcomeAssignment& assignment) {
  const CompiledExperiment ce = compile(spec);
  const std::vector<int> tuple = assignment_to_tuple(ce, assignment);
  RawState st = RawState::from(spec.initial_state);
  double probability = 1.0;
  for (std::size_t pos = 0; pos < ce.size(); ++pos) {
    probability *= outcome_distribution(ce, pos, st)[tuple[pos]];
    if (pos + 1 < ce.size()) st = apply_outcome(ce, pos, tuple[pos], st);
  }
  return probability;
}

double joint_probability_standard(const ExperimentSpec& spec,
                                  const OutcomeAssignment& assignment,
                                  std::span<const std::size_t> order) {
  const CompiledExperiment ce = compile(spec);
  const std::vector<int> tuple = assignment_to_tuple(ce, assignment);
  const std::size_t n = ce.size();
  if (order.size() != n) {
    throw ConfigError("order must list every event exactly once");
  }
  std::vector<std::size_t> canon_pos(n);
  for (std::size_t pos = 0; pos < n; ++pos) canon_pos[ce.order[pos]] = pos;
  std::vector<bool> seen(n, false);
  RawState st = RawState::from(spec.initial_state);
  double probability = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t raw = order[r];
    if (raw >= n || seen[raw]) {
      throw ConfigError("order must be a permutation of event indices");
    }
    seen[raw] = true;
    const std::size_t pos = canon_pos[raw];
    probability *= outcome_distribution(ce, pos, st)[tuple[pos]];
    if (r + 1 < n) st = apply_outcome(ce, pos, tuple[pos], st);
  }
  return probability;
}

double joint_probability(const ExperimentSpec& spec,
                         const OutcomeAssignment& assignment) {
  return spec.engine == EngineKind::Standard
             ? joint_probability_standard(spec, assignment)
             : joint_probability_causal(spec, assignment);
}

namespace {

struct Enumerator {
  const CompiledExperiment& ce;
  CausalMemo memo;
  std::vector<int> prefix;
  JointDistribution result;

  explicit Enumerator(const CompiledExperiment& c)
      : ce(c), memo(c.size()) {}

  void walk_causal(std::size_t pos, double probability) {
    if (pos == ce.size()) {
      result.rows.emplace_back(prefix, probability);
      return;
    }
    const std::vector<double> dist =
        causal_distribution(ce, memo, pos, prefix);
    for (int o = 0; o < ce.compiled[pos].model->outcome_count(); ++o) {
      prefix.push_back(o);
      walk_causal(pos + 1, probability * dist[o]);
      prefix.pop_back();
    }
  }

  void walk_standard(std::size_t pos, const RawState& st,
                     double probability) {
    if (pos == ce.size()) {
      result.rows.emplace_back(prefix, probability);
      return;
    }
    const std::vector<double> dist = outcome_distribution(ce, pos, st);
    for (int o = 0; o < ce.compiled[pos].model->outcome_count(); ++o) {
      prefix.push_back(o);
      if (pos + 1 == ce.size()) {
        walk_standard(pos + 1, st, probability * dist[o]);
      } else {
        walk_standard(pos + 1, apply_outcome(ce, pos, o, st),
                      probability * dist[o]);
      }
      prefix.pop_back();
    }
  }
};

}  // namespace

JointDistribution enumerate_joint(const ExperimentSpec& spec,
                                  std::uint64_t max_assignments) {
  const CompiledExperiment ce = compile(spec);
  const std::uint64_t tuples = checked_tuple_count(ce, max_assignments);
  Enumerator enumerator(ce);
  enumerator.result.event_order = ce.event_ids();
  enumerator.result.rows.reserve(tuples);
  if (spec.engine == EngineKind::Causal) {
    enumerator.walk_causal(0, 1.0);
  } else {
    enumerator.walk_standard(0, RawState::from(spec.initial_state), 1.0);
  }
  return std::move(enumerator.result);
}

namespace {

struct Sampler {
  const CompiledExperiment& ce;
  const bool standard;
  const std::size_t n_events;
  std::vector<double> uniforms;       // [run * n_events + event]
  std::vector<std::uint32_t> perm;    // run indices, partitioned in place
  std::vector<std::uint32_t> scratch;
  std::vector<int> outcome_of;        // per run in the active range
  std::vector<int> prefix;
  CausalMemo memo;
  RunStatistics stats;

  Sampler(const CompiledExperiment& c, std::uint64_t runs, std::uint64_t seed)
      : ce(c),
        standard(c.spec->engine == EngineKind::Standard),
        n_events(c.size()),
        memo(c.size()) {
    stats.event_order = ce.event_ids();
    stats.total_runs = runs;
    stats.seed = seed;
    uniforms.resize(runs * n_events);
    for (std::uint64_t r = 0; r < runs; ++r) {
      auto stream = Xoshiro256StarStar::substream(seed, r);
      for (std::size_t e = 0; e < n_events; ++e) {
        uniforms[r * n_events + e] = stream.uniform();
      }
    }
    perm.resize(runs);
    std::iota(perm.begin(), perm.end(), 0);
    scratch.resize(runs);
    outcome_of.resize(runs);
  }

  static int pick(const std::vector<double>& cdf, double u) {
    for (std::size_t o = 0; o + 1 < cdf.size(); ++o) {
      if (u < cdf[o]) return static_cast<int>(o);
    }
    return static_cast<int>(cdf.size()) - 1;
  }

  // Partitions the runs in [lo, hi) by the outcome drawn at `pos` and
  // recurses per realized outcome. `st` is the prefix-conditioned state for
  // the standard rule; unused under the causal rule.
  void walk(std::size_t pos, std::uint64_t lo, std::uint64_t hi,
            std::optional<RawState>& st) {
    if (pos == n_events) {
      stats.counts[prefix] += hi - lo;
      return;
    }
    const std::vector<double>& dist =
        standard ? outcome_distribution(ce, pos, *st)
                 : causal_distribution(ce, memo, pos, prefix);
    const std::size_t n_out = dist.size();
    std::vector<double> cdf(n_out);
    double cum = 0.0;
    for (std::size_t o = 0; o < n_out; ++o) {
      cum += dist[o];
      cdf[o] = cum;
    }
    cdf[n_out - 1] = 1.0;

    std::vector<std::uint64_t> bucket_counts(n_out, 0);
    for (std::uint64_t r = lo; r < hi; ++r) {
      const int o = pick(cdf, uniforms[std::uint64_t{perm[r]} * n_events + pos]);
      outcome_of[r] = o;
      ++bucket_counts[o];
    }
    std::vector<std::uint64_t> offsets(n_out, 0);
    std::uint64_t running = lo;
    for (std::size_t o = 0; o < n_out; ++o) {
      offsets[o] = running;
      running += bucket_counts[o];
    }
    {
      std::vector<std::uint64_t> cursor = offsets;
      for (std::uint64_t r = lo; r < hi; ++r) {
        scratch[cursor[outcome_of[r]]++] = perm[r];
      }
      std::copy(scratch.begin() + lo, scratch.begin() + hi,
                perm.begin() + lo);
    }

    const std::size_t realized =
        static_cast<std::size_t>(std::count_if(bucket_counts.begin(),
                                               bucket_counts.end(),
                                               [](std::uint64_t c) {
                                                 return c > 0;
                                               }));
    for (std::size_t o = 0; o < n_out; ++o) {
      if (bucket_counts[o] == 0) continue;
      const std::uint64_t b_lo = offsets[o];
      const std::uint64_t b_hi = offsets[o] + bucket_counts[o];
      prefix.push_back(static_cast<int>(o));
      if (!standard || pos + 1 == n_events) {
        std::optional<RawState> none;
        walk(pos + 1, b_lo, b_hi, standard ? st : none);
      } else if (realized == 1) {
        // Single realized branch: advance the state in place instead of
        // copying, which keeps peak memory proportional to the number of
        // branching levels.
        *st = apply_outcome(ce, pos, static_cast<int>(o), *st);
        walk(pos + 1, b_lo, b_hi, st);
      } else {
        std::optional<RawState> child =
            apply_outcome(ce, pos, static_cast<int>(o), *st);
        walk(pos + 1, b_lo, b_hi, child);
      }
      prefix.pop_back();
    }
  }
};

}  // namespace

RunStatistics sample_runs(const ExperimentSpec& spec, std::uint64_t runs,
                          std::uint64_t seed) {
  if (runs < 1) {
    throw ConfigError("sample_runs requires at least one run");
  }
  const CompiledExperiment ce = compile(spec);
  Sampler sampler(ce, runs, seed);
  if (ce.size() == 0) {
    sampler.stats.counts[{}] = runs;
    return std::move(sampler.stats);
  }
  std::optional<RawState> root;
  if (spec.engine == EngineKind::Standard) {
    root = RawState::from(spec.initial_state);
  }
  sampler.walk(0, 0, runs, root);
  return std::move(sampler.stats);
}

}  // namespace cqtsim
