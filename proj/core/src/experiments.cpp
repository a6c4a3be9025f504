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

#include "cqtsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cqtsim/errors.hpp"
#include "cqtsim/statistics.hpp"

namespace cqtsim {

namespace {

std::string padded_id(const std::string& prefix, int k, int width) {
  std::ostringstream out;
  out << prefix;
  std::string digits = std::to_string(k);
  for (int i = static_cast<int>(digits.size()); i < width; ++i) out << '0';
  out << digits;
  return out.str();
}

int digit_width(int n) {
  return static_cast<int>(std::to_string(std::max(n, 1)).size());
}

Vector singlet_amplitudes() {
  Vector psi = Vector::Zero(4);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  psi(1) = inv_sqrt2;   // |up>_L |down>_R
  psi(2) = -inv_sqrt2;  // |down>_L |up>_R
  return psi;
}

// Two chains of n timelike measurements at x = -+ separation, one per wing.
// With separation = max(n, 1) every cross-wing pair is spacelike.
std::vector<SpacetimeEvent> wing_chain_events(int n_per_wing,
                                              const std::string& model_name) {
  const double separation = std::max(n_per_wing, 1);
  const int width = digit_width(n_per_wing);
  std::vector<SpacetimeEvent> events;
  for (int k = 0; k < n_per_wing; ++k) {
    events.push_back({padded_id("L", k + 1, width), static_cast<double>(k),
                      {-separation}, 0, model_name});
    events.push_back({padded_id("R", k + 1, width), static_cast<double>(k),
                      {separation}, 1, model_name});
  }
  return events;
}

std::size_t index_of(const DistributionTable& table, const std::string& id) {
  for (std::size_t i = 0; i < table.event_order.size(); ++i) {
    if (table.event_order[i] == id) return i;
  }
  std::ostringstream msg;
  msg << "event '" << id << "' not present in the distribution table";
  throw ConfigError(msg.str());
}

DistributionTable enumerate_as(const ExperimentSpec& spec, EngineKind engine) {
  ExperimentSpec copy = spec;
  copy.engine = engine;
  return to_table(enumerate_joint(copy));
}

DistributionTable sample_as(const ExperimentSpec& spec, EngineKind engine,
                            std::uint64_t runs, std::uint64_t seed) {
  ExperimentSpec copy = spec;
  copy.engine = engine;
  return to_table(sample_runs(copy, runs, seed));
}

ComparisonRow make_row(std::string statistic, EngineKind bound,
                       double causal_value, double standard_value,
                       double reference, double tolerance,
                       ToleranceKind kind) {
  ComparisonRow row;
  row.statistic = std::move(statistic);
  row.bound_engine = bound;
  row.causal_value = causal_value;
  row.standard_value = standard_value;
  row.reference = reference;
  row.tolerance = tolerance;
  row.kind = kind;
  const double value =
      bound == EngineKind::Causal ? causal_value : standard_value;
  switch (kind) {
    case ToleranceKind::Within:
      row.deviation = std::abs(value - reference);
      row.pass = row.deviation <= tolerance;
      break;
    case ToleranceKind::AtLeast:
      row.deviation = reference - value;
      row.pass = value >= reference;
      break;
    case ToleranceKind::AtMost:
      row.deviation = value - reference;
      row.pass = value <= reference;
      break;
  }
  return row;
}

void finish(ComparisonReport& report) {
  report.all_pass = std::all_of(report.rows.begin(), report.rows.end(),
                                [](const ComparisonRow& r) { return r.pass; });
}

}  // namespace

ExperimentSpec preset_singlet(double epsilon, double separation) {
  if (!(separation > 0.0)) {
    throw ConfigError("preset_singlet: separation must be positive");
  }
  ExperimentSpec spec;
  spec.label = "singlet";
  spec.factor_dims = {2, 2};
  spec.initial_state = QuantumState::pure({2, 2}, singlet_amplitudes());
  spec.models.emplace("spin_z", epsilon_spin_model(epsilon));
  spec.events.push_back({"L", 0.0, {-separation}, 0, "spin_z"});
  spec.events.push_back({"R", 0.0, {separation}, 1, "spin_z"});
  return spec;
}

ExperimentSpec preset_sequential_drift(int n_per_wing, double epsilon) {
  if (n_per_wing < 1) {
    throw ConfigError("preset_sequential_drift: n_per_wing must be >= 1");
  }
  ExperimentSpec spec;
  spec.label = "sequential_drift";
  spec.factor_dims = {2, 2};
  spec.initial_state = QuantumState::pure({2, 2}, singlet_amplitudes());
  spec.models.emplace(
      "spin_paper",
      epsilon_spin_model(epsilon, 0.0, SpinVariant::PaperLiteral));
  spec.events = wing_chain_events(n_per_wing, "spin_paper");
  return spec;
}

ExperimentSpec preset_reversion(int n_per_wing, double epsilon) {
  if (n_per_wing < 0) {
    throw ConfigError("preset_reversion: n_per_wing must be >= 0");
  }
  ExperimentSpec spec;
  spec.label = "reversion";
  spec.factor_dims = {2, 2};
  spec.initial_state = QuantumState::pure({2, 2}, singlet_amplitudes());
  spec.models.emplace(
      "spin_paper",
      epsilon_spin_model(epsilon, 0.0, SpinVariant::PaperLiteral));
  spec.events = wing_chain_events(n_per_wing, "spin_paper");
  // Post-merge events: late enough that both full chains are inside their
  // past light cones (t - t_k >= 2 * separation for every wing event).
  const double separation = std::max(n_per_wing, 1);
  const double t_post = 3.0 * separation;
  spec.events.push_back({"L_post", t_post, {-separation}, 0, "spin_paper"});
  spec.events.push_back({"R_post", t_post, {separation}, 1, "spin_paper"});
  return spec;
}

ExperimentSpec preset_n_box(int n_boxes, double epsilon) {
  if (n_boxes < 2) {
    throw ConfigError("preset_n_box: n_boxes must be >= 2");
  }
  if (n_boxes > 22) {
    throw ConfigError("preset_n_box: n_boxes above 22 exceeds desk scale");
  }
  ExperimentSpec spec;
  spec.label = "n_box";
  spec.factor_dims.assign(n_boxes, 2);
  const std::int64_t dim = std::int64_t{1} << n_boxes;
  Vector psi = Vector::Zero(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_boxes));
  for (int i = 0; i < n_boxes; ++i) {
    // factor i in state |inside>, all others |outside>
    psi(std::int64_t{1} << (n_boxes - 1 - i)) = amp;
  }
  spec.initial_state = QuantumState::pure(spec.factor_dims, std::move(psi));
  spec.models.emplace("box", box_detector_model(epsilon));
  const int width = digit_width(n_boxes);
  for (int i = 0; i < n_boxes; ++i) {
    spec.events.push_back({padded_id("B", i + 1, width), 0.0,
                           {static_cast<double>(i)}, i, "box"});
  }
  return spec;
}

ChshAngles default_chsh_angles() {
  using std::numbers::pi;
  return {0.0, pi / 2.0, pi / 4.0, 3.0 * pi / 4.0};
}

ChshFamily preset_chsh(double epsilon, const ChshAngles& angles) {
  const double a = angles[0];
  const double a_prime = angles[1];
  const double b = angles[2];
  const double b_prime = angles[3];
  const std::array<std::pair<double, double>, 4> pairs = {
      std::pair{a, b}, std::pair{a, b_prime}, std::pair{a_prime, b},
      std::pair{a_prime, b_prime}};
  const std::array<const char*, 4> labels = {"chsh_ab", "chsh_ab'",
                                             "chsh_a'b", "chsh_a'b'"};
  ChshFamily family;
  family.epsilon = epsilon;
  family.angles = angles;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ExperimentSpec spec;
    spec.label = labels[i];
    spec.factor_dims = {2, 2};
    spec.initial_state = QuantumState::pure({2, 2}, singlet_amplitudes());
    spec.models.emplace("spin_L", epsilon_spin_model(epsilon, pairs[i].first));
    spec.models.emplace("spin_R",
                        epsilon_spin_model(epsilon, pairs[i].second));
    spec.events.push_back({"L", 0.0, {-1.0}, 0, "spin_L"});
    spec.events.push_back({"R", 0.0, {1.0}, 1, "spin_R"});
    family.settings.push_back(std::move(spec));
  }
  return family;
}

const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> registry = {
      {"singlet",
       "spacelike z-axis spin pair on a singlet: causal outcomes uniform and "
       "uncorrelated, standard outcomes anticorrelated",
       {{"epsilon", "detector error in (0, 1/2)", 0.01},
        {"separation", "half-distance between the wings", 1.0}}},
      {"sequential_drift",
       "timelike measurement chains on both wings of a singlet; repeated "
       "outcomes drift the local conditionals towards certainty",
       {{"n_per_wing", "measurements per wing (>= 1)", 2},
        {"epsilon", "detector error in (0, 1/2)", 0.1}}},
      {"reversion",
       "wing chains plus one post-merge measurement per wing whose past cone "
       "covers both chains; local statistics revert to the bare marginals",
       {{"n_per_wing", "measurements per wing (>= 0)", 3},
        {"epsilon", "detector error in (0, 1/2)", 0.01}}},
      {"n_box",
       "one particle in equal superposition over n spacelike boxes with "
       "click detectors; causal clicks are independent and Poissonize",
       {{"n_boxes", "number of boxes (2..22)", 4},
        {"epsilon", "detector error in (0, 1)", 1e-3}}},
      {"chsh",
       "four analyzer-setting singlet runs combined into the CHSH S "
       "statistic; S = 0 under the causal rule",
       {{"epsilon", "detector error in (0, 1/2)", 1e-3},
        {"angle_a", "first L analyzer angle (radians)", 0.0},
        {"angle_a_prime", "second L analyzer angle", std::numbers::pi / 2},
        {"angle_b", "first R analyzer angle", std::numbers::pi / 4},
        {"angle_b_prime", "second R analyzer angle",
         3 * std::numbers::pi / 4}}},
  };
  return registry;
}

const char* tolerance_kind_name(ToleranceKind kind) {
  switch (kind) {
    case ToleranceKind::Within:
      return "within";
    case ToleranceKind::AtLeast:
      return "at_least";
    case ToleranceKind::AtMost:
      return "at_most";
  }
  return "within";
}

ComparisonReport compare_singlet(double epsilon, double separation) {
  const ExperimentSpec spec = preset_singlet(epsilon, separation);
  const DistributionTable causal = enumerate_as(spec, EngineKind::Causal);
  const DistributionTable standard = enumerate_as(spec, EngineKind::Standard);

  const auto joint_extremes = [](const DistributionTable& t) {
    double lo = 1.0, hi = 0.0;
    for (const auto& [_, p] : t.rows) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    return std::pair{lo, hi};
  };
  const auto [c_lo, c_hi] = joint_extremes(causal);
  const auto [s_lo, s_hi] = joint_extremes(standard);
  const auto max_dev_quarter = [](double lo, double hi) {
    return std::max(std::abs(lo - 0.25), std::abs(hi - 0.25));
  };

  const std::size_t left = index_of(causal, "L");
  const std::size_t right = index_of(causal, "R");
  const auto anti_sum = [&](const DistributionTable& t) {
    const std::pair<std::size_t, int> ud[] = {{left, 0}, {right, 1}};
    const std::pair<std::size_t, int> du[] = {{left, 1}, {right, 0}};
    return event_probability(t, ud) + event_probability(t, du);
  };
  const auto same_sum = [&](const DistributionTable& t) {
    const std::pair<std::size_t, int> uu[] = {{left, 0}, {right, 0}};
    const std::pair<std::size_t, int> dd[] = {{left, 1}, {right, 1}};
    return event_probability(t, uu) + event_probability(t, dd);
  };

  ComparisonReport report;
  report.experiment = "singlet";
  report.rows.push_back(make_row(
      "max |P(joint) - 1/4|", EngineKind::Causal, max_dev_quarter(c_lo, c_hi),
      max_dev_quarter(s_lo, s_hi), 0.0, 5e-3, ToleranceKind::Within));
  report.rows.push_back(make_row("spread of joint probabilities",
                                 EngineKind::Causal, c_hi - c_lo, s_hi - s_lo,
                                 0.0, 1e-12, ToleranceKind::Within));
  report.rows.push_back(make_row(
      "P(up,down) + P(down,up)", EngineKind::Standard, anti_sum(causal),
      anti_sum(standard), 1.0 - 4.0 * epsilon, 0.0, ToleranceKind::AtLeast));
  report.rows.push_back(make_row(
      "P(up,up) + P(down,down)", EngineKind::Standard, same_sum(causal),
      same_sum(standard), 4.0 * epsilon, 0.0, ToleranceKind::AtMost));
  finish(report);
  return report;
}

ComparisonReport compare_sequential_drift(int n_per_wing, double epsilon) {
  if (n_per_wing < 2) {
    throw ConfigError(
        "compare_sequential_drift: needs n_per_wing >= 2 to form the "
        "repeated-outcome conditional");
  }
  const ExperimentSpec spec = preset_sequential_drift(n_per_wing, epsilon);
  const DistributionTable causal = enumerate_as(spec, EngineKind::Causal);
  const DistributionTable standard = enumerate_as(spec, EngineKind::Standard);

  const int width = digit_width(n_per_wing);
  const std::size_t first = index_of(causal, padded_id("L", 1, width));
  const std::size_t second = index_of(causal, padded_id("L", 2, width));
  const std::pair<std::size_t, int> given[] = {{first, 0}};
  const double causal_cond =
      conditional_probability(causal, second, 0, given);
  const double standard_cond =
      conditional_probability(standard, second, 0, given);

  const double one = 1.0 - epsilon;
  const double reference = (one * one * one + epsilon * epsilon * epsilon) /
                           (one * one + epsilon * epsilon);
  const double expansion = 1.0 - epsilon - epsilon * epsilon;

  ComparisonReport report;
  report.experiment = "sequential_drift";
  report.rows.push_back(make_row(
      "P(up at 2nd L | up at 1st L)", EngineKind::Causal, causal_cond,
      standard_cond, reference, 1e-12, ToleranceKind::Within));
  report.rows.push_back(make_row(
      "|conditional - (1 - eps - eps^2)|", EngineKind::Causal,
      std::abs(causal_cond - expansion), std::abs(standard_cond - expansion),
      2.0 * epsilon * epsilon * epsilon, 0.0, ToleranceKind::AtMost));
  finish(report);
  return report;
}

ComparisonReport compare_reversion(int n_per_wing, double epsilon) {
  const ExperimentSpec spec = preset_reversion(n_per_wing, epsilon);
  const DistributionTable causal = enumerate_as(spec, EngineKind::Causal);
  const DistributionTable standard = enumerate_as(spec, EngineKind::Standard);

  ComparisonReport report;
  report.experiment = "reversion";
  for (const char* id : {"L_post", "R_post"}) {
    const std::size_t post = index_of(causal, id);
    const double causal_p = marginal(causal, post, 2)[0];
    const double standard_p = marginal(standard, post, 2)[0];
    std::ostringstream name;
    name << "post-merge P(up) at " << id;
    report.rows.push_back(make_row(name.str(), EngineKind::Causal, causal_p,
                                   standard_p, 0.5, 0.02,
                                   ToleranceKind::Within));
  }
  if (n_per_wing >= 2) {
    const int width = digit_width(n_per_wing);
    std::vector<std::pair<std::size_t, int>> run;
    for (int k = 1; k < n_per_wing; ++k) {
      run.emplace_back(index_of(causal, padded_id("L", k, width)), 0);
    }
    const std::size_t last =
        index_of(causal, padded_id("L", n_per_wing, width));
    const double causal_cond = conditional_probability(causal, last, 0, run);
    const double standard_cond =
        conditional_probability(standard, last, 0, run);
    report.rows.push_back(make_row(
        "pre-merge P(up at last L | up-run)", EngineKind::Causal, causal_cond,
        standard_cond, 1.0 - epsilon - 2.0 * epsilon * epsilon, 0.0,
        ToleranceKind::AtLeast));
  }
  finish(report);
  return report;
}

ComparisonReport compare_n_box(int n_boxes, double epsilon,
                               std::optional<std::uint64_t> runs,
                               std::uint64_t seed) {
  const ExperimentSpec spec = preset_n_box(n_boxes, epsilon);
  ComparisonReport report;
  report.experiment = "n_box";

  if (n_boxes <= 12) {
    const DistributionTable causal = enumerate_as(spec, EngineKind::Causal);
    const DistributionTable standard =
        enumerate_as(spec, EngineKind::Standard);

    const auto independence_residual = [&](const DistributionTable& t) {
      std::vector<std::vector<double>> marginals;
      for (std::size_t e = 0; e < t.event_order.size(); ++e) {
        marginals.push_back(marginal(t, e, 2));
      }
      double residual = 0.0;
      for (const auto& [tuple, p] : t.rows) {
        double product = 1.0;
        for (std::size_t e = 0; e < tuple.size(); ++e) {
          product *= marginals[e][tuple[e]];
        }
        residual = std::max(residual, std::abs(p - product));
      }
      return residual;
    };
    report.rows.push_back(make_row(
        "max |P(joint) - product of marginals|", EngineKind::Causal,
        independence_residual(causal), independence_residual(standard), 0.0,
        1e-12, ToleranceKind::Within));

    const std::vector<double> causal_hist = click_histogram(causal);
    const std::vector<double> standard_hist = click_histogram(standard);
    report.rows.push_back(make_row(
        "P(exactly 1 click)", EngineKind::Standard, causal_hist[1],
        standard_hist[1], 1.0 - 10.0 * epsilon, 0.0, ToleranceKind::AtLeast));
    report.rows.push_back(make_row(
        "P(click count != 1)", EngineKind::Standard, 1.0 - causal_hist[1],
        1.0 - standard_hist[1], 10.0 * epsilon, 0.0, ToleranceKind::AtMost));
    if (n_boxes == 2) {
      report.rows.push_back(make_row(
          "P(2 clicks)", EngineKind::Causal, causal_hist[2], standard_hist[2],
          0.25, 0.01, ToleranceKind::Within));
      report.rows.push_back(make_row(
          "P(2 clicks)", EngineKind::Standard, causal_hist[2],
          standard_hist[2], 10.0 * epsilon, 0.0, ToleranceKind::AtMost));
    }
  }

  if (runs.has_value()) {
    const DistributionTable causal =
        sample_as(spec, EngineKind::Causal, *runs, seed);
    const DistributionTable standard =
        sample_as(spec, EngineKind::Standard, *runs, seed);
    const std::vector<double> causal_hist = click_histogram(causal);
    const std::vector<double> standard_hist = click_histogram(standard);

    std::vector<double> truncated(7), poisson(7);
    for (int n = 0; n <= 6; ++n) {
      truncated[n] = n < static_cast<int>(causal_hist.size())
                         ? causal_hist[n]
                         : 0.0;
      poisson[n] = poisson_reference(n);
    }
    report.rows.push_back(make_row(
        "TV(click histogram, Poisson(1)) for n <= 6", EngineKind::Causal,
        total_variation(truncated, poisson), 0.0, 0.03, 0.0,
        ToleranceKind::AtMost));

    const auto mean_row = [&](const DistributionTable& t, EngineKind engine) {
      const std::vector<double> hist = click_histogram(t);
      double mean = 0.0, second_moment = 0.0;
      for (std::size_t n = 0; n < hist.size(); ++n) {
        mean += n * hist[n];
        second_moment += static_cast<double>(n) * n * hist[n];
      }
      const double variance = std::max(second_moment - mean * mean, 0.0);
      const double std_error =
          std::sqrt(variance / static_cast<double>(*runs));
      std::ostringstream name;
      name << "mean click count (" << engine_name(engine) << ")";
      const double causal_value =
          engine == EngineKind::Causal ? mean : 0.0;
      const double standard_value =
          engine == EngineKind::Standard ? mean : 0.0;
      return make_row(name.str(), engine, causal_value, standard_value, 1.0,
                      3.0 * std_error, ToleranceKind::Within);
    };
    report.rows.push_back(mean_row(causal, EngineKind::Causal));
    report.rows.push_back(mean_row(standard, EngineKind::Standard));
  }

  finish(report);
  return report;
}

ComparisonReport compare_chsh(double epsilon, const ChshAngles& angles) {
  const ChshFamily family = preset_chsh(epsilon, angles);
  std::array<double, 4> causal_e{};
  std::array<double, 4> standard_e{};
  std::array<double, 4> ideal_e{};
  const std::array<std::pair<double, double>, 4> pairs = {
      std::pair{angles[0], angles[2]}, std::pair{angles[0], angles[3]},
      std::pair{angles[1], angles[2]}, std::pair{angles[1], angles[3]}};
  const double contrast = (1.0 - 2.0 * epsilon) * (1.0 - 2.0 * epsilon);

  ComparisonReport report;
  report.experiment = "chsh";
  for (std::size_t i = 0; i < family.settings.size(); ++i) {
    const DistributionTable causal =
        enumerate_as(family.settings[i], EngineKind::Causal);
    const DistributionTable standard =
        enumerate_as(family.settings[i], EngineKind::Standard);
    const std::size_t left = index_of(causal, "L");
    const std::size_t right = index_of(causal, "R");
    causal_e[i] = correlator(causal, left, right);
    standard_e[i] = correlator(standard, left, right);
    ideal_e[i] = -contrast * std::cos(pairs[i].first - pairs[i].second);

    std::ostringstream name;
    name << "E(" << family.settings[i].label << ")";
    report.rows.push_back(make_row(name.str() + " [causal]",
                                   EngineKind::Causal, causal_e[i],
                                   standard_e[i], 0.0, 1e-12,
                                   ToleranceKind::Within));
    report.rows.push_back(make_row(name.str() + " [standard]",
                                   EngineKind::Standard, causal_e[i],
                                   standard_e[i], ideal_e[i], 1e-9,
                                   ToleranceKind::Within));
  }
  const double causal_s =
      chsh_s(causal_e[0], causal_e[1], causal_e[2], causal_e[3]);
  const double standard_s =
      chsh_s(standard_e[0], standard_e[1], standard_e[2], standard_e[3]);
  const double ideal_s = chsh_s(ideal_e[0], ideal_e[1], ideal_e[2], ideal_e[3]);
  report.rows.push_back(make_row("CHSH S", EngineKind::Causal, causal_s,
                                 standard_s, 0.0, 1e-12,
                                 ToleranceKind::Within));
  report.rows.push_back(make_row("CHSH S vs noisy ideal",
                                 EngineKind::Standard, causal_s, standard_s,
                                 ideal_s, 1e-9, ToleranceKind::Within));
  report.rows.push_back(make_row("CHSH S", EngineKind::Standard, causal_s,
                                 standard_s, 2.7, 0.0,
                                 ToleranceKind::AtLeast));
  finish(report);
  return report;
}

}  // namespace cqtsim
