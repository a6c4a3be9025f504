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

#include "cqtsim/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

#include "cqtsim/errors.hpp"
#include "cqtsim/statistics.hpp"
#include "cqtsim/version.hpp"

namespace cqtsim {

namespace {

using Json = nlohmann::ordered_json;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

std::string significant17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Whether every event's model labels its second outcome "click" (the n-box
// detectors); click-count statistics only make sense then.
bool all_click_models(const ExperimentSpec& spec) {
  if (spec.events.empty()) return false;
  for (const auto& event : spec.events) {
    const auto it = spec.models.find(event.model_ref);
    if (it == spec.models.end()) return false;
    const auto& outcomes = it->second.outcomes();
    if (outcomes.size() != 2 || outcomes[1].outcome_label != "click") {
      return false;
    }
  }
  return true;
}

const MeasurementModel& model_for(const ExperimentSpec& spec,
                                  const std::string& event_id) {
  for (const auto& event : spec.events) {
    if (event.id == event_id) {
      return spec.models.at(event.model_ref);
    }
  }
  throw ConfigError("unknown event id '" + event_id + "'");
}

Json table_to_json(const ExperimentSpec& spec, const DistributionTable& table,
                   const RunStatistics* counts) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& [tuple, weight] = table.rows[r];
    Json outcomes = Json::object();
    for (std::size_t e = 0; e < table.event_order.size(); ++e) {
      const MeasurementModel& model = model_for(spec, table.event_order[e]);
      outcomes[table.event_order[e]] =
          model.outcomes()[tuple[e]].outcome_label;
    }
    Json row = Json::object();
    row["outcomes"] = std::move(outcomes);
    if (counts != nullptr) {
      row["count"] = counts->counts.at(tuple);
      row["frequency"] = weight;
    } else {
      row["probability"] = weight;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json statistics_to_json(const ExperimentSpec& spec,
                        const DistributionTable& table) {
  Json stats = Json::object();
  Json marginals = Json::object();
  for (std::size_t e = 0; e < table.event_order.size(); ++e) {
    const MeasurementModel& model = model_for(spec, table.event_order[e]);
    const std::vector<double> m =
        marginal(table, e, model.outcome_count());
    Json per_outcome = Json::object();
    for (int o = 0; o < model.outcome_count(); ++o) {
      per_outcome[model.outcomes()[o].outcome_label] = m[o];
    }
    marginals[table.event_order[e]] = std::move(per_outcome);
  }
  stats["marginals"] = std::move(marginals);

  if (table.event_order.size() == 2) {
    const MeasurementModel& first = model_for(spec, table.event_order[0]);
    const MeasurementModel& second = model_for(spec, table.event_order[1]);
    if (first.outcome_count() == 2 && second.outcome_count() == 2) {
      stats["correlator"] = correlator(table, 0, 1);
    }
  }

  if (all_click_models(spec)) {
    stats["click_histogram"] = click_histogram(table);
    stats["mean_clicks"] = mean_click_count(table);
  }
  return stats;
}

struct ExecutedExperiment {
  const ExperimentSpec* spec = nullptr;
  DistributionTable table;
  std::optional<RunStatistics> counts;  // sample mode only
};

std::vector<ExecutedExperiment> execute(const ResolvedConfig& config,
                                        EngineKind engine) {
  std::vector<ExecutedExperiment> executed;
  for (const ExperimentSpec& base : config.experiments) {
    ExperimentSpec spec = base;
    spec.engine = engine;
    ExecutedExperiment result;
    result.spec = &base;
    if (config.mode == RunMode::Enumerate) {
      result.table = to_table(enumerate_joint(spec));
    } else {
      RunStatistics stats = sample_runs(spec, *config.runs, config.seed);
      result.table = to_table(stats);
      result.counts = std::move(stats);
    }
    executed.push_back(std::move(result));
  }
  return executed;
}

Json engine_results_json(const ResolvedConfig& config, EngineKind engine) {
  Json block = Json::object();
  block["engine"] = engine_name(engine);
  const std::vector<ExecutedExperiment> executed = execute(config, engine);
  Json experiments = Json::array();
  for (const ExecutedExperiment& run : executed) {
    Json entry = Json::object();
    entry["label"] = run.spec->label;
    entry["table"] = table_to_json(
        *run.spec, run.table,
        run.counts.has_value() ? &*run.counts : nullptr);
    entry["statistics"] = statistics_to_json(*run.spec, run.table);
    experiments.push_back(std::move(entry));
  }
  block["experiments"] = std::move(experiments);

  // Family-level statistic: the CHSH combination over the four settings.
  if (config.preset.has_value() && config.preset->name == "chsh" &&
      executed.size() == 4) {
    std::array<double, 4> e{};
    for (std::size_t i = 0; i < 4; ++i) {
      e[i] = correlator(executed[i].table, 0, 1);
    }
    block["statistics"] = Json{{"chsh_s", chsh_s(e[0], e[1], e[2], e[3])}};
  }
  return block;
}

Json report_header(const ResolvedConfig& config, const char* command,
                   const ReportOptions& options) {
  Json report = Json::object();
  report["schema_version"] = kReportSchemaVersion;
  report["tool"] = Json{{"name", "cqt-sim"}, {"version", kVersion}};
  if (options.include_timestamp) {
    report["timestamp"] = utc_timestamp();
  }
  report["command"] = command;
  report["engine"] = config.engine == EngineChoice::Both
                         ? "both"
                         : engine_name(engines_for(config.engine).front());
  report["mode"] =
      config.mode == RunMode::Enumerate ? "enumerate" : "sample";
  if (config.runs.has_value()) {
    report["runs"] = *config.runs;
  }
  report["seed"] = config.seed;
  report["experiment"] = Json::parse(config_experiment_echo(config));
  return report;
}

}  // namespace

std::string run_report_json(const ResolvedConfig& config,
                            const ReportOptions& options) {
  Json report = report_header(config, "run", options);
  Json results = Json::array();
  for (EngineKind engine : engines_for(config.engine)) {
    results.push_back(engine_results_json(config, engine));
  }
  report["results"] = std::move(results);
  return report.dump(2) + "\n";
}

std::string run_report_csv(const ResolvedConfig& config) {
  std::ostringstream csv;
  std::vector<std::string> ids;
  {
    const ExperimentSpec& spec = config.experiments.front();
    for (std::size_t i : topological_order(spec.events)) {
      ids.push_back(spec.events[i].id);
    }
  }

  csv << "engine,experiment";
  for (const std::string& id : ids) csv << "," << id;
  csv << (config.mode == RunMode::Enumerate ? ",probability"
                                            : ",count,frequency");
  csv << "\n";

  for (EngineKind engine : engines_for(config.engine)) {
    for (const ExecutedExperiment& run : execute(config, engine)) {
      for (std::size_t r = 0; r < run.table.rows.size(); ++r) {
        const auto& [tuple, weight] = run.table.rows[r];
        csv << engine_name(engine) << "," << run.spec->label;
        for (std::size_t e = 0; e < tuple.size(); ++e) {
          const MeasurementModel& model =
              model_for(*run.spec, run.table.event_order[e]);
          csv << "," << model.outcomes()[tuple[e]].outcome_label;
        }
        if (run.counts.has_value()) {
          csv << "," << run.counts->counts.at(tuple) << ","
              << significant17(weight);
        } else {
          csv << "," << significant17(weight);
        }
        csv << "\n";
      }
    }
  }
  return csv.str();
}

ComparisonReport compare_for(const ResolvedConfig& config) {
  if (!config.preset.has_value()) {
    throw ConfigError(
        "compare requires a preset experiment (explicit experiments have no "
        "pinned reference values)");
  }
  if (config.engine != EngineChoice::Both) {
    throw ConfigError("compare requires engine \"both\"");
  }
  const PresetInvocation& preset = *config.preset;
  const auto& p = preset.params;
  if (preset.name == "singlet") {
    return compare_singlet(p.at("epsilon"), p.at("separation"));
  }
  if (preset.name == "sequential_drift") {
    return compare_sequential_drift(static_cast<int>(p.at("n_per_wing")),
                                    p.at("epsilon"));
  }
  if (preset.name == "reversion") {
    return compare_reversion(static_cast<int>(p.at("n_per_wing")),
                             p.at("epsilon"));
  }
  if (preset.name == "n_box") {
    std::optional<std::uint64_t> runs;
    if (config.mode == RunMode::Sample) runs = config.runs;
    return compare_n_box(static_cast<int>(p.at("n_boxes")), p.at("epsilon"),
                         runs, config.seed);
  }
  if (preset.name == "chsh") {
    const ChshAngles angles = {p.at("angle_a"), p.at("angle_a_prime"),
                               p.at("angle_b"), p.at("angle_b_prime")};
    return compare_chsh(p.at("epsilon"), angles);
  }
  throw ConfigError("no comparison defined for preset '" + preset.name + "'");
}

std::string compare_report_json(const ResolvedConfig& config,
                                const ReportOptions& options) {
  const ComparisonReport comparison = compare_for(config);
  Json report = report_header(config, "compare", options);
  Json rows = Json::array();
  for (const ComparisonRow& row : comparison.rows) {
    rows.push_back(Json{{"statistic", row.statistic},
                        {"bound_engine", engine_name(row.bound_engine)},
                        {"causal_value", row.causal_value},
                        {"standard_value", row.standard_value},
                        {"reference", row.reference},
                        {"deviation", row.deviation},
                        {"tolerance", row.tolerance},
                        {"kind", tolerance_kind_name(row.kind)},
                        {"pass", row.pass}});
  }
  report["comparison"] = Json{{"experiment", comparison.experiment},
                              {"all_pass", comparison.all_pass},
                              {"rows", std::move(rows)}};
  return report.dump(2) + "\n";
}

}  // namespace cqtsim
