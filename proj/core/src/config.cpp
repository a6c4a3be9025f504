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

#include "cqtsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqtsim/errors.hpp"
#include "cqtsim/experiments.hpp"
#include "cqtsim/version.hpp"

namespace cqtsim {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

const Json& expect_object(const Json& node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object");
  return node;
}

const Json& expect_array(const Json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array");
  return node;
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* candidate : allowed) {
      if (key == candidate) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "." + key, "unknown key");
  }
}

const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const Json& require(const Json& obj, const char* key,
                    const std::string& path) {
  const Json* node = find(obj, key);
  if (node == nullptr) fail(path, std::string("missing required key '") + key + "'");
  return *node;
}

double as_double(const Json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

std::int64_t as_integer(const Json& node, const std::string& path) {
  if (node.is_number_integer()) return node.get<std::int64_t>();
  if (node.is_number()) {
    const double value = node.get<double>();
    if (std::nearbyint(value) == value) return static_cast<std::int64_t>(value);
  }
  fail(path, "expected an integer");
}

std::string as_string(const Json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

Complex as_complex(const Json& node, const std::string& path) {
  if (!node.is_array() || node.size() != 2) {
    fail(path, "expected a complex number as a [re, im] pair");
  }
  return Complex(as_double(node[0], path + "[0]"),
                 as_double(node[1], path + "[1]"));
}

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

// ---------------------------------------------------------------------------
// models

MeasurementModel model_from_json(const Json& node, const std::string& path) {
  expect_object(node, path);
  const std::string type = as_string(require(node, "type", path), path + ".type");
  if (type == "epsilon_spin") {
    check_keys(node, path, {"type", "epsilon", "angle", "variant"});
    const double epsilon =
        as_double(require(node, "epsilon", path), path + ".epsilon");
    double angle = 0.0;
    if (const Json* a = find(node, "angle")) {
      angle = as_double(*a, path + ".angle");
    }
    SpinVariant variant = SpinVariant::Povm;
    if (const Json* v = find(node, "variant")) {
      const std::string name = as_string(*v, path + ".variant");
      if (name == "povm") {
        variant = SpinVariant::Povm;
      } else if (name == "paper_literal") {
        variant = SpinVariant::PaperLiteral;
      } else {
        fail(path + ".variant", "expected \"povm\" or \"paper_literal\"");
      }
    }
    return epsilon_spin_model(epsilon, angle, variant);
  }
  if (type == "box_detector") {
    check_keys(node, path, {"type", "epsilon"});
    const double epsilon =
        as_double(require(node, "epsilon", path), path + ".epsilon");
    return box_detector_model(epsilon);
  }
  if (type == "grw") {
    check_keys(node, path, {"type", "a", "grid"});
    const double width = as_double(require(node, "a", path), path + ".a");
    const Json& grid_node =
        expect_object(require(node, "grid", path), path + ".grid");
    check_keys(grid_node, path + ".grid", {"x_min", "x_max", "n_points"});
    LatticeGrid grid;
    grid.x_min = as_double(require(grid_node, "x_min", path + ".grid"),
                           path + ".grid.x_min");
    grid.x_max = as_double(require(grid_node, "x_max", path + ".grid"),
                           path + ".grid.x_max");
    grid.n_points = static_cast<int>(
        as_integer(require(grid_node, "n_points", path + ".grid"),
                   path + ".grid.n_points"));
    return grw_localization_model(width, grid);
  }
  fail(path + ".type",
       "unknown model type '" + type +
           "' (expected epsilon_spin, box_detector or grw)");
}

Json model_to_json(const MeasurementModel& model) {
  if (!model.params().has_value()) {
    throw ConfigError("model '" + model.name() +
                      "' is not one of the shipped model types and cannot be "
                      "serialized");
  }
  Json node = Json::object();
  const ModelParams& params = *model.params();
  if (const auto* spin = std::get_if<EpsilonSpinParams>(&params)) {
    node["type"] = "epsilon_spin";
    node["epsilon"] = spin->epsilon;
    node["angle"] = spin->angle;
    node["variant"] =
        spin->variant == SpinVariant::Povm ? "povm" : "paper_literal";
  } else if (const auto* box = std::get_if<BoxDetectorParams>(&params)) {
    node["type"] = "box_detector";
    node["epsilon"] = box->epsilon;
  } else if (const auto* grw = std::get_if<GrwParams>(&params)) {
    node["type"] = "grw";
    node["a"] = grw->width;
    node["grid"] = Json{{"x_min", grw->grid.x_min},
                        {"x_max", grw->grid.x_max},
                        {"n_points", grw->grid.n_points}};
  }
  return node;
}

// ---------------------------------------------------------------------------
// states

QuantumState state_from_json(const Json& node, const std::string& path,
                             const std::vector<int>& factor_dims) {
  expect_object(node, path);
  const std::string kind = as_string(require(node, "kind", path), path + ".kind");
  if (kind == "pure") {
    check_keys(node, path, {"kind", "amplitudes"});
    const Json& amps =
        expect_array(require(node, "amplitudes", path), path + ".amplitudes");
    Vector psi(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) {
      psi(i) = as_complex(amps[i],
                          path + ".amplitudes[" + std::to_string(i) + "]");
    }
    return QuantumState::pure(factor_dims, std::move(psi));
  }
  if (kind == "mixed") {
    check_keys(node, path, {"kind", "matrix"});
    const Json& rows =
        expect_array(require(node, "matrix", path), path + ".matrix");
    Matrix rho(rows.size(), rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string row_path = path + ".matrix[" + std::to_string(r) + "]";
      const Json& row = expect_array(rows[r], row_path);
      if (row.size() != rows.size()) {
        fail(row_path, "density matrix rows must all have the same length");
      }
      for (std::size_t c = 0; c < row.size(); ++c) {
        rho(r, c) = as_complex(row[c], row_path + "[" + std::to_string(c) + "]");
      }
    }
    return QuantumState::mixed(factor_dims, std::move(rho));
  }
  fail(path + ".kind", "expected \"pure\" or \"mixed\"");
}

Json state_to_json(const QuantumState& state) {
  Json node = Json::object();
  if (state.is_pure()) {
    node["kind"] = "pure";
    Json amps = Json::array();
    for (std::int64_t i = 0; i < state.dim(); ++i) {
      amps.push_back(complex_to_json(state.amplitudes()(i)));
    }
    node["amplitudes"] = std::move(amps);
  } else {
    node["kind"] = "mixed";
    Json rows = Json::array();
    for (std::int64_t r = 0; r < state.dim(); ++r) {
      Json row = Json::array();
      for (std::int64_t c = 0; c < state.dim(); ++c) {
        row.push_back(complex_to_json(state.density()(r, c)));
      }
      rows.push_back(std::move(row));
    }
    node["matrix"] = std::move(rows);
  }
  return node;
}

// ---------------------------------------------------------------------------
// explicit experiments

ExperimentSpec experiment_from_json_node(const Json& node,
                                         const std::string& path) {
  expect_object(node, path);
  check_keys(node, path,
             {"label", "factor_dims", "initial_state", "events", "models"});

  ExperimentSpec spec;
  if (const Json* label = find(node, "label")) {
    spec.label = as_string(*label, path + ".label");
  } else {
    spec.label = "explicit";
  }

  const Json& dims =
      expect_array(require(node, "factor_dims", path), path + ".factor_dims");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    spec.factor_dims.push_back(static_cast<int>(
        as_integer(dims[i], path + ".factor_dims[" + std::to_string(i) + "]")));
  }

  const Json& models =
      expect_object(require(node, "models", path), path + ".models");
  for (const auto& [name, model_node] : models.items()) {
    spec.models.emplace(
        name, model_from_json(model_node, path + ".models." + name));
  }

  const Json& events =
      expect_array(require(node, "events", path), path + ".events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string event_path =
        path + ".events[" + std::to_string(i) + "]";
    const Json& event_node = expect_object(events[i], event_path);
    check_keys(event_node, event_path, {"id", "t", "x", "factor", "model"});
    SpacetimeEvent event;
    event.id = as_string(require(event_node, "id", event_path),
                         event_path + ".id");
    event.t = as_double(require(event_node, "t", event_path),
                        event_path + ".t");
    const Json& coords =
        expect_array(require(event_node, "x", event_path), event_path + ".x");
    for (std::size_t c = 0; c < coords.size(); ++c) {
      event.x.push_back(as_double(
          coords[c], event_path + ".x[" + std::to_string(c) + "]"));
    }
    event.factor_index = static_cast<int>(
        as_integer(require(event_node, "factor", event_path),
                   event_path + ".factor"));
    event.model_ref = as_string(require(event_node, "model", event_path),
                                event_path + ".model");
    spec.events.push_back(std::move(event));
  }

  spec.initial_state = state_from_json(require(node, "initial_state", path),
                                       path + ".initial_state",
                                       spec.factor_dims);
  return spec;
}

Json experiment_to_json_node(const ExperimentSpec& spec) {
  Json node = Json::object();
  node["label"] = spec.label;
  node["factor_dims"] = spec.factor_dims;
  node["initial_state"] = state_to_json(spec.initial_state);
  Json events = Json::array();
  for (const auto& event : spec.events) {
    events.push_back(Json{{"id", event.id},
                          {"t", event.t},
                          {"x", event.x},
                          {"factor", event.factor_index},
                          {"model", event.model_ref}});
  }
  node["events"] = std::move(events);
  Json models = Json::object();
  for (const auto& [name, model] : spec.models) {
    models[name] = model_to_json(model);
  }
  node["models"] = std::move(models);
  return node;
}

// ---------------------------------------------------------------------------
// presets

const PresetInfo& lookup_preset(const std::string& name,
                                const std::string& path) {
  for (const PresetInfo& info : preset_registry()) {
    if (info.name == name) return info;
  }
  std::ostringstream known;
  for (const PresetInfo& info : preset_registry()) {
    known << " " << info.name;
  }
  fail(path, "unknown preset '" + name + "' (available:" + known.str() + ")");
}

int integral_param(const std::map<std::string, double>& params,
                   const std::string& key, const std::string& path) {
  const double value = params.at(key);
  if (std::nearbyint(value) != value) {
    fail(path + "." + key, "expected an integer");
  }
  return static_cast<int>(value);
}

std::vector<ExperimentSpec> build_preset(const PresetInvocation& invocation,
                                         const std::string& path) {
  const auto& p = invocation.params;
  if (invocation.name == "singlet") {
    return {preset_singlet(p.at("epsilon"), p.at("separation"))};
  }
  if (invocation.name == "sequential_drift") {
    return {preset_sequential_drift(integral_param(p, "n_per_wing", path),
                                    p.at("epsilon"))};
  }
  if (invocation.name == "reversion") {
    return {preset_reversion(integral_param(p, "n_per_wing", path),
                             p.at("epsilon"))};
  }
  if (invocation.name == "n_box") {
    return {preset_n_box(integral_param(p, "n_boxes", path), p.at("epsilon"))};
  }
  if (invocation.name == "chsh") {
    const ChshAngles angles = {p.at("angle_a"), p.at("angle_a_prime"),
                               p.at("angle_b"), p.at("angle_b_prime")};
    return preset_chsh(p.at("epsilon"), angles).settings;
  }
  fail(path, "unknown preset '" + invocation.name + "'");
}

PresetInvocation preset_from_json(const Json& node, const std::string& path) {
  check_keys(node, path, {"preset", "params"});
  PresetInvocation invocation;
  invocation.name =
      as_string(require(node, "preset", path), path + ".preset");
  const PresetInfo& info = lookup_preset(invocation.name, path + ".preset");
  for (const PresetParamInfo& param : info.params) {
    invocation.params[param.key] = param.default_value;
  }
  if (const Json* params = find(node, "params")) {
    expect_object(*params, path + ".params");
    for (const auto& [key, value] : params->items()) {
      if (invocation.params.find(key) == invocation.params.end()) {
        fail(path + ".params." + key,
             "unknown parameter for preset '" + invocation.name + "'");
      }
      invocation.params[key] =
          as_double(value, path + ".params." + key);
    }
  }
  return invocation;
}

}  // namespace

std::vector<EngineKind> engines_for(EngineChoice choice) {
  switch (choice) {
    case EngineChoice::Causal:
      return {EngineKind::Causal};
    case EngineChoice::Standard:
      return {EngineKind::Standard};
    case EngineChoice::Both:
      return {EngineKind::Causal, EngineKind::Standard};
  }
  return {};
}

ResolvedConfig parse_config_text(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string path = "$";
  expect_object(root, path);
  check_keys(root, path,
             {"schema_version", "experiment", "engine", "mode", "runs",
              "seed", "output"});

  ResolvedConfig config;
  config.schema_version = static_cast<int>(as_integer(
      require(root, "schema_version", path), path + ".schema_version"));
  if (config.schema_version != kConfigSchemaVersion) {
    fail(path + ".schema_version",
         "unsupported schema version (expected " +
             std::to_string(kConfigSchemaVersion) + ")");
  }

  const Json& experiment = expect_object(require(root, "experiment", path),
                                         path + ".experiment");
  if (find(experiment, "preset") != nullptr) {
    config.preset = preset_from_json(experiment, path + ".experiment");
    config.experiments = build_preset(*config.preset, path + ".experiment");
  } else {
    config.experiments = {
        experiment_from_json_node(experiment, path + ".experiment")};
  }

  if (const Json* engine = find(root, "engine")) {
    const std::string name = as_string(*engine, path + ".engine");
    if (name == "causal") {
      config.engine = EngineChoice::Causal;
    } else if (name == "standard") {
      config.engine = EngineChoice::Standard;
    } else if (name == "both") {
      config.engine = EngineChoice::Both;
    } else {
      fail(path + ".engine", "expected \"causal\", \"standard\" or \"both\"");
    }
  }

  if (const Json* mode = find(root, "mode")) {
    const std::string name = as_string(*mode, path + ".mode");
    if (name == "enumerate") {
      config.mode = RunMode::Enumerate;
    } else if (name == "sample") {
      config.mode = RunMode::Sample;
    } else {
      fail(path + ".mode", "expected \"enumerate\" or \"sample\"");
    }
  }

  if (const Json* runs = find(root, "runs")) {
    const std::int64_t value = as_integer(*runs, path + ".runs");
    if (value < 1) fail(path + ".runs", "must be at least 1");
    config.runs = static_cast<std::uint64_t>(value);
  }
  if (config.mode == RunMode::Sample && !config.runs.has_value()) {
    fail(path, "missing required key 'runs' (mode is \"sample\")");
  }

  if (const Json* seed = find(root, "seed")) {
    const std::int64_t value = as_integer(*seed, path + ".seed");
    if (value < 0) fail(path + ".seed", "must be nonnegative");
    config.seed = static_cast<std::uint64_t>(value);
  }

  if (const Json* output = find(root, "output")) {
    expect_object(*output, path + ".output");
    check_keys(*output, path + ".output", {"path", "format"});
    OutputSpec out;
    out.path = as_string(require(*output, "path", path + ".output"),
                         path + ".output.path");
    if (const Json* format = find(*output, "format")) {
      const std::string name = as_string(*format, path + ".output.format");
      if (name == "json") {
        out.format = OutputFormat::Json;
      } else if (name == "csv") {
        out.format = OutputFormat::Csv;
      } else {
        fail(path + ".output.format", "expected \"json\" or \"csv\"");
      }
    }
    config.output = std::move(out);
  }

  for (const ExperimentSpec& spec : config.experiments) {
    ExperimentSpec probe = spec;
    probe.engine = EngineKind::Standard;  // locality is checked per engine
    validate_experiment(probe);
  }
  return config;
}

ResolvedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " [config file: " + path + "]");
  }
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  return experiment_to_json_node(spec).dump(2);
}

ExperimentSpec experiment_from_json(const std::string& json_text) {
  Json node;
  try {
    node = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("experiment is not valid JSON: ") +
                      e.what());
  }
  return experiment_from_json_node(node, "$");
}

std::string config_experiment_echo(const ResolvedConfig& config) {
  if (config.preset.has_value()) {
    Json node = Json::object();
    node["preset"] = config.preset->name;
    Json params = Json::object();
    for (const auto& [key, value] : config.preset->params) {
      params[key] = value;
    }
    node["params"] = std::move(params);
    return node.dump(2);
  }
  return experiment_to_json(config.experiments.front());
}

}  // namespace cqtsim
