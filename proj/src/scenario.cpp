/* Copyright 2026 The Rangekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "rangekit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "rangekit/errors.hpp"

namespace rangekit {

const char* to_string(AgentType type) {
  switch (type) {
    case AgentType::kVehicle:
      return "vehicle";
    case AgentType::kPedestrian:
      return "pedestrian";
    case AgentType::kCyclist:
      return "cyclist";
  }
  return "unknown";
}

AgentType agent_type_from_string(const std::string& name) {
  if (name == "vehicle") return AgentType::kVehicle;
  if (name == "pedestrian") return AgentType::kPedestrian;
  if (name == "cyclist") return AgentType::kCyclist;
  throw std::invalid_argument("unknown agent type \"" + name + "\"");
}

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kScenarioSchema = "scenario_corpus";
constexpr const char* kPredictionSchema = "prediction_set";
constexpr int kSchemaVersion = 1;

std::string loc(const std::filesystem::path& path, size_t line) {
  return path.string() + ":" + std::to_string(line);
}

// Unknown fields are rejected so schema drift fails loudly instead of being
// silently ignored.
void reject_unknown(const ordered_json& obj,
                    std::initializer_list<const char*> allowed,
                    const std::string& location, const std::string& what) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw FormatError(location,
                        what + " has unknown field \"" + item.key() + "\"");
    }
  }
}

const ordered_json& require_field(const ordered_json& obj, const char* key,
                                  const std::string& location,
                                  const std::string& what) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw FormatError(location,
                      what + " is missing field \"" + std::string(key) +
                          "\"");
  }
  return *it;
}

double require_finite(const ordered_json& v, const std::string& location,
                      const std::string& what) {
  if (!v.is_number()) {
    throw FormatError(location, what + " must be a number");
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw FormatError(location, what + " must be finite");
  }
  return d;
}

int64_t require_int(const ordered_json& v, const std::string& location,
                    const std::string& what) {
  if (!v.is_number_integer()) {
    throw FormatError(location, what + " must be an integer");
  }
  return v.get<int64_t>();
}

std::string require_string(const ordered_json& v, const std::string& location,
                           const std::string& what) {
  if (!v.is_string()) {
    throw FormatError(location, what + " must be a string");
  }
  return v.get<std::string>();
}

ordered_json parse_line(const std::string& text,
                        const std::filesystem::path& path, size_t line) {
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw FormatError(loc(path, line), std::string("not valid JSON: ") +
                                           e.what());
  }
  if (!parsed.is_object()) {
    throw FormatError(loc(path, line), "record must be a JSON object");
  }
  return parsed;
}

// Reads the schema header and dispatches every following line to on_record.
template <typename Fn>
void read_jsonl(const std::filesystem::path& path, const char* schema,
                Fn on_record) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError(path.string(), "cannot open file");
  }
  std::string text;
  size_t line = 0;
  bool saw_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) {
      throw FormatError(loc(path, line), "blank line");
    }
    ordered_json parsed = parse_line(text, path, line);
    if (!saw_header) {
      const std::string location = loc(path, line);
      reject_unknown(parsed, {"schema", "version"}, location, "header");
      std::string got = require_string(
          require_field(parsed, "schema", location, "header"), location,
          "header field \"schema\"");
      if (got != schema) {
        throw FormatError(location, "schema is \"" + got +
                                        "\", expected \"" + schema + "\"");
      }
      int64_t version = require_int(
          require_field(parsed, "version", location, "header"), location,
          "header field \"version\"");
      if (version != kSchemaVersion) {
        throw FormatError(location,
                          "version " + std::to_string(version) +
                              " is not supported (expected " +
                              std::to_string(kSchemaVersion) + ")");
      }
      saw_header = true;
      continue;
    }
    on_record(parsed, line);
  }
  if (!saw_header) {
    throw FormatError(path.string(), "missing schema header line");
  }
}

TrackStep parse_step(const ordered_json& v, const std::string& location,
                     const std::string& what) {
  TrackStep step;
  if (v.is_null()) {
    return step;  // invalid step, canonical zeros
  }
  if (!v.is_object()) {
    throw FormatError(location, what + " must be null or an object");
  }
  reject_unknown(v, {"x", "y", "heading", "vx", "vy"}, location, what);
  step.x = require_finite(require_field(v, "x", location, what), location,
                          what + ".x");
  step.y = require_finite(require_field(v, "y", location, what), location,
                          what + ".y");
  step.heading = require_finite(require_field(v, "heading", location, what),
                                location, what + ".heading");
  step.vx = require_finite(require_field(v, "vx", location, what), location,
                           what + ".vx");
  step.vy = require_finite(require_field(v, "vy", location, what), location,
                           what + ".vy");
  step.valid = true;
  return step;
}

AgentTrack parse_agent(const ordered_json& v, const std::string& location,
                       const std::string& what) {
  if (!v.is_object()) {
    throw FormatError(location, what + " must be an object");
  }
  reject_unknown(v, {"id", "type", "steps"}, location, what);
  AgentTrack agent;
  agent.agent_id = require_int(require_field(v, "id", location, what),
                               location, what + ".id");
  std::string type_name = require_string(
      require_field(v, "type", location, what), location, what + ".type");
  try {
    agent.type = agent_type_from_string(type_name);
  } catch (const std::invalid_argument&) {
    throw FormatError(location, what + ".type \"" + type_name +
                                    "\" is not a known agent type");
  }
  const ordered_json& steps = require_field(v, "steps", location, what);
  if (!steps.is_array() || steps.size() != kTrackSteps) {
    throw FormatError(location,
                      what + ".steps must be an array of exactly " +
                          std::to_string(kTrackSteps) + " entries" +
                          (steps.is_array()
                               ? " (got " + std::to_string(steps.size()) + ")"
                               : ""));
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    agent.steps[i] = parse_step(steps[i], location,
                                what + ".steps[" + std::to_string(i) + "]");
  }
  return agent;
}

Scenario parse_scenario(const ordered_json& v, const std::string& location) {
  reject_unknown(v, {"scenario_id", "agents", "prediction_targets"}, location,
                 "scenario");
  Scenario s;
  s.scenario_id = require_string(
      require_field(v, "scenario_id", location, "scenario"), location,
      "scenario_id");
  if (s.scenario_id.empty()) {
    throw FormatError(location, "scenario_id must be non-empty");
  }

  const ordered_json& agents =
      require_field(v, "agents", location, "scenario");
  if (!agents.is_array()) {
    throw FormatError(location, "agents must be an array");
  }
  std::unordered_set<int64_t> agent_ids;
  for (size_t i = 0; i < agents.size(); ++i) {
    AgentTrack agent = parse_agent(agents[i], location,
                                   "agents[" + std::to_string(i) + "]");
    if (!agent_ids.insert(agent.agent_id).second) {
      throw FormatError(location, "duplicate agent id " +
                                      std::to_string(agent.agent_id));
    }
    s.agents.push_back(std::move(agent));
  }

  const ordered_json& targets =
      require_field(v, "prediction_targets", location, "scenario");
  if (!targets.is_array()) {
    throw FormatError(location, "prediction_targets must be an array");
  }
  std::unordered_set<int64_t> target_ids;
  for (size_t i = 0; i < targets.size(); ++i) {
    int64_t id = require_int(
        targets[i], location,
        "prediction_targets[" + std::to_string(i) + "]");
    if (!target_ids.insert(id).second) {
      throw FormatError(location, "duplicate prediction target id " +
                                      std::to_string(id));
    }
    if (!agent_ids.count(id)) {
      throw FormatError(location,
                        "prediction target " + std::to_string(id) +
                            " is not an agent in the scenario");
    }
    s.prediction_target_ids.push_back(id);
  }

  for (int64_t id : s.prediction_target_ids) {
    for (const AgentTrack& agent : s.agents) {
      if (agent.agent_id == id &&
          !agent.steps[static_cast<size_t>(kCurrentStep)].valid) {
        throw FormatError(location,
                          "prediction target " + std::to_string(id) +
                              " has no valid current state");
      }
    }
  }
  return s;
}

PredictionSet parse_prediction(const ordered_json& v,
                               const std::string& location) {
  reject_unknown(v, {"scenario_id", "agent_id", "trajectories"}, location,
                 "prediction");
  PredictionSet p;
  p.scenario_id = require_string(
      require_field(v, "scenario_id", location, "prediction"), location,
      "scenario_id");
  if (p.scenario_id.empty()) {
    throw FormatError(location, "scenario_id must be non-empty");
  }
  p.agent_id = require_int(
      require_field(v, "agent_id", location, "prediction"), location,
      "agent_id");

  const ordered_json& trajectories =
      require_field(v, "trajectories", location, "prediction");
  if (!trajectories.is_array() ||
      trajectories.size() != static_cast<size_t>(kNumPredictions)) {
    throw FormatError(location,
                      "trajectories must be an array of exactly " +
                          std::to_string(kNumPredictions) + " entries");
  }
  for (size_t k = 0; k < trajectories.size(); ++k) {
    const std::string what = "trajectories[" + std::to_string(k) + "]";
    const ordered_json& tj = trajectories[k];
    if (!tj.is_object()) {
      throw FormatError(location, what + " must be an object");
    }
    reject_unknown(tj, {"confidence", "points"}, location, what);
    PredictedTrajectory traj;
    traj.confidence =
        require_finite(require_field(tj, "confidence", location, what),
                       location, what + ".confidence");
    if (traj.confidence < 0.0 || traj.confidence > 1.0) {
      throw FormatError(location, what + ".confidence must be in [0, 1]");
    }
    const ordered_json& points =
        require_field(tj, "points", location, what);
    if (!points.is_array() ||
        points.size() != static_cast<size_t>(kFutureSteps)) {
      throw FormatError(location,
                        what + ".points must be an array of exactly " +
                            std::to_string(kFutureSteps) + " entries");
    }
    for (size_t j = 0; j < points.size(); ++j) {
      const ordered_json& pt = points[j];
      const std::string pt_what =
          what + ".points[" + std::to_string(j) + "]";
      if (!pt.is_array() || pt.size() != 2) {
        throw FormatError(location, pt_what + " must be an [x, y] pair");
      }
      traj.waypoints[j][0] =
          require_finite(pt[0], location, pt_what + "[0]");
      traj.waypoints[j][1] =
          require_finite(pt[1], location, pt_what + "[1]");
    }
    p.trajectories.push_back(traj);
  }
  return p;
}

ordered_json step_to_json(const TrackStep& step) {
  if (!step.valid) {
    return nullptr;
  }
  ordered_json v;
  v["x"] = step.x;
  v["y"] = step.y;
  v["heading"] = step.heading;
  v["vx"] = step.vx;
  v["vy"] = step.vy;
  return v;
}

void check_writable_double(double value, const std::string& what) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(what + " is not finite");
  }
}

}  // namespace

std::vector<Scenario> read_scenarios(const std::filesystem::path& path) {
  std::vector<Scenario> out;
  std::unordered_set<std::string> seen_ids;
  read_jsonl(path, kScenarioSchema,
             [&](const ordered_json& record, size_t line) {
               Scenario s = parse_scenario(record, loc(path, line));
               if (!seen_ids.insert(s.scenario_id).second) {
                 throw FormatError(loc(path, line),
                                   "duplicate scenario_id \"" +
                                       s.scenario_id + "\"");
               }
               out.push_back(std::move(s));
             });
  return out;
}

void write_scenarios(const std::filesystem::path& path,
                     std::span<const Scenario> scenarios) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() +
                             " for writing");
  }
  ordered_json header;
  header["schema"] = kScenarioSchema;
  header["version"] = kSchemaVersion;
  out << header.dump() << "\n";

  for (const Scenario& s : scenarios) {
    for (const AgentTrack& agent : s.agents) {
      for (const TrackStep& step : agent.steps) {
        if (!step.valid) continue;
        check_writable_double(step.x, "track step x");
        check_writable_double(step.y, "track step y");
        check_writable_double(step.heading, "track step heading");
        check_writable_double(step.vx, "track step vx");
        check_writable_double(step.vy, "track step vy");
      }
    }
    ordered_json record;
    record["scenario_id"] = s.scenario_id;
    ordered_json agents = ordered_json::array();
    for (const AgentTrack& agent : s.agents) {
      ordered_json a;
      a["id"] = agent.agent_id;
      a["type"] = to_string(agent.type);
      ordered_json steps = ordered_json::array();
      for (const TrackStep& step : agent.steps) {
        steps.push_back(step_to_json(step));
      }
      a["steps"] = std::move(steps);
      agents.push_back(std::move(a));
    }
    record["agents"] = std::move(agents);
    record["prediction_targets"] = s.prediction_target_ids;
    out << record.dump() << "\n";
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("failed to write " + path.string());
  }
}

std::vector<PredictionSet> read_predictions(
    const std::filesystem::path& path) {
  std::vector<PredictionSet> out;
  std::set<std::pair<std::string, int64_t>> seen;
  read_jsonl(path, kPredictionSchema,
             [&](const ordered_json& record, size_t line) {
               PredictionSet p = parse_prediction(record, loc(path, line));
               if (!seen.insert({p.scenario_id, p.agent_id}).second) {
                 throw FormatError(
                     loc(path, line),
                     "duplicate prediction for scenario \"" + p.scenario_id +
                         "\" agent " + std::to_string(p.agent_id));
               }
               out.push_back(std::move(p));
             });
  return out;
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const PredictionSet> predictions) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() +
                             " for writing");
  }
  ordered_json header;
  header["schema"] = kPredictionSchema;
  header["version"] = kSchemaVersion;
  out << header.dump() << "\n";

  for (const PredictionSet& p : predictions) {
    if (p.trajectories.size() != static_cast<size_t>(kNumPredictions)) {
      throw std::invalid_argument(
          "prediction for agent " + std::to_string(p.agent_id) + " has " +
          std::to_string(p.trajectories.size()) + " trajectories, expected " +
          std::to_string(kNumPredictions));
    }
    ordered_json record;
    record["scenario_id"] = p.scenario_id;
    record["agent_id"] = p.agent_id;
    ordered_json trajectories = ordered_json::array();
    for (const PredictedTrajectory& traj : p.trajectories) {
      check_writable_double(traj.confidence, "confidence");
      if (traj.confidence < 0.0 || traj.confidence > 1.0) {
        throw std::invalid_argument("confidence must be in [0, 1]");
      }
      ordered_json tj;
      tj["confidence"] = traj.confidence;
      ordered_json points = ordered_json::array();
      for (const auto& wp : traj.waypoints) {
        check_writable_double(wp[0], "waypoint x");
        check_writable_double(wp[1], "waypoint y");
        points.push_back(ordered_json::array({wp[0], wp[1]}));
      }
      tj["points"] = std::move(points);
      trajectories.push_back(std::move(tj));
    }
    record["trajectories"] = std::move(trajectories);
    out << record.dump() << "\n";
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("failed to write " + path.string());
  }
}

const char* to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

Split split_for_index(size_t index, size_t total) {
  if (index >= total) {
    throw std::invalid_argument("split index is out of range");
  }
  const size_t n_train = total * 70 / 100;
  const size_t n_val = total * 15 / 100;
  if (index < n_train) return Split::kTrain;
  if (index < n_train + n_val) return Split::kVal;
  return Split::kTest;
}

}  // namespace rangekit
