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

// Motion forecasting data model.
//
// An agent track holds 91 states sampled at 10 Hz: indices 0..9 are the
// past second, index 10 is the current state, and indices 11..90 are the
// 8-second future. Prediction waypoint j corresponds to track index 11 + j,
// so a horizon of T steps ends at waypoint T - 1 and track index 10 + T.
//
// Files are JSON Lines with a schema header; see docs/formats.md.

#ifndef RANGEKIT_SCENARIO_H_
#define RANGEKIT_SCENARIO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rangekit {

enum class AgentType {
  kVehicle = 0,
  kPedestrian = 1,
  kCyclist = 2,
};
inline constexpr int kNumAgentTypes = 3;

const char* to_string(AgentType type);
AgentType agent_type_from_string(const std::string& name);

inline constexpr int kCurrentStep = 10;   // track index of the current state
inline constexpr int kFutureSteps = 80;   // prediction waypoints
inline constexpr int kTrackSteps = 91;    // 10 history + current + 80 future
inline constexpr double kStepSeconds = 0.1;
inline constexpr int kNumPredictions = 6;  // trajectories per agent in files

// Track index of prediction waypoint j (0-based).
inline constexpr int waypoint_track_index(int waypoint) {
  return kCurrentStep + 1 + waypoint;
}

struct TrackStep {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians
  double vx = 0.0;
  double vy = 0.0;
  bool valid = false;

  friend bool operator==(const TrackStep&, const TrackStep&) = default;
};

struct AgentTrack {
  int64_t agent_id = 0;
  AgentType type = AgentType::kVehicle;
  std::array<TrackStep, kTrackSteps> steps{};

  friend bool operator==(const AgentTrack&, const AgentTrack&) = default;
};

struct Scenario {
  std::string scenario_id;
  std::vector<AgentTrack> agents;
  // Agents to be predicted; each must exist and have a valid current state.
  std::vector<int64_t> prediction_target_ids;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct PredictedTrajectory {
  std::array<std::array<double, 2>, kFutureSteps> waypoints{};
  double confidence = 0.0;  // in [0, 1]

  friend bool operator==(const PredictedTrajectory&,
                         const PredictedTrajectory&) = default;
};

// The candidate trajectories one model produced for one agent.
struct PredictionSet {
  std::string scenario_id;
  int64_t agent_id = 0;
  std::vector<PredictedTrajectory> trajectories;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

// --- JSONL serialization ----------------------------------------------------
//
// Readers validate exhaustively: schema header, field presence and types,
// unknown fields, step counts, trajectory counts, confidence range,
// duplicate ids. Violations throw FormatError naming the file, line, and
// field. Invalid track steps serialize as null and read back as all-zero
// invalid steps.

std::vector<Scenario> read_scenarios(const std::filesystem::path& path);
void write_scenarios(const std::filesystem::path& path,
                     std::span<const Scenario> scenarios);

std::vector<PredictionSet> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path,
                       std::span<const PredictionSet> predictions);

// --- Dataset splits ---------------------------------------------------------

enum class Split { kTrain, kVal, kTest };

const char* to_string(Split split);

// Deterministic 70/15/15 split by record index: the first 70% of records
// (integer floor) are train, the next 15% val, the remainder test.
Split split_for_index(size_t index, size_t total);

// --- Synthetic corpus -------------------------------------------------------

struct ScenarioGenConfig {
  uint64_t seed = 0;
  int num_scenarios = 1;
  int agents_per_scenario = 4;
};

// Generates scenarios with constant-velocity, constant-turn-rate, and
// stop-and-go agents. Agent types cycle so every type occurs; every agent is
// a prediction target; some agents lose random future steps to simulated
// occlusion. Output depends only on the config.
std::vector<Scenario> generate_scenarios(const ScenarioGenConfig& config);

// Reference predictions for a corpus: each agent's ground-truth future
// repeated kNumPredictions times at full confidence. Useful as a fixed point
// for the metrics (zero displacement, zero misses, perfect precision).
std::vector<PredictionSet> perfect_predictions(
    std::span<const Scenario> scenarios);

// Predictions that deviate from ground truth by a bounded offset, for
// exercising the metrics away from the fixed point. Deterministic in seed.
std::vector<PredictionSet> noisy_predictions(
    std::span<const Scenario> scenarios, uint64_t seed,
    double offset_scale);

}  // namespace rangekit

#endif  // RANGEKIT_SCENARIO_H_
