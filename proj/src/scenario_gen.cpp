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

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rangekit/rng.hpp"
#include "rangekit/scenario.hpp"

namespace rangekit {

namespace {

constexpr double kAgentDropoutRate = 0.15;  // chance an agent loses steps
constexpr double kStepDropoutRate = 0.08;   // per future step, if afflicted

struct MotionState {
  double x, y, heading, vx, vy;
};

// Closed-form motion sampled at t seconds relative to the current state
// (negative t is history).

MotionState constant_velocity(double x0, double y0, double h0, double speed,
                              double t) {
  return {x0 + speed * t * std::cos(h0), y0 + speed * t * std::sin(h0), h0,
          speed * std::cos(h0), speed * std::sin(h0)};
}

MotionState constant_turn(double x0, double y0, double h0, double speed,
                          double omega, double t) {
  const double h = h0 + omega * t;
  return {x0 + (speed / omega) * (std::sin(h) - std::sin(h0)),
          y0 + (speed / omega) * (std::cos(h0) - std::cos(h)), h,
          speed * std::cos(h), speed * std::sin(h)};
}

MotionState stop_and_go(double x0, double y0, double h0, double speed,
                        double t_stop, double t_go, double t) {
  double dist;
  bool moving;
  if (t <= t_stop) {
    dist = speed * t;
    moving = true;
  } else if (t < t_go) {
    dist = speed * t_stop;
    moving = false;
  } else {
    dist = speed * t_stop + speed * (t - t_go);
    moving = true;
  }
  const double vx = moving ? speed * std::cos(h0) : 0.0;
  const double vy = moving ? speed * std::sin(h0) : 0.0;
  return {x0 + dist * std::cos(h0), y0 + dist * std::sin(h0), h0, vx, vy};
}

double speed_for_type(AgentType type, Rng& rng) {
  switch (type) {
    case AgentType::kVehicle:
      return rng.uniform(3.0, 15.0);
    case AgentType::kPedestrian:
      return rng.uniform(0.5, 2.0);
    case AgentType::kCyclist:
      return rng.uniform(2.0, 8.0);
  }
  return 1.0;
}

}  // namespace

std::vector<Scenario> generate_scenarios(const ScenarioGenConfig& config) {
  if (config.num_scenarios < 0) {
    throw std::invalid_argument("num_scenarios must be non-negative");
  }
  if (config.agents_per_scenario < 1) {
    throw std::invalid_argument("agents_per_scenario must be positive");
  }

  Rng rng(config.seed);
  std::vector<Scenario> scenarios;
  scenarios.reserve(static_cast<size_t>(config.num_scenarios));
  int64_t type_cursor = 0;  // cycles so every agent type appears

  for (int s = 0; s < config.num_scenarios; ++s) {
    Scenario scenario;
    char id[32];
    std::snprintf(id, sizeof(id), "scn-%06d", s);
    scenario.scenario_id = id;

    for (int a = 0; a < config.agents_per_scenario; ++a) {
      AgentTrack agent;
      agent.agent_id = 100 + a;
      agent.type = static_cast<AgentType>(type_cursor % kNumAgentTypes);
      ++type_cursor;

      const double x0 = rng.uniform(-50.0, 50.0);
      const double y0 = rng.uniform(-50.0, 50.0);
      const double h0 = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const double speed = speed_for_type(agent.type, rng);
      const int model = static_cast<int>(rng.uniform_index(3));
      const double omega =
          (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.05, 0.5);
      const double t_stop = rng.uniform(1.0, 4.0);
      const double t_go = rng.uniform(t_stop, 6.0);

      for (int k = 0; k < kTrackSteps; ++k) {
        const double t = (k - kCurrentStep) * kStepSeconds;
        MotionState m;
        switch (model) {
          case 0:
            m = constant_velocity(x0, y0, h0, speed, t);
            break;
          case 1:
            m = constant_turn(x0, y0, h0, speed, omega, t);
            break;
          default:
            m = stop_and_go(x0, y0, h0, speed, t_stop, t_go, t);
            break;
        }
        TrackStep& step = agent.steps[static_cast<size_t>(k)];
        step.x = m.x;
        step.y = m.y;
        step.heading = m.heading;
        step.vx = m.vx;
        step.vy = m.vy;
        step.valid = true;
      }

      // Simulated occlusion: some agents lose random future steps. The
      // current state always survives so the agent stays a valid target.
      if (rng.bernoulli(kAgentDropoutRate)) {
        for (int k = kCurrentStep + 1; k < kTrackSteps; ++k) {
          if (rng.bernoulli(kStepDropoutRate)) {
            agent.steps[static_cast<size_t>(k)] = TrackStep{};
          }
        }
      }

      scenario.prediction_target_ids.push_back(agent.agent_id);
      scenario.agents.push_back(std::move(agent));
    }
    scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

namespace {

// Ground-truth future positions with gaps filled by the last valid position
// (starting from the current state, which targets always have).
std::array<std::array<double, 2>, kFutureSteps> filled_future(
    const AgentTrack& agent) {
  std::array<std::array<double, 2>, kFutureSteps> out{};
  double x = agent.steps[static_cast<size_t>(kCurrentStep)].x;
  double y = agent.steps[static_cast<size_t>(kCurrentStep)].y;
  for (int j = 0; j < kFutureSteps; ++j) {
    const TrackStep& step =
        agent.steps[static_cast<size_t>(waypoint_track_index(j))];
    if (step.valid) {
      x = step.x;
      y = step.y;
    }
    out[static_cast<size_t>(j)] = {x, y};
  }
  return out;
}

const AgentTrack* find_agent(const Scenario& scenario, int64_t agent_id) {
  for (const AgentTrack& agent : scenario.agents) {
    if (agent.agent_id == agent_id) return &agent;
  }
  return nullptr;
}

}  // namespace

std::vector<PredictionSet> perfect_predictions(
    std::span<const Scenario> scenarios) {
  std::vector<PredictionSet> out;
  for (const Scenario& scenario : scenarios) {
    for (int64_t target : scenario.prediction_target_ids) {
      const AgentTrack* agent = find_agent(scenario, target);
      if (agent == nullptr) continue;
      PredictionSet p;
      p.scenario_id = scenario.scenario_id;
      p.agent_id = target;
      PredictedTrajectory traj;
      traj.waypoints = filled_future(*agent);
      traj.confidence = 1.0;
      p.trajectories.assign(static_cast<size_t>(kNumPredictions), traj);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<PredictionSet> noisy_predictions(
    std::span<const Scenario> scenarios, uint64_t seed,
    double offset_scale) {
  Rng rng(seed);
  std::vector<PredictionSet> out;
  for (const Scenario& scenario : scenarios) {
    for (int64_t target : scenario.prediction_target_ids) {
      const AgentTrack* agent = find_agent(scenario, target);
      if (agent == nullptr) continue;
      PredictionSet p;
      p.scenario_id = scenario.scenario_id;
      p.agent_id = target;
      const auto future = filled_future(*agent);
      for (int k = 0; k < kNumPredictions; ++k) {
        PredictedTrajectory traj;
        // Continuous confidences: ties would make ranking order ambiguous.
        traj.confidence = rng.uniform(0.05, 0.999);
        // Whole-trajectory shift plus small per-step jitter, each bounded so
        // the total deviation never exceeds 1.1 * offset_scale per axis.
        const double ox = offset_scale * rng.uniform(-1.0, 1.0);
        const double oy = offset_scale * rng.uniform(-1.0, 1.0);
        for (int j = 0; j < kFutureSteps; ++j) {
          traj.waypoints[static_cast<size_t>(j)] = {
              future[static_cast<size_t>(j)][0] + ox +
                  0.1 * offset_scale * rng.uniform(-1.0, 1.0),
              future[static_cast<size_t>(j)][1] + oy +
                  0.1 * offset_scale * rng.uniform(-1.0, 1.0)};
        }
        p.trajectories.push_back(std::move(traj));
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace rangekit
