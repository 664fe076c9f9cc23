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

// Brute-force reference implementations of the forecasting metrics, written
// directly from their definitions and sharing no computation code with the
// library. Used to cross-check rangekit::evaluate and friends.

#ifndef RANGEKIT_TESTS_METRIC_ORACLE_H_
#define RANGEKIT_TESTS_METRIC_ORACLE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rangekit/metrics.hpp"
#include "rangekit/scenario.hpp"

namespace rangekit::oracle {

// Threshold shrink factor for an agent moving at `speed` at the current step.
double speed_scale(const MatchThresholds& t, double speed);

// Whether the predicted endpoint matches the ground-truth state, decomposed
// in the ground-truth heading frame.
bool endpoint_matches(double px, double py, const TrackStep& gt,
                      double initial_speed, int horizon_steps,
                      const MatchThresholds& t);

// Mean displacement of one candidate over the valid steps within the
// horizon; empty when no step in the window is valid.
std::optional<double> candidate_ade(const AgentTrack& gt,
                                    const PredictedTrajectory& traj,
                                    int horizon_steps);

// Minimum candidate_ade over a prediction set's candidates.
std::optional<double> min_ade(const AgentTrack& gt, const PredictionSet& pred,
                              int horizon_steps);

// Whether every candidate misses the agent at the horizon; empty when the
// ground truth is invalid there.
std::optional<bool> agent_misses(const AgentTrack& gt,
                                 const PredictionSet& pred, int horizon_steps,
                                 const MatchThresholds& t);

struct RankedDetection {
  double confidence = 0.0;
  bool true_positive = false;
  std::string scenario_id;
  int64_t agent_id = 0;
};

// All-point average precision over a ranked detection list; empty when the
// recall denominator is zero.
std::optional<double> average_precision(std::vector<RankedDetection> dets,
                                        size_t num_eligible);

// Full corpus evaluation producing the same report shape as
// rangekit::evaluate. Inputs must already be reference-clean.
MetricsReport evaluate(std::span<const Scenario> scenarios,
                       std::span<const PredictionSet> predictions,
                       const MatchThresholds& thresholds);

}  // namespace rangekit::oracle

#endif  // RANGEKIT_TESTS_METRIC_ORACLE_H_
