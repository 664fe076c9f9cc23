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

// Forecasting metrics: minimum average displacement error, miss rate, and
// mean average precision, each evaluated at 3, 5, and 8 second horizons.
//
// Determinism contract: evaluate() folds per-agent results in canonical
// (scenario_id, agent_id) order and sorts detections with a total order, so
// its output is bitwise identical for any input permutation and any worker
// count.

#ifndef RANGEKIT_METRICS_H_
#define RANGEKIT_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rangekit/scenario.hpp"

namespace rangekit {

// Horizons in track steps: 3 s, 5 s, 8 s.
inline constexpr std::array<int, 3> kHorizonSteps = {30, 50, 80};

inline constexpr double horizon_seconds(int horizon_steps) {
  return horizon_steps * kStepSeconds;
}

// Matching gates. A predicted endpoint matches ground truth when its
// displacement, rotated into the ground-truth heading frame, fits inside the
// horizon's longitudinal and lateral thresholds. Slow agents shrink the
// gates: at zero speed both thresholds scale by min_scale, growing linearly
// to full size at speed_low.
struct MatchThresholds {
  double lateral_3s = 1.0;
  double lateral_5s = 1.8;
  double lateral_8s = 3.0;
  double longitudinal_3s = 2.0;
  double longitudinal_5s = 3.6;
  double longitudinal_8s = 6.0;
  double speed_low = 1.4;  // m/s
  double min_scale = 0.5;

  double lateral(int horizon_steps) const;
  double longitudinal(int horizon_steps) const;
  double speed_scale(double initial_speed) const;

  // Throws std::invalid_argument unless all thresholds are positive and
  // nondecreasing in horizon and min_scale is in (0, 1].
  void validate() const;

  friend bool operator==(const MatchThresholds&,
                         const MatchThresholds&) = default;
};

// Mean L2 displacement of one candidate over the valid ground-truth steps in
// (current, horizon]; empty if none of those steps is valid.
std::optional<double> trajectory_ade(const AgentTrack& gt,
                                     const PredictedTrajectory& traj,
                                     int horizon_steps);

// Minimum trajectory_ade over the candidates; empty when no step is valid.
std::optional<double> min_ade(const AgentTrack& gt, const PredictionSet& pred,
                              int horizon_steps);

// Whether a predicted endpoint matches the ground-truth state at the
// horizon. initial_speed is the agent's speed at the current step.
bool is_match(double pred_x, double pred_y, const TrackStep& gt_at_horizon,
              double initial_speed, int horizon_steps,
              const MatchThresholds& thresholds);

// One scored unit for the miss rate. Marginal evaluation puts a single agent
// in each unit; a joint unit scores several agents against the same-index
// candidates of their prediction sets.
struct EvalUnit {
  std::vector<const AgentTrack*> agents;
  std::vector<const PredictionSet*> predictions;  // parallel to agents
};

// True when every candidate index fails the match for at least one agent in
// the unit. Empty when any agent lacks a valid state at the horizon (the
// unit is excluded from the rate). All prediction sets in the unit must
// carry the same number of candidates.
std::optional<bool> unit_is_miss(const EvalUnit& unit, int horizon_steps,
                                 const MatchThresholds& thresholds);

// One agent's scored detection for the precision/recall curve: the
// highest-confidence candidate (ties pick the lowest candidate index).
struct DetectionOutcome {
  std::string scenario_id;
  int64_t agent_id = 0;
  double confidence = 0.0;
  bool true_positive = false;
};

// All-point average precision. Detections are ranked by confidence
// descending; exact ties break by (scenario_id, agent_id) so the ranking is
// a total order independent of input order. num_eligible is the recall
// denominator. Returns empty if num_eligible is zero.
std::optional<double> average_precision(
    std::vector<DetectionOutcome> detections, size_t num_eligible);

// --- Corpus-level evaluation -------------------------------------------------

struct EvalConfig {
  MatchThresholds thresholds;
  int workers = 0;  // resolved like the codec's worker count
};

// Aggregates for one (agent type, horizon) bucket. Metrics over empty
// buckets are NaN with zero counts.
struct MetricRow {
  std::string agent_type;  // "vehicle", "pedestrian", "cyclist", or "all"
  int horizon_steps = 0;
  double min_ade = 0.0;    // mean of per-agent min_ade
  double miss_rate = 0.0;  // missed units / scored units
  double map = 0.0;        // average precision (mean over types for "all")
  size_t ade_count = 0;    // agents contributing to min_ade
  size_t match_count = 0;  // units contributing to miss_rate
  size_t eligible_count = 0;  // recall denominator for map
};

struct MetricsReport {
  // Per-type rows for each horizon, then an "all" row per horizon holding
  // the unweighted mean over non-empty type buckets.
  std::vector<MetricRow> rows;
  // Means of the "all" rows across horizons.
  double overall_min_ade = 0.0;
  double overall_miss_rate = 0.0;
  double overall_map = 0.0;

  const MetricRow* find(const std::string& agent_type,
                        int horizon_steps) const;
};

// Marginal evaluation of a prediction file against a scenario corpus.
// Every prediction must reference an existing scenario and one of its
// prediction targets (std::invalid_argument names the offenders otherwise;
// duplicate (scenario, agent) pairs are rejected the same way). Targets
// without predictions stay in the mAP recall denominator but are excluded
// from min_ade and miss_rate.
MetricsReport evaluate(std::span<const Scenario> scenarios,
                       std::span<const PredictionSet> predictions,
                       const EvalConfig& config = {});

// Machine-readable rendering: header line
// "agent_type,horizon_s,metric,value,count" followed by one line per metric
// per row, then "all,avg,<metric>,..." lines for the overall means.
std::string render_csv(const MetricsReport& report);

// Fixed-width table of the 8-second bucket, one row per metric and one
// column per agent type plus "all".
std::string render_table(const MetricsReport& report);

}  // namespace rangekit

#endif  // RANGEKIT_METRICS_H_
