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

#include "rangekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rangekit/workers.hpp"

namespace rangekit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int horizon_index(int horizon_steps) {
  for (size_t i = 0; i < kHorizonSteps.size(); ++i) {
    if (kHorizonSteps[i] == horizon_steps) return static_cast<int>(i);
  }
  throw std::invalid_argument("horizon must be one of 30, 50, or 80 steps, "
                              "got " + std::to_string(horizon_steps));
}

void check_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(name) +
                                " must be positive and finite");
  }
}

}  // namespace

double MatchThresholds::lateral(int horizon_steps) const {
  switch (horizon_index(horizon_steps)) {
    case 0:
      return lateral_3s;
    case 1:
      return lateral_5s;
    default:
      return lateral_8s;
  }
}

double MatchThresholds::longitudinal(int horizon_steps) const {
  switch (horizon_index(horizon_steps)) {
    case 0:
      return longitudinal_3s;
    case 1:
      return longitudinal_5s;
    default:
      return longitudinal_8s;
  }
}

double MatchThresholds::speed_scale(double initial_speed) const {
  if (initial_speed >= speed_low) {
    return 1.0;
  }
  return min_scale + (1.0 - min_scale) * initial_speed / speed_low;
}

void MatchThresholds::validate() const {
  check_positive(lateral_3s, "lateral_3s");
  check_positive(lateral_5s, "lateral_5s");
  check_positive(lateral_8s, "lateral_8s");
  check_positive(longitudinal_3s, "longitudinal_3s");
  check_positive(longitudinal_5s, "longitudinal_5s");
  check_positive(longitudinal_8s, "longitudinal_8s");
  check_positive(speed_low, "speed_low");
  if (lateral_3s > lateral_5s || lateral_5s > lateral_8s) {
    throw std::invalid_argument(
        "lateral thresholds must be nondecreasing in horizon");
  }
  if (longitudinal_3s > longitudinal_5s || longitudinal_5s > longitudinal_8s) {
    throw std::invalid_argument(
        "longitudinal thresholds must be nondecreasing in horizon");
  }
  if (!std::isfinite(min_scale) || min_scale <= 0.0 || min_scale > 1.0) {
    throw std::invalid_argument("min_scale must be in (0, 1]");
  }
}

std::optional<double> trajectory_ade(const AgentTrack& gt,
                                     const PredictedTrajectory& traj,
                                     int horizon_steps) {
  horizon_index(horizon_steps);
  double sum = 0.0;
  size_t count = 0;
  for (int j = 0; j < horizon_steps; ++j) {
    const TrackStep& step =
        gt.steps[static_cast<size_t>(waypoint_track_index(j))];
    if (!step.valid) continue;
    const auto& wp = traj.waypoints[static_cast<size_t>(j)];
    sum += std::hypot(wp[0] - step.x, wp[1] - step.y);
    ++count;
  }
  if (count == 0) {
    return std::nullopt;
  }
  return sum / static_cast<double>(count);
}

std::optional<double> min_ade(const AgentTrack& gt, const PredictionSet& pred,
                              int horizon_steps) {
  std::optional<double> best;
  for (const PredictedTrajectory& traj : pred.trajectories) {
    auto ade = trajectory_ade(gt, traj, horizon_steps);
    if (ade && (!best || *ade < *best)) {
      best = ade;
    }
  }
  return best;
}

bool is_match(double pred_x, double pred_y, const TrackStep& gt_at_horizon,
              double initial_speed, int horizon_steps,
              const MatchThresholds& thresholds) {
  if (!gt_at_horizon.valid) {
    throw std::invalid_argument(
        "is_match requires a valid ground-truth state at the horizon");
  }
  const double scale = thresholds.speed_scale(initial_speed);
  const double lon_gate = scale * thresholds.longitudinal(horizon_steps);
  const double lat_gate = scale * thresholds.lateral(horizon_steps);

  const double dx = pred_x - gt_at_horizon.x;
  const double dy = pred_y - gt_at_horizon.y;
  const double c = std::cos(gt_at_horizon.heading);
  const double s = std::sin(gt_at_horizon.heading);
  // Rotate the displacement into the ground-truth heading frame: x' points
  // along the agent's heading (longitudinal), y' across it (lateral).
  const double lon = c * dx + s * dy;
  const double lat = -s * dx + c * dy;
  return std::abs(lon) <= lon_gate && std::abs(lat) <= lat_gate;
}

std::optional<bool> unit_is_miss(const EvalUnit& unit, int horizon_steps,
                                 const MatchThresholds& thresholds) {
  if (unit.agents.empty() || unit.agents.size() != unit.predictions.size()) {
    throw std::invalid_argument(
        "an eval unit needs one prediction set per agent");
  }
  const size_t k_candidates = unit.predictions[0]->trajectories.size();
  if (k_candidates == 0) {
    throw std::invalid_argument("prediction sets must not be empty");
  }
  for (const PredictionSet* p : unit.predictions) {
    if (p->trajectories.size() != k_candidates) {
      throw std::invalid_argument(
          "all prediction sets in a unit need the same candidate count");
    }
  }

  const int gt_index = waypoint_track_index(horizon_steps - 1);
  for (const AgentTrack* agent : unit.agents) {
    if (!agent->steps[static_cast<size_t>(gt_index)].valid) {
      return std::nullopt;  // unit excluded: no ground truth to match
    }
  }

  for (size_t k = 0; k < k_candidates; ++k) {
    bool all_match = true;
    for (size_t i = 0; i < unit.agents.size(); ++i) {
      const AgentTrack& agent = *unit.agents[i];
      const TrackStep& gt = agent.steps[static_cast<size_t>(gt_index)];
      const TrackStep& current =
          agent.steps[static_cast<size_t>(kCurrentStep)];
      const double speed = std::hypot(current.vx, current.vy);
      const auto& wp = unit.predictions[i]
                           ->trajectories[k]
                           .waypoints[static_cast<size_t>(horizon_steps - 1)];
      if (!is_match(wp[0], wp[1], gt, speed, horizon_steps, thresholds)) {
        all_match = false;
        break;
      }
    }
    if (all_match) {
      return false;
    }
  }
  return true;
}

std::optional<double> average_precision(
    std::vector<DetectionOutcome> detections, size_t num_eligible) {
  if (num_eligible == 0) {
    return std::nullopt;
  }
  std::sort(detections.begin(), detections.end(),
            [](const DetectionOutcome& a, const DetectionOutcome& b) {
              if (a.confidence != b.confidence) {
                return a.confidence > b.confidence;
              }
              if (a.scenario_id != b.scenario_id) {
                return a.scenario_id < b.scenario_id;
              }
              return a.agent_id < b.agent_id;
            });

  const size_t n = detections.size();
  std::vector<double> precision(n), recall(n);
  size_t true_positives = 0;
  for (size_t i = 0; i < n; ++i) {
    if (detections[i].true_positive) ++true_positives;
    precision[i] = static_cast<double>(true_positives) /
                   static_cast<double>(i + 1);
    recall[i] = static_cast<double>(true_positives) /
                static_cast<double>(num_eligible);
  }

  // All-point interpolation: integrate the precision envelope over recall.
  std::vector<double> envelope(n);
  double running = 0.0;
  for (size_t i = n; i-- > 0;) {
    running = std::max(running, precision[i]);
    envelope[i] = running;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev_recall) * envelope[i];
    prev_recall = recall[i];
  }
  return ap;
}

// --- evaluate ----------------------------------------------------------------

namespace {

constexpr size_t kNumHorizons = kHorizonSteps.size();

struct AgentResult {
  std::string scenario_id;
  int64_t agent_id = 0;
  AgentType type = AgentType::kVehicle;
  std::array<bool, kNumHorizons> eligible{};
  std::array<std::optional<double>, kNumHorizons> ade;
  std::array<std::optional<bool>, kNumHorizons> miss;
  std::array<std::optional<std::pair<double, bool>>, kNumHorizons> detection;
};

struct Accumulator {
  double ade_sum = 0.0;
  size_t ade_count = 0;
  size_t miss_count = 0;
  size_t unit_count = 0;
  size_t eligible_count = 0;
  std::vector<DetectionOutcome> detections;
};

// The candidate scored for the precision/recall curve: highest confidence,
// ties resolved to the lowest candidate index.
size_t top_confidence_index(const PredictionSet& pred) {
  size_t best = 0;
  for (size_t k = 1; k < pred.trajectories.size(); ++k) {
    if (pred.trajectories[k].confidence >
        pred.trajectories[best].confidence) {
      best = k;
    }
  }
  return best;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  const size_t shown = std::min<size_t>(ids.size(), 10);
  for (size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) {
    out += ", and " + std::to_string(ids.size() - shown) + " more";
  }
  return out;
}

std::vector<AgentResult> score_scenario(
    const Scenario& scenario,
    const std::unordered_map<int64_t, const PredictionSet*>& preds,
    const MatchThresholds& thresholds) {
  std::unordered_map<int64_t, const AgentTrack*> agents;
  for (const AgentTrack& agent : scenario.agents) {
    if (!agents.emplace(agent.agent_id, &agent).second) {
      throw std::invalid_argument("scenario " + scenario.scenario_id +
                                  " has duplicate agent id " +
                                  std::to_string(agent.agent_id));
    }
  }

  std::vector<int64_t> targets = scenario.prediction_target_ids;
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
    throw std::invalid_argument("scenario " + scenario.scenario_id +
                                " has duplicate prediction targets");
  }

  std::vector<AgentResult> results;
  results.reserve(targets.size());
  for (int64_t target : targets) {
    auto it = agents.find(target);
    if (it == agents.end()) {
      throw std::invalid_argument("scenario " + scenario.scenario_id +
                                  " lists prediction target " +
                                  std::to_string(target) +
                                  " that is not an agent");
    }
    const AgentTrack& gt = *it->second;

    AgentResult res;
    res.scenario_id = scenario.scenario_id;
    res.agent_id = target;
    res.type = gt.type;

    auto pred_it = preds.find(target);
    const PredictionSet* pred =
        pred_it == preds.end() ? nullptr : pred_it->second;

    for (size_t h = 0; h < kNumHorizons; ++h) {
      const int horizon = kHorizonSteps[h];
      const int gt_index = waypoint_track_index(horizon - 1);
      res.eligible[h] = gt.steps[static_cast<size_t>(gt_index)].valid;
      if (pred == nullptr) continue;

      res.ade[h] = min_ade(gt, *pred, horizon);
      if (!res.eligible[h]) continue;

      EvalUnit unit;
      unit.agents = {&gt};
      unit.predictions = {pred};
      res.miss[h] = unit_is_miss(unit, horizon, thresholds);

      const size_t top = top_confidence_index(*pred);
      const auto& wp = pred->trajectories[top]
                           .waypoints[static_cast<size_t>(horizon - 1)];
      const TrackStep& current =
          gt.steps[static_cast<size_t>(kCurrentStep)];
      const bool tp = is_match(
          wp[0], wp[1], gt.steps[static_cast<size_t>(gt_index)],
          std::hypot(current.vx, current.vy), horizon, thresholds);
      res.detection[h] = {pred->trajectories[top].confidence, tp};
    }
    results.push_back(std::move(res));
  }
  return results;
}

double mean_or_nan(const std::vector<double>& values) {
  if (values.empty()) return kNaN;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

const MetricRow* MetricsReport::find(const std::string& agent_type,
                                     int horizon_steps) const {
  for (const MetricRow& row : rows) {
    if (row.agent_type == agent_type && row.horizon_steps == horizon_steps) {
      return &row;
    }
  }
  return nullptr;
}

MetricsReport evaluate(std::span<const Scenario> scenarios,
                       std::span<const PredictionSet> predictions,
                       const EvalConfig& config) {
  config.thresholds.validate();

  std::unordered_map<std::string, size_t> scenario_index;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    if (!scenario_index.emplace(scenarios[i].scenario_id, i).second) {
      throw std::invalid_argument("duplicate scenario id \"" +
                                  scenarios[i].scenario_id + "\"");
    }
  }

  // Attach each prediction to its scenario, collecting every dangling or
  // duplicate reference so the error reports all of them at once.
  std::vector<std::unordered_map<int64_t, const PredictionSet*>> by_scenario(
      scenarios.size());
  std::vector<std::string> bad_refs;
  for (const PredictionSet& pred : predictions) {
    const std::string ref =
        "scenario \"" + pred.scenario_id + "\" agent " +
        std::to_string(pred.agent_id);
    auto it = scenario_index.find(pred.scenario_id);
    if (it == scenario_index.end()) {
      bad_refs.push_back(ref + " (no such scenario)");
      continue;
    }
    const Scenario& scenario = scenarios[it->second];
    const auto& targets = scenario.prediction_target_ids;
    if (std::find(targets.begin(), targets.end(), pred.agent_id) ==
        targets.end()) {
      bad_refs.push_back(ref + " (not a prediction target)");
      continue;
    }
    if (!by_scenario[it->second].emplace(pred.agent_id, &pred).second) {
      bad_refs.push_back(ref + " (duplicate prediction)");
    }
  }
  if (!bad_refs.empty()) {
    throw std::invalid_argument("invalid prediction references: " +
                                join_ids(bad_refs));
  }

  // Canonical processing order, independent of the input permutation.
  std::vector<size_t> order(scenarios.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scenarios[a].scenario_id < scenarios[b].scenario_id;
  });

  const int num_workers = resolve_workers(config.workers);
  const int64_t n = static_cast<int64_t>(order.size());
  std::vector<std::vector<AgentResult>> partials(order.size());
  std::vector<std::exception_ptr> errors(order.size());

#pragma omp parallel for schedule(dynamic) num_threads(num_workers)
  for (int64_t p = 0; p < n; ++p) {
    try {
      const size_t s = order[static_cast<size_t>(p)];
      partials[static_cast<size_t>(p)] = score_scenario(
          scenarios[s], by_scenario[s], config.thresholds);
    } catch (...) {
      errors[static_cast<size_t>(p)] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  // Ordered serial fold: scenario by scenario in id order, agents in id
  // order inside each, so every floating-point sum has a fixed evaluation
  // order.
  std::array<std::array<Accumulator, kNumHorizons>,
             static_cast<size_t>(kNumAgentTypes)>
      acc{};
  for (const auto& results : partials) {
    for (const AgentResult& res : results) {
      const size_t t = static_cast<size_t>(res.type);
      for (size_t h = 0; h < kNumHorizons; ++h) {
        Accumulator& a = acc[t][h];
        if (res.eligible[h]) ++a.eligible_count;
        if (res.ade[h]) {
          a.ade_sum += *res.ade[h];
          ++a.ade_count;
        }
        if (res.miss[h]) {
          ++a.unit_count;
          if (*res.miss[h]) ++a.miss_count;
        }
        if (res.detection[h]) {
          a.detections.push_back(DetectionOutcome{
              res.scenario_id, res.agent_id, res.detection[h]->first,
              res.detection[h]->second});
        }
      }
    }
  }

  MetricsReport report;
  std::array<std::vector<double>, kNumHorizons> all_ade, all_miss, all_map;

  for (int t = 0; t < kNumAgentTypes; ++t) {
    for (size_t h = 0; h < kNumHorizons; ++h) {
      const Accumulator& a = acc[static_cast<size_t>(t)][h];
      MetricRow row;
      row.agent_type = to_string(static_cast<AgentType>(t));
      row.horizon_steps = kHorizonSteps[h];
      row.ade_count = a.ade_count;
      row.match_count = a.unit_count;
      row.eligible_count = a.eligible_count;
      row.min_ade = a.ade_count > 0
                        ? a.ade_sum / static_cast<double>(a.ade_count)
                        : kNaN;
      row.miss_rate = a.unit_count > 0
                          ? static_cast<double>(a.miss_count) /
                                static_cast<double>(a.unit_count)
                          : kNaN;
      auto ap = average_precision(a.detections, a.eligible_count);
      row.map = ap ? *ap : kNaN;

      if (a.ade_count > 0) all_ade[h].push_back(row.min_ade);
      if (a.unit_count > 0) all_miss[h].push_back(row.miss_rate);
      if (ap) all_map[h].push_back(row.map);
      report.rows.push_back(std::move(row));
    }
  }

  std::vector<double> overall_ade, overall_miss, overall_map;
  for (size_t h = 0; h < kNumHorizons; ++h) {
    MetricRow row;
    row.agent_type = "all";
    row.horizon_steps = kHorizonSteps[h];
    row.min_ade = mean_or_nan(all_ade[h]);
    row.miss_rate = mean_or_nan(all_miss[h]);
    row.map = mean_or_nan(all_map[h]);
    for (int t = 0; t < kNumAgentTypes; ++t) {
      const Accumulator& a = acc[static_cast<size_t>(t)][h];
      row.ade_count += a.ade_count;
      row.match_count += a.unit_count;
      row.eligible_count += a.eligible_count;
    }
    if (!all_ade[h].empty()) overall_ade.push_back(row.min_ade);
    if (!all_miss[h].empty()) overall_miss.push_back(row.miss_rate);
    if (!all_map[h].empty()) overall_map.push_back(row.map);
    report.rows.push_back(std::move(row));
  }

  report.overall_min_ade = mean_or_nan(overall_ade);
  report.overall_miss_rate = mean_or_nan(overall_miss);
  report.overall_map = mean_or_nan(overall_map);
  return report;
}

std::string render_csv(const MetricsReport& report) {
  std::string out = "agent_type,horizon_s,metric,value,count\n";
  char line[160];
  auto emit = [&](const std::string& type, const std::string& horizon,
                  const char* metric, double value, size_t count) {
    std::snprintf(line, sizeof(line), "%s,%s,%s,%.9g,%zu\n", type.c_str(),
                  horizon.c_str(), metric, value, count);
    out += line;
  };

  for (const MetricRow& row : report.rows) {
    const std::string horizon =
        std::to_string(static_cast<int>(horizon_seconds(row.horizon_steps)));
    emit(row.agent_type, horizon, "min_ade", row.min_ade, row.ade_count);
    emit(row.agent_type, horizon, "miss_rate", row.miss_rate,
         row.match_count);
    emit(row.agent_type, horizon, "map", row.map, row.eligible_count);
  }

  size_t ade_total = 0, match_total = 0, eligible_total = 0;
  for (const MetricRow& row : report.rows) {
    if (row.agent_type == "all") {
      ade_total += row.ade_count;
      match_total += row.match_count;
      eligible_total += row.eligible_count;
    }
  }
  emit("all", "avg", "min_ade", report.overall_min_ade, ade_total);
  emit("all", "avg", "miss_rate", report.overall_miss_rate, match_total);
  emit("all", "avg", "map", report.overall_map, eligible_total);
  return out;
}

std::string render_table(const MetricsReport& report) {
  const int horizon = kHorizonSteps.back();
  const char* types[] = {"vehicle", "pedestrian", "cyclist", "all"};
  std::string out;
  char line[200];

  std::snprintf(line, sizeof(line), "%-16s%12s%12s%12s%12s\n", "metric (8 s)",
                types[0], types[1], types[2], types[3]);
  out += line;

  auto emit = [&](const char* name, auto getter) {
    std::string row_text;
    std::snprintf(line, sizeof(line), "%-16s", name);
    row_text += line;
    for (const char* type : types) {
      const MetricRow* row = report.find(type, horizon);
      const double value = row ? getter(*row) : kNaN;
      std::snprintf(line, sizeof(line), "%12.6f", value);
      row_text += line;
    }
    out += row_text + "\n";
  };

  emit("min_ade", [](const MetricRow& r) { return r.min_ade; });
  emit("miss_rate", [](const MetricRow& r) { return r.miss_rate; });
  emit("map", [](const MetricRow& r) { return r.map; });
  return out;
}

}  // namespace rangekit
