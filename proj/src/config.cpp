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

#include "rangekit/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "rangekit/errors.hpp"

namespace rangekit {

namespace {

std::string trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string loc(const std::filesystem::path& path, size_t line) {
  return path.string() + ":" + std::to_string(line);
}

double parse_double(const ConfigEntry& entry,
                    const std::filesystem::path& path) {
  const char* text = entry.value.c_str();
  char* end = nullptr;
  double v = std::strtod(text, &end);
  if (end == text || *end != '\0' || !std::isfinite(v)) {
    throw FormatError(loc(path, entry.line),
                      "value \"" + entry.value + "\" for key \"" +
                          entry.key + "\" is not a finite number");
  }
  return v;
}

[[noreturn]] void unknown_key(const ConfigEntry& entry,
                              const std::filesystem::path& path) {
  throw FormatError(loc(path, entry.line),
                    "unknown key \"" + entry.key + "\"");
}

}  // namespace

std::vector<ConfigEntry> parse_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError(path.string(), "cannot open file");
  }
  std::vector<ConfigEntry> entries;
  std::unordered_set<std::string> seen;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (size_t hash = text.find('#'); hash != std::string::npos) {
      text.resize(hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw FormatError(loc(path, line), "expected \"key = value\"");
    }
    ConfigEntry entry;
    entry.key = trim(text.substr(0, eq));
    entry.value = trim(text.substr(eq + 1));
    entry.line = line;
    if (entry.key.empty()) {
      throw FormatError(loc(path, line), "missing key before '='");
    }
    if (entry.value.empty()) {
      throw FormatError(loc(path, line),
                        "missing value for key \"" + entry.key + "\"");
    }
    if (!seen.insert(entry.key).second) {
      throw FormatError(loc(path, line),
                        "key \"" + entry.key + "\" appears more than once");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

QuantizationProfile load_profile(const std::filesystem::path& path) {
  QuantizationProfile profile;
  for (const ConfigEntry& entry : parse_config_file(path)) {
    const double v = parse_double(entry, path);
    if (entry.key == "range_step") {
      profile.range_step = v;
    } else if (entry.key == "intensity_step") {
      profile.intensity_step = v;
    } else if (entry.key == "elongation_step") {
      profile.elongation_step = v;
    } else if (entry.key == "pose_translation_step") {
      profile.pose_translation_step = v;
    } else if (entry.key == "pose_rotation_step") {
      profile.pose_rotation_step = v;
    } else {
      unknown_key(entry, path);
    }
  }
  try {
    profile.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string(), e.what());
  }
  return profile;
}

MatchThresholds load_thresholds(const std::filesystem::path& path) {
  MatchThresholds thresholds;
  for (const ConfigEntry& entry : parse_config_file(path)) {
    const double v = parse_double(entry, path);
    if (entry.key == "lateral_threshold.3s") {
      thresholds.lateral_3s = v;
    } else if (entry.key == "lateral_threshold.5s") {
      thresholds.lateral_5s = v;
    } else if (entry.key == "lateral_threshold.8s") {
      thresholds.lateral_8s = v;
    } else if (entry.key == "longitudinal_threshold.3s") {
      thresholds.longitudinal_3s = v;
    } else if (entry.key == "longitudinal_threshold.5s") {
      thresholds.longitudinal_5s = v;
    } else if (entry.key == "longitudinal_threshold.8s") {
      thresholds.longitudinal_8s = v;
    } else if (entry.key == "speed_low") {
      thresholds.speed_low = v;
    } else if (entry.key == "min_scale") {
      thresholds.min_scale = v;
    } else {
      unknown_key(entry, path);
    }
  }
  try {
    thresholds.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string(), e.what());
  }
  return thresholds;
}

std::array<SensorGeometry, kNumSensors> load_geometries(
    const std::filesystem::path& path) {
  std::array<SensorGeometry, kNumSensors> geometries;
  for (int i = 0; i < kNumSensors; ++i) {
    geometries[static_cast<size_t>(i)] =
        SensorGeometry::for_sensor(static_cast<SensorId>(i));
  }
  for (const ConfigEntry& entry : parse_config_file(path)) {
    size_t dot = entry.key.rfind('.');
    if (dot == std::string::npos) {
      unknown_key(entry, path);
    }
    const std::string sensor_name = entry.key.substr(0, dot);
    const std::string field = entry.key.substr(dot + 1);
    SensorId id;
    try {
      id = sensor_from_string(sensor_name);
    } catch (const std::invalid_argument&) {
      unknown_key(entry, path);
    }
    const double v = parse_double(entry, path);
    SensorGeometry& geom = geometries[static_cast<size_t>(id)];
    if (field == "inclination_min") {
      geom.inclination_min = v;
    } else if (field == "inclination_max") {
      geom.inclination_max = v;
    } else {
      unknown_key(entry, path);
    }
  }
  for (const SensorGeometry& geom : geometries) {
    if (geom.inclination_min >= geom.inclination_max) {
      throw FormatError(path.string(),
                        std::string(to_string(geom.sensor_id)) +
                            ": inclination_min must be below "
                            "inclination_max");
    }
  }
  return geometries;
}

}  // namespace rangekit
