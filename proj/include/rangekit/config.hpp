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

// Plain-text "key = value" configuration files. One pair per line, '#'
// starts a comment, blank lines are ignored, keys may not repeat, and
// unknown keys are errors. Every loader starts from the built-in defaults
// and applies only the keys present. Key lists in docs/formats.md.

#ifndef RANGEKIT_CONFIG_H_
#define RANGEKIT_CONFIG_H_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "rangekit/metrics.hpp"
#include "rangekit/range_image.hpp"

namespace rangekit {

struct ConfigEntry {
  std::string key;
  std::string value;
  size_t line = 0;
};

// Low-level parse; FormatError on syntax problems or repeated keys.
std::vector<ConfigEntry> parse_config_file(const std::filesystem::path& path);

// Quantization steps: range_step, intensity_step, elongation_step,
// pose_translation_step, pose_rotation_step.
QuantizationProfile load_profile(const std::filesystem::path& path);

// Matching gates: lateral_threshold.3s/.5s/.8s,
// longitudinal_threshold.3s/.5s/.8s, speed_low, min_scale.
MatchThresholds load_thresholds(const std::filesystem::path& path);

// Beam inclination overrides: <sensor>.inclination_min and
// <sensor>.inclination_max with <sensor> one of top, front_left,
// front_right, side_left, side_right. Returns the geometry for all five
// sensors, indexed by SensorId.
std::array<SensorGeometry, kNumSensors> load_geometries(
    const std::filesystem::path& path);

}  // namespace rangekit

#endif  // RANGEKIT_CONFIG_H_
