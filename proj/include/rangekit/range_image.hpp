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

#ifndef RANGEKIT_RANGE_IMAGE_H_
#define RANGEKIT_RANGE_IMAGE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rangekit/grid.hpp"

namespace rangekit {

enum class SensorId : uint8_t {
  kTop = 0,
  kFrontLeft = 1,
  kFrontRight = 2,
  kSideLeft = 3,
  kSideRight = 4,
};
inline constexpr int kNumSensors = 5;

enum class ReturnIndex : uint8_t {
  kFirst = 0,
  kSecond = 1,
};

const char* to_string(SensorId id);
const char* to_string(ReturnIndex ri);
SensorId sensor_from_string(const std::string& name);

// Per-sensor image geometry. Grid dimensions are fixed per sensor; the beam
// inclination bounds are configurable because no published calibration exists
// for them.
struct SensorGeometry {
  SensorId sensor_id = SensorId::kTop;
  int height = 0;
  int width = 0;
  double inclination_min = 0.0;  // radians, bottom beam edge
  double inclination_max = 0.0;  // radians, top beam edge

  // Canonical geometry for a sensor: the top sensor is 64x2650, every other
  // sensor is 116x150. Default inclination spans are placeholders.
  static SensorGeometry for_sensor(SensorId id);

  friend bool operator==(const SensorGeometry&,
                         const SensorGeometry&) = default;
};

// Expected grid dimensions for a sensor id.
void expected_dims(SensorId id, int* height, int* width);

// Quantization steps for the six image channels plus the frame rotation.
// Defaults follow the dataset release convention; all are overridable via the
// profile config file.
struct QuantizationProfile {
  double range_step = 0.005;             // meters
  double intensity_step = 0.01;
  double elongation_step = 0.01;
  double pose_translation_step = 0.0001;  // meters
  double pose_rotation_step = 0.001;      // radians

  // Steps in container channel order: range, intensity, elongation,
  // pose_tx, pose_ty, pose_tz.
  std::array<double, 6> channel_steps() const {
    return {range_step,            intensity_step,        elongation_step,
            pose_translation_step, pose_translation_step, pose_translation_step};
  }

  // Throws std::invalid_argument if any step is not strictly positive.
  void validate() const;

  friend bool operator==(const QuantizationProfile&,
                         const QuantizationProfile&) = default;
};

inline constexpr int kNumChannels = 6;
const char* channel_name(int channel);

// One LiDAR return image: six real-valued channels sharing one validity mask,
// plus the vehicle pose rotation for the frame. Invalid pixels carry no
// semantic content; consumers must never read them.
struct RangeImage {
  SensorGeometry geometry;
  ReturnIndex return_index = ReturnIndex::kFirst;
  Grid<double> range;
  Grid<double> intensity;
  Grid<double> elongation;
  Grid<double> pose_tx;  // per-pixel vehicle position at capture time
  Grid<double> pose_ty;
  Grid<double> pose_tz;
  Mask valid;
  // Vehicle attitude for the frame as {roll, pitch, yaw} radians. Carried in
  // the container header on the pose_rotation_step lattice.
  std::array<double, 3> frame_rotation = {0.0, 0.0, 0.0};

  static RangeImage zeroed(const SensorGeometry& geometry, ReturnIndex ri);

  const Grid<double>& channel(int index) const;
  Grid<double>& channel(int index);
};

// Integer lattice representation of one channel under a quantization step.
struct QuantizedChannel {
  Grid<int64_t> values;
  double step = 0.0;
  Mask valid;

  friend bool operator==(const QuantizedChannel&,
                         const QuantizedChannel&) = default;
};

// Maps each valid entry v to round-half-away-from-zero(v / step); invalid
// entries map to 0. Throws std::invalid_argument on step <= 0, dimension
// mismatch, a non-finite valid entry (naming the pixel), or a quotient too
// large for the residual lattice.
QuantizedChannel quantize_channel(const Grid<double>& channel,
                                  const Mask& mask, double step);

// Valid entries become values * step, invalid entries 0.0. Exact inverse of
// quantize_channel up to the lattice.
Grid<double> dequantize_channel(const QuantizedChannel& q);

// Rounding rule used across the codec: half-way cases round away from zero,
// which keeps the mapping symmetric for signed channels.
int64_t quantize_value(double v, double step);
double dequantize_value(int64_t q, double step);

// One broken invariant found by validate_image. row/col are -1 for
// image-level violations.
struct Violation {
  std::string invariant;
  int row = -1;
  int col = -1;
  std::string detail;
};

// Checks every RangeImage invariant and reports all violations found.
// Violations are data, not failures: the return is empty iff the image is
// well-formed.
std::vector<Violation> validate_image(const RangeImage& img);

// Quantizes all six channels in container order under the profile.
std::array<QuantizedChannel, kNumChannels> quantize_image(
    const RangeImage& img, const QuantizationProfile& profile);

}  // namespace rangekit

#endif  // RANGEKIT_RANGE_IMAGE_H_
