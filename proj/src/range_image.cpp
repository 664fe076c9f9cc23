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

#include "rangekit/range_image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rangekit {
namespace {

// Quantized magnitudes are capped so residuals (differences of two lattice
// values) can never overflow int64.
constexpr double kMaxQuantizedMagnitude = 4.611686018427387904e18;  // 2^62

std::string pixel_str(int row, int col) {
  return "(" + std::to_string(row) + ", " + std::to_string(col) + ")";
}

}  // namespace

const char* to_string(SensorId id) {
  switch (id) {
    case SensorId::kTop:
      return "top";
    case SensorId::kFrontLeft:
      return "front_left";
    case SensorId::kFrontRight:
      return "front_right";
    case SensorId::kSideLeft:
      return "side_left";
    case SensorId::kSideRight:
      return "side_right";
  }
  return "unknown";
}

const char* to_string(ReturnIndex ri) {
  return ri == ReturnIndex::kFirst ? "first" : "second";
}

SensorId sensor_from_string(const std::string& name) {
  for (int i = 0; i < kNumSensors; ++i) {
    SensorId id = static_cast<SensorId>(i);
    if (name == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown sensor name: " + name);
}

const char* channel_name(int channel) {
  switch (channel) {
    case 0:
      return "range";
    case 1:
      return "intensity";
    case 2:
      return "elongation";
    case 3:
      return "pose_tx";
    case 4:
      return "pose_ty";
    case 5:
      return "pose_tz";
  }
  return "unknown";
}

void expected_dims(SensorId id, int* height, int* width) {
  if (id == SensorId::kTop) {
    *height = 64;
    *width = 2650;
  } else {
    *height = 116;
    *width = 150;
  }
}

SensorGeometry SensorGeometry::for_sensor(SensorId id) {
  SensorGeometry g;
  g.sensor_id = id;
  expected_dims(id, &g.height, &g.width);
  if (id == SensorId::kTop) {
    g.inclination_min = -0.31;
    g.inclination_max = 0.04;
  } else {
    g.inclination_min = -1.0;
    g.inclination_max = 0.3;
  }
  return g;
}

void QuantizationProfile::validate() const {
  for (double step : {range_step, intensity_step, elongation_step,
                      pose_translation_step, pose_rotation_step}) {
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw std::invalid_argument(
          "quantization steps must be strictly positive and finite");
    }
  }
}

RangeImage RangeImage::zeroed(const SensorGeometry& geometry, ReturnIndex ri) {
  RangeImage img;
  img.geometry = geometry;
  img.return_index = ri;
  img.range = Grid<double>(geometry.height, geometry.width);
  img.intensity = Grid<double>(geometry.height, geometry.width);
  img.elongation = Grid<double>(geometry.height, geometry.width);
  img.pose_tx = Grid<double>(geometry.height, geometry.width);
  img.pose_ty = Grid<double>(geometry.height, geometry.width);
  img.pose_tz = Grid<double>(geometry.height, geometry.width);
  img.valid = Mask(geometry.height, geometry.width, 0);
  return img;
}

const Grid<double>& RangeImage::channel(int index) const {
  switch (index) {
    case 0:
      return range;
    case 1:
      return intensity;
    case 2:
      return elongation;
    case 3:
      return pose_tx;
    case 4:
      return pose_ty;
    case 5:
      return pose_tz;
  }
  throw std::out_of_range("channel index must be in [0, 6)");
}

Grid<double>& RangeImage::channel(int index) {
  return const_cast<Grid<double>&>(
      static_cast<const RangeImage&>(*this).channel(index));
}

int64_t quantize_value(double v, double step) {
  const double scaled = v / step;
  // The negated form also rejects NaN quotients (from a NaN value or a
  // zero step), which would otherwise reach llround undefined.
  if (!(std::abs(scaled) <= kMaxQuantizedMagnitude)) {
    throw std::invalid_argument("value " + std::to_string(v) +
                                " overflows the quantization lattice at step " +
                                std::to_string(step));
  }
  // llround rounds half-way cases away from zero.
  return std::llround(scaled);
}

double dequantize_value(int64_t q, double step) {
  return static_cast<double>(q) * step;
}

QuantizedChannel quantize_channel(const Grid<double>& channel,
                                  const Mask& mask, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("quantization step must be > 0");
  }
  if (!channel.same_shape(mask.height(), mask.width())) {
    throw std::invalid_argument("channel and mask dimensions disagree");
  }
  QuantizedChannel q;
  q.step = step;
  q.valid = mask;
  q.values = Grid<int64_t>(channel.height(), channel.width());
  const int w = channel.width();
  for (size_t i = 0; i < channel.size(); ++i) {
    if (!mask[i]) continue;  // invalid entries stay 0
    const double v = channel[i];
    if (!std::isfinite(v)) {
      const int row = static_cast<int>(i) / w;
      const int col = static_cast<int>(i) % w;
      throw std::invalid_argument("non-finite value at valid pixel " +
                                  pixel_str(row, col));
    }
    q.values[i] = quantize_value(v, step);
  }
  return q;
}

Grid<double> dequantize_channel(const QuantizedChannel& q) {
  Grid<double> out(q.values.height(), q.values.width());
  for (size_t i = 0; i < q.values.size(); ++i) {
    out[i] = q.valid[i] ? dequantize_value(q.values[i], q.step) : 0.0;
  }
  return out;
}

std::vector<Violation> validate_image(const RangeImage& img) {
  std::vector<Violation> out;
  const SensorGeometry& g = img.geometry;

  int want_h = 0, want_w = 0;
  expected_dims(g.sensor_id, &want_h, &want_w);
  if (g.height != want_h || g.width != want_w) {
    out.push_back({"sensor grid dimensions", -1, -1,
                   std::string(to_string(g.sensor_id)) + " must be " +
                       std::to_string(want_h) + "x" + std::to_string(want_w) +
                       ", got " + std::to_string(g.height) + "x" +
                       std::to_string(g.width)});
  }
  if (!std::isfinite(g.inclination_min) || !std::isfinite(g.inclination_max) ||
      !(g.inclination_min < g.inclination_max)) {
    out.push_back({"inclination_min < inclination_max", -1, -1,
                   "bounds must be finite and ordered"});
  }
  for (double a : img.frame_rotation) {
    if (!std::isfinite(a)) {
      out.push_back({"frame rotation finite", -1, -1,
                     "non-finite frame rotation component"});
      break;
    }
  }

  const struct {
    const Grid<double>* grid;
    const char* name;
  } grids[] = {{&img.range, "range"},         {&img.intensity, "intensity"},
               {&img.elongation, "elongation"}, {&img.pose_tx, "pose_tx"},
               {&img.pose_ty, "pose_ty"},       {&img.pose_tz, "pose_tz"}};
  bool dims_ok = img.valid.same_shape(g.height, g.width);
  if (!dims_ok) {
    out.push_back({"grid dimension mismatch", -1, -1,
                   "valid mask does not match geometry dimensions"});
  }
  for (const auto& entry : grids) {
    if (!entry.grid->same_shape(g.height, g.width)) {
      out.push_back({"grid dimension mismatch", -1, -1,
                     std::string(entry.name) +
                         " grid does not match geometry dimensions"});
      dims_ok = false;
    }
  }
  if (!dims_ok) return out;  // per-pixel checks need consistent shapes

  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      if (!img.valid.at(r, c)) continue;
      const double range = img.range.at(r, c);
      if (!(range > 0.0) || !std::isfinite(range)) {
        out.push_back({"range > 0", r, c,
                       "valid pixel has range " + std::to_string(range)});
      }
      const double intensity = img.intensity.at(r, c);
      if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        out.push_back({"intensity >= 0", r, c,
                       "valid pixel has intensity " +
                           std::to_string(intensity)});
      }
      const double elongation = img.elongation.at(r, c);
      if (!(elongation >= 0.0) || !std::isfinite(elongation)) {
        out.push_back({"elongation >= 0", r, c,
                       "valid pixel has elongation " +
                           std::to_string(elongation)});
      }
      if (!std::isfinite(img.pose_tx.at(r, c)) ||
          !std::isfinite(img.pose_ty.at(r, c)) ||
          !std::isfinite(img.pose_tz.at(r, c))) {
        out.push_back({"pose translation finite", r, c,
                       "valid pixel has non-finite pose translation"});
      }
    }
  }
  return out;
}

std::array<QuantizedChannel, kNumChannels> quantize_image(
    const RangeImage& img, const QuantizationProfile& profile) {
  profile.validate();
  const auto steps = profile.channel_steps();
  std::array<QuantizedChannel, kNumChannels> out;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    out[ch] = quantize_channel(img.channel(ch), img.valid, steps[ch]);
  }
  return out;
}

}  // namespace rangekit
