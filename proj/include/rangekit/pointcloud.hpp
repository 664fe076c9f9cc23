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

// Range image to point cloud projection.
//
// Pixel (r, c) maps to a ray in the sensor frame: azimuth sweeps one full
// turn across the columns starting at +pi behind the x axis, and inclination
// runs from the geometry's maximum at row 0 down to its minimum at the last
// row, both sampled at pixel centers. Valid pixels become points at the
// pixel's range along that ray; world-frame output additionally applies the
// frame rotation and the per-pixel vehicle translation.

#ifndef RANGEKIT_POINTCLOUD_H_
#define RANGEKIT_POINTCLOUD_H_

#include <array>
#include <filesystem>
#include <vector>

#include "rangekit/range_image.hpp"

namespace rangekit {

enum class PointFrame {
  kSensor,  // sensor-centered, no pose applied
  kWorld,   // frame rotation plus per-pixel translation applied
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double intensity = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct PointCloud {
  PointFrame frame = PointFrame::kSensor;
  std::vector<Point> points;  // valid pixels in row-major pixel order
};

// Azimuth of a column center, radians: pi at the left edge, decreasing
// linearly to -pi at the right edge.
double pixel_azimuth(int col, int width);

// Inclination of a row center, radians: inclination_max at the top row,
// decreasing linearly to inclination_min at the bottom row.
double pixel_inclination(int row, const SensorGeometry& geometry);

// Unit-sphere projection scaled by range:
//   x = range * cos(inclination) * cos(azimuth)
//   y = range * cos(inclination) * sin(azimuth)
//   z = range * sin(inclination)
std::array<double, 3> spherical_to_cartesian(double range, double azimuth,
                                             double inclination);

// Rotation for {roll, pitch, yaw}: R = Rz(yaw) * Ry(pitch) * Rx(roll),
// row-major.
std::array<std::array<double, 3>, 3> rotation_from_euler(double roll,
                                                         double pitch,
                                                         double yaw);

// Projects valid pixels into the sensor frame.
PointCloud project(const RangeImage& image);

// Projects valid pixels into the world frame: rotates each sensor-frame
// point by the frame rotation, then adds that pixel's vehicle translation.
PointCloud project_to_world(const RangeImage& image);

// float32 little-endian records of (x, y, z, intensity), one per point.
void write_pointcloud_binary(const std::filesystem::path& path,
                             const PointCloud& cloud);

// "x,y,z,intensity" header plus one row per point, 9 significant digits.
void write_pointcloud_csv(const std::filesystem::path& path,
                          const PointCloud& cloud);

}  // namespace rangekit

#endif  // RANGEKIT_POINTCLOUD_H_
