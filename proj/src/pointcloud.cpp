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

#include "rangekit/pointcloud.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "rangekit/bytes.hpp"

namespace rangekit {

double pixel_azimuth(int col, int width) {
  if (width <= 0 || col < 0 || col >= width) {
    throw std::invalid_argument("column is outside the image");
  }
  const double pi = std::numbers::pi;
  return pi - (col + 0.5) * (2.0 * pi / width);
}

double pixel_inclination(int row, const SensorGeometry& geometry) {
  if (geometry.height <= 0 || row < 0 || row >= geometry.height) {
    throw std::invalid_argument("row is outside the image");
  }
  const double span = geometry.inclination_max - geometry.inclination_min;
  return geometry.inclination_max - (row + 0.5) * span / geometry.height;
}

std::array<double, 3> spherical_to_cartesian(double range, double azimuth,
                                             double inclination) {
  const double cos_incl = std::cos(inclination);
  return {range * cos_incl * std::cos(azimuth),
          range * cos_incl * std::sin(azimuth),
          range * std::sin(inclination)};
}

std::array<std::array<double, 3>, 3> rotation_from_euler(double roll,
                                                         double pitch,
                                                         double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  return {{
      {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr},
      {sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr},
      {-sp, cp * sr, cp * cr},
  }};
}

namespace {

PointCloud project_impl(const RangeImage& image, bool to_world) {
  const auto violations = validate_image(image);
  if (!violations.empty()) {
    throw std::invalid_argument("range image fails invariant \"" +
                                violations.front().invariant + "\"");
  }
  const int h = image.geometry.height;
  const int w = image.geometry.width;

  std::vector<double> azimuth(static_cast<size_t>(w));
  for (int c = 0; c < w; ++c) {
    azimuth[static_cast<size_t>(c)] = pixel_azimuth(c, w);
  }

  const auto rot = rotation_from_euler(image.frame_rotation[0],
                                       image.frame_rotation[1],
                                       image.frame_rotation[2]);

  PointCloud cloud;
  cloud.frame = to_world ? PointFrame::kWorld : PointFrame::kSensor;
  cloud.points.reserve(count_valid(image.valid));
  for (int r = 0; r < h; ++r) {
    const double incl = pixel_inclination(r, image.geometry);
    for (int c = 0; c < w; ++c) {
      const size_t i = static_cast<size_t>(r) * static_cast<size_t>(w) +
                       static_cast<size_t>(c);
      if (!image.valid[i]) continue;
      auto p = spherical_to_cartesian(image.range[i], azimuth[
          static_cast<size_t>(c)], incl);
      if (to_world) {
        const std::array<double, 3> s = p;
        for (int k = 0; k < 3; ++k) {
          p[static_cast<size_t>(k)] = rot[static_cast<size_t>(k)][0] * s[0] +
                                      rot[static_cast<size_t>(k)][1] * s[1] +
                                      rot[static_cast<size_t>(k)][2] * s[2];
        }
        p[0] += image.pose_tx[i];
        p[1] += image.pose_ty[i];
        p[2] += image.pose_tz[i];
      }
      cloud.points.push_back(Point{p[0], p[1], p[2], image.intensity[i]});
    }
  }
  return cloud;
}

}  // namespace

PointCloud project(const RangeImage& image) {
  return project_impl(image, /*to_world=*/false);
}

PointCloud project_to_world(const RangeImage& image) {
  return project_impl(image, /*to_world=*/true);
}

void write_pointcloud_binary(const std::filesystem::path& path,
                             const PointCloud& cloud) {
  ByteWriter w;
  for (const Point& p : cloud.points) {
    w.f32le(static_cast<float>(p.x));
    w.f32le(static_cast<float>(p.y));
    w.f32le(static_cast<float>(p.z));
    w.f32le(static_cast<float>(p.intensity));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() +
                             " for writing");
  }
  const auto& bytes = w.buffer();
  if (!bytes.empty()) {
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("failed to write " + path.string());
  }
}

void write_pointcloud_csv(const std::filesystem::path& path,
                          const PointCloud& cloud) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() +
                             " for writing");
  }
  out << "x,y,z,intensity\n";
  char line[160];
  for (const Point& p : cloud.points) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g\n", p.x, p.y, p.z,
                  p.intensity);
    out << line;
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("failed to write " + path.string());
  }
}

}  // namespace rangekit
