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

#include "rangekit/synthetic_frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rangekit/codec.hpp"
#include "rangekit/pointcloud.hpp"
#include "rangekit/rng.hpp"

namespace rangekit {
namespace {

constexpr double kSensorHeight = 2.0;  // sensor origin above the ground
constexpr double kSweepSeconds = 0.1;  // one full revolution

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stateless per-pixel random stream: every draw is a pure function of the
// initial state, independent of which worker evaluates it.
class HashStream {
 public:
  explicit HashStream(uint64_t state) : state_(state) {}

  uint64_t next() { return splitmix64(state_); }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform_positive() {  // (0, 1]
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double gaussian() {
    const double u1 = uniform_positive();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  uint64_t state_;
};

struct Box {
  double min[3];
  double max[3];
  double albedo;
};

struct Scene {
  std::vector<Box> boxes;
  double vehicle_speed;
  double vehicle_heading;
  double base_x, base_y, base_z;
  std::array<double, 3> rotation;
};

Scene build_scene(const StreetSceneConfig& config, uint64_t frame_index) {
  uint64_t mix = config.seed;
  (void)splitmix64(mix);
  mix ^= frame_index;
  Rng rng(splitmix64(mix));

  Scene scene;
  const int n_boxes = rng.uniform_int(8, 20);
  scene.boxes.reserve(static_cast<size_t>(n_boxes));
  for (int i = 0; i < n_boxes; ++i) {
    const double dist = rng.uniform(5.0, 55.0);
    const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double cx = dist * std::cos(angle);
    const double cy = dist * std::sin(angle);
    const double half_x = rng.uniform(0.5, 2.5);
    const double half_y = rng.uniform(0.5, 2.5);
    const double height = rng.uniform(1.0, 4.0);
    Box box;
    box.min[0] = cx - half_x;
    box.max[0] = cx + half_x;
    box.min[1] = cy - half_y;
    box.max[1] = cy + half_y;
    box.min[2] = -kSensorHeight;
    box.max[2] = -kSensorHeight + height;
    box.albedo = rng.uniform(0.2, 0.9);
    scene.boxes.push_back(box);
  }
  scene.vehicle_speed = rng.uniform(5.0, 15.0);
  scene.vehicle_heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
  scene.base_x = rng.uniform(-200.0, 200.0);
  scene.base_y = rng.uniform(-200.0, 200.0);
  scene.base_z = rng.uniform(-0.1, 0.1);
  scene.rotation = {rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02),
                    scene.vehicle_heading};
  return scene;
}

// Distance along the unit ray to the nearest surface, or a negative value
// for sky. The ray starts at the sensor origin.
double cast_ray(const Scene& scene, const std::array<double, 3>& dir,
                double max_range, double* albedo) {
  double best = -1.0;
  double best_albedo = 0.0;

  if (dir[2] < 0.0) {
    const double t = -kSensorHeight / dir[2];
    if (t <= max_range) {
      const double gx = t * dir[0];
      const double gy = t * dir[1];
      best = t;
      best_albedo =
          0.35 + 0.1 * std::sin(0.3 * gx) * std::cos(0.25 * gy);
    }
  }

  for (const Box& box : scene.boxes) {
    // Slab intersection; the origin is never inside a box because box
    // centers are at least 5 m out.
    double t_enter = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int k = 0; k < 3 && !miss; ++k) {
      const double d = dir[static_cast<size_t>(k)];
      if (d == 0.0) {
        if (box.min[k] > 0.0 || box.max[k] < 0.0) miss = true;
        continue;
      }
      double t1 = box.min[k] / d;
      double t2 = box.max[k] / d;
      if (t1 > t2) std::swap(t1, t2);
      t_enter = std::max(t_enter, t1);
      t_exit = std::min(t_exit, t2);
      if (t_enter > t_exit) miss = true;
    }
    if (miss || t_enter <= 0.0 || t_enter > max_range) continue;
    if (best < 0.0 || t_enter < best) {
      best = t_enter;
      best_albedo = box.albedo;
    }
  }

  *albedo = best_albedo;
  return best;
}

void render_row(const StreetSceneConfig& config, uint64_t frame_index,
                const Scene& scene, const SensorGeometry& geom, int row,
                RangeImage* img) {
  const int w = geom.width;
  const double incl = pixel_inclination(row, geom);
  const double second_return_dropout = 0.55;
  const double cos_h = std::cos(scene.vehicle_heading);
  const double sin_h = std::sin(scene.vehicle_heading);

  for (int c = 0; c < w; ++c) {
    const size_t i = static_cast<size_t>(row) * static_cast<size_t>(w) +
                     static_cast<size_t>(c);
    uint64_t pixel_key = config.seed;
    pixel_key = splitmix64(pixel_key) ^ (frame_index * 0x9E3779B97F4A7C15ULL);
    pixel_key = splitmix64(pixel_key) ^ (i * 0xC2B2AE3D27D4EB4FULL);
    pixel_key ^= static_cast<uint64_t>(config.return_index) << 62;
    HashStream hs(pixel_key);

    const double az = pixel_azimuth(c, w);
    const auto dir = spherical_to_cartesian(1.0, az, incl);
    double albedo = 0.0;
    double t = cast_ray(scene, dir, config.max_range, &albedo);

    double drop_p = config.dropout;
    if (config.return_index == ReturnIndex::kSecond) {
      // Second returns are sparse and sit behind the first surface.
      drop_p = second_return_dropout;
      if (t > 0.0) t = std::min(t + 0.5 + 2.5 * hs.uniform(),
                                config.max_range);
    }

    if (t < 0.0 || hs.bernoulli(drop_p)) {
      img->valid[i] = 0;
      continue;
    }

    img->valid[i] = 1;
    const double noisy =
        std::max(0.001, t + config.range_noise_sigma * hs.gaussian());
    img->range[i] = noisy;
    img->intensity[i] = std::max(
        0.0, albedo * (1.0 - 0.4 * t / config.max_range) +
                 0.02 * hs.gaussian());
    img->elongation[i] =
        std::max(0.0, 0.02 + 0.002 * t + 0.01 * std::abs(hs.gaussian()));

    // The vehicle advances along its heading while the sensor sweeps, so
    // the pose translation varies linearly with column.
    const double tau =
        (static_cast<double>(c) / static_cast<double>(w)) * kSweepSeconds;
    const double advance = scene.vehicle_speed * tau;
    img->pose_tx[i] = scene.base_x + advance * cos_h;
    img->pose_ty[i] = scene.base_y + advance * sin_h;
    img->pose_tz[i] = scene.base_z;
  }
}

}  // namespace

RangeImage generate_street_frame_serial(const StreetSceneConfig& config,
                                        uint64_t frame_index) {
  const SensorGeometry geom = SensorGeometry::for_sensor(config.sensor);
  const Scene scene = build_scene(config, frame_index);
  RangeImage img = RangeImage::zeroed(geom, config.return_index);
  img.frame_rotation = scene.rotation;
  for (int r = 0; r < geom.height; ++r) {
    render_row(config, frame_index, scene, geom, r, &img);
  }
  return img;
}

RangeImage generate_street_frame(const StreetSceneConfig& config,
                                 uint64_t frame_index, int workers) {
  const SensorGeometry geom = SensorGeometry::for_sensor(config.sensor);
  const Scene scene = build_scene(config, frame_index);
  RangeImage img = RangeImage::zeroed(geom, config.return_index);
  img.frame_rotation = scene.rotation;
  const int num_workers = resolve_workers(workers);

#pragma omp parallel for schedule(static) num_threads(num_workers)
  for (int r = 0; r < geom.height; ++r) {
    render_row(config, frame_index, scene, geom, r, &img);
  }
  return img;
}

}  // namespace rangekit
