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

// Synthetic street scenes for exercising the codec: a ground plane and a
// handful of box obstacles ray-cast through the sensor's pixel rays, with
// per-pixel dropout, range noise, and a vehicle pose that advances along a
// straight path during the sweep.
//
// All randomness is derived by hashing (seed, frame, pixel), never from a
// sequential stream, so a frame is bitwise identical no matter how many
// workers render it or in what order rows are scheduled.

#ifndef RANGEKIT_SYNTHETIC_FRAMES_H_
#define RANGEKIT_SYNTHETIC_FRAMES_H_

#include <cstdint>

#include "rangekit/range_image.hpp"

namespace rangekit {

struct StreetSceneConfig {
  SensorId sensor = SensorId::kTop;
  ReturnIndex return_index = ReturnIndex::kFirst;
  uint64_t seed = 0;
  double max_range = 75.0;        // meters; longer rays are invalid (sky)
  double dropout = 0.03;          // chance a real return is dropped
  double range_noise_sigma = 0.02;  // meters
};

// Renders frame number frame_index of the scene stream. Rows are split
// across OpenMP workers; workers <= 0 resolves like the codec's worker
// resolution.
RangeImage generate_street_frame(const StreetSceneConfig& config,
                                 uint64_t frame_index, int workers = 0);

// Single-threaded reference producing bitwise-identical output.
RangeImage generate_street_frame_serial(const StreetSceneConfig& config,
                                        uint64_t frame_index);

}  // namespace rangekit

#endif  // RANGEKIT_SYNTHETIC_FRAMES_H_
