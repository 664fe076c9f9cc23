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

// Uncompressed range-image interchange (.wlri files): a fixed header, the
// validity bitmap, and six float32 planes in channel order. This is the
// input side of the compressor and the output side of `decompress --raw`.
// Byte layout in docs/formats.md.

#ifndef RANGEKIT_RAW_FRAME_IO_H_
#define RANGEKIT_RAW_FRAME_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rangekit/range_image.hpp"

namespace rangekit {

inline constexpr std::array<uint8_t, 4> kRawFrameMagic = {'W', 'L', 'R', 'I'};

// Serializes the image. Channel values are narrowed to float32; callers that
// need exact lattice round trips must keep magnitudes within the float32
// lattice bound for their quantization step (see docs/formats.md).
std::vector<uint8_t> write_raw_frame(const RangeImage& image);

// Parses a .wlri blob, zeroing every invalid pixel regardless of what the
// file carried there. Malformed input throws CodecError. The overload
// without a geometry uses the default inclinations for the header's sensor.
RangeImage read_raw_frame(std::span<const uint8_t> bytes);
RangeImage read_raw_frame(std::span<const uint8_t> bytes,
                          const SensorGeometry& geometry);

// Whole-file helpers; failures throw std::runtime_error naming the path.
std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const uint8_t> bytes);

// All regular *.wlri files directly inside dir, sorted by filename so frame
// order is stable across platforms.
std::vector<std::filesystem::path> list_raw_frames(
    const std::filesystem::path& dir);

}  // namespace rangekit

#endif  // RANGEKIT_RAW_FRAME_IO_H_
