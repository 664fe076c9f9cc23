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

#include "rangekit/raw_frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "rangekit/bytes.hpp"
#include "rangekit/codec.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

std::vector<uint8_t> write_raw_frame(const RangeImage& image) {
  ByteWriter w;
  w.bytes(kRawFrameMagic);
  w.u8(kFormatVersion);
  w.u8(static_cast<uint8_t>(image.geometry.sensor_id));
  w.u8(static_cast<uint8_t>(image.return_index));
  w.u8(0);  // reserved
  w.u16le(static_cast<uint16_t>(image.geometry.height));
  w.u16le(static_cast<uint16_t>(image.geometry.width));
  for (double r : image.frame_rotation) {
    w.f64le(r);
  }
  w.bytes(pack_validity(image.valid));
  for (int c = 0; c < kNumChannels; ++c) {
    const Grid<double>& plane = image.channel(c);
    for (size_t i = 0; i < plane.size(); ++i) {
      w.f32le(image.valid[i] ? static_cast<float>(plane[i]) : 0.0f);
    }
  }
  return w.take();
}

RangeImage read_raw_frame(std::span<const uint8_t> bytes) {
  // Peek the sensor id so the right default geometry can be applied; the
  // full header validation happens in the geometry-taking overload.
  if (bytes.size() < 6 ||
      !std::equal(kRawFrameMagic.begin(), kRawFrameMagic.end(),
                  bytes.begin())) {
    // Fall through with any sensor; the real parse below reports the error.
    return read_raw_frame(bytes, SensorGeometry::for_sensor(SensorId::kTop));
  }
  uint8_t sensor = bytes[5];
  SensorId id = sensor < kNumSensors ? static_cast<SensorId>(sensor)
                                     : SensorId::kTop;
  return read_raw_frame(bytes, SensorGeometry::for_sensor(id));
}

RangeImage read_raw_frame(std::span<const uint8_t> bytes,
                          const SensorGeometry& geometry) {
  ByteReader r(bytes);
  r.set_section("raw frame magic");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kRawFrameMagic.begin())) {
    throw CodecError(CodecErrorCode::kBadMagic,
                     "raw frame magic mismatch (expected WLRI)");
  }
  r.set_section("raw frame header");
  uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw CodecError(CodecErrorCode::kUnsupportedVersion,
                     "raw frame version " + std::to_string(version) +
                         " is not supported (expected " +
                         std::to_string(kFormatVersion) + ")");
  }
  uint8_t sensor = r.u8();
  if (sensor >= kNumSensors) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "sensor id " + std::to_string(sensor) +
                         " is out of range");
  }
  SensorId sensor_id = static_cast<SensorId>(sensor);
  uint8_t ret = r.u8();
  if (ret > 1) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "return index " + std::to_string(ret) +
                         " is out of range");
  }
  uint8_t reserved = r.u8();
  if (reserved != 0) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "reserved byte must be zero");
  }
  uint16_t height = r.u16le();
  uint16_t width = r.u16le();
  int want_h = 0, want_w = 0;
  expected_dims(sensor_id, &want_h, &want_w);
  if (height != want_h || width != want_w) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     std::string("dimensions ") + std::to_string(height) +
                         "x" + std::to_string(width) + " do not match " +
                         to_string(sensor_id) + " sensor (" +
                         std::to_string(want_h) + "x" +
                         std::to_string(want_w) + ")");
  }
  if (geometry.sensor_id != sensor_id) {
    throw std::invalid_argument(std::string("geometry is for sensor ") +
                                to_string(geometry.sensor_id) +
                                " but the frame is from " +
                                to_string(sensor_id));
  }

  std::array<double, 3> rotation{};
  for (int i = 0; i < 3; ++i) {
    double v = r.f64le();
    if (!std::isfinite(v)) {
      throw CodecError(CodecErrorCode::kInvalidField,
                       "frame rotation component " + std::to_string(i) +
                           " is not finite");
    }
    rotation[static_cast<size_t>(i)] = v;
  }

  r.set_section("raw frame validity bitmap");
  Mask valid =
      unpack_validity(r.bytes(bitmap_byte_count(height, width)), height,
                      width);

  RangeImage img =
      RangeImage::zeroed(geometry, static_cast<ReturnIndex>(ret));
  img.valid = valid;
  img.frame_rotation = rotation;
  const size_t pixels = static_cast<size_t>(height) * width;
  for (int c = 0; c < kNumChannels; ++c) {
    r.set_section(std::string("raw frame channel ") + channel_name(c));
    Grid<double>& plane = img.channel(c);
    for (size_t i = 0; i < pixels; ++i) {
      float v = r.f32le();
      plane[i] = img.valid[i] ? static_cast<double>(v) : 0.0;
    }
  }
  if (!r.at_end()) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "raw frame has " + std::to_string(r.remaining()) +
                         " trailing bytes");
  }
  return img;
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string() +
                             " for reading");
  }
  in.seekg(0, std::ios::end);
  auto end = in.tellg();
  if (end < 0) {
    throw std::runtime_error("cannot determine size of " + path.string());
  }
  in.seekg(0, std::ios::beg);
  std::vector<uint8_t> bytes(static_cast<size_t>(end));
  if (!bytes.empty() &&
      !in.read(reinterpret_cast<char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()))) {
    throw std::runtime_error("failed to read " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() +
                             " for writing");
  }
  if (!bytes.empty()) {
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("failed to write " + path.string());
  }
}

std::vector<std::filesystem::path> list_raw_frames(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wlri") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });
  return paths;
}

}  // namespace rangekit
