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

#include "rangekit/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rangekit/bytes.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/varint.hpp"

namespace rangekit {

const char* to_string(CodecErrorCode code) {
  switch (code) {
    case CodecErrorCode::kBadMagic:
      return "bad magic";
    case CodecErrorCode::kUnsupportedVersion:
      return "unsupported version";
    case CodecErrorCode::kTruncated:
      return "truncated input";
    case CodecErrorCode::kDeflateError:
      return "deflate error";
    case CodecErrorCode::kResidualCountMismatch:
      return "residual count mismatch";
    case CodecErrorCode::kVarintError:
      return "varint error";
    case CodecErrorCode::kInvalidField:
      return "invalid field";
  }
  return "unknown error";
}

// --- Validity bitmap -------------------------------------------------------

std::vector<uint8_t> pack_validity(const Mask& mask) {
  std::vector<uint8_t> out(
      bitmap_byte_count(static_cast<size_t>(mask.height()),
                        static_cast<size_t>(mask.width())),
      0);
  for (size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      out[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    }
  }
  return out;
}

Mask unpack_validity(std::span<const uint8_t> packed, size_t height,
                     size_t width) {
  const size_t want = bitmap_byte_count(height, width);
  if (packed.size() != want) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "validity bitmap is " + std::to_string(packed.size()) +
                         " bytes, expected " + std::to_string(want));
  }
  Mask mask(static_cast<int>(height), static_cast<int>(width));
  const size_t bits = height * width;
  for (size_t i = 0; i < bits; ++i) {
    mask[i] = static_cast<uint8_t>((packed[i / 8] >> (i % 8)) & 1u);
  }
  for (size_t i = bits; i < want * 8; ++i) {
    if ((packed[i / 8] >> (i % 8)) & 1u) {
      throw CodecError(CodecErrorCode::kInvalidField,
                       "validity bitmap has a nonzero padding bit at bit " +
                           std::to_string(i));
    }
  }
  return mask;
}

// --- Prediction ------------------------------------------------------------

std::vector<int64_t> predict_encode(const Grid<int64_t>& values,
                                    const Mask& valid) {
  if (!values.same_shape(valid.height(), valid.width())) {
    throw std::invalid_argument("value grid and mask dimensions differ");
  }
  std::vector<int64_t> residuals;
  residuals.reserve(count_valid(valid));
  int64_t prev = 0;
  for (size_t i = 0; i < valid.size(); ++i) {
    if (!valid[i]) continue;
    // Differences wrap mod 2^64. Decode adds with the same wrap, so the
    // round trip is exact for every int64 value, including the extremes.
    residuals.push_back(static_cast<int64_t>(
        static_cast<uint64_t>(values[i]) - static_cast<uint64_t>(prev)));
    prev = values[i];
  }
  return residuals;
}

Grid<int64_t> predict_decode(std::span<const int64_t> residuals,
                             const Mask& valid) {
  const size_t want = count_valid(valid);
  if (residuals.size() != want) {
    throw CodecError(CodecErrorCode::kResidualCountMismatch,
                     "got " + std::to_string(residuals.size()) +
                         " residuals for " + std::to_string(want) +
                         " valid pixels");
  }
  Grid<int64_t> values(valid.height(), valid.width(), 0);
  int64_t prev = 0;
  size_t next = 0;
  for (size_t i = 0; i < valid.size(); ++i) {
    if (!valid[i]) continue;
    int64_t v = static_cast<int64_t>(static_cast<uint64_t>(prev) +
                                     static_cast<uint64_t>(residuals[next]));
    values[i] = v;
    prev = v;
    ++next;
  }
  return values;
}

// --- Frames ----------------------------------------------------------------

namespace {

// Bytes before the validity bitmap: magic, version, sensor, return, level,
// dims, six channel steps, three rotation components.
constexpr size_t kFrameFixedHeaderBytes = 4 + 1 + 1 + 1 + 1 + 2 + 2 +
                                          8 * kNumChannels + 8 * 3;

void check_deflate_level(int level) {
  if (level < 0 || level > 9) {
    throw std::invalid_argument("deflate level must be in [0, 9], got " +
                                std::to_string(level));
  }
}

void write_frame_header(ByteWriter& w, const FrameHeader& h) {
  w.bytes(kFrameMagic);
  w.u8(kFormatVersion);
  w.u8(static_cast<uint8_t>(h.sensor_id));
  w.u8(static_cast<uint8_t>(h.return_index));
  w.u8(h.deflate_level);
  w.u16le(h.height);
  w.u16le(h.width);
  for (double step : h.channel_steps) {
    w.f64le(step);
  }
  for (double r : h.frame_rotation) {
    w.f64le(r);
  }
}

FrameHeader parse_frame_header(ByteReader& r) {
  r.set_section("frame magic");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kFrameMagic.begin())) {
    throw CodecError(CodecErrorCode::kBadMagic,
                     "frame magic mismatch (expected WLRF)");
  }
  r.set_section("frame header");
  uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw CodecError(CodecErrorCode::kUnsupportedVersion,
                     "frame version " + std::to_string(version) +
                         " is not supported (expected " +
                         std::to_string(kFormatVersion) + ")");
  }

  FrameHeader h;
  uint8_t sensor = r.u8();
  if (sensor >= kNumSensors) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "sensor id " + std::to_string(sensor) +
                         " is out of range");
  }
  h.sensor_id = static_cast<SensorId>(sensor);

  uint8_t ret = r.u8();
  if (ret > 1) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "return index " + std::to_string(ret) +
                         " is out of range");
  }
  h.return_index = static_cast<ReturnIndex>(ret);

  h.deflate_level = r.u8();
  if (h.deflate_level > 9) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "deflate level " + std::to_string(h.deflate_level) +
                         " is out of range");
  }

  h.height = r.u16le();
  h.width = r.u16le();
  int want_h = 0, want_w = 0;
  expected_dims(h.sensor_id, &want_h, &want_w);
  if (h.height != want_h || h.width != want_w) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     std::string("dimensions ") + std::to_string(h.height) +
                         "x" + std::to_string(h.width) + " do not match " +
                         to_string(h.sensor_id) + " sensor (" +
                         std::to_string(want_h) + "x" +
                         std::to_string(want_w) + ")");
  }

  for (int c = 0; c < kNumChannels; ++c) {
    double step = r.f64le();
    if (!std::isfinite(step) || step <= 0.0) {
      throw CodecError(CodecErrorCode::kInvalidField,
                       std::string("quantization step for channel ") +
                           channel_name(c) + " must be finite and positive");
    }
    h.channel_steps[static_cast<size_t>(c)] = step;
  }
  for (int i = 0; i < 3; ++i) {
    double v = r.f64le();
    if (!std::isfinite(v)) {
      throw CodecError(CodecErrorCode::kInvalidField,
                       "frame rotation component " + std::to_string(i) +
                           " is not finite");
    }
    h.frame_rotation[static_cast<size_t>(i)] = v;
  }
  return h;
}

}  // namespace

std::vector<uint8_t> encode_frame(const RangeImage& image,
                                  const QuantizationProfile& profile,
                                  int deflate_level) {
  check_deflate_level(deflate_level);
  profile.validate();
  auto violations = validate_image(image);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    std::string msg = "range image fails invariant \"" + v.invariant + "\"";
    if (v.row >= 0) {
      msg += " at (" + std::to_string(v.row) + ", " + std::to_string(v.col) +
             ")";
    }
    if (!v.detail.empty()) {
      msg += ": " + v.detail;
    }
    if (violations.size() > 1) {
      msg += " (and " + std::to_string(violations.size() - 1) + " more)";
    }
    throw std::invalid_argument(msg);
  }

  auto quantized = quantize_image(image, profile);

  FrameHeader header;
  header.sensor_id = image.geometry.sensor_id;
  header.return_index = image.return_index;
  header.deflate_level = static_cast<uint8_t>(deflate_level);
  header.height = static_cast<uint16_t>(image.geometry.height);
  header.width = static_cast<uint16_t>(image.geometry.width);
  header.channel_steps = profile.channel_steps();
  for (size_t i = 0; i < 3; ++i) {
    // The header stores the rotation already snapped to its lattice so the
    // whole frame round-trips exactly through quantization.
    header.frame_rotation[i] = dequantize_value(
        quantize_value(image.frame_rotation[i], profile.pose_rotation_step),
        profile.pose_rotation_step);
  }

  ByteWriter w;
  write_frame_header(w, header);
  w.bytes(pack_validity(image.valid));

  for (int c = 0; c < kNumChannels; ++c) {
    auto residuals =
        predict_encode(quantized[static_cast<size_t>(c)].values, image.valid);
    if (residuals.empty()) {
      varint_append(w, 0);
      continue;
    }
    std::vector<uint8_t> packed;
    packed.reserve(residuals.size() * 2);
    for (int64_t res : residuals) {
      varint_append(packed, zigzag_encode(res));
    }
    auto payload = deflate_compress(packed, deflate_level);
    varint_append(w, payload.size());
    w.bytes(payload);
  }
  return w.take();
}

DecodedFrame decode_frame(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  DecodedFrame frame;
  frame.header = parse_frame_header(r);

  r.set_section("validity bitmap");
  const size_t h = frame.header.height;
  const size_t w = frame.header.width;
  frame.valid = unpack_validity(r.bytes(bitmap_byte_count(h, w)), h, w);
  const size_t valid_count = count_valid(frame.valid);

  for (int c = 0; c < kNumChannels; ++c) {
    const std::string name = channel_name(c);
    r.set_section("channel " + name + " payload length");
    uint64_t payload_len = varint_read(r);
    r.set_section("channel " + name + " payload");
    auto payload = r.bytes(payload_len);

    std::vector<int64_t> residuals;
    if (payload_len == 0) {
      if (valid_count != 0) {
        throw CodecError(CodecErrorCode::kResidualCountMismatch,
                         "channel " + name + " payload is empty but " +
                             std::to_string(valid_count) +
                             " valid pixels need residuals");
      }
    } else {
      if (valid_count == 0) {
        throw CodecError(CodecErrorCode::kResidualCountMismatch,
                         "channel " + name +
                             " carries a payload but the frame has no valid "
                             "pixels");
      }
      // Each residual varint spends at most 10 bytes, which bounds the
      // inflated size of any well-formed payload.
      auto packed = deflate_decompress(
          payload, valid_count * static_cast<size_t>(kMaxVarintBytes));
      ByteReader packed_reader(packed);
      packed_reader.set_section("channel " + name + " residuals");
      residuals.reserve(valid_count);
      while (!packed_reader.at_end()) {
        if (residuals.size() == valid_count) {
          throw CodecError(CodecErrorCode::kResidualCountMismatch,
                           "channel " + name + " has trailing residual data");
        }
        residuals.push_back(zigzag_decode(varint_read(packed_reader)));
      }
    }
    frame.quantized[static_cast<size_t>(c)] =
        predict_decode(residuals, frame.valid);
  }

  if (!r.at_end()) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "frame has " + std::to_string(r.remaining()) +
                         " trailing bytes after the last channel payload");
  }
  return frame;
}

RangeImage DecodedFrame::to_image() const {
  return to_image(SensorGeometry::for_sensor(header.sensor_id));
}

RangeImage DecodedFrame::to_image(const SensorGeometry& geometry) const {
  if (geometry.sensor_id != header.sensor_id) {
    throw std::invalid_argument(
        std::string("geometry is for sensor ") +
        to_string(geometry.sensor_id) + " but the frame is from " +
        to_string(header.sensor_id));
  }
  if (geometry.height != header.height || geometry.width != header.width) {
    throw std::invalid_argument("geometry dimensions do not match the frame");
  }
  RangeImage img = RangeImage::zeroed(geometry, header.return_index);
  img.valid = valid;
  img.frame_rotation = header.frame_rotation;
  for (int c = 0; c < kNumChannels; ++c) {
    const Grid<int64_t>& q = quantized[static_cast<size_t>(c)];
    const double step = header.channel_steps[static_cast<size_t>(c)];
    Grid<double>& out = img.channel(c);
    for (size_t i = 0; i < q.size(); ++i) {
      out[i] = valid[i] ? static_cast<double>(q[i]) * step : 0.0;
    }
  }
  return img;
}

FrameSectionInfo inspect_frame(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  FrameSectionInfo info;
  info.header = parse_frame_header(r);
  info.header_bytes = kFrameFixedHeaderBytes;
  info.total_bytes = bytes.size();

  r.set_section("validity bitmap");
  const size_t h = info.header.height;
  const size_t w = info.header.width;
  info.bitmap_bytes = bitmap_byte_count(h, w);
  Mask valid = unpack_validity(r.bytes(info.bitmap_bytes), h, w);
  info.valid_pixels = count_valid(valid);

  for (int c = 0; c < kNumChannels; ++c) {
    const std::string name = channel_name(c);
    r.set_section("channel " + name + " payload length");
    uint64_t payload_len = varint_read(r);
    r.set_section("channel " + name + " payload");
    r.bytes(payload_len);
    info.payload_bytes[static_cast<size_t>(c)] = payload_len;
  }
  if (!r.at_end()) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "frame has " + std::to_string(r.remaining()) +
                         " trailing bytes after the last channel payload");
  }
  return info;
}

// --- Archives --------------------------------------------------------------

std::vector<uint8_t> assemble_archive(
    const std::vector<std::vector<uint8_t>>& frame_blobs) {
  ByteWriter w;
  w.bytes(kArchiveMagic);
  w.u8(kFormatVersion);
  varint_append(w, frame_blobs.size());
  for (const auto& blob : frame_blobs) {
    varint_append(w, blob.size());
    w.bytes(blob);
  }
  return w.take();
}

std::vector<std::pair<size_t, size_t>> archive_frame_extents(
    std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  r.set_section("archive magic");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kArchiveMagic.begin())) {
    throw CodecError(CodecErrorCode::kBadMagic,
                     "archive magic mismatch (expected WLRA)");
  }
  r.set_section("archive header");
  uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw CodecError(CodecErrorCode::kUnsupportedVersion,
                     "archive version " + std::to_string(version) +
                         " is not supported (expected " +
                         std::to_string(kFormatVersion) + ")");
  }
  uint64_t count = varint_read(r);
  if (count > r.remaining()) {
    // Each frame costs at least one byte for its length varint, so a count
    // beyond the remaining byte count can never be satisfied.
    throw CodecError(CodecErrorCode::kInvalidField,
                     "frame count " + std::to_string(count) +
                         " exceeds the remaining " +
                         std::to_string(r.remaining()) + " bytes");
  }

  std::vector<std::pair<size_t, size_t>> extents;
  extents.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    r.set_section("frame " + std::to_string(i) + " length");
    uint64_t len = varint_read(r);
    r.set_section("frame " + std::to_string(i) + " body");
    size_t offset = r.position();
    r.bytes(len);
    extents.emplace_back(offset, len);
  }
  if (!r.at_end()) {
    throw CodecError(CodecErrorCode::kInvalidField,
                     "archive has " + std::to_string(r.remaining()) +
                         " trailing bytes after the last frame");
  }
  return extents;
}

namespace {

// Rethrows the first captured per-frame failure (by frame index, so the
// reported error does not depend on thread scheduling), tagging it with the
// frame that caused it.
void rethrow_frame_error(const std::vector<std::exception_ptr>& errors,
                         size_t first_frame_index = 0) {
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    const std::string tag =
        "frame " + std::to_string(first_frame_index + i) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const CodecError& e) {
      throw CodecError(e.code(), tag + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(tag + e.what());
    }
  }
}

}  // namespace

std::vector<std::vector<uint8_t>> encode_frames(
    std::span<const RangeImage> frames, const QuantizationProfile& profile,
    int deflate_level, int workers) {
  check_deflate_level(deflate_level);
  profile.validate();
  const int num_workers = resolve_workers(workers);
  const int64_t n = static_cast<int64_t>(frames.size());
  std::vector<std::vector<uint8_t>> blobs(frames.size());
  std::vector<std::exception_ptr> errors(frames.size());

#pragma omp parallel for schedule(dynamic) num_threads(num_workers)
  for (int64_t i = 0; i < n; ++i) {
    try {
      blobs[static_cast<size_t>(i)] =
          encode_frame(frames[static_cast<size_t>(i)], profile,
                       deflate_level);
    } catch (...) {
      errors[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  rethrow_frame_error(errors);
  return blobs;
}

std::vector<DecodedFrame> decode_frames(
    std::span<const uint8_t> archive_bytes,
    std::span<const std::pair<size_t, size_t>> extents, int workers,
    size_t first_frame_index) {
  const int num_workers = resolve_workers(workers);
  const int64_t n = static_cast<int64_t>(extents.size());
  std::vector<DecodedFrame> frames(extents.size());
  std::vector<std::exception_ptr> errors(extents.size());

#pragma omp parallel for schedule(dynamic) num_threads(num_workers)
  for (int64_t i = 0; i < n; ++i) {
    try {
      const auto [offset, len] = extents[static_cast<size_t>(i)];
      frames[static_cast<size_t>(i)] =
          decode_frame(archive_bytes.subspan(offset, len));
    } catch (...) {
      errors[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  rethrow_frame_error(errors, first_frame_index);
  return frames;
}

std::vector<uint8_t> encode_archive_serial(std::span<const RangeImage> frames,
                                           const QuantizationProfile& profile,
                                           int deflate_level) {
  std::vector<std::vector<uint8_t>> blobs;
  blobs.reserve(frames.size());
  for (const RangeImage& img : frames) {
    blobs.push_back(encode_frame(img, profile, deflate_level));
  }
  return assemble_archive(blobs);
}

std::vector<uint8_t> encode_archive(std::span<const RangeImage> frames,
                                    const QuantizationProfile& profile,
                                    int deflate_level, int workers) {
  return assemble_archive(
      encode_frames(frames, profile, deflate_level, workers));
}

std::vector<DecodedFrame> decode_archive_serial(
    std::span<const uint8_t> bytes) {
  auto extents = archive_frame_extents(bytes);
  std::vector<DecodedFrame> frames;
  frames.reserve(extents.size());
  for (size_t i = 0; i < extents.size(); ++i) {
    try {
      frames.push_back(
          decode_frame(bytes.subspan(extents[i].first, extents[i].second)));
    } catch (const CodecError& e) {
      throw CodecError(e.code(),
                       "frame " + std::to_string(i) + ": " + e.what());
    }
  }
  return frames;
}

std::vector<DecodedFrame> decode_archive(std::span<const uint8_t> bytes,
                                         int workers) {
  auto extents = archive_frame_extents(bytes);
  return decode_frames(bytes, extents, workers);
}

}  // namespace rangekit
