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

// Lossless codec for quantized range images.
//
// A frame is encoded channel by channel: quantize to the channel's step,
// delta-predict along the row-major scan of valid pixels, zigzag-map the
// residuals, varint-pack them, and deflate the packed bytes. Invalid pixels
// are skipped entirely; their positions live in a validity bitmap so decode
// reproduces the exact quantized planes and mask, bit for bit.
//
// The byte-level frame and archive layouts are documented in
// docs/formats.md and are frozen at version 1.

#ifndef RANGEKIT_CODEC_H_
#define RANGEKIT_CODEC_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rangekit/deflate.hpp"
#include "rangekit/grid.hpp"
#include "rangekit/range_image.hpp"
#include "rangekit/workers.hpp"

namespace rangekit {

inline constexpr uint8_t kFormatVersion = 1;
inline constexpr std::array<uint8_t, 4> kFrameMagic = {'W', 'L', 'R', 'F'};
inline constexpr std::array<uint8_t, 4> kArchiveMagic = {'W', 'L', 'R', 'A'};

// --- Validity bitmap -------------------------------------------------------

inline size_t bitmap_byte_count(size_t height, size_t width) {
  return (height * width + 7) / 8;
}

// Packs the mask row-major, least-significant bit first within each byte.
// Padding bits in the final byte are zero.
std::vector<uint8_t> pack_validity(const Mask& mask);

// Inverse of pack_validity. Rejects input of the wrong size and nonzero
// padding bits.
Mask unpack_validity(std::span<const uint8_t> packed, size_t height,
                     size_t width);

// --- Prediction ------------------------------------------------------------

// Walks valid pixels in row-major order and emits value minus the previous
// valid pixel's value; the first valid pixel is predicted as 0 so its
// residual is the value itself. Returns one residual per valid pixel.
std::vector<int64_t> predict_encode(const Grid<int64_t>& values,
                                    const Mask& valid);

// Inverse of predict_encode. residuals.size() must equal the number of valid
// pixels in the mask (CodecError otherwise); invalid pixels decode to 0.
// Sums wrap mod 2^64, mirroring predict_encode, so every residual stream
// decodes to a well-defined grid.
Grid<int64_t> predict_decode(std::span<const int64_t> residuals,
                             const Mask& valid);

// --- Frames ----------------------------------------------------------------

struct FrameHeader {
  SensorId sensor_id = SensorId::kTop;
  ReturnIndex return_index = ReturnIndex::kFirst;
  uint8_t deflate_level = kDefaultDeflateLevel;
  uint16_t height = 0;
  uint16_t width = 0;
  // Quantization steps in channel order (range, intensity, elongation,
  // pose_tx, pose_ty, pose_tz).
  std::array<double, kNumChannels> channel_steps{};
  // Roll, pitch, yaw snapped to the rotation-step lattice at encode time.
  std::array<double, 3> frame_rotation{};

  bool operator==(const FrameHeader&) const = default;
};

struct DecodedFrame {
  FrameHeader header;
  Mask valid;
  std::array<Grid<int64_t>, kNumChannels> quantized;

  QuantizedChannel channel(int c) const {
    return QuantizedChannel{quantized[static_cast<size_t>(c)],
                            header.channel_steps[static_cast<size_t>(c)],
                            valid};
  }

  // Dequantizes back to a RangeImage with the default geometry for the
  // header's sensor, or with an explicit geometry whose dimensions must
  // match the header.
  RangeImage to_image() const;
  RangeImage to_image(const SensorGeometry& geometry) const;
};

// Quantizes and serializes one frame. The image must pass validate_image;
// violations throw std::invalid_argument.
std::vector<uint8_t> encode_frame(const RangeImage& image,
                                  const QuantizationProfile& profile,
                                  int deflate_level = kDefaultDeflateLevel);

// Parses and fully validates one frame. Any malformed input throws
// CodecError; a frame is never partially decoded.
DecodedFrame decode_frame(std::span<const uint8_t> bytes);

// Section-level accounting for one encoded frame: parses the header and
// bitmap and records payload lengths without inflating anything.
struct FrameSectionInfo {
  FrameHeader header;
  size_t total_bytes = 0;
  size_t header_bytes = 0;
  size_t bitmap_bytes = 0;
  size_t valid_pixels = 0;
  std::array<size_t, kNumChannels> payload_bytes{};
};

FrameSectionInfo inspect_frame(std::span<const uint8_t> bytes);

// --- Archives --------------------------------------------------------------

// Concatenates already-encoded frames into an archive blob.
std::vector<uint8_t> assemble_archive(
    const std::vector<std::vector<uint8_t>>& frame_blobs);

// Parses the archive envelope and returns each frame's (offset, length)
// within the buffer, without decoding the frames themselves.
std::vector<std::pair<size_t, size_t>> archive_frame_extents(
    std::span<const uint8_t> bytes);

// Encodes a batch of frames to per-frame blobs across OpenMP workers.
// Results are ordered like the input regardless of scheduling. Callers
// stream large datasets by encoding in batches and assembling at the end.
std::vector<std::vector<uint8_t>> encode_frames(
    std::span<const RangeImage> frames, const QuantizationProfile& profile,
    int deflate_level = kDefaultDeflateLevel, int workers = 0);

// Decodes the frames at the given extents of an archive buffer across
// OpenMP workers. first_frame_index only labels error messages when a batch
// does not start at the archive's first frame.
std::vector<DecodedFrame> decode_frames(
    std::span<const uint8_t> archive_bytes,
    std::span<const std::pair<size_t, size_t>> extents, int workers = 0,
    size_t first_frame_index = 0);

// Encodes frames into an archive. The parallel variant splits frames across
// OpenMP workers and assembles the results in input order, so its output is
// byte-identical to the serial reference for every worker count.
std::vector<uint8_t> encode_archive_serial(std::span<const RangeImage> frames,
                                           const QuantizationProfile& profile,
                                           int deflate_level =
                                               kDefaultDeflateLevel);
std::vector<uint8_t> encode_archive(std::span<const RangeImage> frames,
                                    const QuantizationProfile& profile,
                                    int deflate_level = kDefaultDeflateLevel,
                                    int workers = 0);

std::vector<DecodedFrame> decode_archive_serial(
    std::span<const uint8_t> bytes);
std::vector<DecodedFrame> decode_archive(std::span<const uint8_t> bytes,
                                         int workers = 0);

}  // namespace rangekit

#endif  // RANGEKIT_CODEC_H_
