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

#include <filesystem>
#include <vector>

#include <gtest/gtest.h>

#include "rangekit/errors.hpp"
#include "rangekit/rng.hpp"
#include "test_util.hpp"

namespace rangekit {
namespace {

namespace fs = std::filesystem;
using test::make_temp_dir;
using test::random_image;

// The interchange format stores float32, so build an image on the f32 grid.
RangeImage f32_image(uint64_t seed, SensorId sensor, ReturnIndex ret) {
  Rng rng(seed);
  RangeImage img = random_image(rng, sensor, ret);
  for (int c = 0; c < kNumChannels; ++c) {
    for (auto& v : img.channel(c).data()) {
      v = static_cast<double>(static_cast<float>(v));
    }
  }
  return img;
}

TEST(RawFrame, RoundTripsThroughBytes) {
  const RangeImage img = f32_image(1, SensorId::kFrontLeft,
                                   ReturnIndex::kSecond);
  const auto bytes = write_raw_frame(img);
  EXPECT_EQ(bytes[0], 'W');
  EXPECT_EQ(bytes[1], 'L');
  EXPECT_EQ(bytes[2], 'R');
  EXPECT_EQ(bytes[3], 'I');

  const RangeImage back = read_raw_frame(bytes);
  EXPECT_EQ(back.geometry, img.geometry);
  EXPECT_EQ(back.return_index, img.return_index);
  EXPECT_EQ(back.valid, img.valid);
  EXPECT_EQ(back.frame_rotation, img.frame_rotation);
  for (int c = 0; c < kNumChannels; ++c) {
    const auto& a = img.channel(c);
    const auto& b = back.channel(c);
    for (size_t i = 0; i < a.size(); ++i) {
      if (img.valid[i]) {
        ASSERT_EQ(a[i], b[i]) << "channel " << c << " index " << i;
      } else {
        ASSERT_EQ(b[i], 0.0);  // invalid pixels are normalized to zero
      }
    }
  }
}

TEST(RawFrame, InvalidPixelsAreZeroedOnWrite) {
  RangeImage img = f32_image(2, SensorId::kSideRight, ReturnIndex::kFirst);
  bool found_invalid = false;
  for (size_t i = 0; i < img.valid.size(); ++i) {
    if (!img.valid[i]) {
      img.range[i] = 123.0;  // junk that must not survive the round trip
      found_invalid = true;
    }
  }
  ASSERT_TRUE(found_invalid);
  const RangeImage back = read_raw_frame(write_raw_frame(img));
  for (size_t i = 0; i < img.valid.size(); ++i) {
    if (!img.valid[i]) {
      ASSERT_EQ(back.range[i], 0.0);
    }
  }
}

TEST(RawFrame, ExplicitGeometryOverridesInclinations) {
  const RangeImage img = f32_image(3, SensorId::kTop, ReturnIndex::kFirst);
  SensorGeometry geom = img.geometry;
  geom.inclination_min = -0.5;
  geom.inclination_max = 0.5;
  const RangeImage back = read_raw_frame(write_raw_frame(img), geom);
  EXPECT_EQ(back.geometry.inclination_min, -0.5);
  EXPECT_EQ(back.geometry.inclination_max, 0.5);
}

TEST(RawFrame, CorruptionIsTyped) {
  const RangeImage img = f32_image(4, SensorId::kFrontRight,
                                   ReturnIndex::kFirst);
  const auto good = write_raw_frame(img);

  auto bytes = good;
  bytes[0] = 'Z';
  try {
    (void)read_raw_frame(bytes);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kBadMagic);
  }

  bytes = good;
  bytes[4] = 3;  // version
  try {
    (void)read_raw_frame(bytes);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kUnsupportedVersion);
  }

  bytes = good;
  bytes[5] = 200;  // sensor id
  try {
    (void)read_raw_frame(bytes);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kInvalidField);
  }

  bytes = good;
  bytes[7] = 1;  // reserved byte must stay zero
  try {
    (void)read_raw_frame(bytes);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kInvalidField);
  }

  bytes = good;
  bytes.pop_back();
  try {
    (void)read_raw_frame(bytes);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kTruncated);
  }

  bytes = good;
  bytes.push_back(0);
  try {
    (void)read_raw_frame(bytes);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kInvalidField);
  }
}

TEST(RawFrame, FileHelpersAndListing) {
  const fs::path dir = make_temp_dir("rawio");
  const RangeImage img = f32_image(5, SensorId::kSideLeft,
                                   ReturnIndex::kFirst);
  const auto bytes = write_raw_frame(img);

  write_file(dir / "b.wlri", bytes);
  write_file(dir / "a.wlri", bytes);
  write_file(dir / "notes.txt", bytes);
  fs::create_directories(dir / "sub.wlri");  // directories are skipped

  const auto listed = list_raw_frames(dir);
  ASSERT_EQ(listed.size(), 2u);
  EXPECT_EQ(listed[0].filename(), "a.wlri");
  EXPECT_EQ(listed[1].filename(), "b.wlri");

  EXPECT_EQ(read_file(dir / "a.wlri"), bytes);
  EXPECT_THROW((void)read_file(dir / "missing.wlri"), std::runtime_error);

  fs::remove_all(dir);
}

}  // namespace
}  // namespace rangekit
