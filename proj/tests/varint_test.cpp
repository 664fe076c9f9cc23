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

#include "rangekit/varint.hpp"

#include <cstdint>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "rangekit/bytes.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/rng.hpp"

namespace rangekit {
namespace {

uint64_t decode_one(const std::vector<uint8_t>& bytes) {
  ByteReader reader(bytes);
  const uint64_t value = varint_read(reader);
  EXPECT_TRUE(reader.at_end());
  return value;
}

TEST(Varint, KnownEncodings) {
  EXPECT_EQ(varint_encode(0), (std::vector<uint8_t>{0x00}));
  EXPECT_EQ(varint_encode(1), (std::vector<uint8_t>{0x01}));
  EXPECT_EQ(varint_encode(127), (std::vector<uint8_t>{0x7F}));
  EXPECT_EQ(varint_encode(128), (std::vector<uint8_t>{0x80, 0x01}));
  EXPECT_EQ(varint_encode(300), (std::vector<uint8_t>{0xAC, 0x02}));
  EXPECT_EQ(varint_encode(std::numeric_limits<uint64_t>::max()),
            (std::vector<uint8_t>{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF,
                                  0xFF, 0xFF, 0x01}));
}

TEST(Varint, EncodedLengthBounds) {
  EXPECT_EQ(varint_encode(0).size(), 1u);
  EXPECT_EQ(varint_encode((1ull << 7) - 1).size(), 1u);
  EXPECT_EQ(varint_encode(1ull << 7).size(), 2u);
  EXPECT_EQ(varint_encode((1ull << 63)).size(), 10u);
  EXPECT_EQ(size_t{kMaxVarintBytes}, 10u);
}

TEST(Varint, ExhaustiveSmallRoundTrip) {
  for (uint64_t v = 0; v < (1ull << 16); ++v) {
    ASSERT_EQ(decode_one(varint_encode(v)), v);
  }
}

TEST(Varint, RandomRoundTrip) {
  Rng rng(0xfeedbeef);
  for (int i = 0; i < 100000; ++i) {
    // Mix full-width values with small ones so every length occurs.
    uint64_t v = rng.next_u64() >> (rng.next_u64() % 64);
    ASSERT_EQ(decode_one(varint_encode(v)), v);
  }
}

TEST(Varint, SequenceRoundTrip) {
  std::vector<uint8_t> buffer;
  const std::vector<uint64_t> values = {0, 1, 300, 1ull << 40,
                                        std::numeric_limits<uint64_t>::max()};
  for (uint64_t v : values) varint_append(buffer, v);
  ByteReader reader(buffer);
  for (uint64_t v : values) {
    EXPECT_EQ(varint_read(reader), v);
  }
  EXPECT_TRUE(reader.at_end());
}

TEST(Varint, TruncatedInputThrowsTyped) {
  const std::vector<uint8_t> empty;
  ByteReader r0(empty);
  try {
    varint_read(r0);
    FAIL() << "expected CodecError";
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kTruncated);
  }

  const std::vector<uint8_t> dangling = {0x80};  // continuation, then EOF
  ByteReader r1(dangling);
  try {
    varint_read(r1);
    FAIL() << "expected CodecError";
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kTruncated);
  }
}

TEST(Varint, OverlongAndOverflowThrowTyped) {
  // Ten continuation bytes: no terminator within the maximum length.
  const std::vector<uint8_t> too_long(10, 0x80);
  ByteReader r0(too_long);
  try {
    varint_read(r0);
    FAIL() << "expected CodecError";
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kVarintError);
  }

  // Tenth byte carries bits beyond 2^64.
  std::vector<uint8_t> overflow(9, 0xFF);
  overflow.push_back(0x02);
  ByteReader r1(overflow);
  try {
    varint_read(r1);
    FAIL() << "expected CodecError";
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrorCode::kVarintError);
  }
}

TEST(Zigzag, KnownMappings) {
  EXPECT_EQ(zigzag_encode(0), 0u);
  EXPECT_EQ(zigzag_encode(-1), 1u);
  EXPECT_EQ(zigzag_encode(1), 2u);
  EXPECT_EQ(zigzag_encode(-2), 3u);
  EXPECT_EQ(zigzag_encode(2), 4u);
  EXPECT_EQ(zigzag_encode(std::numeric_limits<int64_t>::max()),
            std::numeric_limits<uint64_t>::max() - 1);
  EXPECT_EQ(zigzag_encode(std::numeric_limits<int64_t>::min()),
            std::numeric_limits<uint64_t>::max());
}

TEST(Zigzag, RoundTripExtremesAndRandom) {
  const int64_t extremes[] = {0, 1, -1, std::numeric_limits<int64_t>::max(),
                              std::numeric_limits<int64_t>::min(),
                              int64_t{1} << 62, -(int64_t{1} << 62)};
  for (int64_t v : extremes) {
    EXPECT_EQ(zigzag_decode(zigzag_encode(v)), v);
  }
  Rng rng(0x5eed);
  for (int i = 0; i < 100000; ++i) {
    const int64_t v = static_cast<int64_t>(rng.next_u64());
    ASSERT_EQ(zigzag_decode(zigzag_encode(v)), v);
    const uint64_t u = rng.next_u64();
    ASSERT_EQ(zigzag_encode(zigzag_decode(u)), u);
  }
}

TEST(Zigzag, SmallMagnitudesGetShortVarints) {
  for (int64_t v = -64; v <= 63; ++v) {
    EXPECT_EQ(varint_encode(zigzag_encode(v)).size(), 1u) << v;
  }
  EXPECT_EQ(varint_encode(zigzag_encode(64)).size(), 2u);
  EXPECT_EQ(varint_encode(zigzag_encode(-65)).size(), 2u);
}

}  // namespace
}  // namespace rangekit
