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

#ifndef RANGEKIT_VARINT_H_
#define RANGEKIT_VARINT_H_

#include <cstdint>
#include <vector>

#include "rangekit/bytes.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

// Base-128 varint, least-significant group first, bit 7 as the continuation
// flag. A uint64 needs at most 10 bytes; the final byte of a 10-byte encoding
// may only carry the single remaining high bit.
inline constexpr int kMaxVarintBytes = 10;

inline void varint_append(std::vector<uint8_t>& out, uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<uint8_t>(value) | 0x80);
    value >>= 7;
  }
  out.push_back(static_cast<uint8_t>(value));
}

inline void varint_append(ByteWriter& out, uint64_t value) {
  while (value >= 0x80) {
    out.u8(static_cast<uint8_t>(value) | 0x80);
    value >>= 7;
  }
  out.u8(static_cast<uint8_t>(value));
}

inline std::vector<uint8_t> varint_encode(uint64_t value) {
  std::vector<uint8_t> out;
  varint_append(out, value);
  return out;
}

// Reads one varint through the bounds-checked reader. Rejects encodings
// longer than 10 bytes, encodings whose 10th byte overflows 64 bits, and
// streams that end mid-value (the reader reports that as truncation).
inline uint64_t varint_read(ByteReader& in) {
  uint64_t value = 0;
  for (int i = 0; i < kMaxVarintBytes; ++i) {
    uint8_t byte = in.u8();
    uint64_t group = byte & 0x7f;
    if (i == 9 && group > 1) {
      throw CodecError(CodecErrorCode::kVarintError,
                       "varint overflows 64 bits in " + in.section());
    }
    value |= group << (7 * i);
    if ((byte & 0x80) == 0) {
      return value;
    }
  }
  throw CodecError(CodecErrorCode::kVarintError,
                   "varint longer than 10 bytes in " + in.section());
}

// Zigzag maps signed values to unsigned so small magnitudes of either sign
// stay small: 0,-1,1,-2,2,... -> 0,1,2,3,4,...
inline uint64_t zigzag_encode(int64_t n) {
  return (static_cast<uint64_t>(n) << 1) ^
         static_cast<uint64_t>(n >> 63);
}

inline int64_t zigzag_decode(uint64_t u) {
  return static_cast<int64_t>(u >> 1) ^ -static_cast<int64_t>(u & 1);
}

}  // namespace rangekit

#endif  // RANGEKIT_VARINT_H_
