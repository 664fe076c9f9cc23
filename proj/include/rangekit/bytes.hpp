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

#ifndef RANGEKIT_BYTES_H_
#define RANGEKIT_BYTES_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "rangekit/errors.hpp"

namespace rangekit {

// Little-endian byte sink used by all container writers.
class ByteWriter {
 public:
  void u8(uint8_t v) { out_.push_back(v); }

  void u16le(uint16_t v) {
    out_.push_back(static_cast<uint8_t>(v & 0xff));
    out_.push_back(static_cast<uint8_t>(v >> 8));
  }

  void u64le(uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
  }

  void f64le(double v) { u64le(std::bit_cast<uint64_t>(v)); }

  void f32le(float v) {
    uint32_t bits = std::bit_cast<uint32_t>(v);
    for (int i = 0; i < 4; ++i) {
      out_.push_back(static_cast<uint8_t>(bits >> (8 * i)));
    }
  }

  void bytes(std::span<const uint8_t> data) {
    out_.insert(out_.end(), data.begin(), data.end());
  }

  size_t size() const { return out_.size(); }
  std::vector<uint8_t> take() { return std::move(out_); }
  const std::vector<uint8_t>& buffer() const { return out_; }

 private:
  std::vector<uint8_t> out_;
};

// Bounds-checked little-endian byte source. Every read is checked against the
// buffer end, so decoding can never walk past the input; failures throw
// CodecError naming the section being parsed.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  void set_section(std::string name) { section_ = std::move(name); }
  const std::string& section() const { return section_; }

  size_t position() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  uint16_t u16le() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_]) |
                 static_cast<uint16_t>(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  uint64_t u64le() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  double f64le() { return std::bit_cast<double>(u64le()); }

  float f32le() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return std::bit_cast<float>(v);
  }

  std::span<const uint8_t> bytes(size_t n) {
    need(n);
    auto view = data_.subspan(pos_, n);
    pos_ += n;
    return view;
  }

 private:
  void need(size_t n) {
    if (data_.size() - pos_ < n) {
      throw CodecError(CodecErrorCode::kTruncated,
                       "input ends inside " +
                           (section_.empty() ? std::string("stream")
                                             : section_) +
                           " (need " + std::to_string(n) + " more bytes, " +
                           std::to_string(data_.size() - pos_) + " left)");
    }
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  std::string section_;
};

}  // namespace rangekit

#endif  // RANGEKIT_BYTES_H_
