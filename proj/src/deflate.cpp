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

#include "rangekit/deflate.hpp"

#include <zlib.h>

#include <stdexcept>
#include <string>

#include "rangekit/errors.hpp"

namespace rangekit {
namespace {

// Raw deflate: negative window bits suppress the zlib header/trailer.
constexpr int kWindowBits = -15;
constexpr int kMemLevel = 8;

std::string zlib_message(int rc, const char* msg) {
  std::string out = "zlib error " + std::to_string(rc);
  if (msg != nullptr && *msg != '\0') {
    out += ": ";
    out += msg;
  }
  return out;
}

}  // namespace

std::vector<uint8_t> deflate_compress(std::span<const uint8_t> input,
                                      int level) {
  if (level < 0 || level > 9) {
    throw std::invalid_argument("deflate level must be in [0, 9], got " +
                                std::to_string(level));
  }
  z_stream strm{};
  int rc = deflateInit2(&strm, level, Z_DEFLATED, kWindowBits, kMemLevel,
                        Z_DEFAULT_STRATEGY);
  if (rc != Z_OK) {
    throw CodecError(CodecErrorCode::kDeflateError,
                     zlib_message(rc, strm.msg));
  }

  std::vector<uint8_t> out(deflateBound(&strm, input.size()));
  strm.next_in = const_cast<Bytef*>(input.data());
  strm.avail_in = static_cast<uInt>(input.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());

  rc = deflate(&strm, Z_FINISH);
  if (rc != Z_STREAM_END) {
    deflateEnd(&strm);
    throw CodecError(CodecErrorCode::kDeflateError,
                     zlib_message(rc, strm.msg));
  }
  out.resize(strm.total_out);
  deflateEnd(&strm);
  return out;
}

std::vector<uint8_t> deflate_decompress(std::span<const uint8_t> input,
                                        size_t max_output) {
  z_stream strm{};
  int rc = inflateInit2(&strm, kWindowBits);
  if (rc != Z_OK) {
    throw CodecError(CodecErrorCode::kDeflateError,
                     zlib_message(rc, strm.msg));
  }

  std::vector<uint8_t> out;
  std::vector<uint8_t> chunk(64 * 1024);
  strm.next_in = const_cast<Bytef*>(input.data());
  strm.avail_in = static_cast<uInt>(input.size());

  for (;;) {
    strm.next_out = chunk.data();
    strm.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
      std::string msg = zlib_message(rc, strm.msg);
      inflateEnd(&strm);
      throw CodecError(CodecErrorCode::kDeflateError, msg);
    }
    size_t produced = chunk.size() - strm.avail_out;
    if (out.size() + produced > max_output) {
      inflateEnd(&strm);
      throw CodecError(CodecErrorCode::kDeflateError,
                       "decompressed payload exceeds limit of " +
                           std::to_string(max_output) + " bytes");
    }
    out.insert(out.end(), chunk.begin(), chunk.begin() + produced);
    if (rc == Z_STREAM_END) {
      break;
    }
    if (rc == Z_BUF_ERROR && produced == 0) {
      // No forward progress: the stream ended without a final block.
      inflateEnd(&strm);
      throw CodecError(CodecErrorCode::kDeflateError,
                       "deflate stream is incomplete");
    }
  }
  if (strm.avail_in != 0) {
    inflateEnd(&strm);
    throw CodecError(CodecErrorCode::kDeflateError,
                     "trailing bytes after deflate stream end");
  }
  inflateEnd(&strm);
  return out;
}

}  // namespace rangekit
