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

#ifndef RANGEKIT_DEFLATE_H_
#define RANGEKIT_DEFLATE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace rangekit {

inline constexpr int kDefaultDeflateLevel = 6;

// Compresses with raw deflate (no zlib or gzip wrapper, 32 KiB window).
// level must be 0..9. The output for a given (input, level) pair is stable,
// which the archive-level determinism guarantees rely on.
std::vector<uint8_t> deflate_compress(std::span<const uint8_t> input,
                                      int level);

// Inflates a raw deflate stream. max_output bounds the decompressed size so
// corrupt or hostile payloads cannot balloon memory; exceeding it, trailing
// garbage after the final block, or a malformed stream throws CodecError
// with kDeflateError.
std::vector<uint8_t> deflate_decompress(std::span<const uint8_t> input,
                                        size_t max_output);

}  // namespace rangekit

#endif  // RANGEKIT_DEFLATE_H_
