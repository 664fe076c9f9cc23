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

#ifndef RANGEKIT_ERRORS_H_
#define RANGEKIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rangekit {

// Why a frame or archive failed to decode. Every decode failure carries one
// of these so callers can react to the class of problem without parsing
// message text.
enum class CodecErrorCode {
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kDeflateError,
  kResidualCountMismatch,
  kVarintError,
  kInvalidField,
};

const char* to_string(CodecErrorCode code);

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  CodecErrorCode code() const { return code_; }

 private:
  CodecErrorCode code_;
};

// Problem in a text-format input (scenario/prediction JSONL, config files).
// location identifies the offending file, line, or field.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(location) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace rangekit

#endif  // RANGEKIT_ERRORS_H_
