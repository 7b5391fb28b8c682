/*
 Copyright 2026 The groundkit Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace groundkit {

// Input-side failure categories. Every reader rejects malformed input with
// one of these instead of repairing it.
enum class ErrorCode {
  kInvalidArgument,
  kIo,
  // HMB1 bundles
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kTrailingData,
  kNonFiniteValue,
  kNegativeValue,
  kBadTrailer,
  // JSON lines
  kMalformedJson,
  kMissingField,
  kDuplicateId,
  kOutOfBounds,
  kDanglingReference,
  // CoNLL-U
  kBadColumnCount,
  kBadNumber,
  kNoRoot,
  kMultipleRoots,
  kCycle,
  kBadHead,
  // subword alignment
  kAlignmentMismatch,
};

std::string_view ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // 1-based line number in the offending text file, when one applies.
  std::optional<std::size_t> line() const noexcept { return line_; }
  // The message without the code and line decoration.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string detail_;
};

}  // namespace groundkit
