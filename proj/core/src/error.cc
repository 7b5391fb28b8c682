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

#include "groundkit/error.h"

namespace groundkit {
namespace {

std::string Decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(ToString(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated payload";
    case ErrorCode::kTrailingData: return "trailing data";
    case ErrorCode::kNonFiniteValue: return "non-finite value";
    case ErrorCode::kNegativeValue: return "negative value";
    case ErrorCode::kBadTrailer: return "bad trailer";
    case ErrorCode::kMalformedJson: return "malformed json";
    case ErrorCode::kMissingField: return "missing field";
    case ErrorCode::kDuplicateId: return "duplicate id";
    case ErrorCode::kOutOfBounds: return "out of bounds";
    case ErrorCode::kDanglingReference: return "dangling reference";
    case ErrorCode::kBadColumnCount: return "bad column count";
    case ErrorCode::kBadNumber: return "bad number";
    case ErrorCode::kNoRoot: return "no root";
    case ErrorCode::kMultipleRoots: return "multiple roots";
    case ErrorCode::kCycle: return "cycle";
    case ErrorCode::kBadHead: return "bad head";
    case ErrorCode::kAlignmentMismatch: return "alignment mismatch";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(Decorate(code, message, line)),
      code_(code),
      line_(line),
      detail_(message) {}

}  // namespace groundkit
