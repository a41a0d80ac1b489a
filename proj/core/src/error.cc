/*
 * Copyright 2026 The Calens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "calens/error.h"

namespace calens {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kMissingGold: return "MissingGold";
    case ErrorCode::kInvalidBinCount: return "InvalidBinCount";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kInsufficientPool: return "InsufficientPool";
    case ErrorCode::kInsufficientTemplates: return "InsufficientTemplates";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kProtocolError: return "ProtocolError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      detail_(message) {}

Error Error::with_context(const std::string& context) const {
  return Error(code_, context + ": " + detail_);
}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace calens
