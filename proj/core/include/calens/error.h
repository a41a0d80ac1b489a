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

#ifndef CALENS_ERROR_H_
#define CALENS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace calens {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidConfig,
  kIoError,
  kParseError,
  kDegenerateDistribution,
  kInvalidProbability,
  kUnknownLabel,
  kShapeMismatch,
  kMissingGold,
  kInvalidBinCount,
  kEmptyInput,
  kEmptyGroup,
  kEmptyBatch,
  kMissingField,
  kInsufficientPool,
  kInsufficientTemplates,
  kMissingPrediction,
  kBackendUnavailable,
  kProtocolError,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the library surfaces as an Error carrying a typed code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }
  // Same code, detail prefixed with "<context>: ".
  Error with_context(const std::string& context) const;

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace calens

#endif  // CALENS_ERROR_H_
