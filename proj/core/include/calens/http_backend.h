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

#ifndef CALENS_HTTP_BACKEND_H_
#define CALENS_HTTP_BACKEND_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "calens/backend.h"
#include "calens/types.h"

namespace calens {

inline constexpr std::string_view kHttpTimeoutEnv = "CALENS_HTTP_TIMEOUT_SECS";

struct HttpOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"
  std::chrono::milliseconds timeout{30000};
  int retries = 2;  // extra attempts after a transport failure
  std::chrono::milliseconds retry_backoff{200};
  std::size_t max_in_flight = 8;

  // Applies CALENS_HTTP_TIMEOUT_SECS when set. Throws kInvalidConfig on a
  // malformed value.
  static HttpOptions with_env_overrides(HttpOptions options);
};

// Client for the scoring wire protocol:
//   POST <endpoint>/score  {"prompt": "...", "labels": [...]}
//   200 -> {"log_probs": [...]} aligned with the request labels.
class HttpBackend : public ScoringBackend {
 public:
  explicit HttpBackend(HttpOptions options);

  // Throws kBackendUnavailable, kProtocolError or kShapeMismatch.
  ProbDist score(const ScoreRequest& request) const override;
  std::string name() const override { return "http"; }
  std::size_t max_parallelism() const override { return options_.max_in_flight; }

  const HttpOptions& options() const { return options_; }
  // Responses whose exponentiated log-probs did not already sum to one.
  std::size_t renormalized_count() const { return renormalized_.load(); }

 private:
  HttpOptions options_;
  std::string host_;   // scheme://host:port
  std::string prefix_; // path prefix before /score
  mutable std::atomic<std::size_t> renormalized_{0};
};

std::string score_request_body(const ScoreRequest& request);

// exp + renormalize over the candidate labels. Sets *renormalized when the
// raw exponentials were off by more than kProbTolerance. Throws
// kShapeMismatch or kProtocolError (NaN, +inf, or all -inf).
ProbDist dist_from_log_probs(std::span<const double> log_probs, std::size_t num_labels,
                             bool* renormalized = nullptr);

// Parses a /score response body. Throws kProtocolError or kShapeMismatch.
ProbDist parse_score_response(std::string_view body, std::size_t num_labels,
                              bool* renormalized = nullptr);

}  // namespace calens

#endif  // CALENS_HTTP_BACKEND_H_
