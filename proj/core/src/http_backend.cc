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

#include "calens/http_backend.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "calens/error.h"
#include "httplib.h"
#include "json.hpp"

namespace calens {

HttpOptions HttpOptions::with_env_overrides(HttpOptions options) {
  const char* raw = std::getenv(std::string(kHttpTimeoutEnv).c_str());
  if (raw == nullptr || *raw == '\0') return options;
  char* end = nullptr;
  const double secs = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(secs > 0.0) || !std::isfinite(secs)) {
    raise(ErrorCode::kInvalidConfig,
          std::string(kHttpTimeoutEnv) + " must be a positive number of seconds, got '" + raw + "'");
  }
  options.timeout = std::chrono::milliseconds(static_cast<long long>(std::llround(secs * 1000.0)));
  return options;
}

HttpBackend::HttpBackend(HttpOptions options) : options_(std::move(options)) {
  std::string url = options_.endpoint;
  if (url.empty()) raise(ErrorCode::kInvalidConfig, "http backend needs an endpoint");
  if (url.rfind("https://", 0) == 0) {
    raise(ErrorCode::kInvalidConfig, "https endpoints are not supported in this build");
  }
  if (url.rfind("http://", 0) != 0) url = "http://" + url;
  const auto path_start = url.find('/', std::string_view("http://").size());
  host_ = url.substr(0, path_start);
  prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
  if (options_.retries < 0) options_.retries = 0;
}

std::string score_request_body(const ScoreRequest& request) {
  nlohmann::ordered_json j;
  j["prompt"] = request.prompt;
  j["labels"] = request.labels;
  return j.dump();
}

ProbDist dist_from_log_probs(std::span<const double> log_probs, std::size_t num_labels,
                             bool* renormalized) {
  if (log_probs.size() != num_labels) {
    raise(ErrorCode::kShapeMismatch, "got " + std::to_string(log_probs.size()) +
                                         " log-probs for " + std::to_string(num_labels) +
                                         " labels");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double v : log_probs) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      raise(ErrorCode::kProtocolError, "log-prob is NaN or +inf");
    }
    top = std::max(top, v);
  }
  if (top == -std::numeric_limits<double>::infinity()) {
    raise(ErrorCode::kProtocolError, "every log-prob is -inf");
  }
  std::vector<double> probs(log_probs.size());
  double raw_total = 0.0;
  double shifted_total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    raw_total += std::exp(log_probs[i]);
    probs[i] = std::exp(log_probs[i] - top);
    shifted_total += probs[i];
  }
  for (double& p : probs) p /= shifted_total;
  if (renormalized != nullptr) *renormalized = std::abs(raw_total - 1.0) > kProbTolerance;
  return ProbDist::from_computed(std::move(probs));
}

ProbDist parse_score_response(std::string_view body, std::size_t num_labels,
                              bool* renormalized) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kProtocolError, std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("log_probs") || !j["log_probs"].is_array()) {
    raise(ErrorCode::kProtocolError, "response lacks a 'log_probs' array");
  }
  std::vector<double> values;
  for (const auto& v : j["log_probs"]) {
    if (!v.is_number()) raise(ErrorCode::kProtocolError, "non-numeric log-prob in response");
    values.push_back(v.get<double>());
  }
  return dist_from_log_probs(values, num_labels, renormalized);
}

ProbDist HttpBackend::score(const ScoreRequest& request) const {
  const std::string body = score_request_body(request);
  const std::string path = prefix_ + "/score";
  std::string last_failure;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.retry_backoff * attempt);
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto result = client.Post(path, body, "application/json");
    if (!result) {
      last_failure = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      last_failure = "HTTP status " + std::to_string(result->status);
      if (result->status >= 500) continue;
      break;
    }
    bool renormalized = false;
    try {
      ProbDist dist = parse_score_response(result->body, request.labels.size(), &renormalized);
      if (renormalized) ++renormalized_;
      return dist;
    } catch (const Error& e) {
      throw e.with_context("(" + request.example_id + ", " + request.variant_id + ")");
    }
  }
  raise(ErrorCode::kBackendUnavailable, host_ + path + " for (" + request.example_id + ", " +
                                            request.variant_id + "): " + last_failure +
                                            " after " + std::to_string(options_.retries + 1) +
                                            " attempt(s)");
}

}  // namespace calens
