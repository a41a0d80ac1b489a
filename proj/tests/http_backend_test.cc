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

// HTTP scoring client against an in-process stub server speaking the wire
// protocol: POST /score {"prompt", "labels"} -> {"log_probs"}.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "calens/backend.h"
#include "calens/error.h"
#include "calens/http_backend.h"
#include "calens/random.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

namespace calens {
namespace {

using ::calens::testing::max_abs_diff;
using ::calens::testing::to_vector;

// Deterministic, deliberately unnormalized label scores.
std::vector<double> stub_log_probs(const std::string& prompt,
                                   const std::vector<std::string>& labels) {
  std::vector<double> out;
  for (const auto& label : labels) {
    out.push_back(-0.5 - static_cast<double>(fnv1a64(prompt + "\x1f" + label) % 4000) / 1000.0);
  }
  return out;
}

std::vector<double> expected_dist(const std::vector<double>& log_probs) {
  std::vector<double> p;
  double sum = 0.0;
  for (double l : log_probs) {
    p.push_back(std::exp(l));
    sum += p.back();
  }
  for (auto& x : p) x /= sum;
  return p;
}

class StubServer {
 public:
  StubServer() {
    server_.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      if (req.get_header_value("Content-Type") != "application/json") {
        res.status = 415;
        return;
      }
      const auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("prompt") || !body.contains("labels")) {
        res.status = 400;
        return;
      }
      const auto prompt = body["prompt"].get<std::string>();
      const auto labels = body["labels"].get<std::vector<std::string>>();
      if (prompt == "fixed") {
        res.set_content(R"({"log_probs":[-0.2231,-1.6094]})", "application/json");
      } else if (prompt == "too-many") {
        res.set_content(R"({"log_probs":[-1.0,-1.0,-1.0]})", "application/json");
      } else if (prompt == "garbage") {
        res.set_content("not json", "application/json");
      } else if (prompt == "nan") {
        res.set_content(R"({"log_probs":[-1.0,"x"]})", "application/json");
      } else if (prompt == "missing") {
        res.status = 404;
      } else if (prompt == "flaky" && flaky_failures_.fetch_add(1) < 1) {
        res.status = 503;
      } else if (prompt == "slow") {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        res.set_content(R"({"log_probs":[-1.0,-1.0]})", "application/json");
      } else {
        nlohmann::json out;
        out["log_probs"] = stub_log_probs(prompt, labels);
        res.set_content(out.dump(), "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/"; }
  int requests() const { return requests_.load(); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::atomic<int> flaky_failures_{0};
};

HttpOptions fast_options(const std::string& endpoint) {
  HttpOptions o;
  o.endpoint = endpoint;
  o.timeout = std::chrono::milliseconds(5000);
  o.retry_backoff = std::chrono::milliseconds(10);
  return o;
}

ScoreRequest req(const std::string& prompt, std::vector<std::string> labels = {"yes", "no"}) {
  return ScoreRequest{"e", "v", prompt, std::move(labels)};
}

ErrorCode score_error(const HttpBackend& backend, const ScoreRequest& r) {
  try {
    backend.score(r);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInvalidArgument;
}

TEST(HttpWire, RequestBodyShape) {
  EXPECT_EQ(score_request_body(req("a \"b\"", {"x", "y"})),
            R"({"prompt":"a \"b\"","labels":["x","y"]})");
}

TEST(HttpWire, LogProbConversion) {
  bool renormalized = false;
  const auto d = parse_score_response(R"({"log_probs":[-0.2231,-1.6094]})", 2, &renormalized);
  EXPECT_NEAR(d[0], 0.8, 1e-4);
  EXPECT_NEAR(d[1], 0.2, 1e-4);
  const auto exact = dist_from_log_probs(std::vector<double>{std::log(0.25), std::log(0.75)}, 2,
                                         &renormalized);
  EXPECT_FALSE(renormalized);
  EXPECT_LE(max_abs_diff(to_vector(exact), {0.25, 0.75}), 1e-15);
  dist_from_log_probs(std::vector<double>{-3.0, -3.0}, 2, &renormalized);
  EXPECT_TRUE(renormalized);
  const auto zero = dist_from_log_probs(std::vector<double>{-INFINITY, 0.0}, 2);
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_EQ(zero[1], 1.0);
  const auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code([] { parse_score_response(R"({"log_probs":[-1,-1,-1]})", 2); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(code([] { parse_score_response(R"({"logprobs":[-1,-1]})", 2); }),
            ErrorCode::kProtocolError);
  EXPECT_EQ(code([] { parse_score_response("[", 2); }), ErrorCode::kProtocolError);
  EXPECT_EQ(code([] { dist_from_log_probs(std::vector<double>{NAN, 0.0}, 2); }),
            ErrorCode::kProtocolError);
  EXPECT_EQ(code([] { dist_from_log_probs(std::vector<double>{-INFINITY, -INFINITY}, 2); }),
            ErrorCode::kProtocolError);
}

TEST(HttpBackend, StubConformanceAcrossLabelCounts) {
  StubServer stub;
  HttpBackend backend(fast_options(stub.endpoint()));
  const std::vector<std::vector<std::string>> label_sets{
      {"yes", "no"},
      {"entailment", "neutral", "contradiction"},
      {"a", "b", "c", "d", "e", "f", "g", "h"}};
  std::vector<ScoreRequest> requests;
  for (int i = 0; i < 102; ++i) {
    requests.push_back(ScoreRequest{"ex" + std::to_string(i), "v" + std::to_string(i % 5),
                                    "prompt number " + std::to_string(i), label_sets[i % 3]});
  }
  const auto out = score_all(backend, requests);
  ASSERT_EQ(out.size(), requests.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_TRUE(std::holds_alternative<ProbDist>(out[i]))
        << std::get<Error>(out[i]).what();
    const auto want = expected_dist(stub_log_probs(requests[i].prompt, requests[i].labels));
    EXPECT_LE(max_abs_diff(to_vector(std::get<ProbDist>(out[i])), want), 1e-12);
  }
  EXPECT_EQ(stub.requests(), 102);
  EXPECT_EQ(backend.renormalized_count(), 102);
  // Identical requests give identical answers.
  EXPECT_EQ(backend.score(requests[4]), std::get<ProbDist>(out[4]));
}

TEST(HttpBackend, FixedResponseAndErrors) {
  StubServer stub;
  HttpBackend backend(fast_options(stub.endpoint()));
  const auto d = backend.score(req("fixed"));
  EXPECT_NEAR(d[0], 0.8, 1e-4);
  EXPECT_EQ(score_error(backend, req("too-many")), ErrorCode::kShapeMismatch);
  EXPECT_EQ(score_error(backend, req("garbage")), ErrorCode::kProtocolError);
  EXPECT_EQ(score_error(backend, req("nan")), ErrorCode::kProtocolError);
  EXPECT_EQ(score_error(backend, req("missing")), ErrorCode::kBackendUnavailable);
}

TEST(HttpBackend, RetriesServerErrors) {
  StubServer stub;
  HttpBackend backend(fast_options(stub.endpoint()));
  EXPECT_NO_THROW(backend.score(req("flaky")));
  EXPECT_EQ(stub.requests(), 2);
}

TEST(HttpBackend, DeadEndpointIsUnavailable) {
  // Bind a socket to an ephemeral port and close it without listening, so
  // connections to that port are refused.
  int port = 0;
  {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    ASSERT_GE(fd, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
    socklen_t len = sizeof(addr);
    ASSERT_EQ(::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len), 0);
    port = ntohs(addr.sin_port);
    ::close(fd);
  }
  auto options = fast_options("127.0.0.1:" + std::to_string(port));
  options.retries = 2;
  HttpBackend backend(options);
  try {
    backend.score(req("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
    EXPECT_NE(e.detail().find("3 attempt"), std::string::npos) << e.what();
  }
}

TEST(HttpBackend, EnvTimeoutOverride) {
  ASSERT_EQ(setenv(std::string(kHttpTimeoutEnv).c_str(), "0.25", 1), 0);
  auto options = HttpOptions::with_env_overrides(fast_options("http://127.0.0.1:1"));
  EXPECT_EQ(options.timeout, std::chrono::milliseconds(250));
  ASSERT_EQ(setenv(std::string(kHttpTimeoutEnv).c_str(), "soon", 1), 0);
  EXPECT_THROW(HttpOptions::with_env_overrides(HttpOptions{}), Error);
  unsetenv(std::string(kHttpTimeoutEnv).c_str());
  EXPECT_EQ(HttpOptions::with_env_overrides(HttpOptions{}).timeout, std::chrono::seconds(30));

  StubServer stub;
  options.endpoint = stub.endpoint();
  options.retries = 0;
  HttpBackend backend(options);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(score_error(backend, req("slow")), ErrorCode::kBackendUnavailable);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(1400));
}

TEST(HttpBackend, EndpointValidation) {
  EXPECT_THROW(HttpBackend(HttpOptions{}), Error);
  HttpOptions https;
  https.endpoint = "https://example.com";
  EXPECT_THROW(HttpBackend{https}, Error);
}

}  // namespace
}  // namespace calens
