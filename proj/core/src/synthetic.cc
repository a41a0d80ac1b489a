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

#include "calens/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "calens/error.h"
#include "calens/random.h"

namespace calens {
namespace {

LabelSet synthetic_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i));
  return LabelSet("synthetic", std::move(labels));
}

const SyntheticConfig& validated(const SyntheticConfig& config) {
  config.validate();
  return config;
}

std::string example_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ex%06zu", i);
  return buf;
}

}  // namespace

void SyntheticConfig::validate() const {
  auto fail = [](const std::string& what) { raise(ErrorCode::kInvalidConfig, what); };
  if (num_labels < 2) fail("synthetic config needs at least 2 labels");
  if (num_examples < 1) fail("synthetic config needs at least 1 example");
  if (num_variants < 1) fail("synthetic config needs at least 1 variant");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) fail("temperature must be > 0");
  if (!(noise >= 0.0) || !std::isfinite(noise)) fail("noise must be >= 0");
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    fail("concentration must be > 0");
  }
}

SyntheticModel::SyntheticModel(SyntheticConfig config)
    : config_(validated(config)), labels_(synthetic_labels(config_.num_labels)) {
  const std::size_t n = config_.num_examples;
  const std::size_t labels = config_.num_labels;
  examples_.reserve(n);
  posteriors_.reserve(n);
  golds_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = example_id(i);
    Rng rng(sub_seed(config_.seed, id));
    std::vector<double> q(labels);
    double total = 0.0;
    for (double& v : q) {
      v = rng.gamma(config_.concentration);
      total += v;
    }
    if (!(total > 0.0)) {
      std::fill(q.begin(), q.end(), 1.0 / static_cast<double>(labels));
    } else {
      for (double& v : q) v /= total;
    }
    const double u = rng.uniform();
    std::size_t gold = labels - 1;
    double cumulative = 0.0;
    for (std::size_t j = 0; j < labels; ++j) {
      cumulative += q[j];
      if (u < cumulative) {
        gold = j;
        break;
      }
    }
    Example e;
    e.id = id;
    e.fields["TEXT"] = "synthetic example " + id;
    e.gold_label = labels_.label(gold);
    index_.emplace(id, i);
    examples_.push_back(std::move(e));
    posteriors_.push_back(std::move(q));
    golds_.push_back(gold);
  }
}

std::vector<std::string> SyntheticModel::variant_ids() const {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < config_.num_variants; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "v%02zu", k);
    ids.emplace_back(buf);
  }
  return ids;
}

ProbDist SyntheticModel::score_variant(std::size_t example_index,
                                       std::string_view variant_id) const {
  const auto& q = posteriors_.at(example_index);
  Rng rng(sub_seed(sub_seed(config_.seed, examples_[example_index].id), variant_id));
  std::vector<double> z(q.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < q.size(); ++j) {
    double logit = std::log(std::max(q[j], kLogFloor));
    if (config_.noise > 0.0) logit += config_.noise * rng.normal();
    z[j] = logit / config_.temperature;
    top = std::max(top, z[j]);
  }
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : z) v /= total;
  return ProbDist::from_computed(std::move(z));
}

ProbDist SyntheticModel::score(const ScoreRequest& request) const {
  if (request.labels != labels_.labels()) {
    raise(ErrorCode::kShapeMismatch, "request labels do not match the synthetic label set");
  }
  auto it = index_.find(request.example_id);
  if (it == index_.end()) {
    raise(ErrorCode::kMissingPrediction,
          "synthetic model has no example '" + request.example_id + "'");
  }
  return score_variant(it->second, request.variant_id);
}

std::size_t SyntheticModel::max_parallelism() const {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace calens
