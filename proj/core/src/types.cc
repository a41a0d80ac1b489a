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

#include "calens/types.h"

#include <cmath>
#include <set>
#include <unordered_map>

#include "calens/error.h"

namespace calens {
namespace {

void check_entries(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      raise(ErrorCode::kInvalidProbability,
            "entry " + std::to_string(i) + " is " + std::to_string(values[i]));
    }
  }
}

double fixed_order_sum(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

}  // namespace

LabelSet::LabelSet(std::string task_id, std::vector<std::string> labels)
    : task_id_(std::move(task_id)), labels_(std::move(labels)) {
  if (labels_.empty()) raise(ErrorCode::kInvalidConfig, "label set is empty");
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      raise(ErrorCode::kInvalidConfig, "duplicate label '" + label + "'");
    }
  }
}

std::optional<std::size_t> LabelSet::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t LabelSet::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  raise(ErrorCode::kUnknownLabel,
        "'" + std::string(label) + "' is not a label of task '" + task_id_ + "'");
}

ProbDist ProbDist::from_values(std::vector<double> values, double tolerance) {
  if (values.empty()) raise(ErrorCode::kInvalidProbability, "empty distribution");
  check_entries(values);
  const double sum = fixed_order_sum(values);
  if (std::abs(sum - 1.0) > tolerance) {
    raise(ErrorCode::kInvalidProbability,
          "entries sum to " + std::to_string(sum) + ", expected 1");
  }
  return ProbDist(std::move(values));
}

ProbDist ProbDist::from_computed(std::vector<double> values) {
  if (values.empty()) raise(ErrorCode::kInvalidProbability, "empty distribution");
  check_entries(values);
  const double sum = fixed_order_sum(values);
  if (std::abs(sum - 1.0) > kProbTolerance) return normalize(values);
  return ProbDist(std::move(values));
}

ProbDist normalize(std::span<const double> values) {
  if (values.empty()) raise(ErrorCode::kInvalidProbability, "empty vector");
  check_entries(values);
  const double sum = fixed_order_sum(values);
  if (!(sum > 0.0)) raise(ErrorCode::kDegenerateDistribution, "all entries are zero");
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v /= sum;
  return ProbDist::from_values(std::move(out));
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Prediction::Prediction(std::string example_id, std::string variant_id, ProbDist dist)
    : example_id_(std::move(example_id)),
      variant_id_(std::move(variant_id)),
      dist_(std::move(dist)),
      predicted_(argmax(dist_)),
      confidence_(dist_[predicted_]) {}

Prediction Prediction::with_confidence(std::string example_id, std::string variant_id,
                                       ProbDist dist, double confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    raise(ErrorCode::kInvalidProbability,
          "confidence " + std::to_string(confidence) + " outside [0, 1]");
  }
  Prediction p(std::move(example_id), std::move(variant_id), std::move(dist));
  p.confidence_ = confidence;
  return p;
}

EnsembleGroup::EnsembleGroup(std::string example_id, std::vector<Prediction> members)
    : example_id_(std::move(example_id)), members_(std::move(members)) {
  if (members_.empty()) {
    raise(ErrorCode::kEmptyGroup, "no members for example '" + example_id_ + "'");
  }
  std::set<std::string> variants;
  const std::size_t labels = members_.front().dist().size();
  for (const auto& m : members_) {
    if (m.example_id() != example_id_) {
      raise(ErrorCode::kInvalidArgument, "member of example '" + m.example_id() +
                                             "' in group '" + example_id_ + "'");
    }
    if (!variants.insert(m.variant_id()).second) {
      raise(ErrorCode::kInvalidArgument, "variant '" + m.variant_id() +
                                             "' repeated in group '" + example_id_ + "'");
    }
    if (m.dist().size() != labels) {
      raise(ErrorCode::kShapeMismatch,
            "mixed label counts in group '" + example_id_ + "'");
    }
  }
}

std::vector<EnsembleGroup> group_by_example(std::span<const Prediction> predictions) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<Prediction>> members;
  for (const auto& p : predictions) {
    auto [it, inserted] = members.try_emplace(p.example_id());
    if (inserted) order.push_back(p.example_id());
    it->second.push_back(p);
  }
  std::vector<EnsembleGroup> groups;
  groups.reserve(order.size());
  for (auto& id : order) {
    auto node = members.extract(id);
    groups.emplace_back(std::move(id), std::move(node.mapped()));
  }
  return groups;
}

}  // namespace calens
