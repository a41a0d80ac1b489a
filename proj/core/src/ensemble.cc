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

#include "calens/ensemble.h"

#include <algorithm>

#include "calens/error.h"

namespace calens {
namespace {

// Sums in ascending order so the result does not depend on member order.
double order_free_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

std::vector<double> mean_of(const std::vector<const Prediction*>& members, std::size_t labels) {
  std::vector<double> mean(labels, 0.0);
  std::vector<double> column(members.size());
  for (std::size_t i = 0; i < labels; ++i) {
    for (std::size_t k = 0; k < members.size(); ++k) column[k] = members[k]->dist()[i];
    mean[i] = order_free_sum(column) / static_cast<double>(members.size());
  }
  return mean;
}

std::vector<const Prediction*> all_members(const EnsembleGroup& group) {
  std::vector<const Prediction*> out;
  out.reserve(group.size());
  for (const auto& m : group.members()) out.push_back(&m);
  return out;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kMajorityVote: return "majority_vote";
    case Strategy::kMeanProb: return "mean_prob";
    case Strategy::kMaxProb: return "max_prob";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "majority_vote" || name == "majority") return Strategy::kMajorityVote;
  if (name == "mean_prob" || name == "mean") return Strategy::kMeanProb;
  if (name == "max_prob" || name == "max") return Strategy::kMaxProb;
  raise(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

std::string ensemble_variant_id(Strategy strategy) {
  return "ensemble:" + std::string(strategy_name(strategy));
}

Prediction majority_vote(const EnsembleGroup& group) {
  const std::size_t labels = group.num_labels();
  std::vector<std::vector<double>> votes(labels);
  for (const auto& m : group.members()) votes[m.predicted()].push_back(m.confidence());
  std::vector<double> accumulated(labels, 0.0);
  for (std::size_t i = 0; i < labels; ++i) accumulated[i] = order_free_sum(votes[i]);
  const std::size_t winner = argmax(accumulated);

  std::vector<const Prediction*> selected;
  for (const auto& m : group.members()) {
    if (m.predicted() == winner) selected.push_back(&m);
  }
  return Prediction(group.example_id(), ensemble_variant_id(Strategy::kMajorityVote),
                    ProbDist::from_computed(mean_of(selected, labels)));
}

Prediction mean_prob(const EnsembleGroup& group) {
  return Prediction(group.example_id(), ensemble_variant_id(Strategy::kMeanProb),
                    ProbDist::from_computed(mean_of(all_members(group), group.num_labels())));
}

Prediction max_prob(const EnsembleGroup& group) {
  std::vector<double> maxima(group.num_labels(), 0.0);
  for (const auto& m : group.members()) {
    for (std::size_t i = 0; i < maxima.size(); ++i) maxima[i] = std::max(maxima[i], m.dist()[i]);
  }
  return Prediction(group.example_id(), ensemble_variant_id(Strategy::kMaxProb),
                    normalize(maxima));
}

Prediction apply_strategy(Strategy strategy, const EnsembleGroup& group) {
  switch (strategy) {
    case Strategy::kMajorityVote: return majority_vote(group);
    case Strategy::kMeanProb: return mean_prob(group);
    case Strategy::kMaxProb: return max_prob(group);
  }
  raise(ErrorCode::kInvalidArgument, "unknown strategy");
}

std::vector<Prediction> run_ensemble(Strategy strategy, std::span<const EnsembleGroup> groups) {
  std::vector<Prediction> out;
  out.reserve(groups.size());
  for (const auto& group : groups) {
    try {
      out.push_back(apply_strategy(strategy, group));
    } catch (const Error& e) {
      throw e.with_context("example '" + group.example_id() + "'");
    }
  }
  return out;
}

}  // namespace calens
