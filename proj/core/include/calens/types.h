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

#ifndef CALENS_TYPES_H_
#define CALENS_TYPES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace calens {

// Ingested distributions may carry this much rounding error in their sum.
inline constexpr double kProbTolerance = 1e-9;

// Probabilities are clamped to this floor before any logarithm.
inline constexpr double kLogFloor = 1e-12;

// Ordered verbalizer of a task. Position i is the label of vector entry i.
class LabelSet {
 public:
  LabelSet(std::string task_id, std::vector<std::string> labels);

  const std::string& task_id() const { return task_id_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }

  // Case-sensitive lookup.
  std::optional<std::size_t> find(std::string_view label) const;
  // As find(), but throws kUnknownLabel.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::string task_id_;
  std::vector<std::string> labels_;
};

// A probability vector over a LabelSet: entries >= 0, sum within
// kProbTolerance of one.
class ProbDist {
 public:
  // Validates and stores the values verbatim.
  static ProbDist from_values(std::vector<double> values,
                              double tolerance = kProbTolerance);

  // For vectors produced by internal arithmetic (means, softmax). Values are
  // kept as-is unless their sum drifts beyond kProbTolerance, in which case
  // they are renormalized.
  static ProbDist from_computed(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const ProbDist&, const ProbDist&) = default;

 private:
  explicit ProbDist(std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

// Divides a non-negative, finite, not-all-zero vector by its sum.
// Throws kInvalidProbability or kDegenerateDistribution.
ProbDist normalize(std::span<const double> values);

// Index of the largest entry; exact ties go to the lowest index.
std::size_t argmax(std::span<const double> values);
inline std::size_t argmax(const ProbDist& dist) { return argmax(dist.values()); }

struct Example {
  std::string id;
  // Placeholder name (SENTENCE, PREMISE, ...) to text.
  std::map<std::string, std::string> fields;
  std::optional<std::string> gold_label;
};

// One variant's output for one example.
class Prediction {
 public:
  Prediction(std::string example_id, std::string variant_id, ProbDist dist);

  // Keeps the argmax of `dist` but reports a confidence that is not read from
  // the distribution. Used only for the raw Batch Calibration mode.
  static Prediction with_confidence(std::string example_id,
                                    std::string variant_id, ProbDist dist,
                                    double confidence);

  const std::string& example_id() const { return example_id_; }
  const std::string& variant_id() const { return variant_id_; }
  const ProbDist& dist() const { return dist_; }
  std::size_t predicted() const { return predicted_; }
  double confidence() const { return confidence_; }

 private:
  std::string example_id_;
  std::string variant_id_;
  ProbDist dist_;
  std::size_t predicted_;
  double confidence_;
};

// The K predictions for one example that an ensembling strategy aggregates.
class EnsembleGroup {
 public:
  // Throws kEmptyGroup for no members, kInvalidArgument on mixed example ids
  // or repeated variant ids, kShapeMismatch on mixed distribution lengths.
  EnsembleGroup(std::string example_id, std::vector<Prediction> members);

  const std::string& example_id() const { return example_id_; }
  const std::vector<Prediction>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t num_labels() const { return members_.front().dist().size(); }

 private:
  std::string example_id_;
  std::vector<Prediction> members_;
};

// Groups predictions by example id. Groups appear in first-seen order and
// members keep their relative input order.
std::vector<EnsembleGroup> group_by_example(std::span<const Prediction> predictions);

}  // namespace calens

#endif  // CALENS_TYPES_H_
