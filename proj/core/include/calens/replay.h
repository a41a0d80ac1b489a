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

#ifndef CALENS_REPLAY_H_
#define CALENS_REPLAY_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "calens/backend.h"
#include "calens/types.h"

namespace calens {

// Answers score() from a predictions JSONL file, one object per line:
//   {"example_id": "...", "variant_id": "...", "probs": {"<label>": p, ...}}
// The probs keys must be exactly the task's labels.
class ReplayBackend : public ScoringBackend {
 public:
  // Throws kIoError, kParseError (with line number), kInvalidProbability or
  // kUnknownLabel. Repeated keys keep the last line and are counted.
  static ReplayBackend load(const std::filesystem::path& path, const LabelSet& labels);
  static ReplayBackend parse(std::istream& in, const LabelSet& labels,
                             const std::string& source_name = "<stream>");

  // Stored distribution verbatim; throws kMissingPrediction.
  ProbDist score(const ScoreRequest& request) const override;
  std::string name() const override { return "replay"; }
  std::size_t max_parallelism() const override;

  bool contains(const std::string& example_id, const std::string& variant_id) const;
  const LabelSet& labels() const { return labels_; }
  // Unique predictions, ordered by first appearance of their key.
  const std::vector<Prediction>& predictions() const { return predictions_; }
  std::size_t duplicate_count() const { return duplicates_; }

 private:
  explicit ReplayBackend(LabelSet labels) : labels_(std::move(labels)) {}

  LabelSet labels_;
  std::vector<Prediction> predictions_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
  std::size_t duplicates_ = 0;
};

// One predictions-JSONL line (no trailing newline).
std::string prediction_to_json(const Prediction& prediction, const LabelSet& labels);

// Parses one predictions-JSONL line. Throws kParseError, kUnknownLabel or
// kInvalidProbability; messages do not carry line context.
Prediction prediction_from_json(const std::string& line, const LabelSet& labels);

}  // namespace calens

#endif  // CALENS_REPLAY_H_
