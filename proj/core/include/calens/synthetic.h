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

#ifndef CALENS_SYNTHETIC_H_
#define CALENS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "calens/backend.h"
#include "calens/types.h"

namespace calens {

struct SyntheticConfig {
  std::size_t num_labels = 5;
  std::size_t num_examples = 500;
  std::size_t num_variants = 20;
  double temperature = 0.5;    // < 1 sharpens: overconfident variants
  double noise = 1.0;          // per-variant logit noise stddev
  double concentration = 3.0;  // symmetric Dirichlet prior on posteriors
  std::uint64_t seed = 0;

  // Throws kInvalidConfig.
  void validate() const;
};

// A controllable miscalibrated classifier. Each example has a true
// posterior q ~ Dirichlet(concentration) and a gold label drawn from q. A
// variant scores it as softmax((ln q + eps) / temperature) with
// eps ~ N(0, noise^2) per label, seeded from (seed, example_id, variant_id)
// so score() is a pure function of its request.
class SyntheticModel : public ScoringBackend {
 public:
  explicit SyntheticModel(SyntheticConfig config);

  const SyntheticConfig& config() const { return config_; }
  const LabelSet& labels() const { return labels_; }
  // ids "ex000000"...; field TEXT; gold label set.
  const std::vector<Example>& examples() const { return examples_; }
  const std::vector<std::vector<double>>& posteriors() const { return posteriors_; }
  const std::vector<std::size_t>& gold_indices() const { return golds_; }
  // "v00".."v<K-1>".
  std::vector<std::string> variant_ids() const;

  ProbDist score_variant(std::size_t example_index, std::string_view variant_id) const;

  // Throws kMissingPrediction for an unknown example id and kShapeMismatch
  // when the request labels differ from labels().
  ProbDist score(const ScoreRequest& request) const override;
  std::string name() const override { return "synthetic"; }
  std::size_t max_parallelism() const override;

 private:
  SyntheticConfig config_;
  LabelSet labels_;
  std::vector<Example> examples_;
  std::vector<std::vector<double>> posteriors_;
  std::vector<std::size_t> golds_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline SyntheticModel synthetic_generate(const SyntheticConfig& config) {
  return SyntheticModel(config);
}

}  // namespace calens

#endif  // CALENS_SYNTHETIC_H_
