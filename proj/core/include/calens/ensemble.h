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

#ifndef CALENS_ENSEMBLE_H_
#define CALENS_ENSEMBLE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "calens/types.h"

namespace calens {

enum class Strategy { kMajorityVote, kMeanProb, kMaxProb };

inline constexpr Strategy kAllStrategies[] = {Strategy::kMaxProb, Strategy::kMeanProb,
                                              Strategy::kMajorityVote};

// "majority_vote", "mean_prob", "max_prob".
std::string_view strategy_name(Strategy strategy);

// Accepts the canonical names above and the short CLI spellings
// "majority", "mean", "max". Throws kInvalidArgument otherwise.
Strategy parse_strategy(std::string_view name);

// variant_id given to ensembled predictions: "ensemble:<name>".
std::string ensemble_variant_id(Strategy strategy);

// Picks the label with the highest accumulated own-label probability, then
// averages the full distributions of the members that predicted it.
Prediction majority_vote(const EnsembleGroup& group);

// Entrywise mean of the members' distributions.
Prediction mean_prob(const EnsembleGroup& group);

// Entrywise maximum over members, renormalized.
Prediction max_prob(const EnsembleGroup& group);

Prediction apply_strategy(Strategy strategy, const EnsembleGroup& group);

// Applies one strategy per group; output order follows input order.
std::vector<Prediction> run_ensemble(Strategy strategy,
                                     std::span<const EnsembleGroup> groups);

}  // namespace calens

#endif  // CALENS_ENSEMBLE_H_
