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

#ifndef CALENS_BACKEND_H_
#define CALENS_BACKEND_H_

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "calens/error.h"
#include "calens/types.h"

namespace calens {

struct ScoreRequest {
  std::string example_id;
  std::string variant_id;
  std::string prompt;
  std::vector<std::string> labels;  // verbalizer order
};

// Produces a distribution over request.labels for one (variant, query).
// Implementations must be safe to call concurrently.
class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;

  virtual ProbDist score(const ScoreRequest& request) const = 0;
  virtual std::string name() const = 0;
  // Upper bound on concurrent score() calls that score_all() will issue.
  virtual std::size_t max_parallelism() const { return 1; }
};

using ScoreOutcome = std::variant<ProbDist, Error>;

// Scores every request, running at most backend.max_parallelism() calls at a
// time. outcome[i] always belongs to requests[i], whatever the completion
// order.
std::vector<ScoreOutcome> score_all(const ScoringBackend& backend,
                                    std::span<const ScoreRequest> requests);

}  // namespace calens

#endif  // CALENS_BACKEND_H_
