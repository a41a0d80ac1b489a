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

#include "calens/backend.h"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

namespace calens {

std::vector<ScoreOutcome> score_all(const ScoringBackend& backend,
                                    std::span<const ScoreRequest> requests) {
  std::vector<std::optional<ScoreOutcome>> slots(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        slots[i].emplace(backend.score(requests[i]));
      } catch (const Error& e) {
        slots[i].emplace(e);
      } catch (const std::exception& e) {
        slots[i].emplace(Error(ErrorCode::kBackendUnavailable, e.what()));
      }
    }
  };
  const std::size_t threads =
      std::min(std::max<std::size_t>(backend.max_parallelism(), 1), requests.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<ScoreOutcome> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace calens
