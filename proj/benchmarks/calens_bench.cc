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

#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "calens/calibrate.h"
#include "calens/ensemble.h"
#include "calens/metrics.h"
#include "calens/random.h"
#include "calens/synthetic.h"
#include "calens/variation.h"

namespace calens {
namespace {

std::vector<double> random_dist(Rng& rng, std::size_t labels) {
  std::vector<double> v(labels);
  for (auto& x : v) x = rng.gamma(1.0);
  return v;
}

EnsembleGroup random_group(std::size_t k, std::size_t labels, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Prediction> members;
  for (std::size_t i = 0; i < k; ++i) {
    members.emplace_back("x", "v" + std::to_string(i), normalize(random_dist(rng, labels)));
  }
  return EnsembleGroup("x", std::move(members));
}

void BM_Strategy(benchmark::State& state, Strategy strategy) {
  const auto group = random_group(state.range(0), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(apply_strategy(strategy, group));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_Strategy, max_prob, Strategy::kMaxProb)->Args({20, 5})->Args({25, 10});
BENCHMARK_CAPTURE(BM_Strategy, mean_prob, Strategy::kMeanProb)->Args({20, 5})->Args({25, 10});
BENCHMARK_CAPTURE(BM_Strategy, majority_vote, Strategy::kMajorityVote)
    ->Args({20, 5})
    ->Args({25, 10});

struct Batch {
  std::vector<Prediction> predictions;
  GoldLabels golds;
};

Batch random_batch(std::size_t n, std::size_t labels) {
  Rng rng(2);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "e" + std::to_string(i);
    b.predictions.emplace_back(id, "v", normalize(random_dist(rng, labels)));
    b.golds[id] = rng.uniform_index(labels);
  }
  return b;
}

void BM_Ece(benchmark::State& state) {
  const auto b = random_batch(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(ece(b.predictions, b.golds));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ece)->Arg(200)->Arg(10000);

void BM_EvaluatePredictions(benchmark::State& state) {
  const auto b = random_batch(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_predictions(b.predictions, b.golds));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluatePredictions)->Arg(10000);

void BM_BatchCalibrate(benchmark::State& state) {
  const auto b = random_batch(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(batch_calibrate(b.predictions));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchCalibrate)->Arg(10000);

DemoPool pool_of(std::size_t n) {
  std::vector<Example> examples;
  for (std::size_t i = 0; i < n; ++i) {
    examples.push_back(Example{"p" + std::to_string(i), {{"TEXT", "x"}}, "a"});
  }
  return DemoPool(std::move(examples));
}

// Small pools are enumerated, large ones rejection-sampled.
void BM_SampleIc(benchmark::State& state) {
  const auto pool = pool_of(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_ic(pool, 3, 20, "q", seed++));
}
BENCHMARK(BM_SampleIc)->Arg(8)->Arg(1000);

void BM_SyntheticScore(benchmark::State& state) {
  SyntheticConfig config;
  config.num_examples = 100;
  const SyntheticModel model(config);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model.score_variant(i++ % 100, "v03"));
}
BENCHMARK(BM_SyntheticScore);

}  // namespace
}  // namespace calens

BENCHMARK_MAIN();
