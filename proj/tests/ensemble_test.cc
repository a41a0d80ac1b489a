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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "calens/ensemble.h"
#include "calens/error.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace calens {
namespace {

using ::calens::testing::make_group_members;
using ::calens::testing::max_abs_diff;
using ::calens::testing::random_dist;
using ::calens::testing::reference_majority;
using ::calens::testing::reference_max;
using ::calens::testing::reference_mean;
using ::calens::testing::to_vector;

EnsembleGroup group_of(const std::vector<std::vector<double>>& dists) {
  return EnsembleGroup("x", make_group_members(dists));
}

TEST(MajorityVote, AccumulatedProbabilityFixture) {
  const auto out = majority_vote(group_of({{0.5, 0.5}, {0.6, 0.4}, {0.1, 0.9}}));
  EXPECT_EQ(out.predicted(), 0);
  EXPECT_LE(max_abs_diff(to_vector(out.dist()), {0.55, 0.45}), 1e-12);
  EXPECT_NEAR(out.confidence(), 0.55, 1e-12);
  EXPECT_EQ(out.example_id(), "x");
  EXPECT_EQ(out.variant_id(), "ensemble:majority_vote");
}

TEST(MajorityVote, SingleMemberAndIdenticalMembers) {
  const std::vector<double> d{0.2, 0.5, 0.3};
  EXPECT_EQ(to_vector(majority_vote(group_of({d})).dist()), d);
  const auto same = majority_vote(group_of({d, d, d, d}));
  EXPECT_LE(max_abs_diff(to_vector(same.dist()), d), 1e-15);
  EXPECT_EQ(same.predicted(), 1);
}

TEST(MajorityVote, AccumulatedTieBreaksToLowestLabel) {
  // One member votes A at 0.6, one votes B at 0.6.
  const auto out = majority_vote(group_of({{0.6, 0.4}, {0.4, 0.6}}));
  EXPECT_EQ(out.predicted(), 0);
  EXPECT_EQ(to_vector(out.dist()), (std::vector<double>{0.6, 0.4}));
}

TEST(MajorityVote, AccumulatesConfidenceNotCounts) {
  // Two weak votes for A lose to one strong vote for B.
  const auto out = majority_vote(group_of({{0.4, 0.3, 0.3}, {0.4, 0.35, 0.25}, {0.0, 0.9, 0.1}}));
  EXPECT_EQ(out.predicted(), 1);
  EXPECT_EQ(to_vector(out.dist()), (std::vector<double>{0.0, 0.9, 0.1}));
}

TEST(MeanProb, Fixtures) {
  const auto two = mean_prob(group_of({{0.6, 0.4}, {0.2, 0.8}}));
  EXPECT_LE(max_abs_diff(to_vector(two.dist()), {0.4, 0.6}), 1e-12);
  EXPECT_EQ(two.predicted(), 1);
  const auto three = mean_prob(group_of({{0.7, 0.2, 0.1}, {0.1, 0.6, 0.3}, {0.1, 0.1, 0.8}}));
  EXPECT_LE(max_abs_diff(to_vector(three.dist()), {0.3, 0.3, 0.4}), 1e-12);
  EXPECT_EQ(three.predicted(), 2);
  const std::vector<double> d{0.3, 0.7};
  EXPECT_EQ(to_vector(mean_prob(group_of({d})).dist()), d);
}

TEST(MaxProb, Fixtures) {
  const auto out = max_prob(group_of({{0.7, 0.2, 0.1}, {0.1, 0.6, 0.3}}));
  EXPECT_LE(max_abs_diff(to_vector(out.dist()), {0.4375, 0.375, 0.1875}), 1e-12);
  EXPECT_EQ(out.predicted(), 0);
  const std::vector<double> d{0.25, 0.25, 0.5};
  EXPECT_LE(max_abs_diff(to_vector(max_prob(group_of({d})).dist()), d), 1e-15);
  EXPECT_LE(max_abs_diff(to_vector(max_prob(group_of({d, d, d})).dist()), d), 1e-15);
}

TEST(Strategy, NamesRoundTrip) {
  for (Strategy s : kAllStrategies) EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  EXPECT_EQ(parse_strategy("max"), Strategy::kMaxProb);
  EXPECT_EQ(parse_strategy("mean"), Strategy::kMeanProb);
  EXPECT_EQ(parse_strategy("majority"), Strategy::kMajorityVote);
  EXPECT_THROW(parse_strategy("median"), Error);
  EXPECT_EQ(ensemble_variant_id(Strategy::kMeanProb), "ensemble:mean_prob");
}

TEST(RunEnsemble, ComposesPerGroupInOrder) {
  EXPECT_TRUE(run_ensemble(Strategy::kMeanProb, {}).empty());
  std::vector<EnsembleGroup> groups{
      EnsembleGroup("b", make_group_members({{0.6, 0.4}, {0.2, 0.8}}, "b")),
      EnsembleGroup("a", make_group_members({{0.9, 0.1}}, "a"))};
  const auto out = run_ensemble(Strategy::kMeanProb, groups);
  ASSERT_EQ(out.size(), 2);
  EXPECT_EQ(out[0].example_id(), "b");
  EXPECT_EQ(out[1].example_id(), "a");
  EXPECT_EQ(out[0].dist(), mean_prob(groups[0]).dist());
  const std::vector<EnsembleGroup> one{group_of({{0.5, 0.5}, {0.6, 0.4}, {0.1, 0.9}})};
  const auto mv = run_ensemble(Strategy::kMajorityVote, one);
  ASSERT_EQ(mv.size(), 1);
  EXPECT_EQ(mv[0].predicted(), 0);
}

TEST(Strategies, AgreeWithReferencesAndInvariants) {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t labels = 2 + gen() % 9;
    const std::size_t k = 1 + gen() % 25;
    std::vector<std::vector<double>> members;
    for (std::size_t i = 0; i < k; ++i) members.push_back(random_dist(gen, labels));
    const auto group = group_of(members);
    const auto mean = mean_prob(group);
    const auto max = max_prob(group);
    const auto mv = majority_vote(group);
    EXPECT_LE(max_abs_diff(to_vector(mean.dist()), reference_mean(members)), 1e-12);
    EXPECT_LE(max_abs_diff(to_vector(max.dist()), reference_max(members)), 1e-12);
    const auto [winner, mv_dist] = reference_majority(members);
    EXPECT_EQ(mv.predicted(), winner);
    EXPECT_LE(max_abs_diff(to_vector(mv.dist()), mv_dist), 1e-12);

    // Mean confidence lies between member extremes for the chosen label.
    double lo = 1.0, hi = 0.0;
    for (const auto& m : members) {
      lo = std::min(lo, m[mean.predicted()]);
      hi = std::max(hi, m[mean.predicted()]);
    }
    EXPECT_GE(mean.confidence(), lo - 1e-12);
    EXPECT_LE(mean.confidence(), hi + 1e-12);

    auto shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const auto group2 = group_of(shuffled);
    EXPECT_EQ(mean_prob(group2).dist(), mean.dist());
    EXPECT_EQ(max_prob(group2).dist(), max.dist());
    EXPECT_EQ(majority_vote(group2).dist(), mv.dist());
  }
}

}  // namespace
}  // namespace calens
