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

// Helpers shared by the unit and acceptance tests: random generators and
// reference implementations written independently of the library code.

#ifndef CALENS_TESTS_TEST_UTIL_H_
#define CALENS_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "calens/metrics.h"
#include "calens/types.h"

namespace calens::testing {

// A prediction set with golds, as plain vectors.
struct RandomCase {
  std::vector<Prediction> predictions;
  GoldLabels golds;
  std::vector<std::size_t> gold_index;  // parallel to predictions
};

// Random distribution over `labels` entries. Every few draws it is sparse,
// one-hot or tied so boundary confidences (0.5, 1.0, k/10) get exercised.
inline std::vector<double> random_dist(std::mt19937_64& gen, std::size_t labels) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(labels);
  const double shape = unit(gen);
  if (shape < 0.05) {
    v.assign(labels, 0.0);
    v[gen() % labels] = 1.0;
    return v;
  }
  if (shape < 0.10) {
    v.assign(labels, 1.0 / static_cast<double>(labels));
    return v;
  }
  if (shape < 0.15 && labels >= 2) {
    // Grid values so confidences sit exactly on bin edges like 0.6 or 0.8.
    v.assign(labels, 0.0);
    const int top = 5 + static_cast<int>(gen() % 6);  // 0.5 .. 1.0
    v[0] = top / 10.0;
    v[1] = 1.0 - v[0];
    std::shuffle(v.begin(), v.end(), gen);
    return v;
  }
  double sum = 0.0;
  for (auto& x : v) {
    x = unit(gen) < 0.2 ? 0.0 : -std::log(1.0 - unit(gen));
    sum += x;
  }
  if (sum == 0.0) {
    v[0] = 1.0;
    sum = 1.0;
  }
  for (auto& x : v) x /= sum;
  return v;
}

inline RandomCase random_case(std::mt19937_64& gen, std::size_t n, std::size_t labels) {
  RandomCase c;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "e" + std::to_string(i);
    c.predictions.emplace_back(id, "v", ProbDist::from_computed(random_dist(gen, labels)));
    const std::size_t gold = gen() % labels;
    c.golds[id] = gold;
    c.gold_index.push_back(gold);
  }
  return c;
}

// Expected calibration error by direct enumeration: for each bin, scan all
// predictions and test membership with the interval rule spelled out as
// inequalities, then accumulate the weighted gap.
inline double brute_force_ece(const std::vector<double>& confidence,
                              const std::vector<bool>& correct, int num_bins) {
  const std::size_t n = confidence.size();
  long double total = 0.0L;
  for (int m = 1; m <= num_bins; ++m) {
    // Edges are the doubles nearest (m-1)/M and m/M, so a confidence written
    // as 0.9 lands in bin 9 of 10 as a reader would expect.
    const double lo = static_cast<double>(m - 1) / num_bins;
    const double hi = static_cast<double>(m) / num_bins;
    std::size_t count = 0;
    long double hits = 0.0L;
    long double conf = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = confidence[i];
      const bool member = (c > lo && c <= hi) || (m == 1 && c == 0.0);
      if (!member) continue;
      ++count;
      hits += correct[i] ? 1.0L : 0.0L;
      conf += c;
    }
    if (count == 0) continue;
    const long double acc = hits / count;
    const long double mean_conf = conf / count;
    total += (static_cast<long double>(count) / n) * std::fabs(acc - mean_conf);
  }
  return static_cast<double>(total);
}

inline double brute_force_ece(const RandomCase& c, int num_bins) {
  std::vector<double> conf;
  std::vector<bool> correct;
  for (std::size_t i = 0; i < c.predictions.size(); ++i) {
    conf.push_back(c.predictions[i].confidence());
    correct.push_back(c.predictions[i].predicted() == c.gold_index[i]);
  }
  return brute_force_ece(conf, correct, num_bins);
}

// Straightforward strategy references. They loop in member order and share
// no code with the library.
inline std::size_t reference_argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

inline std::vector<double> reference_mean(const std::vector<std::vector<double>>& members) {
  std::vector<double> out(members.front().size(), 0.0);
  for (const auto& m : members) {
    for (std::size_t i = 0; i < m.size(); ++i) out[i] += m[i];
  }
  for (auto& x : out) x /= static_cast<double>(members.size());
  return out;
}

inline std::vector<double> reference_max(const std::vector<std::vector<double>>& members) {
  std::vector<double> out(members.front().size(), 0.0);
  for (const auto& m : members) {
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = std::max(out[i], m[i]);
  }
  double sum = 0.0;
  for (double x : out) sum += x;
  for (auto& x : out) x /= sum;
  return out;
}

// Returns the winning label and the mean of the selected members' dists.
inline std::pair<std::size_t, std::vector<double>> reference_majority(
    const std::vector<std::vector<double>>& members) {
  std::vector<double> accumulated(members.front().size(), 0.0);
  for (const auto& m : members) {
    const std::size_t label = reference_argmax(m);
    accumulated[label] += m[label];
  }
  const std::size_t winner = reference_argmax(accumulated);
  std::vector<std::vector<double>> selected;
  for (const auto& m : members) {
    if (reference_argmax(m) == winner) selected.push_back(m);
  }
  return {winner, reference_mean(selected)};
}

inline std::vector<double> to_vector(const ProbDist& d) {
  return {d.values().begin(), d.values().end()};
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  }
  return worst;
}

inline std::vector<Prediction> make_group_members(
    const std::vector<std::vector<double>>& dists, const std::string& example_id = "x") {
  std::vector<Prediction> out;
  for (std::size_t k = 0; k < dists.size(); ++k) {
    out.emplace_back(example_id, "v" + std::to_string(k), ProbDist::from_computed(dists[k]));
  }
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("calens-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace calens::testing

#endif  // CALENS_TESTS_TEST_UTIL_H_
