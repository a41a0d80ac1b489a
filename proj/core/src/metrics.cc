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

#include "calens/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "calens/error.h"

namespace calens {
namespace {

void check_bins(int num_bins) {
  if (num_bins < 1) {
    raise(ErrorCode::kInvalidBinCount,
          "bin count must be >= 1, got " + std::to_string(num_bins));
  }
}

void check_nonempty(std::span<const Prediction> predictions, const char* what) {
  if (predictions.empty()) raise(ErrorCode::kEmptyInput, std::string(what) + " of no predictions");
}

std::size_t gold_of(const Prediction& p, const GoldLabels& golds) {
  auto it = golds.find(p.example_id());
  if (it == golds.end()) {
    raise(ErrorCode::kMissingGold, "no gold label for example '" + p.example_id() + "'");
  }
  if (it->second >= p.dist().size()) {
    raise(ErrorCode::kShapeMismatch, "gold index " + std::to_string(it->second) +
                                         " out of range for example '" + p.example_id() + "'");
  }
  return it->second;
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace

int bin_for_confidence(double confidence, int num_bins) {
  check_bins(num_bins);
  if (!(confidence > 0.0)) return 1;
  if (confidence >= 1.0) return num_bins;
  const double scaled = confidence * num_bins;
  int m = std::clamp(static_cast<int>(std::ceil(scaled)), 1, num_bins);
  // ceil() of the product can land one bin off near boundaries; settle the
  // bin against the interval test itself.
  while (m > 1 && confidence <= static_cast<double>(m - 1) / num_bins) --m;
  while (m < num_bins && confidence > static_cast<double>(m) / num_bins) ++m;
  return m;
}

std::vector<BinStats> reliability_bins(std::span<const Prediction> predictions,
                                       const GoldLabels& golds, int num_bins) {
  check_bins(num_bins);
  std::vector<std::size_t> counts(num_bins, 0);
  std::vector<std::size_t> correct(num_bins, 0);
  std::vector<double> confidence_sums(num_bins, 0.0);
  for (const auto& p : predictions) {
    const std::size_t gold = gold_of(p, golds);
    const int m = bin_for_confidence(p.confidence(), num_bins) - 1;
    ++counts[m];
    if (p.predicted() == gold) ++correct[m];
    confidence_sums[m] += p.confidence();
  }
  std::vector<BinStats> bins(num_bins);
  for (int m = 0; m < num_bins; ++m) {
    BinStats& b = bins[m];
    b.bin_index = m + 1;
    b.lower = static_cast<double>(m) / num_bins;
    b.upper = static_cast<double>(m + 1) / num_bins;
    b.count = counts[m];
    if (b.count > 0) {
      b.accuracy = static_cast<double>(correct[m]) / static_cast<double>(b.count);
      b.mean_confidence = confidence_sums[m] / static_cast<double>(b.count);
    }
  }
  return bins;
}

double ece_from_bins(std::span<const BinStats> bins) {
  std::size_t n = 0;
  for (const auto& b : bins) n += b.count;
  if (n == 0) raise(ErrorCode::kEmptyInput, "ECE of no predictions");
  double total = 0.0;
  for (const auto& b : bins) {
    if (b.count == 0) continue;
    total += static_cast<double>(b.count) / static_cast<double>(n) *
             std::abs(*b.accuracy - *b.mean_confidence);
  }
  return total;
}

double ece(std::span<const Prediction> predictions, const GoldLabels& golds, int num_bins) {
  check_bins(num_bins);
  check_nonempty(predictions, "ECE");
  const auto bins = reliability_bins(predictions, golds, num_bins);
  return ece_from_bins(bins);
}

double nll(std::span<const Prediction> predictions, const GoldLabels& golds) {
  check_nonempty(predictions, "NLL");
  double total = 0.0;
  for (const auto& p : predictions) {
    total += -std::log(std::max(p.dist()[gold_of(p, golds)], kLogFloor));
  }
  return total / static_cast<double>(predictions.size());
}

double ie(std::span<const Prediction> predictions) {
  check_nonempty(predictions, "IE");
  double total = 0.0;
  for (const auto& p : predictions) {
    double h = 0.0;
    for (double v : p.dist().values()) {
      if (v > 0.0) h -= v * std::log(v);
    }
    total += h;
  }
  return total / static_cast<double>(predictions.size());
}

ClassificationScores classification_scores(std::span<const Prediction> predictions,
                                           const GoldLabels& golds) {
  check_nonempty(predictions, "classification scores");
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::size_t, Counts> per_class;
  std::size_t correct = 0;
  for (const auto& p : predictions) {
    const std::size_t gold = gold_of(p, golds);
    if (p.predicted() == gold) {
      ++correct;
      ++per_class[gold].tp;
    } else {
      ++per_class[p.predicted()].fp;
      ++per_class[gold].fn;
    }
  }
  auto f1 = [](const Counts& c) {
    const std::size_t denom = 2 * c.tp + c.fp + c.fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
  };
  Counts pooled;
  double macro = 0.0;
  for (const auto& [label, c] : per_class) {
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
    macro += f1(c);
  }
  ClassificationScores s;
  s.accuracy = static_cast<double>(correct) / static_cast<double>(predictions.size());
  s.micro_f1 = f1(pooled);
  s.macro_f1 = macro / static_cast<double>(per_class.size());
  return s;
}

MetricsReport evaluate_predictions(std::span<const Prediction> predictions,
                                   const GoldLabels& golds, int num_bins) {
  check_bins(num_bins);
  check_nonempty(predictions, "metrics");
  MetricsReport r;
  r.bins = reliability_bins(predictions, golds, num_bins);
  r.ece = ece_from_bins(r.bins);
  r.nll = nll(predictions, golds);
  r.ie = ie(predictions);
  const auto scores = classification_scores(predictions, golds);
  r.accuracy = scores.accuracy;
  r.micro_f1 = scores.micro_f1;
  r.macro_f1 = scores.macro_f1;
  r.n = predictions.size();
  return r;
}

void write_reliability_csv(std::ostream& out, std::span<const BinStats> bins) {
  out << "bin,lower,upper,count,accuracy,mean_confidence\n";
  for (const auto& b : bins) {
    out << b.bin_index << ',' << format_double(b.lower) << ',' << format_double(b.upper) << ','
        << b.count << ',';
    if (b.accuracy) out << format_double(*b.accuracy);
    out << ',';
    if (b.mean_confidence) out << format_double(*b.mean_confidence);
    out << '\n';
  }
}

std::string reliability_csv(std::span<const BinStats> bins) {
  std::ostringstream out;
  write_reliability_csv(out, bins);
  return out.str();
}

}  // namespace calens
