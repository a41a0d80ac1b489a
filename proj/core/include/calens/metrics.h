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

#ifndef CALENS_METRICS_H_
#define CALENS_METRICS_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "calens/types.h"

namespace calens {

inline constexpr int kDefaultBins = 10;

// example_id -> gold label index.
using GoldLabels = std::unordered_map<std::string, std::size_t>;

// One reliability-diagram bin covering (lower, upper].
struct BinStats {
  int bin_index = 0;  // 1-based
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  std::optional<double> accuracy;         // absent when count == 0
  std::optional<double> mean_confidence;  // absent when count == 0
};

struct ClassificationScores {
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

struct MetricsReport {
  double ece = 0.0;
  double nll = 0.0;
  double ie = 0.0;
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t n = 0;
  std::vector<BinStats> bins;
};

// Bin m (1-based) holds confidences c with (m-1)/M < c <= m/M; c == 0 goes to
// bin 1.
int bin_for_confidence(double confidence, int num_bins);

std::vector<BinStats> reliability_bins(std::span<const Prediction> predictions,
                                       const GoldLabels& golds,
                                       int num_bins = kDefaultBins);

// Expected calibration error over num_bins equal-width confidence bins.
double ece(std::span<const Prediction> predictions, const GoldLabels& golds,
           int num_bins = kDefaultBins);

// ECE from an already computed bin table.
double ece_from_bins(std::span<const BinStats> bins);

// Mean negative natural-log likelihood of the gold label.
double nll(std::span<const Prediction> predictions, const GoldLabels& golds);

// Mean Shannon entropy (nats) of the predicted distributions.
double ie(std::span<const Prediction> predictions);

// Accuracy, pooled (micro) F1 and per-class averaged (macro) F1. Macro-F1
// averages over classes that occur among golds or predictions; a class whose
// precision and recall are both zero contributes F1 = 0.
ClassificationScores classification_scores(std::span<const Prediction> predictions,
                                           const GoldLabels& golds);

MetricsReport evaluate_predictions(std::span<const Prediction> predictions,
                                   const GoldLabels& golds,
                                   int num_bins = kDefaultBins);

// CSV with header `bin,lower,upper,count,accuracy,mean_confidence`; empty bins
// keep blank accuracy and confidence cells.
void write_reliability_csv(std::ostream& out, std::span<const BinStats> bins);
std::string reliability_csv(std::span<const BinStats> bins);

}  // namespace calens

#endif  // CALENS_METRICS_H_
