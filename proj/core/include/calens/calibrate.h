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

#ifndef CALENS_CALIBRATE_H_
#define CALENS_CALIBRATE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "calens/types.h"

namespace calens {

// Per-class contextual bias in log space, log_bias[i] = ln(batch mean of p_i).
struct ClassBias {
  std::vector<double> log_bias;
};

// How calibrated predictions report their confidence.
enum class BcConfidence {
  // Softmax of the corrected logits; confidence is its maximum entry.
  kSoftmax,
  // The calibrated label is kept but its confidence is the uncalibrated
  // probability the model gave that label. The distribution is still the
  // softmax one.
  kRaw,
};

std::string_view bc_confidence_name(BcConfidence mode);
BcConfidence parse_bc_confidence(std::string_view name);

// Throws kEmptyBatch for an empty batch, kShapeMismatch on mixed lengths.
ClassBias estimate_bias(std::span<const ProbDist> batch);

// exp(ln p_i - log_bias_i): the bias-corrected scores before renormalization.
std::vector<double> corrected_scores(const ProbDist& dist, const ClassBias& bias);

// softmax(ln p_i - log_bias_i). Throws kShapeMismatch on length mismatch.
ProbDist apply_bc(const ProbDist& dist, const ClassBias& bias);

// Estimates the bias over the whole batch of predictions and corrects each.
std::vector<Prediction> batch_calibrate(std::span<const Prediction> predictions,
                                        BcConfidence mode = BcConfidence::kSoftmax);

// {"<label>": log_bias, ...}
std::string bias_to_json(const ClassBias& bias, const LabelSet& labels);

}  // namespace calens

#endif  // CALENS_CALIBRATE_H_
