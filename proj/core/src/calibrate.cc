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

#include "calens/calibrate.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "calens/error.h"
#include "json.hpp"

namespace calens {
namespace {

void check_shape(const ProbDist& dist, const ClassBias& bias) {
  if (dist.size() != bias.log_bias.size()) {
    raise(ErrorCode::kShapeMismatch, "distribution has " + std::to_string(dist.size()) +
                                         " entries, bias has " +
                                         std::to_string(bias.log_bias.size()));
  }
}

}  // namespace

std::string_view bc_confidence_name(BcConfidence mode) {
  return mode == BcConfidence::kSoftmax ? "softmax" : "raw";
}

BcConfidence parse_bc_confidence(std::string_view name) {
  if (name == "softmax") return BcConfidence::kSoftmax;
  if (name == "raw") return BcConfidence::kRaw;
  raise(ErrorCode::kInvalidArgument, "unknown calibration confidence mode '" +
                                         std::string(name) + "'");
}

ClassBias estimate_bias(std::span<const ProbDist> batch) {
  if (batch.empty()) raise(ErrorCode::kEmptyBatch, "cannot estimate bias from an empty batch");
  const std::size_t labels = batch.front().size();
  std::vector<double> sums(labels, 0.0);
  for (const auto& dist : batch) {
    if (dist.size() != labels) {
      raise(ErrorCode::kShapeMismatch, "batch mixes distributions of different lengths");
    }
    for (std::size_t i = 0; i < labels; ++i) sums[i] += dist[i];
  }
  ClassBias bias;
  bias.log_bias.resize(labels);
  for (std::size_t i = 0; i < labels; ++i) {
    const double mean = sums[i] / static_cast<double>(batch.size());
    bias.log_bias[i] = std::log(std::max(mean, kLogFloor));
  }
  return bias;
}

std::vector<double> corrected_scores(const ProbDist& dist, const ClassBias& bias) {
  check_shape(dist, bias);
  std::vector<double> scores(dist.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = dist[i] * std::exp(-bias.log_bias[i]);
  }
  return scores;
}

ProbDist apply_bc(const ProbDist& dist, const ClassBias& bias) {
  check_shape(dist, bias);
  std::vector<double> logits(dist.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(bias.log_bias[i])) {
      raise(ErrorCode::kInvalidArgument, "non-finite log bias at " + std::to_string(i));
    }
    // ln 0 = -inf keeps impossible labels at exactly zero.
    logits[i] = std::log(dist[i]) - bias.log_bias[i];
    top = std::max(top, logits[i]);
  }
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logits) l /= total;
  return ProbDist::from_computed(std::move(logits));
}

std::vector<Prediction> batch_calibrate(std::span<const Prediction> predictions,
                                        BcConfidence mode) {
  std::vector<ProbDist> batch;
  batch.reserve(predictions.size());
  for (const auto& p : predictions) batch.push_back(p.dist());
  const ClassBias bias = estimate_bias(batch);

  std::vector<Prediction> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) {
    ProbDist calibrated = apply_bc(p.dist(), bias);
    if (mode == BcConfidence::kSoftmax) {
      out.emplace_back(p.example_id(), p.variant_id(), std::move(calibrated));
    } else {
      const double confidence = p.dist()[argmax(calibrated)];
      out.push_back(Prediction::with_confidence(p.example_id(), p.variant_id(),
                                                std::move(calibrated), confidence));
    }
  }
  return out;
}

std::string bias_to_json(const ClassBias& bias, const LabelSet& labels) {
  if (bias.log_bias.size() != labels.size()) {
    raise(ErrorCode::kShapeMismatch, "bias length does not match the label set");
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) j[labels.label(i)] = bias.log_bias[i];
  return j.dump();
}

}  // namespace calens
