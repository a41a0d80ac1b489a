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

#include "calens/replay.h"

#include <fstream>
#include <thread>

#include "calens/error.h"
#include "calens/io.h"
#include "json.hpp"

namespace calens {

Prediction prediction_from_json(const std::string& line, const LabelSet& labels) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParseError, e.what());
  }
  if (!j.is_object()) raise(ErrorCode::kParseError, "line is not a JSON object");
  for (const char* key : {"example_id", "variant_id"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      raise(ErrorCode::kParseError, std::string("missing string field '") + key + "'");
    }
  }
  if (!j.contains("probs") || !j["probs"].is_object()) {
    raise(ErrorCode::kParseError, "missing object field 'probs'");
  }
  const auto& probs = j["probs"];
  std::vector<double> values(labels.size(), 0.0);
  std::vector<bool> seen(labels.size(), false);
  for (const auto& [label, value] : probs.items()) {
    const std::size_t i = labels.index_of(label);
    if (!value.is_number()) {
      raise(ErrorCode::kParseError, "probability of '" + label + "' is not a number");
    }
    values[i] = value.get<double>();
    seen[i] = true;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen[i]) raise(ErrorCode::kUnknownLabel, "no probability for label '" + labels.label(i) + "'");
  }
  return Prediction(j["example_id"].get<std::string>(), j["variant_id"].get<std::string>(),
                    ProbDist::from_values(std::move(values)));
}

std::string prediction_to_json(const Prediction& prediction, const LabelSet& labels) {
  if (prediction.dist().size() != labels.size()) {
    raise(ErrorCode::kShapeMismatch, "prediction does not match the label set");
  }
  nlohmann::ordered_json j;
  j["example_id"] = prediction.example_id();
  j["variant_id"] = prediction.variant_id();
  nlohmann::ordered_json probs = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) probs[labels.label(i)] = prediction.dist()[i];
  j["probs"] = std::move(probs);
  return j.dump();
}

ReplayBackend ReplayBackend::parse(std::istream& in, const LabelSet& labels,
                                   const std::string& source_name) {
  ReplayBackend backend(labels);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (is_blank(line)) continue;
    try {
      Prediction p = prediction_from_json(line, labels);
      auto key = std::make_pair(p.example_id(), p.variant_id());
      auto it = backend.index_.find(key);
      if (it != backend.index_.end()) {
        backend.predictions_[it->second] = std::move(p);
        ++backend.duplicates_;
      } else {
        backend.index_.emplace(std::move(key), backend.predictions_.size());
        backend.predictions_.push_back(std::move(p));
      }
    } catch (const Error& e) {
      throw e.with_context(source_name + ":" + std::to_string(row));
    }
  }
  return backend;
}

ReplayBackend ReplayBackend::load(const std::filesystem::path& path, const LabelSet& labels) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return parse(in, labels, path.string());
}

ProbDist ReplayBackend::score(const ScoreRequest& request) const {
  auto it = index_.find({request.example_id, request.variant_id});
  if (it == index_.end()) {
    raise(ErrorCode::kMissingPrediction, "no prediction for (" + request.example_id + ", " +
                                             request.variant_id + ")");
  }
  return predictions_[it->second].dist();
}

std::size_t ReplayBackend::max_parallelism() const {
  return std::max(1u, std::thread::hardware_concurrency());
}

bool ReplayBackend::contains(const std::string& example_id, const std::string& variant_id) const {
  return index_.count({example_id, variant_id}) > 0;
}

}  // namespace calens
