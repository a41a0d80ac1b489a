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

#include "calens/task_config.h"

#include <set>
#include <unordered_set>

#include "calens/error.h"
#include "calens/io.h"
#include "json.hpp"

namespace calens {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) {
    raise(ErrorCode::kInvalidConfig, std::string(what) + " '" + path.string() + "' not found");
  }
}

}  // namespace

TaskConfig TaskConfig::from_json(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::kParseError, e.what());
  }
  TaskConfig config;
  try {
    config.labels = LabelSet(j.at("task_id").get<std::string>(),
                             j.at("labels").get<std::vector<std::string>>());
    for (const auto& p : j.value("templates", std::vector<std::string>{})) {
      config.template_packs.push_back(resolve(base_dir, p));
    }
    config.fields = j.value("fields", std::map<std::string, std::string>{});
    config.demos = j.value("demos", kDefaultDemos);
    if (j.contains("pool") && !j["pool"].is_null()) {
      config.pool = resolve(base_dir, j["pool"].get<std::string>());
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::kInvalidConfig, e.what());
  }
  for (const auto& pack : config.template_packs) require_file(pack, "template pack");
  if (config.pool) require_file(*config.pool, "demonstration pool");
  for (const auto& t : config.load_templates()) {
    for (const auto& name : t.required_placeholders()) {
      if (!config.fields.count(name)) {
        raise(ErrorCode::kInvalidConfig, "field mapping does not cover placeholder <" + name +
                                             "> of template '" + t.id() + "'");
      }
    }
  }
  return config;
}

TaskConfig TaskConfig::load(const std::filesystem::path& path) {
  try {
    return from_json(read_file(path), path.parent_path());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

std::vector<Template> TaskConfig::load_templates() const {
  std::vector<Template> all;
  for (const auto& pack : template_packs) {
    for (auto& t : load_template_pack(pack)) all.push_back(std::move(t));
  }
  return all;
}

std::string TaskConfig::to_json() const {
  nlohmann::ordered_json j;
  j["task_id"] = labels.task_id();
  j["labels"] = labels.labels();
  std::vector<std::string> packs;
  for (const auto& p : template_packs) packs.push_back(p.string());
  j["templates"] = packs;
  j["fields"] = fields;
  j["demos"] = demos;
  if (pool) j["pool"] = pool->string();
  return j.dump(2);
}

std::vector<Example> parse_dataset(std::string_view text, const TaskConfig& config,
                                   const std::string& source_name) {
  const auto lines = split_lines(text);
  std::vector<Example> examples;
  std::unordered_set<std::string> ids;
  for (std::size_t row = 0; row < lines.size(); ++row) {
    if (is_blank(lines[row])) continue;
    const std::string where = source_name + ":" + std::to_string(row + 1);
    json j;
    try {
      j = json::parse(lines[row]);
    } catch (const json::exception& e) {
      raise(ErrorCode::kParseError, where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      raise(ErrorCode::kParseError, where + ": missing string field 'id'");
    }
    Example e;
    e.id = j["id"].get<std::string>();
    for (const auto& [placeholder, key] : config.fields) {
      if (!j.contains(key) || !j[key].is_string()) {
        raise(ErrorCode::kMissingField,
              where + ": example '" + e.id + "' has no string field '" + key + "'");
      }
      e.fields[placeholder] = j[key].get<std::string>();
    }
    if (j.contains("label") && !j["label"].is_null()) {
      if (!j["label"].is_string()) raise(ErrorCode::kParseError, where + ": 'label' is not a string");
      auto label = j["label"].get<std::string>();
      if (!config.labels.find(label)) {
        raise(ErrorCode::kUnknownLabel, where + ": label '" + label +
                                            "' is not in the verbalizer of '" +
                                            config.task_id() + "'");
      }
      e.gold_label = std::move(label);
    }
    if (!ids.insert(e.id).second) {
      raise(ErrorCode::kInvalidArgument, where + ": duplicate example id '" + e.id + "'");
    }
    examples.push_back(std::move(e));
  }
  return examples;
}

std::vector<Example> load_dataset(const std::filesystem::path& path, const TaskConfig& config) {
  return parse_dataset(read_file(path), config, path.string());
}

}  // namespace calens
