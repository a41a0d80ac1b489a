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

#ifndef CALENS_TASK_CONFIG_H_
#define CALENS_TASK_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "calens/types.h"
#include "calens/variation.h"

namespace calens {

// Task description, stored as JSON:
//   {
//     "task_id": "sst5",
//     "labels": ["terrible", "bad", "neutral", "good", "great"],
//     "templates": ["../templates/sst5_var_prompt.txt"],
//     "fields": {"SENTENCE": "sentence"},
//     "demos": 3,
//     "pool": "train.jsonl"
//   }
// Relative paths resolve against the config file's directory. "fields" maps
// template placeholders to dataset JSONL keys; "demos" and "pool" are
// optional.
struct TaskConfig {
  LabelSet labels{"task", {"label"}};
  std::vector<std::filesystem::path> template_packs;
  std::map<std::string, std::string> fields;
  std::size_t demos = kDefaultDemos;
  std::optional<std::filesystem::path> pool;

  const std::string& task_id() const { return labels.task_id(); }

  // Throws kIoError, kParseError or kInvalidConfig. Checks that every
  // referenced file exists and that `fields` covers every template
  // placeholder.
  static TaskConfig load(const std::filesystem::path& path);
  static TaskConfig from_json(std::string_view text,
                              const std::filesystem::path& base_dir);

  std::vector<Template> load_templates() const;
  std::string to_json() const;
};

// Dataset JSONL: {"id": "...", "<field>": "...", "label": "..."}; "label" is
// optional. Fields are renamed to placeholder names via config.fields.
// Throws kParseError, kMissingField, kUnknownLabel or kInvalidArgument
// (duplicate ids).
std::vector<Example> load_dataset(const std::filesystem::path& path,
                                  const TaskConfig& config);
std::vector<Example> parse_dataset(std::string_view text, const TaskConfig& config,
                                   const std::string& source_name = "<dataset>");

}  // namespace calens

#endif  // CALENS_TASK_CONFIG_H_
