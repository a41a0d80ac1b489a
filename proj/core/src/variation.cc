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

#include "calens/variation.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>

#include "calens/error.h"
#include "calens/io.h"
#include "calens/random.h"
#include "json.hpp"

namespace calens {
namespace {

bool is_name_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Replaces placeholders in body[0, end) from `fields`, plus <LABEL> when a
// label is given.
std::string substitute(std::string_view body, std::size_t end, const Example& example,
                       const std::string* label) {
  std::string out;
  out.reserve(end + 64);
  std::size_t i = 0;
  while (i < end) {
    if (body[i] == '<') {
      std::size_t j = i + 1;
      while (j < end && is_name_char(body[j])) ++j;
      if (j < end && j > i + 1 && body[j] == '>') {
        const std::string name(body.substr(i + 1, j - i - 1));
        if (name == kLabelPlaceholder) {
          if (label == nullptr) {
            raise(ErrorCode::kMissingField,
                  "demonstration '" + example.id + "' has no gold label for <LABEL>");
          }
          out += *label;
        } else {
          auto it = example.fields.find(name);
          if (it == example.fields.end()) {
            raise(ErrorCode::kMissingField,
                  "placeholder <" + name + "> missing from example '" + example.id + "'");
          }
          out += it->second;
        }
        i = j + 1;
        continue;
      }
    }
    out += body[i++];
  }
  return out;
}

std::string indexed_id(const char* prefix, std::size_t a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%02zu", prefix, a);
  return buf;
}

// All injective index sequences of length m over [0, n), lexicographic.
void enumerate_tuples(std::size_t n, std::size_t m, std::vector<std::size_t>& current,
                      std::vector<bool>& used, std::vector<std::vector<std::size_t>>& out) {
  if (current.size() == m) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    current.push_back(i);
    enumerate_tuples(n, m, current, used, out);
    current.pop_back();
    used[i] = false;
  }
}

}  // namespace

std::vector<std::string> find_placeholders(std::string_view body) {
  std::vector<std::string> names;
  std::size_t i = 0;
  while ((i = body.find('<', i)) != std::string_view::npos) {
    std::size_t j = i + 1;
    while (j < body.size() && is_name_char(body[j])) ++j;
    if (j < body.size() && j > i + 1 && body[j] == '>') {
      names.emplace_back(body.substr(i + 1, j - i - 1));
      i = j + 1;
    } else {
      ++i;
    }
  }
  return names;
}

Template::Template(std::string id, std::string body, std::set<std::string> required)
    : id_(std::move(id)), body_(std::move(body)), required_(std::move(required)) {
  std::map<std::string, int> counts;
  for (auto& name : find_placeholders(body_)) ++counts[name];
  if (counts[std::string(kLabelPlaceholder)] != 1) {
    raise(ErrorCode::kInvalidConfig, "template '" + id_ + "' must contain <LABEL> exactly once");
  }
  for (const auto& name : required_) {
    if (counts[name] != 1) {
      raise(ErrorCode::kInvalidConfig,
            "template '" + id_ + "' must contain <" + name + "> exactly once");
    }
  }
  for (const auto& [name, count] : counts) {
    if (count > 0 && name != kLabelPlaceholder && !required_.count(name)) {
      raise(ErrorCode::kInvalidConfig,
            "template '" + id_ + "' uses undeclared placeholder <" + name + ">");
    }
  }
  label_offset_ = body_.find("<LABEL>");
}

std::vector<Template> parse_template_pack(std::string_view text, std::string_view id_prefix) {
  const auto lines = split_lines(text);
  std::size_t row = 0;
  while (row < lines.size() && is_blank(lines[row])) ++row;
  constexpr std::string_view kHeader = "placeholders:";
  if (row == lines.size() || trim(lines[row]).substr(0, kHeader.size()) != kHeader) {
    raise(ErrorCode::kParseError, "template pack must start with 'placeholders:'");
  }
  std::set<std::string> required;
  std::string_view names = trim(lines[row]).substr(kHeader.size());
  while (!names.empty()) {
    const auto comma = names.find(',');
    const auto name = trim(names.substr(0, comma));
    if (!name.empty()) required.emplace(name);
    if (comma == std::string_view::npos) break;
    names.remove_prefix(comma + 1);
  }
  ++row;

  std::vector<Template> templates;
  std::optional<std::string> current_id;
  std::vector<std::string> body;
  auto flush = [&] {
    if (!current_id) return;
    while (!body.empty() && is_blank(body.back())) body.pop_back();
    std::size_t start = 0;
    while (start < body.size() && is_blank(body[start])) ++start;
    std::string joined;
    for (std::size_t i = start; i < body.size(); ++i) {
      if (i > start) joined += '\n';
      joined += body[i];
    }
    templates.emplace_back(*current_id, std::move(joined), required);
    body.clear();
  };
  for (; row < lines.size(); ++row) {
    const std::string& line = lines[row];
    if (line.rfind("@@", 0) == 0) {
      flush();
      const auto id = trim(std::string_view(line).substr(2));
      current_id = id.empty() ? indexed_id(std::string(id_prefix).c_str(), templates.size())
                              : std::string(id);
    } else if (current_id) {
      body.push_back(line);
    } else if (!is_blank(line)) {
      raise(ErrorCode::kParseError, "template text before the first '@@' separator");
    }
  }
  flush();
  if (templates.empty()) raise(ErrorCode::kParseError, "template pack has no templates");
  return templates;
}

std::vector<Template> load_template_pack(const std::filesystem::path& path) {
  try {
    return parse_template_pack(read_file(path), path.stem().string());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

std::string render(const Template& tmpl, std::span<const Example* const> demos,
                   const Example& query) {
  std::string prompt;
  for (const Example* demo : demos) {
    const std::string* label = demo->gold_label ? &*demo->gold_label : nullptr;
    prompt += substitute(tmpl.body(), tmpl.body().size(), *demo, label);
    prompt += '\n';
  }
  prompt += substitute(tmpl.body(), tmpl.label_offset(), query, nullptr);
  return prompt;
}

DemoPool::DemoPool(std::vector<Example> examples) : examples_(std::move(examples)) {
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const auto& e = examples_[i];
    if (!e.gold_label) {
      raise(ErrorCode::kInvalidArgument, "pool example '" + e.id + "' has no gold label");
    }
    if (!index_.emplace(e.id, i).second) {
      raise(ErrorCode::kInvalidArgument, "duplicate pool example id '" + e.id + "'");
    }
  }
}

const Example* DemoPool::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &examples_[it->second];
}

std::size_t ordered_tuple_count(std::size_t n, std::size_t m) {
  if (m > n) return 0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t factor = n - i;
    if (total > std::numeric_limits<std::size_t>::max() / factor) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= factor;
  }
  return total;
}

std::vector<DemoTuple> sample_ic(const DemoPool& pool, std::size_t demos, std::size_t count,
                                 std::string_view query_id, std::uint64_t seed) {
  if (demos == 0) raise(ErrorCode::kInvalidArgument, "demonstration count must be >= 1");
  if (count == 0) raise(ErrorCode::kInvalidArgument, "tuple count must be >= 1");
  std::vector<const std::string*> candidates;
  for (const auto& e : pool.examples()) {
    if (e.id != query_id) candidates.push_back(&e.id);
  }
  const std::size_t available = ordered_tuple_count(candidates.size(), demos);
  if (count > available) {
    raise(ErrorCode::kInsufficientPool,
          "requested " + std::to_string(count) + " ordered tuples of " + std::to_string(demos) +
              " from " + std::to_string(candidates.size()) + " candidates; at most " +
              std::to_string(available) + " are available");
  }

  Rng rng(sub_seed(seed, query_id));
  std::vector<std::vector<std::size_t>> picked;
  picked.reserve(count);
  if (available / 4 <= count) {
    // Dense request: enumerate everything and take a uniform prefix of a
    // partial shuffle.
    std::vector<std::vector<std::size_t>> all;
    all.reserve(available);
    std::vector<std::size_t> current;
    std::vector<bool> used(candidates.size(), false);
    enumerate_tuples(candidates.size(), demos, current, used, all);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_index(all.size() - i);
      std::swap(all[i], all[j]);
      picked.push_back(std::move(all[i]));
    }
  } else {
    // Sparse request: draw tuples and reject repeats.
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::size_t> scratch(candidates.size());
    while (picked.size() < count) {
      for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = i;
      std::vector<std::size_t> tuple(demos);
      for (std::size_t i = 0; i < demos; ++i) {
        const std::size_t j = i + rng.uniform_index(scratch.size() - i);
        std::swap(scratch[i], scratch[j]);
        tuple[i] = scratch[i];
      }
      if (seen.insert(tuple).second) picked.push_back(std::move(tuple));
    }
  }

  std::vector<DemoTuple> out;
  out.reserve(count);
  for (const auto& tuple : picked) {
    DemoTuple ids;
    ids.reserve(tuple.size());
    for (std::size_t i : tuple) ids.push_back(*candidates[i]);
    out.push_back(std::move(ids));
  }
  return out;
}

std::string_view variation_mode_name(VariationMode mode) {
  switch (mode) {
    case VariationMode::kVarIc: return "var-ic";
    case VariationMode::kVarPrompt: return "var-prompt";
    case VariationMode::kVarBoth: return "var-both";
  }
  return "unknown";
}

VariationMode parse_variation_mode(std::string_view name) {
  if (name == "var-ic" || name == "var_ic") return VariationMode::kVarIc;
  if (name == "var-prompt" || name == "var_prompt") return VariationMode::kVarPrompt;
  if (name == "var-both" || name == "var_both") return VariationMode::kVarBoth;
  raise(ErrorCode::kInvalidArgument, "unknown variation mode '" + std::string(name) + "'");
}

std::vector<VariantSpec> build_variants(VariationMode mode, std::span<const Template> templates,
                                        const DemoPool& pool, std::size_t demos,
                                        const VariantCounts& counts, std::uint64_t seed,
                                        std::string_view query_id) {
  if (templates.empty()) raise(ErrorCode::kInsufficientTemplates, "no templates given");
  std::set<std::string> template_ids;
  for (const auto& t : templates) {
    if (!template_ids.insert(t.id()).second) {
      raise(ErrorCode::kInvalidConfig, "duplicate template id '" + t.id() + "'");
    }
  }
  if (mode != VariationMode::kVarIc && templates.size() < 2) {
    raise(ErrorCode::kInsufficientTemplates,
          std::string(variation_mode_name(mode)) + " needs at least 2 templates, got " +
              std::to_string(templates.size()));
  }

  std::vector<VariantSpec> specs;
  auto add = [&](std::string id, const Template& t, DemoTuple tuple) {
    VariantSpec spec{std::move(id), t.id(), std::move(tuple), std::nullopt};
    if (!query_id.empty()) spec.example_id = std::string(query_id);
    specs.push_back(std::move(spec));
  };

  switch (mode) {
    case VariationMode::kVarIc: {
      auto tuples = sample_ic(pool, demos, counts.n_ic, query_id, seed);
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        add(indexed_id("ic", k), templates.front(), std::move(tuples[k]));
      }
      break;
    }
    case VariationMode::kVarPrompt: {
      DemoTuple shared;
      if (demos > 0) shared = std::move(sample_ic(pool, demos, 1, query_id, seed).front());
      for (std::size_t t = 0; t < templates.size(); ++t) {
        add(indexed_id("tpl", t), templates[t], shared);
      }
      break;
    }
    case VariationMode::kVarBoth: {
      if (counts.per_template == 0) {
        raise(ErrorCode::kInvalidArgument, "per-template count must be >= 1");
      }
      auto tuples =
          sample_ic(pool, demos, templates.size() * counts.per_template, query_id, seed);
      for (std::size_t t = 0; t < templates.size(); ++t) {
        for (std::size_t j = 0; j < counts.per_template; ++j) {
          add(indexed_id("tpl", t) + indexed_id("-ic", j), templates[t],
              std::move(tuples[t * counts.per_template + j]));
        }
      }
      break;
    }
  }
  return specs;
}

std::string variant_spec_to_json(const VariantSpec& spec) {
  nlohmann::ordered_json j;
  j["variant_id"] = spec.variant_id;
  j["template_id"] = spec.template_id;
  j["demo_ids"] = spec.demo_ids;
  if (spec.example_id) j["example_id"] = *spec.example_id;
  return j.dump();
}

VariantSpec variant_spec_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParseError, e.what());
  }
  try {
    VariantSpec spec;
    spec.variant_id = j.at("variant_id").get<std::string>();
    spec.template_id = j.at("template_id").get<std::string>();
    spec.demo_ids = j.at("demo_ids").get<std::vector<std::string>>();
    if (j.contains("example_id")) spec.example_id = j["example_id"].get<std::string>();
    std::set<std::string> distinct(spec.demo_ids.begin(), spec.demo_ids.end());
    if (distinct.size() != spec.demo_ids.size()) {
      raise(ErrorCode::kInvalidArgument, "variant '" + spec.variant_id + "' repeats a demo id");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParseError, e.what());
  }
}

std::vector<VariantSpec> load_variant_specs(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  std::vector<VariantSpec> specs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    try {
      specs.push_back(variant_spec_from_json(lines[i]));
    } catch (const Error& e) {
      throw e.with_context(path.string() + ":" + std::to_string(i + 1));
    }
  }
  return specs;
}

}  // namespace calens
