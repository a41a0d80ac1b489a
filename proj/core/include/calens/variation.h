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

#ifndef CALENS_VARIATION_H_
#define CALENS_VARIATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "calens/types.h"

namespace calens {

inline constexpr std::string_view kLabelPlaceholder = "LABEL";
inline constexpr std::size_t kDefaultDemos = 3;

// A prompt template with <NAME> placeholders. The body must contain every
// required placeholder exactly once, <LABEL> exactly once, and nothing else.
class Template {
 public:
  Template(std::string id, std::string body, std::set<std::string> required);

  const std::string& id() const { return id_; }
  const std::string& body() const { return body_; }
  const std::set<std::string>& required_placeholders() const { return required_; }
  // Byte offset of "<LABEL>" in body().
  std::size_t label_offset() const { return label_offset_; }

 private:
  std::string id_;
  std::string body_;
  std::set<std::string> required_;
  std::size_t label_offset_;
};

// All placeholder names in order of appearance, duplicates included.
std::vector<std::string> find_placeholders(std::string_view body);

// Template pack text format:
//
//   placeholders: SENTENCE, QUESTION
//   @@ <template-id>
//   <body line>
//   ...
//   @@ <template-id>
//   ...
//
// Body lines are joined with '\n'; leading and trailing blank lines of a body
// are dropped. A bare "@@" gets the id "<id_prefix>-<index>".
std::vector<Template> parse_template_pack(std::string_view text,
                                          std::string_view id_prefix);
std::vector<Template> load_template_pack(const std::filesystem::path& path);

// Renders each demonstration with its gold label filled in, then the query
// truncated at the <LABEL> slot, joined by '\n'. Throws kMissingField when an
// example lacks a placeholder (or a demonstration lacks its gold label).
std::string render(const Template& tmpl, std::span<const Example* const> demos,
                   const Example& query);

// Labeled examples that demonstrations are drawn from.
class DemoPool {
 public:
  DemoPool() = default;
  // Throws kInvalidArgument on missing gold labels or duplicate ids.
  explicit DemoPool(std::vector<Example> examples);

  const std::vector<Example>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  const Example* find(std::string_view id) const;

 private:
  std::vector<Example> examples_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Number of ordered length-m sequences of distinct items out of n, saturating
// at SIZE_MAX.
std::size_t ordered_tuple_count(std::size_t n, std::size_t m);

using DemoTuple = std::vector<std::string>;

// Draws `count` distinct ordered tuples of `demos` distinct pool ids, never
// using query_id. Uniform without replacement over tuples; the generator is
// seeded from sub_seed(seed, query_id). Throws kInsufficientPool when fewer
// than `count` tuples exist.
std::vector<DemoTuple> sample_ic(const DemoPool& pool, std::size_t demos,
                                 std::size_t count, std::string_view query_id,
                                 std::uint64_t seed);

enum class VariationMode { kVarIc, kVarPrompt, kVarBoth };

std::string_view variation_mode_name(VariationMode mode);  // "var-ic", ...
VariationMode parse_variation_mode(std::string_view name);

struct VariantCounts {
  std::size_t n_ic = 20;         // var-ic components
  std::size_t per_template = 5;  // var-both tuples per template
};

// Recipe for one ensemble component.
struct VariantSpec {
  std::string variant_id;
  std::string template_id;
  DemoTuple demo_ids;
  // Set when the spec was sampled for one query only.
  std::optional<std::string> example_id;

  friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

// var-ic: counts.n_ic specs on templates[0] with distinct tuples.
// var-prompt: one spec per template sharing a single tuple (empty when
//   demos == 0). Needs at least two templates.
// var-both: |templates| * counts.per_template specs, all tuples distinct.
// A non-empty query_id excludes that example from the pool and tags each
// spec with it.
std::vector<VariantSpec> build_variants(VariationMode mode,
                                        std::span<const Template> templates,
                                        const DemoPool& pool, std::size_t demos,
                                        const VariantCounts& counts,
                                        std::uint64_t seed,
                                        std::string_view query_id = {});

// {"variant_id":...,"template_id":...,"demo_ids":[...]} plus "example_id"
// when set. No trailing newline.
std::string variant_spec_to_json(const VariantSpec& spec);
VariantSpec variant_spec_from_json(std::string_view line);
std::vector<VariantSpec> load_variant_specs(const std::filesystem::path& path);

}  // namespace calens

#endif  // CALENS_VARIATION_H_
