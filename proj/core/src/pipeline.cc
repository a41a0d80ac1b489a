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

#include "calens/pipeline.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "calens/error.h"
#include "calens/io.h"
#include "calens/random.h"
#include "calens/replay.h"
#include "json.hpp"

#ifndef CALENS_VERSION
#define CALENS_VERSION "0.0.0"
#endif

namespace calens {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::size_t kMaxListedKeys = 20;

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

ojson provenance_json(const Provenance& p) {
  ojson j;
  j["tool"] = "calens";
  j["tool_version"] = p.tool_version;
  j["config_hash"] = p.config_hash;
  j["seeds"] = p.seeds;
  j["backend"] = p.backend;
  j["prng"] = p.prng;
  ojson inputs = ojson::object();
  for (const auto& [role, digest] : p.inputs) inputs[role] = digest;
  j["inputs"] = std::move(inputs);
  return j;
}

ojson optional_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson metrics_json(const MetricsReport& m) {
  ojson j;
  j["n"] = m.n;
  j["ece"] = m.ece;
  j["nll"] = m.nll;
  j["ie"] = m.ie;
  j["accuracy"] = m.accuracy;
  j["micro_f1"] = m.micro_f1;
  j["macro_f1"] = m.macro_f1;
  ojson bins = ojson::array();
  for (const auto& b : m.bins) {
    ojson row;
    row["bin"] = b.bin_index;
    row["lower"] = b.lower;
    row["upper"] = b.upper;
    row["count"] = b.count;
    row["accuracy"] = optional_json(b.accuracy);
    row["mean_confidence"] = optional_json(b.mean_confidence);
    bins.push_back(std::move(row));
  }
  j["bins"] = std::move(bins);
  return j;
}

ojson deltas_json(const MetricDeltas& d) {
  ojson j;
  j["ece"] = d.ece;
  j["nll"] = d.nll;
  j["accuracy"] = d.accuracy;
  j["micro_f1"] = d.micro_f1;
  j["macro_f1"] = d.macro_f1;
  return j;
}

ojson synthetic_config_json(const SyntheticConfig& c) {
  ojson j;
  j["num_labels"] = c.num_labels;
  j["num_examples"] = c.num_examples;
  j["num_variants"] = c.num_variants;
  j["temperature"] = c.temperature;
  j["noise"] = c.noise;
  j["concentration"] = c.concentration;
  j["seed"] = c.seed;
  return j;
}

std::string file_safe(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

std::string key_string(const std::string& example_id, const std::string& variant_id) {
  return "(" + example_id + ", " + variant_id + ")";
}

std::optional<DemoPool> load_pool(const TaskConfig& config) {
  if (!config.pool) return std::nullopt;
  return DemoPool(load_dataset(*config.pool, config));
}

GoldLabels gold_labels(const std::vector<Example>& examples, const LabelSet& labels) {
  GoldLabels golds;
  for (const auto& e : examples) {
    if (e.gold_label) golds.emplace(e.id, labels.index_of(*e.gold_label));
  }
  return golds;
}

}  // namespace

std::string_view tool_version() { return CALENS_VERSION; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kProtocolError:
      return kExitBackend;
    case ErrorCode::kMissingPrediction:
      return kExitCoverage;
    default:
      return kExitValidation;
  }
}

// ---------------------------------------------------------------- variants

std::vector<VariantSpec> cmd_variants(const VariantsOptions& options) {
  const TaskConfig config = TaskConfig::load(options.task_config);
  const auto templates = config.load_templates();
  const std::size_t demos = options.demos.value_or(config.demos);
  const DemoPool pool = load_pool(config).value_or(DemoPool());

  std::vector<VariantSpec> specs;
  if (options.dataset) {
    for (const auto& query : load_dataset(*options.dataset, config)) {
      try {
        auto part = build_variants(options.mode, templates, pool, demos, options.counts,
                                   options.seed, query.id);
        specs.insert(specs.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
      } catch (const Error& e) {
        throw e.with_context("query '" + query.id + "'");
      }
    }
  } else {
    specs = build_variants(options.mode, templates, pool, demos, options.counts, options.seed);
  }

  std::vector<std::string> lines;
  lines.reserve(specs.size());
  for (const auto& s : specs) lines.push_back(variant_spec_to_json(s));
  write_file_atomic(options.output, join_lines(lines));
  return specs;
}

// ------------------------------------------------------------------- score

ScoreSummary cmd_score(const ScoreOptions& options, const ScoringBackend& backend) {
  const TaskConfig config = TaskConfig::load(options.task_config);
  std::unordered_map<std::string, Template> templates;
  for (auto& t : config.load_templates()) templates.emplace(t.id(), std::move(t));
  const auto dataset = load_dataset(options.dataset, config);
  const auto specs = load_variant_specs(options.variants);
  const auto pool = load_pool(config);

  // Keep what a previous run already wrote. A torn final line from an
  // interrupted run is dropped; any other bad line is an error.
  std::vector<std::string> kept;
  std::set<std::pair<std::string, std::string>> done;
  if (std::filesystem::exists(options.output)) {
    const auto lines = split_lines(read_file(options.output));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (is_blank(lines[i])) continue;
      try {
        Prediction p = prediction_from_json(lines[i], config.labels);
        if (done.emplace(p.example_id(), p.variant_id()).second) kept.push_back(lines[i]);
      } catch (const Error& e) {
        if (i + 1 == lines.size()) break;
        throw e.with_context(options.output.string() + ":" + std::to_string(i + 1));
      }
    }
  }

  ScoreSummary summary;
  std::vector<ScoreRequest> requests;
  for (const auto& query : dataset) {
    for (const auto& spec : specs) {
      if (spec.example_id && *spec.example_id != query.id) continue;
      ++summary.requested;
      if (done.count({query.id, spec.variant_id})) {
        ++summary.skipped_existing;
        continue;
      }
      auto t = templates.find(spec.template_id);
      if (t == templates.end()) {
        raise(ErrorCode::kInvalidConfig, "variant '" + spec.variant_id +
                                             "' uses unknown template '" + spec.template_id + "'");
      }
      std::vector<const Example*> demos;
      for (const auto& id : spec.demo_ids) {
        if (id == query.id) {
          raise(ErrorCode::kInvalidArgument, "variant '" + spec.variant_id +
                                                 "' uses query '" + query.id +
                                                 "' as its own demonstration");
        }
        const Example* demo = pool ? pool->find(id) : nullptr;
        if (demo == nullptr) {
          raise(ErrorCode::kInvalidConfig,
                "demonstration '" + id + "' is not in the task's pool");
        }
        demos.push_back(demo);
      }
      requests.push_back(ScoreRequest{query.id, spec.variant_id,
                                      render(t->second, demos, query), config.labels.labels()});
    }
  }

  const auto outcomes = score_all(backend, requests);
  std::vector<std::string> lines = std::move(kept);
  std::optional<Error> first_error;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& r = requests[i];
    if (const auto* dist = std::get_if<ProbDist>(&outcomes[i])) {
      lines.push_back(prediction_to_json(Prediction(r.example_id, r.variant_id, *dist),
                                         config.labels));
      ++summary.scored;
    } else {
      const auto& error = std::get<Error>(outcomes[i]);
      if (!first_error) first_error = error;
      summary.errors.emplace_back(key_string(r.example_id, r.variant_id), error.what());
    }
  }
  write_file_atomic(options.output, join_lines(lines));

  if (!requests.empty() && first_error) {
    const double rate =
        static_cast<double>(summary.errors.size()) / static_cast<double>(requests.size());
    if (rate > options.max_error_rate) {
      throw first_error->with_context(std::to_string(summary.errors.size()) + " of " +
                                      std::to_string(requests.size()) +
                                      " requests failed; first failure");
    }
  }
  return summary;
}

// ---------------------------------------------------------------- evaluate

ReportDeltas compute_deltas(const RunReport& report) {
  if (report.per_variant.empty() || report.ensembled.empty()) {
    raise(ErrorCode::kEmptyInput, "deltas need single-variant and ensembled reports");
  }
  auto fold = [](const std::vector<NamedReport>& reports, bool best) {
    MetricDeltas d;
    const auto& first = reports.front().metrics;
    d = {first.ece, first.nll, first.accuracy, first.micro_f1, first.macro_f1};
    if (!best) d = {};
    for (std::size_t i = best ? 1 : 0; i < reports.size(); ++i) {
      const auto& m = reports[i].metrics;
      if (best) {
        d.ece = std::min(d.ece, m.ece);
        d.nll = std::min(d.nll, m.nll);
        d.accuracy = std::max(d.accuracy, m.accuracy);
        d.micro_f1 = std::max(d.micro_f1, m.micro_f1);
        d.macro_f1 = std::max(d.macro_f1, m.macro_f1);
      } else {
        d.ece += m.ece;
        d.nll += m.nll;
        d.accuracy += m.accuracy;
        d.micro_f1 += m.micro_f1;
        d.macro_f1 += m.macro_f1;
      }
    }
    if (!best) {
      const double n = static_cast<double>(reports.size());
      d.ece /= n;
      d.nll /= n;
      d.accuracy /= n;
      d.micro_f1 /= n;
      d.macro_f1 /= n;
    }
    return d;
  };
  auto minus = [](const MetricDeltas& a, const MetricDeltas& b) {
    return MetricDeltas{a.ece - b.ece, a.nll - b.nll, a.accuracy - b.accuracy,
                        a.micro_f1 - b.micro_f1, a.macro_f1 - b.macro_f1};
  };
  ReportDeltas d;
  d.best_ensembled = fold(report.ensembled, true);
  d.best_variant = fold(report.per_variant, true);
  d.mean_variant = fold(report.per_variant, false);
  d.vs_best_variant = minus(d.best_ensembled, d.best_variant);
  d.vs_mean_variant = minus(d.best_ensembled, d.mean_variant);
  return d;
}

std::string run_report_to_json(const RunReport& report) {
  ojson j;
  j["schema"] = kReportSchema;
  j["kind"] = "evaluate";
  j["provenance"] = provenance_json(report.provenance);
  ojson settings;
  settings["bins"] = report.bins;
  settings["batch_calibrated"] = report.batch_calibrated;
  settings["bc_order"] = report.bc_order;
  settings["bc_confidence"] = report.bc_confidence;
  settings["log_base"] = "e";
  settings["nll_reduction"] = "mean";
  j["settings"] = std::move(settings);
  auto reports = [](const std::vector<NamedReport>& list) {
    ojson arr = ojson::array();
    for (const auto& r : list) {
      ojson entry;
      entry["name"] = r.name;
      entry["metrics"] = metrics_json(r.metrics);
      arr.push_back(std::move(entry));
    }
    return arr;
  };
  j["per_variant"] = reports(report.per_variant);
  j["ensembled"] = reports(report.ensembled);
  if (!report.per_variant.empty() && !report.ensembled.empty()) {
    const auto d = compute_deltas(report);
    ojson deltas;
    deltas["best_ensembled"] = deltas_json(d.best_ensembled);
    deltas["best_variant"] = deltas_json(d.best_variant);
    deltas["mean_variant"] = deltas_json(d.mean_variant);
    deltas["vs_best_variant"] = deltas_json(d.vs_best_variant);
    deltas["vs_mean_variant"] = deltas_json(d.vs_mean_variant);
    j["deltas"] = std::move(deltas);
  }
  ojson bias = ojson::object();
  for (const auto& [name, values] : report.bias) bias[name] = values;
  j["bias"] = std::move(bias);
  return j.dump(2) + "\n";
}

std::filesystem::path reliability_csv_path(const std::filesystem::path& base,
                                           const std::string& config) {
  const std::string safe = file_safe(config);
  std::string s = base.string();
  if (auto pos = s.find("{config}"); pos != std::string::npos) {
    return s.replace(pos, std::string_view("{config}").size(), safe);
  }
  auto out = base;
  out.replace_filename(base.stem().string() + "." + safe +
                       (base.has_extension() ? base.extension().string() : ".csv"));
  return out;
}

RunReport cmd_evaluate(const EvaluateOptions& options) {
  const TaskConfig config = TaskConfig::load(options.task_config);
  const LabelSet& labels = config.labels;
  if (options.bins < 1) {
    raise(ErrorCode::kInvalidBinCount, "bin count must be >= 1, got " + std::to_string(options.bins));
  }
  if (options.strategies.empty()) raise(ErrorCode::kInvalidArgument, "no strategies requested");

  const ReplayBackend replay = ReplayBackend::load(options.predictions, labels);
  const auto& all = replay.predictions();
  if (all.empty()) {
    raise(ErrorCode::kEmptyInput, "'" + options.predictions.string() + "' has no predictions");
  }
  const auto dataset = load_dataset(options.dataset, config);
  const GoldLabels golds = gold_labels(dataset, labels);

  std::vector<std::string> example_ids, variant_ids;
  {
    std::unordered_set<std::string> seen_e, seen_v;
    for (const auto& p : all) {
      if (seen_e.insert(p.example_id()).second) example_ids.push_back(p.example_id());
      if (seen_v.insert(p.variant_id()).second) variant_ids.push_back(p.variant_id());
    }
  }
  std::vector<std::string> missing;
  std::size_t missing_total = 0;
  for (const auto& e : example_ids) {
    for (const auto& v : variant_ids) {
      if (!replay.contains(e, v)) {
        ++missing_total;
        if (missing.size() < kMaxListedKeys) missing.push_back(key_string(e, v));
      }
    }
  }
  if (missing_total > 0) {
    std::string list;
    for (const auto& k : missing) list += (list.empty() ? "" : " ") + k;
    raise(ErrorCode::kMissingPrediction, std::to_string(missing_total) +
                                             " (example, variant) pairs are missing: " + list +
                                             (missing_total > missing.size() ? " ..." : ""));
  }
  for (const auto& e : example_ids) {
    if (!golds.count(e)) {
      raise(ErrorCode::kMissingGold, "example '" + e + "' has no gold label in '" +
                                         options.dataset.string() + "'");
    }
  }

  RunReport report;
  report.bins = options.bins;
  report.batch_calibrated = options.batch_calibrate;
  report.bc_order = options.bc_order == BcOrder::kBeforeEnsemble ? "before_ensemble" : "after_ensemble";
  report.bc_confidence = std::string(bc_confidence_name(options.bc_confidence));

  auto record_bias = [&](const std::string& name, const std::vector<Prediction>& batch) {
    std::vector<ProbDist> dists;
    for (const auto& p : batch) dists.push_back(p.dist());
    report.bias[name] = estimate_bias(dists).log_bias;
  };

  // Per-variant predictions in example order.
  std::map<std::string, std::vector<Prediction>> by_variant;
  for (const auto& v : variant_ids) {
    auto& list = by_variant[v];
    for (const auto& e : example_ids) {
      list.push_back(Prediction(e, v, replay.score(ScoreRequest{e, v, {}, labels.labels()})));
    }
    if (options.batch_calibrate && options.bc_order == BcOrder::kBeforeEnsemble) {
      record_bias(v, list);
      list = batch_calibrate(list, options.bc_confidence);
    }
  }

  std::vector<std::pair<std::string, std::vector<BinStats>>> csvs;
  for (const auto& v : variant_ids) {
    report.per_variant.push_back({v, evaluate_predictions(by_variant[v], golds, options.bins)});
    csvs.emplace_back("variant-" + v, report.per_variant.back().metrics.bins);
  }

  std::vector<EnsembleGroup> groups;
  groups.reserve(example_ids.size());
  for (std::size_t i = 0; i < example_ids.size(); ++i) {
    std::vector<Prediction> members;
    for (const auto& v : variant_ids) members.push_back(by_variant[v][i]);
    groups.emplace_back(example_ids[i], std::move(members));
  }

  std::vector<std::string> dumped;
  for (Strategy s : options.strategies) {
    const std::string name(strategy_name(s));
    auto ensembled = run_ensemble(s, groups);
    if (options.batch_calibrate && options.bc_order == BcOrder::kAfterEnsemble) {
      record_bias(name, ensembled);
      ensembled = batch_calibrate(ensembled, options.bc_confidence);
    }
    report.ensembled.push_back({name, evaluate_predictions(ensembled, golds, options.bins)});
    csvs.emplace_back("ensemble-" + name, report.ensembled.back().metrics.bins);
    for (const auto& p : ensembled) dumped.push_back(prediction_to_json(p, labels));
  }

  Provenance& prov = report.provenance;
  prov.tool_version = std::string(tool_version());
  prov.backend = "replay";
  prov.prng = std::string(kPrngName);
  prov.inputs["task_config"] = file_digest(options.task_config);
  prov.inputs["predictions"] = file_digest(options.predictions);
  prov.inputs["dataset"] = file_digest(options.dataset);
  {
    ojson settings;
    settings["bins"] = options.bins;
    settings["batch_calibrate"] = options.batch_calibrate;
    settings["bc_order"] = report.bc_order;
    settings["bc_confidence"] = report.bc_confidence;
    std::vector<std::string> names;
    for (Strategy s : options.strategies) names.emplace_back(strategy_name(s));
    settings["strategies"] = names;
    for (const auto& [role, digest] : prov.inputs) settings[role] = digest;
    prov.config_hash = hex_digest(settings.dump());
  }

  if (options.output) write_file_atomic(*options.output, run_report_to_json(report));
  if (options.reliability_csv) {
    for (const auto& [name, bins] : csvs) {
      write_file_atomic(reliability_csv_path(*options.reliability_csv, name),
                        reliability_csv(bins));
    }
  }
  if (options.dump_predictions) write_file_atomic(*options.dump_predictions, join_lines(dumped));
  return report;
}

// ---------------------------------------------------------------- simulate

const SweepPoint& SimulationReport::point(Strategy strategy, std::size_t k) const {
  for (const auto& p : points) {
    if (p.strategy == strategy && p.k == k) return p;
  }
  raise(ErrorCode::kInvalidArgument, "no sweep point for " + std::string(strategy_name(strategy)) +
                                         " at k=" + std::to_string(k));
}

SimulationReport cmd_simulate(const SimulateOptions& options) {
  options.config.validate();
  if (options.seeds.empty()) raise(ErrorCode::kInvalidConfig, "no seeds given");
  if (options.strategies.empty()) raise(ErrorCode::kInvalidConfig, "no strategies given");
  if (options.k_sweep.empty()) raise(ErrorCode::kInvalidConfig, "empty k sweep");
  for (std::size_t k : options.k_sweep) {
    if (k < 1 || k > options.config.num_variants) {
      raise(ErrorCode::kInvalidConfig, "k sweep value " + std::to_string(k) +
                                           " outside [1, " +
                                           std::to_string(options.config.num_variants) + "]");
    }
  }

  SimulationReport report;
  report.config = options.config;
  report.seeds = options.seeds;
  for (Strategy s : options.strategies) {
    for (std::size_t k : options.k_sweep) report.points.push_back(SweepPoint{s, k, {}, {}, 0.0, 0.0});
  }

  for (std::uint64_t seed : options.seeds) {
    SyntheticConfig cfg = options.config;
    cfg.seed = seed;
    const SyntheticModel model(cfg);
    const auto variants = model.variant_ids();
    GoldLabels golds;
    for (std::size_t i = 0; i < model.examples().size(); ++i) {
      golds.emplace(model.examples()[i].id, model.gold_indices()[i]);
    }

    std::vector<std::vector<Prediction>> by_variant(variants.size());
    double ece_sum = 0.0, acc_sum = 0.0;
    for (std::size_t k = 0; k < variants.size(); ++k) {
      auto& list = by_variant[k];
      list.reserve(model.examples().size());
      for (std::size_t i = 0; i < model.examples().size(); ++i) {
        list.emplace_back(model.examples()[i].id, variants[k], model.score_variant(i, variants[k]));
      }
      ece_sum += ece(list, golds, options.bins);
      acc_sum += classification_scores(list, golds).accuracy;
    }
    report.variant_ece_per_seed.push_back(ece_sum / static_cast<double>(variants.size()));
    report.variant_accuracy_per_seed.push_back(acc_sum / static_cast<double>(variants.size()));

    for (auto& point : report.points) {
      std::vector<EnsembleGroup> groups;
      groups.reserve(model.examples().size());
      for (std::size_t i = 0; i < model.examples().size(); ++i) {
        std::vector<Prediction> members;
        members.reserve(point.k);
        for (std::size_t k = 0; k < point.k; ++k) members.push_back(by_variant[k][i]);
        groups.emplace_back(model.examples()[i].id, std::move(members));
      }
      const auto ensembled = run_ensemble(point.strategy, groups);
      point.ece_per_seed.push_back(ece(ensembled, golds, options.bins));
      point.accuracy_per_seed.push_back(classification_scores(ensembled, golds).accuracy);
    }
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  report.mean_variant_ece = mean(report.variant_ece_per_seed);
  report.mean_variant_accuracy = mean(report.variant_accuracy_per_seed);
  for (auto& point : report.points) {
    point.mean_ece = mean(point.ece_per_seed);
    point.mean_accuracy = mean(point.accuracy_per_seed);
  }

  Provenance& prov = report.provenance;
  prov.tool_version = std::string(tool_version());
  prov.seeds = options.seeds;
  prov.backend = "synthetic";
  prov.prng = std::string(kPrngName);
  {
    ojson settings = synthetic_config_json(options.config);
    settings["seeds"] = options.seeds;
    settings["k_sweep"] = options.k_sweep;
    settings["bins"] = options.bins;
    std::vector<std::string> names;
    for (Strategy s : options.strategies) names.emplace_back(strategy_name(s));
    settings["strategies"] = names;
    prov.config_hash = hex_digest(settings.dump());
  }

  if (options.output) write_file_atomic(*options.output, simulation_report_to_json(report));
  return report;
}

std::string simulation_report_to_json(const SimulationReport& report) {
  ojson j;
  j["schema"] = kReportSchema;
  j["kind"] = "simulate";
  j["provenance"] = provenance_json(report.provenance);
  ojson config = synthetic_config_json(report.config);
  config.erase("seed");
  j["config"] = std::move(config);
  ojson baseline;
  baseline["mean_ece"] = report.mean_variant_ece;
  baseline["mean_accuracy"] = report.mean_variant_accuracy;
  baseline["ece_per_seed"] = report.variant_ece_per_seed;
  baseline["accuracy_per_seed"] = report.variant_accuracy_per_seed;
  j["single_variant"] = std::move(baseline);
  ojson points = ojson::array();
  for (const auto& p : report.points) {
    ojson entry;
    entry["strategy"] = strategy_name(p.strategy);
    entry["k"] = p.k;
    entry["mean_ece"] = p.mean_ece;
    entry["mean_accuracy"] = p.mean_accuracy;
    entry["relative_ece_reduction"] =
        report.mean_variant_ece > 0.0 ? 1.0 - p.mean_ece / report.mean_variant_ece : 0.0;
    entry["ece_per_seed"] = p.ece_per_seed;
    entry["accuracy_per_seed"] = p.accuracy_per_seed;
    points.push_back(std::move(entry));
  }
  j["sweep"] = std::move(points);
  return j.dump(2) + "\n";
}

// ------------------------------------------------------ synthetic task files

SyntheticTaskFiles write_synthetic_task(const SyntheticModel& model,
                                        const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  SyntheticTaskFiles files{directory / "task.json", directory / "dataset.jsonl",
                           directory / "templates.txt"};

  std::vector<std::string> lines;
  lines.reserve(model.examples().size());
  for (const auto& e : model.examples()) {
    ojson row;
    row["id"] = e.id;
    row["text"] = e.fields.at("TEXT");
    row["label"] = *e.gold_label;
    lines.push_back(row.dump());
  }
  write_file_atomic(files.dataset, join_lines(lines));

  write_file_atomic(files.templates,
                    "placeholders: TEXT\n"
                    "@@ synthetic-0\nInput: <TEXT>\nLabel: <LABEL>\n"
                    "@@ synthetic-1\n<TEXT>\nThe label is <LABEL>\n"
                    "@@ synthetic-2\nClassify: <TEXT>\n<LABEL>\n"
                    "@@ synthetic-3\n### Input: <TEXT>\n### Response: <LABEL>\n");

  ojson task;
  task["task_id"] = model.labels().task_id();
  task["labels"] = model.labels().labels();
  task["templates"] = {files.templates.filename().string()};
  task["fields"] = {{"TEXT", "text"}};
  task["demos"] = 0;
  write_file_atomic(files.task_config, task.dump(2) + "\n");
  return files;
}

}  // namespace calens
