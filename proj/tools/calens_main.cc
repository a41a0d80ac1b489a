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

// calens: build prompt variants, score them, ensemble, calibrate and
// evaluate per-variant classifier distributions.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "calens/error.h"
#include "calens/http_backend.h"
#include "calens/pipeline.h"
#include "calens/replay.h"
#include "calens/synthetic.h"

namespace {

using namespace calens;

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const auto& name : names) {
    if (name == "all") {
      out.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
      return out;
    }
    out.push_back(parse_strategy(name));
  }
  if (out.empty()) out.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  return out;
}

void add_synthetic_flags(CLI::App* cmd, SyntheticConfig& config) {
  cmd->add_option("--num-labels", config.num_labels, "Labels per example")->capture_default_str();
  cmd->add_option("--num-examples", config.num_examples, "Examples")->capture_default_str();
  cmd->add_option("--num-variants", config.num_variants, "Variants per example")
      ->capture_default_str();
  cmd->add_option("--temperature", config.temperature, "Softmax temperature (<1: overconfident)")
      ->capture_default_str();
  cmd->add_option("--noise", config.noise, "Per-variant logit noise stddev")
      ->capture_default_str();
  cmd->add_option("--concentration", config.concentration, "Dirichlet prior concentration")
      ->capture_default_str();
}

void print_metrics_row(const std::string& name, const MetricsReport& m) {
  std::printf("  %-28s ece=%.4f nll=%.4f ie=%.4f acc=%.4f micro_f1=%.4f macro_f1=%.4f\n",
              name.c_str(), m.ece, m.nll, m.ie, m.accuracy, m.micro_f1, m.macro_f1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-ensembling, Batch Calibration and calibration metrics for classifiers"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  // variants
  VariantsOptions variants;
  std::string variants_mode = "var-both";
  std::string variants_dataset;
  std::size_t variants_demos = 0;
  auto* variants_cmd = app.add_subcommand("variants", "Write ensemble component specs as JSONL");
  variants_cmd->add_option("--task-config", variants.task_config, "Task config JSON")->required();
  variants_cmd->add_option("--mode", variants_mode, "Variation mode")
      ->check(CLI::IsMember({"var-ic", "var-prompt", "var-both"}))
      ->capture_default_str();
  variants_cmd->add_option("--num-ic", variants.counts.n_ic, "var-ic component count")
      ->capture_default_str();
  variants_cmd->add_option("--per-template", variants.counts.per_template,
                           "var-both tuples per template")
      ->capture_default_str();
  auto* demos_opt = variants_cmd->add_option("--demos", variants_demos,
                                             "Demonstrations per prompt (default: task config)");
  variants_cmd->add_option("--seed", variants.seed, "Sampling seed")->capture_default_str();
  variants_cmd->add_option("--dataset", variants_dataset,
                           "Sample per query for every example of this dataset");
  variants_cmd->add_option("--output", variants.output, "Output JSONL")->required();

  // score
  ScoreOptions score;
  std::string backend_kind = "replay";
  std::string endpoint;
  std::string replay_source;
  SyntheticConfig score_synth;
  HttpOptions http;
  double http_timeout_secs = 30.0;
  auto* score_cmd = app.add_subcommand("score", "Score every (variant, query) with a backend");
  score_cmd->add_option("--task-config", score.task_config, "Task config JSON")->required();
  score_cmd->add_option("--dataset", score.dataset, "Dataset JSONL")->required();
  score_cmd->add_option("--variants", score.variants, "Variant spec JSONL")->required();
  score_cmd->add_option("--backend", backend_kind, "Scoring backend")
      ->check(CLI::IsMember({"replay", "http", "synthetic"}))
      ->capture_default_str();
  score_cmd->add_option("--endpoint", endpoint, "HTTP scoring endpoint base URL");
  score_cmd->add_option("--predictions", replay_source, "Replay backend source JSONL");
  score_cmd->add_option("--seed", score_synth.seed, "Synthetic backend seed")->capture_default_str();
  add_synthetic_flags(score_cmd, score_synth);
  score_cmd->add_option("--timeout", http_timeout_secs, "HTTP timeout in seconds")
      ->capture_default_str();
  score_cmd->add_option("--retries", http.retries, "HTTP retries on transport failure")
      ->capture_default_str();
  score_cmd->add_option("--max-in-flight", http.max_in_flight, "Concurrent HTTP requests")
      ->capture_default_str();
  score_cmd->add_option("--max-error-rate", score.max_error_rate,
                        "Tolerated fraction of failed keys")
      ->capture_default_str();
  score_cmd->add_option("--output", score.output, "Predictions JSONL (resumed if present)")
      ->required();

  // evaluate
  EvaluateOptions evaluate;
  std::vector<std::string> evaluate_strategies;
  std::string bc_order = "before";
  std::string bc_confidence = "softmax";
  std::string evaluate_output, reliability_csv, dump_predictions;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Metrics per variant and per strategy");
  evaluate_cmd->add_option("--task-config", evaluate.task_config, "Task config JSON")->required();
  evaluate_cmd->add_option("--predictions", evaluate.predictions, "Predictions JSONL")->required();
  evaluate_cmd->add_option("--dataset", evaluate.dataset, "Dataset JSONL with gold labels")
      ->required();
  evaluate_cmd->add_option("--strategy", evaluate_strategies, "max, mean, majority or all")
      ->delimiter(',')
      ->check(CLI::IsMember({"max", "mean", "majority", "all"}));
  evaluate_cmd->add_option("--bins", evaluate.bins, "ECE bins")->capture_default_str();
  evaluate_cmd->add_flag("--batch-calibrate", evaluate.batch_calibrate, "Apply Batch Calibration");
  evaluate_cmd->add_option("--bc-order", bc_order, "Calibrate before or after ensembling")
      ->check(CLI::IsMember({"before", "after"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--bc-confidence", bc_confidence, "softmax or raw")
      ->check(CLI::IsMember({"softmax", "raw"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--output", evaluate_output, "Report JSON");
  evaluate_cmd->add_option("--reliability-csv", reliability_csv,
                           "Reliability CSV base path (one file per configuration)");
  evaluate_cmd->add_option("--dump-predictions", dump_predictions,
                           "Write ensembled predictions JSONL");

  // simulate
  SimulateOptions simulate;
  std::vector<std::string> simulate_strategies;
  std::string simulate_output;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Component-count sweep on the synthetic classifier");
  add_synthetic_flags(simulate_cmd, simulate.config);
  simulate_cmd->add_option("--seed,--seeds", simulate.seeds, "Seeds (repeat or comma-separate)")
      ->delimiter(',');
  simulate_cmd->add_option("--k-sweep", simulate.k_sweep, "Component counts to ensemble")
      ->delimiter(',');
  simulate_cmd->add_option("--strategy", simulate_strategies, "max, mean, majority or all")
      ->delimiter(',')
      ->check(CLI::IsMember({"max", "mean", "majority", "all"}));
  simulate_cmd->add_option("--bins", simulate.bins, "ECE bins")->capture_default_str();
  simulate_cmd->add_option("--output", simulate_output, "Sweep report JSON");

  // synth-task
  SyntheticConfig task_synth;
  std::string task_dir;
  auto* synth_cmd = app.add_subcommand(
      "synth-task", "Write task config, dataset and templates for the synthetic backend");
  add_synthetic_flags(synth_cmd, task_synth);
  synth_cmd->add_option("--seed", task_synth.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--output", task_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*variants_cmd) {
      variants.mode = parse_variation_mode(variants_mode);
      if (*demos_opt) variants.demos = variants_demos;
      if (!variants_dataset.empty()) variants.dataset = variants_dataset;
      const auto specs = cmd_variants(variants);
      std::fprintf(stderr, "wrote %zu variant specs to %s\n", specs.size(),
                   variants.output.string().c_str());
    } else if (*score_cmd) {
      std::unique_ptr<ScoringBackend> backend;
      if (backend_kind == "http") {
        if (endpoint.empty()) raise(ErrorCode::kInvalidConfig, "--backend http needs --endpoint");
        http.endpoint = endpoint;
        http.timeout = std::chrono::milliseconds(static_cast<long long>(http_timeout_secs * 1000));
        backend = std::make_unique<HttpBackend>(HttpOptions::with_env_overrides(http));
      } else if (backend_kind == "synthetic") {
        backend = std::make_unique<SyntheticModel>(score_synth);
      } else {
        if (replay_source.empty()) {
          raise(ErrorCode::kInvalidConfig, "--backend replay needs --predictions");
        }
        const auto config = TaskConfig::load(score.task_config);
        backend = std::make_unique<ReplayBackend>(ReplayBackend::load(replay_source, config.labels));
      }
      const auto summary = cmd_score(score, *backend);
      for (const auto& [key, message] : summary.errors) {
        std::fprintf(stderr, "error %s: %s\n", key.c_str(), message.c_str());
      }
      if (const auto* h = dynamic_cast<const HttpBackend*>(backend.get())) {
        if (h->renormalized_count() > 0) {
          std::fprintf(stderr, "renormalized %zu responses over the candidate labels\n",
                       h->renormalized_count());
        }
      }
      std::fprintf(stderr, "requested %zu, already present %zu, scored %zu, failed %zu\n",
                   summary.requested, summary.skipped_existing, summary.scored,
                   summary.errors.size());
    } else if (*evaluate_cmd) {
      evaluate.strategies = parse_strategies(evaluate_strategies);
      evaluate.bc_order = bc_order == "after" ? BcOrder::kAfterEnsemble : BcOrder::kBeforeEnsemble;
      evaluate.bc_confidence = parse_bc_confidence(bc_confidence);
      if (!evaluate_output.empty()) evaluate.output = evaluate_output;
      if (!reliability_csv.empty()) evaluate.reliability_csv = reliability_csv;
      if (!dump_predictions.empty()) evaluate.dump_predictions = dump_predictions;
      const auto report = cmd_evaluate(evaluate);
      if (!evaluate.output) {
        std::cout << run_report_to_json(report);
      } else {
        std::printf("per variant:\n");
        for (const auto& r : report.per_variant) print_metrics_row(r.name, r.metrics);
        std::printf("ensembled:\n");
        for (const auto& r : report.ensembled) print_metrics_row(r.name, r.metrics);
      }
    } else if (*simulate_cmd) {
      simulate.strategies = parse_strategies(simulate_strategies);
      if (!simulate_output.empty()) simulate.output = simulate_output;
      const auto report = cmd_simulate(simulate);
      std::printf("single variant: ece=%.4f acc=%.4f\n", report.mean_variant_ece,
                  report.mean_variant_accuracy);
      for (const auto& p : report.points) {
        std::printf("  %-14s k=%-3zu ece=%.4f acc=%.4f\n",
                    std::string(strategy_name(p.strategy)).c_str(), p.k, p.mean_ece,
                    p.mean_accuracy);
      }
    } else if (*synth_cmd) {
      const SyntheticModel model(task_synth);
      const auto files = write_synthetic_task(model, task_dir);
      std::fprintf(stderr, "wrote %s, %s, %s\n", files.task_config.string().c_str(),
                   files.dataset.string().c_str(), files.templates.string().c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "calens: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "calens: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
