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

#ifndef CALENS_PIPELINE_H_
#define CALENS_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calens/backend.h"
#include "calens/calibrate.h"
#include "calens/ensemble.h"
#include "calens/metrics.h"
#include "calens/synthetic.h"
#include "calens/task_config.h"
#include "calens/variation.h"

namespace calens {

inline constexpr int kReportSchema = 1;

std::string_view tool_version();

// Process exit codes used by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitCoverage = 4;

int exit_code_for(ErrorCode code);

struct Provenance {
  std::string tool_version;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::string backend;
  std::string prng;
  std::map<std::string, std::string> inputs;  // role -> content digest
};

// ---------------------------------------------------------------- variants

struct VariantsOptions {
  std::filesystem::path task_config;
  VariationMode mode = VariationMode::kVarBoth;
  VariantCounts counts;
  std::optional<std::size_t> demos;  // overrides the task config
  std::uint64_t seed = 0;
  // When set, specs are sampled per query (tagged with its example_id).
  std::optional<std::filesystem::path> dataset;
  std::filesystem::path output;
};

std::vector<VariantSpec> cmd_variants(const VariantsOptions& options);

// ------------------------------------------------------------------- score

struct ScoreOptions {
  std::filesystem::path task_config;
  std::filesystem::path dataset;
  std::filesystem::path variants;
  std::filesystem::path output;
  // Fraction of failed keys tolerated before the run fails.
  double max_error_rate = 0.0;
};

struct ScoreSummary {
  std::size_t requested = 0;
  std::size_t skipped_existing = 0;
  std::size_t scored = 0;
  std::vector<std::pair<std::string, std::string>> errors;  // key, message
};

// Renders every (variant, query) prompt, scores the keys missing from
// options.output, and rewrites it atomically with old and new lines. Throws
// the first backend error's code when the error rate exceeds the threshold;
// successful keys are written first so a rerun resumes.
ScoreSummary cmd_score(const ScoreOptions& options, const ScoringBackend& backend);

// ---------------------------------------------------------------- evaluate

enum class BcOrder { kBeforeEnsemble, kAfterEnsemble };

struct EvaluateOptions {
  std::filesystem::path task_config;
  std::filesystem::path predictions;
  std::filesystem::path dataset;
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  int bins = kDefaultBins;
  bool batch_calibrate = false;
  BcOrder bc_order = BcOrder::kBeforeEnsemble;
  BcConfidence bc_confidence = BcConfidence::kSoftmax;
  std::optional<std::filesystem::path> output;
  // Base path; one CSV per configuration, see reliability_csv_path().
  std::optional<std::filesystem::path> reliability_csv;
  // Ensembled predictions in predictions-JSONL form.
  std::optional<std::filesystem::path> dump_predictions;
};

struct NamedReport {
  std::string name;
  MetricsReport metrics;
};

struct RunReport {
  std::vector<NamedReport> per_variant;
  std::vector<NamedReport> ensembled;  // name = strategy name
  int bins = kDefaultBins;
  bool batch_calibrated = false;
  std::string bc_order;
  std::string bc_confidence;
  std::map<std::string, std::vector<double>> bias;  // variant or strategy -> log bias
  Provenance provenance;
};

// The metrics that deltas are reported for.
struct MetricDeltas {
  double ece = 0.0;
  double nll = 0.0;
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

struct ReportDeltas {
  MetricDeltas best_ensembled;  // best strategy per metric
  MetricDeltas best_variant;    // best single variant per metric
  MetricDeltas mean_variant;    // mean over single variants
  MetricDeltas vs_best_variant; // best_ensembled - best_variant
  MetricDeltas vs_mean_variant; // best_ensembled - mean_variant
};

// Recomputed from the contained reports; lower is best for ECE and NLL,
// higher for the performance metrics.
ReportDeltas compute_deltas(const RunReport& report);

std::string run_report_to_json(const RunReport& report);

// "<stem>.<config>.csv" next to base, or base with "{config}" substituted.
std::filesystem::path reliability_csv_path(const std::filesystem::path& base,
                                           const std::string& config);

// Throws kMissingPrediction (listing up to 20 keys) when the file does not
// cover every example x variant pair, kMissingGold when a dataset gold is
// absent.
RunReport cmd_evaluate(const EvaluateOptions& options);

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  SyntheticConfig config;
  std::vector<std::uint64_t> seeds{0};
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::vector<std::size_t> k_sweep{1, 4, 20};
  int bins = kDefaultBins;
  std::optional<std::filesystem::path> output;
};

struct SweepPoint {
  Strategy strategy = Strategy::kMaxProb;
  std::size_t k = 1;
  std::vector<double> ece_per_seed;
  std::vector<double> accuracy_per_seed;
  double mean_ece = 0.0;
  double mean_accuracy = 0.0;
};

struct SimulationReport {
  SyntheticConfig config;
  std::vector<std::uint64_t> seeds;
  // Mean over all K single variants, per seed.
  std::vector<double> variant_ece_per_seed;
  std::vector<double> variant_accuracy_per_seed;
  double mean_variant_ece = 0.0;
  double mean_variant_accuracy = 0.0;
  std::vector<SweepPoint> points;
  Provenance provenance;

  const SweepPoint& point(Strategy strategy, std::size_t k) const;
};

// For each k in the sweep, ensembles the first k variants of every example
// under each strategy, once per seed.
SimulationReport cmd_simulate(const SimulateOptions& options);

std::string simulation_report_to_json(const SimulationReport& report);

// ------------------------------------------------------ synthetic task files

struct SyntheticTaskFiles {
  std::filesystem::path task_config;
  std::filesystem::path dataset;
  std::filesystem::path templates;
};

// Writes a task config, a dataset with gold labels and a four-template pack
// for the synthetic model into `directory`, so the synthetic backend can be
// driven through cmd_variants / cmd_score / cmd_evaluate.
SyntheticTaskFiles write_synthetic_task(const SyntheticModel& model,
                                        const std::filesystem::path& directory);

}  // namespace calens

#endif  // CALENS_PIPELINE_H_
