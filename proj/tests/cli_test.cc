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

// Runs the calens executable as a subprocess and checks files and exit codes.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "calens/io.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace calens {
namespace {

namespace fs = std::filesystem;
using ::calens::testing::TempDir;

const fs::path kToy = fs::path(CALENS_DATA_DIR) / "examples" / "sst5_toy";

// Returns the exit status; stdout and stderr go to files in `dir`.
int run(const TempDir& dir, const std::string& args) {
  const std::string cmd = std::string(CALENS_BIN) + " " + args + " >" +
                          (dir / "stdout").string() + " 2>" + (dir / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

TEST(Cli, HelpAndUsageErrors) {
  TempDir dir("cli-usage");
  EXPECT_EQ(run(dir, "--help"), 0);
  EXPECT_NE(read_file(dir / "stdout").find("evaluate"), std::string::npos);
  EXPECT_EQ(run(dir, ""), 2);
  EXPECT_EQ(run(dir, "evaluate --bogus"), 2);
  EXPECT_EQ(run(dir, "evaluate --task-config x --predictions y --dataset z --strategy median"), 2);
  EXPECT_EQ(run(dir, "variants --task-config " + q(dir / "missing.json") + " --output " +
                         q(dir / "v.jsonl")),
            2);
  EXPECT_NE(read_file(dir / "stderr").find("IoError"), std::string::npos);
}

TEST(Cli, VariantsAreByteIdenticalAcrossRuns) {
  TempDir dir("cli-variants");
  const std::string base = "variants --task-config " + q(kToy / "task.json") + " --seed 5 ";
  for (const auto& [mode, expected] :
       std::vector<std::pair<std::string, std::size_t>>{{"var-ic", 20}, {"var-prompt", 4}, {"var-both", 20}}) {
    ASSERT_EQ(run(dir, base + "--mode " + mode + " --output " + q(dir / "a.jsonl")), 0);
    ASSERT_EQ(run(dir, base + "--mode " + mode + " --output " + q(dir / "b.jsonl")), 0);
    const auto a = read_file(dir / "a.jsonl");
    EXPECT_EQ(a, read_file(dir / "b.jsonl"));
    EXPECT_EQ(split_lines(a).size(), expected) << mode;
  }
  write_file_atomic(dir / "one.txt", "placeholders: SENTENCE\n@@ x\n<SENTENCE> <LABEL>\n");
  write_file_atomic(dir / "task.json",
                    R"({"task_id":"t","labels":["a","b"],"templates":["one.txt"],)"
                    R"("fields":{"SENTENCE":"s"},"demos":0})");
  EXPECT_EQ(run(dir, "variants --mode var-prompt --task-config " + q(dir / "task.json") +
                         " --output " + q(dir / "c.jsonl")),
            2);
  EXPECT_NE(read_file(dir / "stderr").find("InsufficientTemplates"), std::string::npos);
}

TEST(Cli, SyntheticScoreEvaluate) {
  TempDir dir("cli-synth");
  const std::string synth = " --num-examples 150 --num-variants 4 ";
  ASSERT_EQ(run(dir, "synth-task" + synth + "--output " + q(dir.path())), 0);
  ASSERT_EQ(run(dir, "variants --mode var-prompt --task-config " + q(dir / "task.json") +
                         " --output " + q(dir / "v.jsonl")),
            0);
  const std::string score = "score --backend synthetic" + synth + "--task-config " +
                            q(dir / "task.json") + " --dataset " + q(dir / "dataset.jsonl") +
                            " --variants " + q(dir / "v.jsonl") + " --output " +
                            q(dir / "p.jsonl");
  ASSERT_EQ(run(dir, score), 0);
  EXPECT_EQ(split_lines(read_file(dir / "p.jsonl")).size(), 600u);
  ASSERT_EQ(run(dir, score), 0);
  EXPECT_NE(read_file(dir / "stderr").find("already present 600"), std::string::npos);

  const std::string eval = "evaluate --task-config " + q(dir / "task.json") + " --dataset " +
                           q(dir / "dataset.jsonl") + " --predictions " + q(dir / "p.jsonl") +
                           " --strategy max,mean --bins 15 --batch-calibrate";
  ASSERT_EQ(run(dir, eval), 0);
  const auto printed = read_file(dir / "stdout");
  const auto report = nlohmann::json::parse(printed);
  EXPECT_EQ(report["ensembled"].size(), 2u);
  EXPECT_EQ(report["settings"]["bins"], 15);
  EXPECT_EQ(report["settings"]["batch_calibrated"], true);
  ASSERT_EQ(run(dir, eval + " --output " + q(dir / "r.json") + " --reliability-csv " +
                         q(dir / "rel.csv")),
            0);
  EXPECT_EQ(read_file(dir / "r.json"), printed);
  EXPECT_TRUE(fs::exists(dir / "rel.ensemble-mean_prob.csv"));
}

TEST(Cli, CoverageGapExitsFour) {
  TempDir dir("cli-gap");
  write_file_atomic(dir / "t.txt", "placeholders: TEXT\n@@ x\n<TEXT> <LABEL>\n");
  write_file_atomic(dir / "task.json",
                    R"({"task_id":"t","labels":["a","b"],"templates":["t.txt"],)"
                    R"("fields":{"TEXT":"text"},"demos":0})");
  write_file_atomic(dir / "d.jsonl", "{\"id\":\"1\",\"text\":\"x\",\"label\":\"a\"}\n"
                                     "{\"id\":\"2\",\"text\":\"y\",\"label\":\"b\"}\n");
  write_file_atomic(dir / "p.jsonl",
                    "{\"example_id\":\"1\",\"variant_id\":\"v0\",\"probs\":{\"a\":0.6,\"b\":0.4}}\n"
                    "{\"example_id\":\"1\",\"variant_id\":\"v1\",\"probs\":{\"a\":0.6,\"b\":0.4}}\n"
                    "{\"example_id\":\"2\",\"variant_id\":\"v0\",\"probs\":{\"a\":0.6,\"b\":0.4}}\n");
  const std::string eval = "evaluate --task-config " + q(dir / "task.json") + " --dataset " +
                           q(dir / "d.jsonl") + " --predictions " + q(dir / "p.jsonl");
  EXPECT_EQ(run(dir, eval), 4);
  EXPECT_NE(read_file(dir / "stderr").find("(2, v1)"), std::string::npos)
      << read_file(dir / "stderr");
  write_file_atomic(dir / "p.jsonl",
                    "{\"example_id\":\"1\",\"variant_id\":\"v0\",\"probs\":{\"a\":0.6,\"b\":0.3}}\n");
  EXPECT_EQ(run(dir, eval), 2);
  EXPECT_NE(read_file(dir / "stderr").find("InvalidProbability"), std::string::npos);
}

TEST(Cli, UnreachableEndpointExitsThree) {
  TempDir dir("cli-http");
  write_file_atomic(dir / "v.jsonl",
                    R"({"variant_id":"tpl-00","template_id":"sst5-main","demo_ids":[]})" "\n");
  const std::string cmd = "score --backend http --endpoint http://127.0.0.1:9 --retries 0 "
                          "--task-config " + q(kToy / "task.json") + " --dataset " +
                          q(kToy / "test.jsonl") + " --variants " + q(dir / "v.jsonl") +
                          " --output " + q(dir / "p.jsonl");
  EXPECT_EQ(run(dir, cmd), 3);
  EXPECT_NE(read_file(dir / "stderr").find("BackendUnavailable"), std::string::npos);
}

TEST(Cli, SimulateWritesSweep) {
  TempDir dir("cli-sim");
  ASSERT_EQ(run(dir, "simulate --num-examples 200 --seed 0,1 --k-sweep 1,4 --strategy max "
                     "--output " + q(dir / "s.json")),
            0);
  const auto j = nlohmann::json::parse(read_file(dir / "s.json"));
  EXPECT_EQ(j["sweep"].size(), 2u);
  EXPECT_EQ(j["sweep"][0]["ece_per_seed"].size(), 2u);
  EXPECT_EQ(run(dir, "simulate --k-sweep 50"), 2);
}

}  // namespace
}  // namespace calens
