// Copyright 2026 The ordrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ordrec/error.hpp"
#include "ordrec/pipeline.hpp"
#include "ordrec/synthetic.hpp"

using namespace ordrec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ordrec_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_dataset(const fs::path& dir) {
  const auto data = random_bipartite(30, 40, 0.15, 7);
  const auto path = dir / "interactions.tsv";
  std::ofstream out(path);
  for (const auto& p : data.pairs) out << data.user_ids.id(p.user) << '\t' << data.item_ids.id(p.item) << '\n';
  return path;
}

RunConfig small_config(const fs::path& dir) {
  RunConfig cfg;
  cfg.input = write_dataset(dir).string();
  cfg.train.d = 8;
  cfg.train.batch_size = 64;
  cfg.train.max_epochs = 2;
  cfg.train.learning_rate = 1e-2;
  return cfg;
}

TEST(Config, FormatParseRoundTrip) {
  RunConfig cfg;
  cfg.train.d = 32;
  cfg.train.cap = 5;
  cfg.train.mode = Mode::no_decouple;
  cfg.train.beta = 0.3;
  cfg.ratios = {0.8, 0.1, 0.1};
  cfg.seeds = {1, 2, 3};
  cfg.axis_values = {0.05, 0.2};
  cfg.phase = Phase::validation;
  const std::string text = format_config(cfg);
  const RunConfig back = parse_config(text);
  EXPECT_EQ(format_config(back), text);
  EXPECT_EQ(back.train.cap, std::optional<std::size_t>(5));
  EXPECT_EQ(back.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  for (const auto& key : config_keys()) EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
}

TEST(Config, CommentsOverridesAndErrors) {
  const auto cfg = parse_config("# comment\n\n  beta = 0.5  \nL=3\n");
  EXPECT_EQ(cfg.train.beta, 0.5);
  EXPECT_EQ(cfg.train.order_count, 3);
  EXPECT_EQ(cfg.k, 20u);
  EXPECT_THROW(parse_config("bogus = 1\n"), ValidationError);
  EXPECT_THROW(parse_config("beta 0.5\n"), ParseError);
  EXPECT_THROW(parse_config("d = -3\n"), ValidationError);
  EXPECT_THROW(parse_config("mode = lightgcn\n"), ValidationError);
  EXPECT_THROW(parse_config("cap = 0\n"), ValidationError);
  try {
    parse_config("beta = 0.5\nno equals sign\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Config, HashCoversModelSettingsButNotPaths) {
  RunConfig a;
  RunConfig b = a;
  b.outdir = "elsewhere";
  b.split_dir = "/tmp/x";
  b.checkpoint = "c.json";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.train.beta = 0.5;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Prepare, RefusesExistingOutputAndIsByteStable) {
  const auto dir = scratch("prepare");
  auto cfg = small_config(dir);
  cfg.noise_ratio = 0.2;
  cfg.outdir = (dir / "split").string();
  cmd_prepare(cfg);
  const std::string manifest = slurp(dir / "split" / "manifest.json");
  const std::string train = slurp(dir / "split" / "train.tsv");
  EXPECT_FALSE(manifest.empty());
  EXPECT_THROW(cmd_prepare(cfg), ValidationError);
  cfg.force = true;
  cmd_prepare(cfg);
  EXPECT_EQ(slurp(dir / "split" / "manifest.json"), manifest);
  EXPECT_EQ(slurp(dir / "split" / "train.tsv"), train);
  EXPECT_EQ(slurp(dir / "split" / "config.txt"), format_config(cfg));
}

TEST(Prepare, MissingInputIsAnIoError) {
  const auto dir = scratch("missing_input");
  RunConfig cfg;
  cfg.input = (dir / "absent.tsv").string();
  cfg.outdir = (dir / "out").string();
  EXPECT_THROW(cmd_prepare(cfg), IoError);
}

TEST(TrainEvaluate, EndToEndArtifactsAndRepeatableEvaluation) {
  const auto dir = scratch("train");
  auto cfg = small_config(dir);
  cfg.outdir = (dir / "split").string();
  cmd_prepare(cfg);
  cfg.split_dir = cfg.outdir;
  cfg.outdir = (dir / "run").string();
  const auto fit = cmd_train(cfg);
  EXPECT_EQ(fit.epochs_run, 2);
  for (const char* f : {"checkpoint.json", "checkpoint.bin", "train_log.csv", "config.txt"})
    EXPECT_TRUE(fs::exists(dir / "run" / f)) << f;
  EXPECT_EQ(load_checkpoint(dir / "run" / "checkpoint.json").header.config_hash, config_hash(cfg));

  cfg.checkpoint = (dir / "run" / "checkpoint.json").string();
  cfg.outdir = (dir / "eval").string();
  const auto r1 = cmd_evaluate(cfg);
  const std::string json1 = slurp(dir / "eval" / "report.json");
  const auto r2 = cmd_evaluate(cfg);
  EXPECT_EQ(r1.recall, r2.recall);
  EXPECT_EQ(slurp(dir / "eval" / "report.json"), json1);
  EXPECT_EQ(r1.k, 20u);
  EXPECT_GT(r1.n_users_evaluated, 0u);
}

TEST(TrainEvaluate, MissingCheckpointAndMismatchedSplit) {
  const auto dir = scratch("mismatch");
  auto cfg = small_config(dir);
  cfg.outdir = (dir / "split").string();
  cmd_prepare(cfg);
  cfg.split_dir = cfg.outdir;
  cfg.checkpoint = (dir / "nope.json").string();
  cfg.outdir = (dir / "eval").string();
  EXPECT_THROW(cmd_evaluate(cfg), IoError);

  Checkpoint c;
  c.header.n_users = 2;
  c.header.n_items = 3;
  c.header.d = 4;
  c.embeddings.x0 = DenseMatrix(5, 4);
  save_checkpoint(c, dir / "small.json");
  cfg.checkpoint = (dir / "small.json").string();
  try {
    cmd_evaluate(cfg);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("2 users x 3 items"), std::string::npos) << e.what();
  }
}

TEST(TrainEvaluate, MfModeTrainsWithoutOrders) {
  const auto dir = scratch("mf");
  auto cfg = small_config(dir);
  cfg.outdir = (dir / "split").string();
  cmd_prepare(cfg);
  cfg.split_dir = cfg.outdir;
  cfg.outdir = (dir / "run").string();
  cfg.train.mode = Mode::mf;
  cmd_train(cfg);
  EXPECT_EQ(load_checkpoint(dir / "run" / "checkpoint.json").header.order_count, 0);
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Sweep, RowsPerAxisAndSeed) {
  const auto dir = scratch("sweep");
  auto cfg = small_config(dir);
  cfg.train.max_epochs = 1;
  cfg.seeds = {1, 2};
  cfg.axis = "beta";
  cfg.outdir = (dir / "beta").string();
  const auto rows = cmd_sweep(cfg);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) EXPECT_EQ(r.status, "ok") << r.key;
  const std::string csv = slurp(dir / "beta" / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "axis_value,seed,recall,ndcg,precision,status");
  EXPECT_EQ(line_count(csv), 7u);

  cfg.axis = "layers";
  cfg.seeds = {1};
  cfg.outdir = (dir / "layers").string();
  EXPECT_EQ(cmd_sweep(cfg).size(), 2u);

  cfg.axis = "noise";
  cfg.axis_values = {};
  cfg.outdir = (dir / "noise").string();
  const auto noise = cmd_sweep(cfg);
  ASSERT_EQ(noise.size(), 5u);
  EXPECT_EQ(noise.front().key, "0");
  EXPECT_EQ(noise.back().key, "0.2");

  cfg.axis = "width";
  cfg.outdir = (dir / "width").string();
  EXPECT_THROW(cmd_sweep(cfg), ValidationError);
}

TEST(Sweep, FailuresAreRecordedPerRow) {
  const auto dir = scratch("sweep_fail");
  auto cfg = small_config(dir);
  cfg.train.max_epochs = 1;
  cfg.axis = "layers";
  cfg.axis_values = {2, 0};  // zero orders fails validation
  cfg.outdir = (dir / "out").string();
  const auto rows = cmd_sweep(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_EQ(rows[1].status.rfind("error: ", 0), 0u);
}

TEST(Ablate, ThreeModesPerSeed) {
  const auto dir = scratch("ablate");
  auto cfg = small_config(dir);
  cfg.train.max_epochs = 1;
  cfg.outdir = (dir / "out").string();
  const auto rows = cmd_ablate(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].key, "full");
  EXPECT_EQ(rows[1].key, "no_denoise");
  EXPECT_EQ(rows[2].key, "no_decouple");
  for (const auto& r : rows) EXPECT_EQ(r.status, "ok");
  EXPECT_TRUE(fs::exists(dir / "out" / "ablate.csv"));
}

}  // namespace
