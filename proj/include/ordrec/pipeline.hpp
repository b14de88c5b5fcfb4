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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ordrec/eval.hpp"
#include "ordrec/model.hpp"
#include "ordrec/train.hpp"

namespace ordrec {

/// Everything a command needs. Serialized as flat `key = value` lines; the
/// same keys are accepted as `--key value` on the command line.
struct RunConfig {
  TrainConfig train;
  std::string dataset = "dataset";
  std::string input;
  std::string format = "tsv";
  bool header = false;
  std::array<double, 3> ratios{0.7, 0.1, 0.2};
  double noise_ratio = 0.0;
  std::string split_dir;
  std::string outdir = "out";
  std::string checkpoint;
  std::size_t k = 20;
  Phase phase = Phase::test;
  bool dump_matrices = false;
  double memory_budget_gib = 8.0;
  std::string axis = "noise";
  std::vector<double> axis_values;  // empty selects the axis defaults
  std::vector<std::uint64_t> seeds{1};
  bool force = false;  // command-line only
};

/// Keys in serialization order.
const std::vector<std::string>& config_keys();
/// Throws ValidationError on unknown keys or unparsable values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& cfg, const std::string& key);

std::string format_config(const RunConfig& cfg);
/// Applies `key = value` lines on top of `base`; `#` starts a comment line.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// 16 hex digits over the settings that shape a trained model (paths excluded).
std::string config_hash(const RunConfig& cfg);

/// Graph, decoupled stack (through the on-disk cache when ORDREC_CACHE_DIR is
/// set) and topology for the configured mode.
ModelContext build_context(const SplitDataset& split, const TrainConfig& train, double memory_budget_gib = 8.0);

void cmd_prepare(const RunConfig& cfg);
FitResult cmd_train(const RunConfig& cfg, std::ostream* progress = nullptr);
EvalReport cmd_evaluate(const RunConfig& cfg);

struct SweepRow {
  std::string key;  // axis value or mode name
  std::uint64_t seed = 0;
  Metrics metrics;
  std::string status = "ok";
};

std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, std::ostream* progress = nullptr);
std::vector<SweepRow> cmd_ablate(const RunConfig& cfg, std::ostream* progress = nullptr);
std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& key_column);

}  // namespace ordrec
