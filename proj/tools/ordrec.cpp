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

#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ordrec/error.hpp"
#include "ordrec/pipeline.hpp"

namespace {

using ordrec::RunConfig;

int report_rows(const std::vector<ordrec::SweepRow>& rows) {
  int failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  if (failed > 0) std::cerr << failed << " of " << rows.size() << " runs failed\n";
  return failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordrec: order-decoupled denoising recommender"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool force = false;
  app.add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  app.add_flag("--force", force, "Overwrite an existing output directory");

  // Every config key doubles as a --key flag; flags win over the config file.
  std::map<std::string, std::string> overrides;
  for (const auto& key : ordrec::config_keys()) {
    const std::string def = ordrec::get_config_value(RunConfig{}, key);
    app.add_option_function<std::string>(
           "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, "default: " + def)
        ->type_name("VALUE");
  }

  auto* prepare = app.add_subcommand("prepare", "Load interactions, split 7:1:2, inject noise, write the split");
  auto* train = app.add_subcommand("train", "Train on a prepared split; write checkpoint and log");
  auto* evaluate = app.add_subcommand("evaluate", "Full-ranking evaluation of a checkpoint");
  auto* sweep = app.add_subcommand("sweep", "prepare, train and evaluate over a noise, beta or layers grid");
  auto* ablate = app.add_subcommand("ablate", "train and evaluate modes full, no_denoise and no_decouple");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = ordrec::load_config(config_path);
    for (const auto& [key, value] : overrides) ordrec::set_config_value(cfg, key, value);
    cfg.force = force;

    if (prepare->parsed()) {
      ordrec::cmd_prepare(cfg);
      std::cerr << "split written to " << cfg.outdir << "\n";
    } else if (train->parsed()) {
      const auto result = ordrec::cmd_train(cfg, &std::cerr);
      std::cerr << "best epoch " << result.best_epoch << " of " << result.epochs_run << "; checkpoint in "
                << cfg.outdir << "\n";
    } else if (evaluate->parsed()) {
      const auto report = ordrec::cmd_evaluate(cfg);
      std::cout << "recall@" << report.k << " " << report.recall << " ndcg@" << report.k << " " << report.ndcg
                << " precision@" << report.k << " " << report.precision << " users " << report.n_users_evaluated
                << "\n";
    } else if (sweep->parsed()) {
      return report_rows(ordrec::cmd_sweep(cfg, &std::cerr));
    } else if (ablate->parsed()) {
      return report_rows(ordrec::cmd_ablate(cfg, &std::cerr));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
