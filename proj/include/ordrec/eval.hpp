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

#include <span>
#include <string>
#include <vector>

#include "ordrec/checkpoint.hpp"
#include "ordrec/data.hpp"
#include "ordrec/dense.hpp"
#include "ordrec/model.hpp"

namespace ordrec {

struct Metrics {
  double recall = 0.0;
  double ndcg = 0.0;
  double precision = 0.0;
};

struct UserMetrics {
  UserIndex user;
  Metrics metrics;
};

struct EvalReport {
  std::size_t k = 20;
  double recall = 0.0;
  double ndcg = 0.0;
  double precision = 0.0;
  std::size_t n_users_evaluated = 0;
  std::vector<UserMetrics> per_user;
};

enum class Phase { validation, test };

std::string to_string(Phase phase);
Phase parse_phase(const std::string& text);

/// The k best-scoring items not in `exclude` (sorted ascending), ties broken
/// by the smaller item index.
std::vector<ItemIndex> rank_topk(const DenseMatrix& pooled, std::size_t n_users, std::size_t user,
                                 std::size_t k, std::span<const ItemIndex> exclude);

/// Recall, NDCG and precision of a ranking against a sorted relevant set.
Metrics metrics_at_k(std::span<const ItemIndex> ranked, std::span<const ItemIndex> relevant,
                     std::size_t k);

/// Full-ranking evaluation of pooled embeddings. Validation excludes train
/// items; test additionally excludes validation items. Users without items
/// in the phase are skipped.
EvalReport evaluate_embeddings(const DenseMatrix& pooled, const SplitDataset& split, std::size_t k,
                               Phase phase, bool keep_per_user = false);

/// Runs the deterministic forward pass of a checkpoint and evaluates it.
EvalReport evaluate(const Checkpoint& checkpoint, const ModelContext& ctx, const SplitDataset& split,
                    std::size_t k, Phase phase, bool keep_per_user = false);

std::string report_json(const EvalReport& report, const std::string& dataset, const std::string& mode,
                        std::uint64_t seed, Phase phase);
/// `dataset,mode,seed,k,recall,ndcg,precision` header plus one row.
std::string report_csv(const EvalReport& report, const std::string& dataset, const std::string& mode,
                       std::uint64_t seed);

}  // namespace ordrec
