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

#include "ordrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ordrec/error.hpp"

namespace ordrec {
namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<ItemIndex> merged_sorted(const std::vector<ItemIndex>& a, const std::vector<ItemIndex>& b) {
  std::vector<ItemIndex> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::string to_string(Phase phase) { return phase == Phase::validation ? "validation" : "test"; }

Phase parse_phase(const std::string& text) {
  if (text == "validation") return Phase::validation;
  if (text == "test") return Phase::test;
  throw ValidationError("unknown phase '" + text + "'");
}

std::vector<ItemIndex> rank_topk(const DenseMatrix& pooled, std::size_t n_users, std::size_t user,
                                 std::size_t k, std::span<const ItemIndex> exclude) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (user >= n_users) throw ValidationError("user index out of range");
  const std::size_t n_items = pooled.rows() - n_users;
  const auto urow = pooled.row(user);
  std::vector<std::pair<double, ItemIndex>> candidates;
  candidates.reserve(n_items);
  auto ex = exclude.begin();
  for (std::size_t i = 0; i < n_items; ++i) {
    const auto item = static_cast<ItemIndex>(i);
    while (ex != exclude.end() && *ex < item) ++ex;
    if (ex != exclude.end() && *ex == item) continue;
    candidates.emplace_back(dot(urow, pooled.row(n_users + i)), item);
  }
  if (candidates.empty()) throw ValidationError("every item is excluded for user " + std::to_string(user));
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::vector<ItemIndex> ranked(take);
  for (std::size_t p = 0; p < take; ++p) ranked[p] = candidates[p].second;
  return ranked;
}

Metrics metrics_at_k(std::span<const ItemIndex> ranked, std::span<const ItemIndex> relevant, std::size_t k) {
  if (relevant.empty()) throw ValidationError("metrics need a non-empty relevant set");
  if (k == 0) throw ValidationError("k must be at least 1");
  const std::size_t depth = std::min(k, ranked.size());
  std::size_t hits = 0;
  double dcg = 0.0;
  for (std::size_t p = 0; p < depth; ++p) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked[p])) {
      ++hits;
      dcg += 1.0 / std::log2(static_cast<double>(p) + 2.0);
    }
  }
  double idcg = 0.0;
  for (std::size_t p = 0; p < std::min(k, relevant.size()); ++p)
    idcg += 1.0 / std::log2(static_cast<double>(p) + 2.0);
  return {static_cast<double>(hits) / static_cast<double>(relevant.size()), dcg / idcg,
          static_cast<double>(hits) / static_cast<double>(k)};
}

EvalReport evaluate_embeddings(const DenseMatrix& pooled, const SplitDataset& split, std::size_t k,
                               Phase phase, bool keep_per_user) {
  const std::size_t n_users = split.train.n_users;
  if (pooled.rows() != n_users + split.train.n_items)
    throw ValidationError("embeddings have " + std::to_string(pooled.rows()) + " rows but the split has " +
                          std::to_string(n_users) + " users and " + std::to_string(split.train.n_items) +
                          " items");
  const auto train_items = split.train.items_by_user();
  const auto valid_items = split.validation.items_by_user();
  const auto& relevant = phase == Phase::validation ? valid_items : split.test.items_by_user();

  std::vector<UserIndex> users;
  for (std::size_t u = 0; u < n_users; ++u)
    if (!relevant[u].empty()) users.push_back(static_cast<UserIndex>(u));

  std::vector<Metrics> results(users.size());
  const auto count = static_cast<std::int64_t>(users.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto u = static_cast<std::size_t>(users[static_cast<std::size_t>(j)]);
    const auto exclude = phase == Phase::validation ? train_items[u] : merged_sorted(train_items[u], valid_items[u]);
    const auto ranked = rank_topk(pooled, n_users, u, k, exclude);
    results[static_cast<std::size_t>(j)] = metrics_at_k(ranked, relevant[u], k);
  }

  EvalReport report;
  report.k = k;
  report.n_users_evaluated = users.size();
  for (std::size_t j = 0; j < users.size(); ++j) {
    report.recall += results[j].recall;
    report.ndcg += results[j].ndcg;
    report.precision += results[j].precision;
    if (keep_per_user) report.per_user.push_back({users[j], results[j]});
  }
  if (!users.empty()) {
    const double n = static_cast<double>(users.size());
    report.recall /= n;
    report.ndcg /= n;
    report.precision /= n;
  }
  return report;
}

EvalReport evaluate(const Checkpoint& checkpoint, const ModelContext& ctx, const SplitDataset& split,
                    std::size_t k, Phase phase, bool keep_per_user) {
  const auto& h = checkpoint.header;
  if (h.n_users != split.train.n_users || h.n_items != split.train.n_items)
    throw ValidationError("checkpoint is " + std::to_string(h.n_users) + " users x " +
                          std::to_string(h.n_items) + " items but the split is " +
                          std::to_string(split.train.n_users) + " x " + std::to_string(split.train.n_items));
  ForwardOptions options;
  options.mode = h.mode;
  options.tau = h.tau;
  options.hard = h.hard;
  options.hidden = h.hidden;
  const ForwardState state = forward(checkpoint.embeddings, ctx, options);
  return evaluate_embeddings(state.pooled, split, k, phase, keep_per_user);
}

std::string report_json(const EvalReport& report, const std::string& dataset, const std::string& mode,
                        std::uint64_t seed, Phase phase) {
  nlohmann::ordered_json j;
  j["dataset"] = dataset;
  j["mode"] = mode;
  j["seed"] = seed;
  j["phase"] = to_string(phase);
  j["k"] = report.k;
  j["recall"] = report.recall;
  j["ndcg"] = report.ndcg;
  j["precision"] = report.precision;
  j["n_users_evaluated"] = report.n_users_evaluated;
  if (!report.per_user.empty()) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& u : report.per_user)
      rows.push_back({{"user", u.user},
                      {"recall", u.metrics.recall},
                      {"ndcg", u.metrics.ndcg},
                      {"precision", u.metrics.precision}});
    j["per_user"] = std::move(rows);
  }
  return j.dump(2) + "\n";
}

std::string report_csv(const EvalReport& report, const std::string& dataset, const std::string& mode,
                       std::uint64_t seed) {
  return "dataset,mode,seed,k,recall,ndcg,precision\n" + dataset + "," + mode + "," + std::to_string(seed) +
         "," + std::to_string(report.k) + "," + fixed(report.recall) + "," + fixed(report.ndcg) + "," +
         fixed(report.precision) + "\n";
}

}  // namespace ordrec
