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

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "ordrec/error.hpp"
#include "ordrec/eval.hpp"
#include "ordrec/rng.hpp"

using namespace ordrec;

namespace {

InteractionSet pairs_over(std::size_t n_users, std::size_t n_items, std::vector<Interaction> pairs) {
  InteractionSet s;
  s.n_users = n_users;
  s.n_items = n_items;
  for (std::size_t u = 0; u < n_users; ++u) s.user_ids.intern("u" + std::to_string(u));
  for (std::size_t i = 0; i < n_items; ++i) s.item_ids.intern("i" + std::to_string(i));
  s.pairs = std::move(pairs);
  return s;
}

SplitDataset make_split(std::size_t n_users, std::size_t n_items, std::vector<Interaction> train,
                        std::vector<Interaction> validation, std::vector<Interaction> test) {
  SplitDataset s;
  s.train = pairs_over(n_users, n_items, std::move(train));
  s.validation = pairs_over(n_users, n_items, std::move(validation));
  s.test = pairs_over(n_users, n_items, std::move(test));
  return s;
}

// One user row followed by item rows; with d = 1 an item's score is its value.
DenseMatrix scores_for_one_user(const std::vector<double>& item_scores) {
  DenseMatrix x(1 + item_scores.size(), 1);
  x(0, 0) = 1.0;
  for (std::size_t i = 0; i < item_scores.size(); ++i) x(1 + i, 0) = item_scores[i];
  return x;
}

TEST(RankTopk, OrdersByScoreAndBreaksTiesBySmallerIndex) {
  const auto x = scores_for_one_user({0.1, 0.9, 0.5, 0.9, 0.2});
  EXPECT_EQ(rank_topk(x, 1, 0, 3, {}), (std::vector<ItemIndex>{1, 3, 2}));
  const ItemIndex ex[] = {1, 2};
  EXPECT_EQ(rank_topk(x, 1, 0, 2, ex), (std::vector<ItemIndex>{3, 4}));
  EXPECT_EQ(rank_topk(x, 1, 0, 20, ex), (std::vector<ItemIndex>{3, 4, 0}));
  const auto tied = scores_for_one_user({0.0, 0.0, 0.0});
  EXPECT_EQ(rank_topk(tied, 1, 0, 2, {}), (std::vector<ItemIndex>{0, 1}));
}

TEST(RankTopk, Errors) {
  const auto x = scores_for_one_user({0.1, 0.2});
  const ItemIndex all[] = {0, 1};
  EXPECT_THROW(rank_topk(x, 1, 0, 5, all), ValidationError);
  EXPECT_THROW(rank_topk(x, 1, 0, 0, {}), ValidationError);
  EXPECT_THROW(rank_topk(x, 1, 1, 5, {}), ValidationError);
}

TEST(MetricsAtK, WorkedExample) {
  const ItemIndex relevant[] = {0, 1};
  const ItemIndex ranked[] = {0, 7, 8, 9};
  const auto m = metrics_at_k(ranked, relevant, 20);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_DOUBLE_EQ(m.precision, 0.05);
  EXPECT_NEAR(m.ndcg, 0.61315, 1e-5);
  EXPECT_DOUBLE_EQ(m.ndcg, 1.0 / (1.0 + 1.0 / std::log2(3.0)));
}

TEST(MetricsAtK, PerfectAndEmptyRankings) {
  const ItemIndex relevant[] = {2, 4, 6};
  const ItemIndex perfect[] = {6, 2, 4, 1};
  const auto m = metrics_at_k(perfect, relevant, 20);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.ndcg, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 3.0 / 20.0);
  const ItemIndex miss[] = {1, 3};
  const auto z = metrics_at_k(miss, relevant, 20);
  EXPECT_EQ(z.recall, 0.0);
  EXPECT_EQ(z.ndcg, 0.0);
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_THROW(metrics_at_k(miss, {}, 20), ValidationError);
}

std::vector<ItemIndex> shuffled_items(std::size_t n, SplitMix64& rng) {
  std::vector<ItemIndex> items(n);
  for (std::size_t i = 0; i < n; ++i) items[i] = static_cast<ItemIndex>(i);
  shuffle(std::span<ItemIndex>(items), rng);
  return items;
}

TEST(MetricsAtK, MatchesBruteForceOnRandomRankings) {
  for (std::uint64_t c = 0; c < 1000; ++c) {
    SplitMix64 rng(stream_key(11, {c}));
    const std::size_t n_items = 5 + rng.below(60);
    const std::size_t k = 1 + rng.below(30);
    const std::size_t n_rel = 1 + rng.below(n_items - 1);
    auto items = shuffled_items(n_items, rng);
    std::vector<ItemIndex> ranked(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(std::min(k, n_items)));
    shuffle(std::span<ItemIndex>(items), rng);
    std::vector<ItemIndex> relevant(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(n_rel));
    std::sort(relevant.begin(), relevant.end());
    const auto got = metrics_at_k(ranked, relevant, k);
    const auto want = oracle::brute_force_metrics(ranked, relevant, k);
    ASSERT_EQ(got.recall, want.recall) << "case " << c;
    ASSERT_EQ(got.ndcg, want.ndcg) << "case " << c;
    ASSERT_EQ(got.precision, want.precision) << "case " << c;
    EXPECT_DOUBLE_EQ(got.precision * static_cast<double>(k), got.recall * static_cast<double>(n_rel));
  }
}

TEST(MetricsAtK, PromotingARelevantItemNeverHurts) {
  int checked = 0;
  for (std::uint64_t c = 0; c < 200; ++c) {
    SplitMix64 rng(stream_key(21, {c}));
    const auto items = shuffled_items(30, rng);
    const std::vector<ItemIndex> ranked(items.begin(), items.begin() + 10);
    // Relevant items straddle the cutoff so some are unranked.
    const auto first = static_cast<std::ptrdiff_t>(rng.below(10));
    std::vector<ItemIndex> relevant(items.begin() + first, items.begin() + 12);
    std::sort(relevant.begin(), relevant.end());
    std::vector<ItemIndex> promoted{items[11]};
    promoted.insert(promoted.end(), ranked.begin(), ranked.end() - 1);
    const auto before = metrics_at_k(ranked, relevant, 10);
    const auto after = metrics_at_k(promoted, relevant, 10);
    EXPECT_GE(after.recall, before.recall);
    EXPECT_GE(after.ndcg, before.ndcg);
    EXPECT_GE(after.precision, before.precision);
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(EvaluateEmbeddings, SingleUserWhoseTestItemRanksFirst) {
  const auto split = make_split(1, 4, {{0, 0}}, {}, {{0, 2}});
  const auto x = scores_for_one_user({5.0, 0.1, 1.0, 0.3});
  const auto r = evaluate_embeddings(x, split, 20, Phase::test);
  EXPECT_EQ(r.n_users_evaluated, 1u);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.ndcg, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 0.05);
}

TEST(EvaluateEmbeddings, ExclusionsDependOnPhase) {
  // Item 1 is a validation positive with the top score among non-train items.
  const auto split = make_split(1, 4, {{0, 0}}, {{0, 1}}, {{0, 2}});
  const auto x = scores_for_one_user({9.0, 5.0, 1.0, 0.3});
  const auto test = evaluate_embeddings(x, split, 1, Phase::test);
  EXPECT_EQ(test.recall, 1.0);
  const auto valid = evaluate_embeddings(x, split, 1, Phase::validation);
  EXPECT_EQ(valid.recall, 1.0);
  // Without the validation exclusion the test item would be ranked second.
  const auto no_valid = make_split(1, 4, {{0, 0}}, {}, {{0, 2}, {0, 1}});
  EXPECT_EQ(evaluate_embeddings(x, no_valid, 1, Phase::test).recall, 0.5);
}

TEST(EvaluateEmbeddings, SkipsUsersWithoutPhaseItemsAndChecksShape) {
  const auto split = make_split(3, 4, {{0, 0}, {1, 1}, {2, 2}}, {}, {{0, 3}, {2, 3}});
  const auto x = oracle::random_dense(7, 3, 1);
  const auto r = evaluate_embeddings(x, split, 2, Phase::test, true);
  EXPECT_EQ(r.n_users_evaluated, 2u);
  ASSERT_EQ(r.per_user.size(), 2u);
  EXPECT_EQ(r.per_user[0].user, 0);
  EXPECT_EQ(r.per_user[1].user, 2);
  EXPECT_DOUBLE_EQ(r.recall, (r.per_user[0].metrics.recall + r.per_user[1].metrics.recall) / 2.0);
  for (const auto& u : r.per_user) {
    EXPECT_GE(u.metrics.ndcg, 0.0);
    EXPECT_LE(u.metrics.ndcg, 1.0);
  }
  EXPECT_THROW(evaluate_embeddings(oracle::random_dense(6, 3, 1), split, 2, Phase::test), ValidationError);
}

TEST(Reports, CsvAndJsonLayout) {
  EvalReport r;
  r.recall = 0.25;
  r.ndcg = 0.5;
  r.precision = 0.0125;
  r.n_users_evaluated = 4;
  EXPECT_EQ(report_csv(r, "toy", "full", 3),
            "dataset,mode,seed,k,recall,ndcg,precision\ntoy,full,3,20,0.250000,0.500000,0.012500\n");
  const auto j = nlohmann::json::parse(report_json(r, "toy", "full", 3, Phase::test));
  EXPECT_EQ(j.at("phase"), "test");
  EXPECT_EQ(j.at("k"), 20);
  EXPECT_EQ(j.at("recall"), 0.25);
  EXPECT_EQ(j.at("n_users_evaluated"), 4);
  EXPECT_FALSE(j.contains("per_user"));
  EXPECT_EQ(parse_phase("validation"), Phase::validation);
  EXPECT_THROW(parse_phase("train"), ValidationError);
}

}  // namespace
