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
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ordrec {

using UserIndex = std::int32_t;
using ItemIndex = std::int32_t;

struct Interaction {
  UserIndex user;
  ItemIndex item;
  friend bool operator==(const Interaction&, const Interaction&) = default;
  friend auto operator<=>(const Interaction&, const Interaction&) = default;
};

/// Bijection between original string IDs and dense 0-based indices.
class IdMap {
 public:
  /// Returns the index of `id`, assigning the next free index on first sight.
  std::int32_t intern(const std::string& id);
  std::int32_t at(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.contains(id); }
  const std::string& id(std::int32_t index) const { return ids_.at(static_cast<std::size_t>(index)); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  friend bool operator==(const IdMap& a, const IdMap& b) { return a.ids_ == b.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::int32_t> index_;
};

/// Implicit-feedback (user, item) pairs over a dense index space. Splits of
/// one dataset share n_users, n_items and the ID maps.
struct InteractionSet {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  std::vector<Interaction> pairs;
  IdMap user_ids;
  IdMap item_ids;

  /// Item lists per user, sorted ascending.
  std::vector<std::vector<ItemIndex>> items_by_user() const;
  /// Empty string when the invariants hold, otherwise a description of the first violation.
  std::string check_invariants() const;
};

struct SplitDataset {
  InteractionSet train;
  InteractionSet validation;
  InteractionSet test;
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{0.7, 0.1, 0.2};
  double noise_ratio = 0.0;
  std::vector<Interaction> noise_pairs;
};

struct BprTriple {
  UserIndex user;
  ItemIndex pos_item;
  ItemIndex neg_item;
  friend bool operator==(const BprTriple&, const BprTriple&) = default;
};

enum class InteractionFormat { tsv, csv };

struct LoadOptions {
  InteractionFormat format = InteractionFormat::tsv;
  /// Skip the first non-comment line (column names in some dataset exports).
  bool header = false;
};

InteractionSet load_interactions(const std::filesystem::path& path, LoadOptions options = {});
InteractionSet parse_interactions(std::string_view text, LoadOptions options = {});

SplitDataset split(const InteractionSet& data, std::array<double, 3> ratios, std::uint64_t seed);

SplitDataset inject_noise(const SplitDataset& split, double ratio, std::uint64_t seed);

/// One uniformly drawn non-interacted item per positive pair.
std::vector<BprTriple> sample_negatives(const InteractionSet& train,
                                        std::span<const Interaction> batch,
                                        std::uint64_t seed);

/// Negative sampler with the per-user lookup built once.
class NegativeSampler {
 public:
  explicit NegativeSampler(const InteractionSet& train);
  std::vector<BprTriple> sample(std::span<const Interaction> batch, std::uint64_t seed) const;
  bool interacted(UserIndex user, ItemIndex item) const;

 private:
  std::size_t n_items_;
  std::vector<std::vector<ItemIndex>> items_by_user_;
};

// On-disk split layout: train.tsv, validation.tsv, test.tsv with original IDs,
// users.tsv and items.tsv with `index<TAB>id`, and manifest.json.
void write_split(const SplitDataset& split, const std::filesystem::path& dir);
SplitDataset read_split(const std::filesystem::path& dir);

}  // namespace ordrec
