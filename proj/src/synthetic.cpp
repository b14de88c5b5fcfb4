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

#include "ordrec/synthetic.hpp"

#include <algorithm>
#include <string>

#include "ordrec/error.hpp"
#include "ordrec/rng.hpp"

namespace ordrec {
namespace {

InteractionSet empty_set(std::size_t n_users, std::size_t n_items) {
  if (n_users == 0 || n_items == 0) throw ValidationError("synthetic graphs need users and items");
  InteractionSet s;
  s.n_users = n_users;
  s.n_items = n_items;
  for (std::size_t u = 0; u < n_users; ++u) s.user_ids.intern("u" + std::to_string(u));
  for (std::size_t i = 0; i < n_items; ++i) s.item_ids.intern("i" + std::to_string(i));
  return s;
}

std::vector<Interaction> random_pairs(std::size_t n_users, std::size_t n_items, double density, SplitMix64& rng) {
  std::vector<Interaction> pairs;
  for (std::size_t u = 0; u < n_users; ++u)
    for (std::size_t i = 0; i < n_items; ++i)
      if (rng.uniform() < density) pairs.push_back({static_cast<UserIndex>(u), static_cast<ItemIndex>(i)});
  if (pairs.empty())
    pairs.push_back({static_cast<UserIndex>(rng.below(n_users)), static_cast<ItemIndex>(rng.below(n_items))});
  return pairs;
}

}  // namespace

InteractionSet random_bipartite(std::size_t n_users, std::size_t n_items, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw ValidationError("density must lie in [0, 1]");
  InteractionSet s = empty_set(n_users, n_items);
  SplitMix64 rng(stream_key(seed, {0xb1}));
  s.pairs = random_pairs(n_users, n_items, density, rng);
  return s;
}

InteractionSet block_union(std::size_t n_users, std::size_t n_items, std::size_t blocks, std::size_t block_users,
                           std::size_t block_items, double block_density, std::uint64_t seed) {
  if (blocks == 0 || blocks * block_users > n_users || blocks * block_items > n_items)
    throw ValidationError("blocks do not fit in the requested node counts");
  InteractionSet s = empty_set(n_users, n_items);
  SplitMix64 rng(stream_key(seed, {0xb2}));
  const auto block = random_pairs(block_users, block_items, block_density, rng);
  for (std::size_t b = 0; b < blocks; ++b)
    for (const auto& p : block)
      s.pairs.push_back({static_cast<UserIndex>(b * block_users + static_cast<std::size_t>(p.user)),
                         static_cast<ItemIndex>(b * block_items + static_cast<std::size_t>(p.item))});
  return s;
}

InteractionSet planted_communities(std::size_t n_users, std::size_t n_items, std::size_t communities,
                                   std::size_t per_user, double affinity, std::uint64_t seed) {
  if (communities == 0 || communities > n_items) throw ValidationError("community count out of range");
  if (per_user == 0 || per_user > n_items / communities)
    throw ValidationError("per_user must fit inside one community");
  InteractionSet s = empty_set(n_users, n_items);
  SplitMix64 rng(stream_key(seed, {0xb3}));
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::size_t c = u % communities;
    const std::size_t community_size = (n_items - c + communities - 1) / communities;
    std::vector<ItemIndex> chosen;
    while (chosen.size() < per_user) {
      std::size_t item = 0;
      if (rng.uniform() < affinity)
        item = c + communities * rng.below(community_size);
      else
        item = rng.below(n_items);
      const auto idx = static_cast<ItemIndex>(item);
      if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
    }
    std::sort(chosen.begin(), chosen.end());
    for (ItemIndex i : chosen) s.pairs.push_back({static_cast<UserIndex>(u), i});
  }
  return s;
}

}  // namespace ordrec
