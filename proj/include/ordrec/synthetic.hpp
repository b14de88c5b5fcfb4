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

#include <cstdint>

#include "ordrec/data.hpp"

namespace ordrec {

// Generators for tests, benchmarks and the scaling check. Every user and
// item index is interned up front ("u<k>", "i<k>"), so isolated nodes still
// count toward n_users and n_items.

/// Each (user, item) pair present independently with probability `density`.
/// At least one pair is always present.
InteractionSet random_bipartite(std::size_t n_users, std::size_t n_items, double density, std::uint64_t seed);

/// `blocks` identical copies of one random block_users x block_items graph
/// laid out on disjoint node ranges, padded with isolated nodes up to the
/// given totals.
InteractionSet block_union(std::size_t n_users, std::size_t n_items, std::size_t blocks, std::size_t block_users,
                           std::size_t block_items, double block_density, std::uint64_t seed);

/// Users and items split round-robin into communities; each user draws
/// `per_user` distinct items, from its own community with probability
/// `affinity` and uniformly otherwise.
InteractionSet planted_communities(std::size_t n_users, std::size_t n_items, std::size_t communities,
                                   std::size_t per_user, double affinity, std::uint64_t seed);

}  // namespace ordrec
