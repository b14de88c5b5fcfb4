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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ordrec/graph.hpp"
#include "ordrec/sparse.hpp"

namespace ordrec {

/// Per-order matrices: entry (u, v) of matrices[l - 1] is nonzero exactly
/// when the shortest u-v path has length l, and holds the number of
/// length-l walks between them (or 1 in binary mode).
struct DecoupledStack {
  std::vector<SparseMatrix> matrices;
  std::optional<std::size_t> cap;
  bool binary_values = false;

  int order_count() const { return static_cast<int>(matrices.size()); }
  const SparseMatrix& order(int l) const { return matrices.at(static_cast<std::size_t>(l - 1)); }
};

struct DecoupleOptions {
  /// Per-row top-k retention for orders >= 2. Breaks exactness.
  std::optional<std::size_t> cap;
  bool binary_values = false;
  /// Upper bound on the estimated bytes of one walk-count power.
  std::size_t memory_budget_bytes = std::size_t{8} << 30;
};

inline constexpr int kMaxOrder = 6;

DecoupledStack decouple(const InteractionGraph& g, int order_count, const DecoupleOptions& options = {});

struct DecouplingReport {
  bool passed = true;
  std::size_t entries_checked = 0;
  std::string counterexample;  // first mismatch, empty when passed
};

/// Independent check against BFS distances and walk counts from repeated
/// adjacency application, source by source.
DecouplingReport verify_decoupling(const InteractionGraph& g, const DecoupledStack& stack);

/// FNV-1a over the adjacency structure; keys the on-disk cache.
std::uint64_t graph_content_hash(const InteractionGraph& g);

// One file per order: fixed header (magic, n, nnz, order, cap, binary flag,
// graph hash) followed by little-endian offset, column and value arrays.
void save_order_cache(const std::filesystem::path& file, const SparseMatrix& m, int order,
                      std::optional<std::size_t> cap, bool binary_values, std::uint64_t graph_hash);
/// nullopt when the file is missing or was produced for a different graph
/// or settings.
std::optional<SparseMatrix> load_order_cache(const std::filesystem::path& file, int order,
                                             std::optional<std::size_t> cap, bool binary_values,
                                             std::uint64_t graph_hash);

/// decouple() backed by a cache directory; recomputes and rewrites stale entries.
DecoupledStack decouple_cached(const InteractionGraph& g, int order_count,
                               const DecoupleOptions& options, const std::filesystem::path& cache_dir);

/// Reads the cache directory from ORDREC_CACHE_DIR, if set.
std::optional<std::filesystem::path> cache_dir_from_env();

}  // namespace ordrec
