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
#include <limits>
#include <vector>

#include "ordrec/data.hpp"
#include "ordrec/dense.hpp"
#include "ordrec/sparse.hpp"

namespace ordrec {

/// Symmetric user-item graph. Users occupy [0, n_users), items
/// [n_users, n_users + n_items).
struct InteractionGraph {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  SparseMatrix adjacency;
  std::vector<double> degrees;  // nonzeros per row

  std::size_t n() const { return n_users + n_items; }
  NodeIndex item_node(ItemIndex item) const {
    return static_cast<NodeIndex>(n_users) + item;
  }
};

InteractionGraph build_bipartite(const InteractionSet& train);

/// Exact sparse product a * b.
SparseMatrix spmatmul(const SparseMatrix& a, const SparseMatrix& b);

/// Exact product of a sparse matrix with a dense n x d matrix.
DenseMatrix spmv_dense(const SparseMatrix& a, const DenseMatrix& x);

inline constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

/// Unweighted hop distances from `source`; kUnreachable where disconnected.
std::vector<std::int32_t> bfs_distances(const SparseMatrix& adjacency, std::size_t source);
inline std::vector<std::int32_t> bfs_distances(const InteractionGraph& g, std::size_t source) {
  return bfs_distances(g.adjacency, source);
}

/// Degree vector as value row sums.
std::vector<double> value_degrees(const SparseMatrix& a);

/// D^-1/2 A D^-1/2 with value-sum degrees. Keeps the sparsity pattern;
/// rows of zero degree stay zero.
SparseMatrix symmetric_normalize(const SparseMatrix& a);
/// Same, also returning deg^-1/2 per row (0 for empty rows).
SparseMatrix symmetric_normalize(const SparseMatrix& a, std::vector<double>& inv_sqrt_degree);

// Debug dump: first line `n nnz`, then one `row col value` line per entry.
void write_matrix_dump(const SparseMatrix& a, const std::filesystem::path& path);
SparseMatrix read_matrix_dump(const std::filesystem::path& path);

}  // namespace ordrec
