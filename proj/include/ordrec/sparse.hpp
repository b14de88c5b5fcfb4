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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ordrec/dense.hpp"

namespace ordrec {

using NodeIndex = std::int32_t;
using EntryOffset = std::int64_t;

struct Triplet {
  NodeIndex row;
  NodeIndex col;
  double value;
};

/// Compressed sparse row structure of a square n x n matrix. Shared between
/// matrices that differ only in their values (masked or normalized copies).
struct SparsityPattern {
  std::size_t n = 0;
  std::vector<EntryOffset> row_offsets;  // size n + 1
  std::vector<NodeIndex> col_indices;    // sorted and unique within each row
};

/// Square CSR matrix with 64-bit real values.
///
/// Columns are sorted and unique within each row. Matrices built from
/// triplets carry no explicit zeros; a matrix derived with with_values()
/// keeps the pattern of its source and may hold zeros (e.g. a masked edge).
class SparseMatrix {
 public:
  SparseMatrix();

  /// Validates sizes, ranges and per-row column ordering.
  static SparseMatrix from_csr(std::size_t n, std::vector<EntryOffset> row_offsets,
                               std::vector<NodeIndex> col_indices,
                               std::vector<double> values);
  /// Duplicate (row, col) entries are summed; resulting zeros are dropped.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const DenseMatrix& dense);

  SparseMatrix with_values(std::vector<double> values) const;

  std::size_t n() const { return pattern_->n; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const EntryOffset> row_offsets() const { return pattern_->row_offsets; }
  std::span<const NodeIndex> col_indices() const { return pattern_->col_indices; }
  std::span<const double> values() const { return values_; }

  EntryOffset row_begin(std::size_t r) const { return pattern_->row_offsets[r]; }
  EntryOffset row_end(std::size_t r) const { return pattern_->row_offsets[r + 1]; }
  std::size_t row_nnz(std::size_t r) const {
    return static_cast<std::size_t>(row_end(r) - row_begin(r));
  }

  std::optional<EntryOffset> find(std::size_t row, std::size_t col) const;
  double value_at(std::size_t row, std::size_t col) const;

  /// Pattern and values mirror each other exactly.
  bool is_symmetric() const;
  bool same_pattern(const SparseMatrix& other) const;
  std::shared_ptr<const SparsityPattern> pattern() const { return pattern_; }

  SparseMatrix transpose() const;
  DenseMatrix to_dense() const;

  /// Rows index of every stored entry, aligned with values().
  std::vector<NodeIndex> entry_rows() const;
  /// Position of the mirrored entry (col, row) for every stored entry;
  /// requires a structurally symmetric pattern.
  std::vector<EntryOffset> mirror_positions() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values)
      : pattern_(std::move(pattern)), values_(std::move(values)) {}

  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

}  // namespace ordrec
