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

#include "ordrec/sparse.hpp"

#include <algorithm>
#include <string>

#include "ordrec/error.hpp"

namespace ordrec {

SparseMatrix::SparseMatrix()
    : pattern_(std::make_shared<SparsityPattern>(SparsityPattern{0, {0}, {}})) {}

SparseMatrix SparseMatrix::from_csr(std::size_t n, std::vector<EntryOffset> row_offsets,
                                    std::vector<NodeIndex> col_indices,
                                    std::vector<double> values) {
  if (row_offsets.size() != n + 1)
    throw ValidationError("row_offsets must have n + 1 entries");
  if (col_indices.size() != values.size())
    throw ValidationError("col_indices and values differ in length");
  if (row_offsets.front() != 0 ||
      row_offsets.back() != static_cast<EntryOffset>(col_indices.size()))
    throw ValidationError("row_offsets do not span the entry arrays");
  for (std::size_t r = 0; r < n; ++r) {
    if (row_offsets[r + 1] < row_offsets[r])
      throw ValidationError("row_offsets not monotone at row " + std::to_string(r));
    for (EntryOffset e = row_offsets[r]; e < row_offsets[r + 1]; ++e) {
      const NodeIndex c = col_indices[e];
      if (c < 0 || static_cast<std::size_t>(c) >= n)
        throw ValidationError("column index out of range in row " + std::to_string(r));
      if (e > row_offsets[r] && col_indices[e - 1] >= c)
        throw ValidationError("columns not sorted/unique in row " + std::to_string(r));
    }
  }
  auto pattern = std::make_shared<SparsityPattern>(
      SparsityPattern{n, std::move(row_offsets), std::move(col_indices)});
  return SparseMatrix(std::move(pattern), std::move(values));
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n ||
        static_cast<std::size_t>(t.col) >= n)
      throw ValidationError("triplet index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<EntryOffset> offsets(n + 1, 0);
  std::vector<NodeIndex> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t i = 0;
  while (i < triplets.size()) {
    const Triplet& t = triplets[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j)
      sum += triplets[j].value;
    if (sum != 0.0) {
      cols.push_back(t.col);
      vals.push_back(sum);
      ++offsets[static_cast<std::size_t>(t.row) + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) offsets[r + 1] += offsets[r];
  return from_csr(n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<EntryOffset> offsets(n + 1);
  std::vector<NodeIndex> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = static_cast<EntryOffset>(i);
  for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<NodeIndex>(i);
  return from_csr(n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  if (dense.rows() != dense.cols()) throw ValidationError("dense matrix is not square");
  std::vector<Triplet> triplets;
  for (std::size_t r = 0; r < dense.rows(); ++r)
    for (std::size_t c = 0; c < dense.cols(); ++c)
      if (dense(r, c) != 0.0)
        triplets.push_back({static_cast<NodeIndex>(r), static_cast<NodeIndex>(c), dense(r, c)});
  return from_triplets(dense.rows(), std::move(triplets));
}

SparseMatrix SparseMatrix::with_values(std::vector<double> values) const {
  if (values.size() != values_.size())
    throw ValidationError("value array does not match the sparsity pattern");
  return SparseMatrix(pattern_, std::move(values));
}

std::optional<EntryOffset> SparseMatrix::find(std::size_t row, std::size_t col) const {
  if (row >= n()) return std::nullopt;
  const auto& cols = pattern_->col_indices;
  auto first = cols.begin() + row_begin(row);
  auto last = cols.begin() + row_end(row);
  auto it = std::lower_bound(first, last, static_cast<NodeIndex>(col));
  if (it == last || *it != static_cast<NodeIndex>(col)) return std::nullopt;
  return static_cast<EntryOffset>(it - cols.begin());
}

double SparseMatrix::value_at(std::size_t row, std::size_t col) const {
  auto pos = find(row, col);
  return pos ? values_[static_cast<std::size_t>(*pos)] : 0.0;
}

bool SparseMatrix::is_symmetric() const {
  for (std::size_t r = 0; r < n(); ++r) {
    for (EntryOffset e = row_begin(r); e < row_end(r); ++e) {
      auto m = find(static_cast<std::size_t>(pattern_->col_indices[e]), r);
      if (!m || values_[static_cast<std::size_t>(*m)] != values_[static_cast<std::size_t>(e)])
        return false;
    }
  }
  return true;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  if (pattern_ == other.pattern_) return true;
  return pattern_->n == other.pattern_->n &&
         pattern_->row_offsets == other.pattern_->row_offsets &&
         pattern_->col_indices == other.pattern_->col_indices;
}

SparseMatrix SparseMatrix::transpose() const {
  const std::size_t size = n();
  std::vector<EntryOffset> offsets(size + 1, 0);
  for (NodeIndex c : pattern_->col_indices) ++offsets[static_cast<std::size_t>(c) + 1];
  for (std::size_t r = 0; r < size; ++r) offsets[r + 1] += offsets[r];
  std::vector<EntryOffset> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<NodeIndex> cols(nnz());
  std::vector<double> vals(nnz());
  for (std::size_t r = 0; r < size; ++r) {
    for (EntryOffset e = row_begin(r); e < row_end(r); ++e) {
      const auto c = static_cast<std::size_t>(pattern_->col_indices[e]);
      const auto dst = static_cast<std::size_t>(cursor[c]++);
      cols[dst] = static_cast<NodeIndex>(r);
      vals[dst] = values_[static_cast<std::size_t>(e)];
    }
  }
  return from_csr(size, std::move(offsets), std::move(cols), std::move(vals));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix dense(n(), n());
  for (std::size_t r = 0; r < n(); ++r)
    for (EntryOffset e = row_begin(r); e < row_end(r); ++e)
      dense(r, static_cast<std::size_t>(pattern_->col_indices[e])) =
          values_[static_cast<std::size_t>(e)];
  return dense;
}

std::vector<NodeIndex> SparseMatrix::entry_rows() const {
  std::vector<NodeIndex> rows(nnz());
  for (std::size_t r = 0; r < n(); ++r)
    for (EntryOffset e = row_begin(r); e < row_end(r); ++e)
      rows[static_cast<std::size_t>(e)] = static_cast<NodeIndex>(r);
  return rows;
}

std::vector<EntryOffset> SparseMatrix::mirror_positions() const {
  std::vector<EntryOffset> mirror(nnz());
  for (std::size_t r = 0; r < n(); ++r) {
    for (EntryOffset e = row_begin(r); e < row_end(r); ++e) {
      auto m = find(static_cast<std::size_t>(pattern_->col_indices[e]), r);
      if (!m) throw ValidationError("pattern is not structurally symmetric");
      mirror[static_cast<std::size_t>(e)] = *m;
    }
  }
  return mirror;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.same_pattern(b) && a.values_ == b.values_;
}

}  // namespace ordrec
