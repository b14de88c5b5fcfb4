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

#include "ordrec/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace ordrec {
namespace {

// Row-local Gustavson accumulator. Columns are collected in first-touch
// order and sorted before emission; values accumulate in A-row, B-row order.
class RowAccumulator {
 public:
  explicit RowAccumulator(std::size_t n) : values_(n, 0.0), marker_(n, -1) {}

  void gather(const SparseMatrix& a, const SparseMatrix& b, std::size_t row) {
    touched_.clear();
    const auto a_cols = a.col_indices();
    const auto a_vals = a.values();
    const auto b_cols = b.col_indices();
    const auto b_vals = b.values();
    const auto tag = static_cast<std::int64_t>(row);
    for (EntryOffset ea = a.row_begin(row); ea < a.row_end(row); ++ea) {
      const auto k = static_cast<std::size_t>(a_cols[ea]);
      const double av = a_vals[ea];
      for (EntryOffset eb = b.row_begin(k); eb < b.row_end(k); ++eb) {
        const auto j = static_cast<std::size_t>(b_cols[eb]);
        if (marker_[j] != tag) {
          marker_[j] = tag;
          values_[j] = 0.0;
          touched_.push_back(static_cast<NodeIndex>(j));
        }
        values_[j] += av * b_vals[eb];
      }
    }
    std::sort(touched_.begin(), touched_.end());
  }

  std::size_t count_nonzero() const {
    std::size_t c = 0;
    for (NodeIndex j : touched_) c += values_[static_cast<std::size_t>(j)] != 0.0;
    return c;
  }

  void emit(NodeIndex* cols, double* vals) const {
    std::size_t out = 0;
    for (NodeIndex j : touched_) {
      const double v = values_[static_cast<std::size_t>(j)];
      if (v == 0.0) continue;
      cols[out] = j;
      vals[out] = v;
      ++out;
    }
  }

 private:
  std::vector<double> values_;
  std::vector<std::int64_t> marker_;
  std::vector<NodeIndex> touched_;
};

inline void spmm_row(const SparseMatrix& a, const DenseMatrix& x, DenseMatrix& y,
                     std::size_t r, double scale) {
  const auto cols = a.col_indices();
  const auto vals = a.values();
  auto out = y.row(r);
  for (EntryOffset e = a.row_begin(r); e < a.row_end(r); ++e)
    axpy(scale * vals[e], x.row(static_cast<std::size_t>(cols[e])), out);
}

}  // namespace

namespace kernels {

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
  DenseMatrix y(a.n(), x.cols());
  spmm_accumulate(a, x, y, 1.0);
  return y;
}

void spmm_accumulate(const SparseMatrix& a, const DenseMatrix& x, DenseMatrix& y,
                     double scale) {
  const auto n = static_cast<std::int64_t>(a.n());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < n; ++r) spmm_row(a, x, y, static_cast<std::size_t>(r), scale);
}

SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b) {
  const std::size_t n = a.n();
  const auto rows = static_cast<std::int64_t>(n);
  // Rows are produced independently and stitched together afterwards, so each
  // row is gathered once.
  std::vector<std::vector<NodeIndex>> row_cols(n);
  std::vector<std::vector<double>> row_vals(n);
#pragma omp parallel
  {
    RowAccumulator acc(n);
#pragma omp for schedule(dynamic, 32)
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto row = static_cast<std::size_t>(r);
      acc.gather(a, b, row);
      row_cols[row].resize(acc.count_nonzero());
      row_vals[row].resize(row_cols[row].size());
      acc.emit(row_cols[row].data(), row_vals[row].data());
    }
  }
  std::vector<EntryOffset> offsets(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) offsets[r + 1] = offsets[r] + static_cast<EntryOffset>(row_cols[r].size());

  std::vector<NodeIndex> cols(static_cast<std::size_t>(offsets[n]));
  std::vector<double> vals(cols.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto row = static_cast<std::size_t>(r);
    const auto begin = static_cast<std::ptrdiff_t>(offsets[row]);
    std::copy(row_cols[row].begin(), row_cols[row].end(), cols.begin() + begin);
    std::copy(row_vals[row].begin(), row_vals[row].end(), vals.begin() + begin);
    std::vector<NodeIndex>().swap(row_cols[row]);
    std::vector<double>().swap(row_vals[row]);
  }
  return SparseMatrix::from_csr(n, std::move(offsets), std::move(cols), std::move(vals));
}

std::vector<double> entry_dots(const SparseMatrix& pattern, const DenseMatrix& left,
                               const DenseMatrix& right) {
  std::vector<double> out(pattern.nnz());
  const auto cols = pattern.col_indices();
  const auto n = static_cast<std::int64_t>(pattern.n());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < n; ++r) {
    const auto lrow = left.row(static_cast<std::size_t>(r));
    for (EntryOffset e = pattern.row_begin(static_cast<std::size_t>(r));
         e < pattern.row_end(static_cast<std::size_t>(r)); ++e)
      out[static_cast<std::size_t>(e)] = dot(lrow, right.row(static_cast<std::size_t>(cols[e])));
  }
  return out;
}

}  // namespace kernels

namespace reference {

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
  DenseMatrix y(a.n(), x.cols());
  spmm_accumulate(a, x, y, 1.0);
  return y;
}

void spmm_accumulate(const SparseMatrix& a, const DenseMatrix& x, DenseMatrix& y,
                     double scale) {
  for (std::size_t r = 0; r < a.n(); ++r) spmm_row(a, x, y, r, scale);
}

SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b) {
  const std::size_t n = a.n();
  RowAccumulator acc(n);
  std::vector<EntryOffset> offsets(n + 1, 0);
  std::vector<NodeIndex> cols;
  std::vector<double> vals;
  for (std::size_t r = 0; r < n; ++r) {
    acc.gather(a, b, r);
    const std::size_t count = acc.count_nonzero();
    const std::size_t begin = cols.size();
    cols.resize(begin + count);
    vals.resize(begin + count);
    acc.emit(cols.data() + begin, vals.data() + begin);
    offsets[r + 1] = static_cast<EntryOffset>(cols.size());
  }
  return SparseMatrix::from_csr(n, std::move(offsets), std::move(cols), std::move(vals));
}

std::vector<double> entry_dots(const SparseMatrix& pattern, const DenseMatrix& left,
                               const DenseMatrix& right) {
  std::vector<double> out(pattern.nnz());
  const auto cols = pattern.col_indices();
  for (std::size_t r = 0; r < pattern.n(); ++r)
    for (EntryOffset e = pattern.row_begin(r); e < pattern.row_end(r); ++e)
      out[static_cast<std::size_t>(e)] =
          dot(left.row(r), right.row(static_cast<std::size_t>(cols[e])));
  return out;
}

}  // namespace reference
}  // namespace ordrec
