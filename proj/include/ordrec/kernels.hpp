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

#include <vector>

#include "ordrec/dense.hpp"
#include "ordrec/sparse.hpp"

// Hot loops of the library. `kernels` holds the OpenMP versions used in
// production; `reference` holds plain serial loops kept for tests and the
// benchmark. Both visit each output row's terms in the same order, so their
// results are bit-identical regardless of thread count.
//
// Dimension checks live in the callers (graph.hpp); these assume valid input.

namespace ordrec::kernels {

/// y = a * x
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);
/// y += scale * a * x
void spmm_accumulate(const SparseMatrix& a, const DenseMatrix& x, DenseMatrix& y,
                     double scale = 1.0);
/// Gustavson product with exact accumulation; columns sorted per row.
SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b);
/// out[e] = dot(left.row(r), right.row(c)) for every stored entry e = (r, c).
std::vector<double> entry_dots(const SparseMatrix& pattern, const DenseMatrix& left,
                               const DenseMatrix& right);

}  // namespace ordrec::kernels

namespace ordrec::reference {

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);
void spmm_accumulate(const SparseMatrix& a, const DenseMatrix& x, DenseMatrix& y,
                     double scale = 1.0);
SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b);
std::vector<double> entry_dots(const SparseMatrix& pattern, const DenseMatrix& left,
                               const DenseMatrix& right);

}  // namespace ordrec::reference
