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

#include "ordrec/graph.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>

#include "ordrec/error.hpp"
#include "ordrec/kernels.hpp"

namespace ordrec {

InteractionGraph build_bipartite(const InteractionSet& train) {
  if (train.pairs.empty()) throw ValidationError("training set is empty");
  if (auto problem = train.check_invariants(); !problem.empty())
    throw ValidationError("invalid training set: " + problem);

  InteractionGraph g;
  g.n_users = train.n_users;
  g.n_items = train.n_items;
  std::vector<Triplet> triplets;
  triplets.reserve(2 * train.pairs.size());
  for (const auto& p : train.pairs) {
    const NodeIndex item = g.item_node(p.item);
    triplets.push_back({p.user, item, 1.0});
    triplets.push_back({item, p.user, 1.0});
  }
  g.adjacency = SparseMatrix::from_triplets(g.n(), std::move(triplets));
  g.degrees.resize(g.n());
  for (std::size_t r = 0; r < g.n(); ++r) g.degrees[r] = static_cast<double>(g.adjacency.row_nnz(r));
  return g;
}

SparseMatrix spmatmul(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n() != b.n())
    throw ValidationError("spmatmul dimension mismatch: " + std::to_string(a.n()) + " vs " +
                          std::to_string(b.n()));
  return kernels::spgemm(a, b);
}

DenseMatrix spmv_dense(const SparseMatrix& a, const DenseMatrix& x) {
  if (a.n() != x.rows())
    throw ValidationError("spmv_dense dimension mismatch: matrix is " + std::to_string(a.n()) +
                          " but dense operand has " + std::to_string(x.rows()) + " rows");
  return kernels::spmm(a, x);
}

std::vector<std::int32_t> bfs_distances(const SparseMatrix& adjacency, std::size_t source) {
  if (source >= adjacency.n()) throw ValidationError("BFS source out of range");
  std::vector<std::int32_t> dist(adjacency.n(), kUnreachable);
  const auto cols = adjacency.col_indices();
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (EntryOffset e = adjacency.row_begin(u); e < adjacency.row_end(u); ++e) {
      const auto v = static_cast<std::size_t>(cols[e]);
      if (dist[v] != kUnreachable) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

std::vector<double> value_degrees(const SparseMatrix& a) {
  std::vector<double> deg(a.n(), 0.0);
  const auto vals = a.values();
  for (std::size_t r = 0; r < a.n(); ++r)
    for (EntryOffset e = a.row_begin(r); e < a.row_end(r); ++e) deg[r] += vals[e];
  return deg;
}

SparseMatrix symmetric_normalize(const SparseMatrix& a) {
  std::vector<double> inv_sqrt;
  return symmetric_normalize(a, inv_sqrt);
}

SparseMatrix symmetric_normalize(const SparseMatrix& a, std::vector<double>& inv_sqrt) {
  const auto vals = a.values();
  for (double v : vals)
    if (v < 0.0) throw ValidationError("symmetric_normalize requires nonnegative values");
  const std::vector<double> deg = value_degrees(a);
  inv_sqrt.assign(a.n(), 0.0);
  for (std::size_t r = 0; r < a.n(); ++r)
    if (deg[r] > 0.0) inv_sqrt[r] = 1.0 / std::sqrt(deg[r]);
  const auto cols = a.col_indices();
  std::vector<double> out(a.nnz());
  // sqrt(deg_r * deg_c) is symmetric in its operands, and a lone edge of
  // weight w comes out as exactly w / w = 1.
  for (std::size_t r = 0; r < a.n(); ++r)
    for (EntryOffset e = a.row_begin(r); e < a.row_end(r); ++e) {
      const double dc = deg[static_cast<std::size_t>(cols[e])];
      out[static_cast<std::size_t>(e)] = deg[r] > 0.0 && dc > 0.0 ? vals[e] / std::sqrt(deg[r] * dc) : 0.0;
    }
  return a.with_values(std::move(out));
}

void write_matrix_dump(const SparseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  out << a.n() << ' ' << a.nnz() << '\n' << std::setprecision(17);
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t r = 0; r < a.n(); ++r)
    for (EntryOffset e = a.row_begin(r); e < a.row_end(r); ++e)
      out << r << ' ' << cols[e] << ' ' << vals[e] << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

SparseMatrix read_matrix_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::size_t n = 0, nnz = 0;
  if (!(in >> n >> nnz)) throw ParseError("bad matrix dump header", 1);
  std::vector<Triplet> triplets(nnz);
  for (std::size_t k = 0; k < nnz; ++k)
    if (!(in >> triplets[k].row >> triplets[k].col >> triplets[k].value))
      throw ParseError("bad matrix dump entry", k + 2);
  return SparseMatrix::from_triplets(n, std::move(triplets));
}

}  // namespace ordrec
