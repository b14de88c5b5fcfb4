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

#include "ordrec/decouple.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ordrec/error.hpp"
#include "ordrec/kernels.hpp"

namespace ordrec {
namespace {

static_assert(std::endian::native == std::endian::little,
              "cache files are written in host byte order");

// Sorted per-row column sets of every pair reached so far (including the
// diagonal).
using Reached = std::vector<std::vector<NodeIndex>>;

Reached initial_reached(const SparseMatrix& a) {
  Reached reached(a.n());
  const auto cols = a.col_indices();
  for (std::size_t r = 0; r < a.n(); ++r) {
    auto& row = reached[r];
    row.assign(cols.begin() + a.row_begin(r), cols.begin() + a.row_end(r));
    row.insert(std::lower_bound(row.begin(), row.end(), static_cast<NodeIndex>(r)),
               static_cast<NodeIndex>(r));
  }
  return reached;
}

std::size_t estimate_power_bytes(const SparseMatrix& a, const SparseMatrix& previous) {
  std::size_t entries = 0;
  const auto cols = a.col_indices();
  for (std::size_t r = 0; r < a.n(); ++r) {
    std::size_t row = 0;
    for (EntryOffset e = a.row_begin(r); e < a.row_end(r); ++e)
      row += previous.row_nnz(static_cast<std::size_t>(cols[e]));
    entries += std::min(row, a.n());
  }
  return entries * (sizeof(NodeIndex) + sizeof(double)) + (a.n() + 1) * sizeof(EntryOffset);
}

// Keeps entries of `power` not yet reached and merges power's support into
// `reached`.
SparseMatrix exact_distance_part(const SparseMatrix& power, Reached& reached) {
  const std::size_t n = power.n();
  const auto cols = power.col_indices();
  const auto vals = power.values();
  std::vector<EntryOffset> offsets(n + 1, 0);
  std::vector<NodeIndex> out_cols;
  std::vector<double> out_vals;
  std::vector<NodeIndex> merged;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& seen = reached[r];
    auto it = seen.begin();
    merged.clear();
    for (EntryOffset e = power.row_begin(r); e < power.row_end(r); ++e) {
      const NodeIndex c = cols[e];
      while (it != seen.end() && *it < c) merged.push_back(*it++);
      if (it != seen.end() && *it == c) {
        merged.push_back(*it++);
        continue;
      }
      merged.push_back(c);
      out_cols.push_back(c);
      out_vals.push_back(vals[e]);
    }
    merged.insert(merged.end(), it, seen.end());
    reached[r].swap(merged);
    offsets[r + 1] = static_cast<EntryOffset>(out_cols.size());
  }
  return SparseMatrix::from_csr(n, std::move(offsets), std::move(out_cols), std::move(out_vals));
}

SparseMatrix apply_row_cap(const SparseMatrix& m, std::size_t cap) {
  const auto cols = m.col_indices();
  const auto vals = m.values();
  const auto mirror = m.mirror_positions();
  std::vector<char> keep(m.nnz(), 0);
  std::vector<EntryOffset> order;
  for (std::size_t r = 0; r < m.n(); ++r) {
    order.resize(m.row_nnz(r));
    std::iota(order.begin(), order.end(), m.row_begin(r));
    const std::size_t take = std::min(cap, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](EntryOffset a, EntryOffset b) {
                        return vals[a] != vals[b] ? vals[a] > vals[b] : cols[a] < cols[b];
                      });
    for (std::size_t k = 0; k < take; ++k) keep[static_cast<std::size_t>(order[k])] = 1;
  }
  // Re-symmetrize: an entry survives if either direction survived.
  std::vector<Triplet> triplets;
  const auto rows = m.entry_rows();
  for (std::size_t e = 0; e < m.nnz(); ++e)
    if (keep[e] || keep[static_cast<std::size_t>(mirror[e])])
      triplets.push_back({rows[e], cols[e], vals[e]});
  return SparseMatrix::from_triplets(m.n(), std::move(triplets));
}

SparseMatrix binarized(const SparseMatrix& m) {
  return m.with_values(std::vector<double>(m.nnz(), 1.0));
}

std::string cache_file_name(int order, std::optional<std::size_t> cap, bool binary_values,
                            std::uint64_t hash) {
  std::ostringstream name;
  name << "order" << order << ".cap" << (cap ? std::to_string(*cap) : std::string("none")) << '.'
       << (binary_values ? "binary" : "walks") << '.' << std::hex << hash << ".bin";
  return name.str();
}

constexpr std::array<char, 8> kCacheMagic{'O', 'R', 'D', 'R', 'D', 'C', '0', '1'};

struct CacheHeader {
  std::array<char, 8> magic;
  std::uint64_t n;
  std::uint64_t nnz;
  std::uint64_t order;
  std::uint64_t cap;  // 0 = uncapped
  std::uint64_t binary_values;
  std::uint64_t graph_hash;
};

template <typename T>
void write_array(std::ofstream& out, std::span<const T> data) {
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size_bytes()));
}

template <typename T>
bool read_array(std::ifstream& in, std::vector<T>& data, std::size_t count) {
  data.resize(count);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * sizeof(T)));
  return static_cast<bool>(in);
}

}  // namespace

DecoupledStack decouple(const InteractionGraph& g, int order_count, const DecoupleOptions& options) {
  if (order_count < 1 || order_count > kMaxOrder)
    throw ValidationError("order count must lie in [1, " + std::to_string(kMaxOrder) + "], got " +
                          std::to_string(order_count));
  if (g.adjacency.nnz() == 0) throw ValidationError("cannot decouple an empty graph");

  const SparseMatrix& a = g.adjacency;
  DecoupledStack stack;
  stack.cap = options.cap;
  stack.binary_values = options.binary_values;
  stack.matrices.push_back(options.binary_values ? binarized(a) : a);

  Reached reached = initial_reached(a);
  SparseMatrix power = a;
  for (int l = 2; l <= order_count; ++l) {
    const std::size_t bytes = estimate_power_bytes(a, power);
    if (bytes > options.memory_budget_bytes)
      throw CapacityError("walk-count power of order " + std::to_string(l) + " needs an estimated " +
                          std::to_string(bytes) + " bytes, over the budget of " +
                          std::to_string(options.memory_budget_bytes));
    power = kernels::spgemm(a, power);
    SparseMatrix exact = exact_distance_part(power, reached);
    if (options.cap) exact = apply_row_cap(exact, *options.cap);
    if (options.binary_values) exact = binarized(exact);
    stack.matrices.push_back(std::move(exact));
  }
  return stack;
}

DecouplingReport verify_decoupling(const InteractionGraph& g, const DecoupledStack& stack) {
  DecouplingReport report;
  auto fail = [&report](std::string msg) {
    report.passed = false;
    report.counterexample = std::move(msg);
    return report;
  };
  if (stack.cap) return fail("stack was built with a per-row cap; exact check does not apply");
  const std::size_t n = g.n();
  const int orders = stack.order_count();
  for (const auto& m : stack.matrices)
    if (m.n() != n) return fail("matrix size differs from graph size");

  const SparseMatrix& a = g.adjacency;
  const auto a_cols = a.col_indices();
  std::vector<double> walks(n), next(n);
  for (std::size_t u = 0; u < n; ++u) {
    const auto dist = bfs_distances(a, u);
    std::fill(walks.begin(), walks.end(), 0.0);
    walks[u] = 1.0;
    for (int l = 1; l <= orders; ++l) {
      // next = A^T walks, i.e. walk counts of length l from u.
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        if (walks[k] == 0.0) continue;
        for (EntryOffset e = a.row_begin(k); e < a.row_end(k); ++e)
          next[static_cast<std::size_t>(a_cols[e])] += walks[k];
      }
      walks.swap(next);

      const SparseMatrix& m = stack.order(l);
      const auto cols = m.col_indices();
      const auto vals = m.values();
      EntryOffset e = m.row_begin(u);
      for (std::size_t v = 0; v < n; ++v) {
        const bool expected = dist[v] == l;
        const bool stored = e < m.row_end(u) && static_cast<std::size_t>(cols[e]) == v;
        const auto where = [&] {
          return "order " + std::to_string(l) + ", entry (" + std::to_string(u) + ", " + std::to_string(v) + ")";
        };
        if (expected != stored)
          return fail(where() + (stored ? ": stored but shortest distance is " +
                                            (dist[v] == kUnreachable ? std::string("infinite")
                                                                     : std::to_string(dist[v]))
                                      : ": missing although shortest distance is " +
                                            std::to_string(l)));
        if (stored) {
          const double want = stack.binary_values ? 1.0 : walks[v];
          if (vals[e] != want)
            return fail(where() + ": value " + std::to_string(vals[e]) + " but walk count is " +
                        std::to_string(want));
          ++e;
          ++report.entries_checked;
        }
      }
    }
  }
  return report;
}

std::uint64_t graph_content_hash(const InteractionGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {g.n_users, g.n_items};
  feed(dims, sizeof(dims));
  const auto offsets = g.adjacency.row_offsets();
  const auto cols = g.adjacency.col_indices();
  const auto vals = g.adjacency.values();
  feed(offsets.data(), offsets.size_bytes());
  feed(cols.data(), cols.size_bytes());
  feed(vals.data(), vals.size_bytes());
  return h;
}

void save_order_cache(const std::filesystem::path& file, const SparseMatrix& m, int order,
                      std::optional<std::size_t> cap, bool binary_values, std::uint64_t graph_hash) {
  std::filesystem::create_directories(file.parent_path());
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp);
    const CacheHeader header{kCacheMagic, m.n(), m.nnz(), static_cast<std::uint64_t>(order),
                             cap.value_or(0), binary_values ? 1u : 0u, graph_hash};
    out.write(reinterpret_cast<const char*>(&header), sizeof(header));
    write_array(out, m.row_offsets());
    write_array(out, m.col_indices());
    write_array(out, m.values());
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

std::optional<SparseMatrix> load_order_cache(const std::filesystem::path& file, int order,
                                             std::optional<std::size_t> cap, bool binary_values,
                                             std::uint64_t graph_hash) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  CacheHeader header{};
  if (!in.read(reinterpret_cast<char*>(&header), sizeof(header))) return std::nullopt;
  if (header.magic != kCacheMagic || header.order != static_cast<std::uint64_t>(order) ||
      header.cap != cap.value_or(0) || header.binary_values != (binary_values ? 1u : 0u) ||
      header.graph_hash != graph_hash)
    return std::nullopt;
  std::vector<EntryOffset> offsets;
  std::vector<NodeIndex> cols;
  std::vector<double> vals;
  if (!read_array(in, offsets, header.n + 1) || !read_array(in, cols, header.nnz) ||
      !read_array(in, vals, header.nnz))
    return std::nullopt;
  try {
    return SparseMatrix::from_csr(header.n, std::move(offsets), std::move(cols), std::move(vals));
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

DecoupledStack decouple_cached(const InteractionGraph& g, int order_count,
                               const DecoupleOptions& options, const std::filesystem::path& cache_dir) {
  const std::uint64_t hash = graph_content_hash(g);
  DecoupledStack cached;
  cached.cap = options.cap;
  cached.binary_values = options.binary_values;
  for (int l = 1; l <= order_count; ++l) {
    auto m = load_order_cache(cache_dir / cache_file_name(l, options.cap, options.binary_values, hash),
                              l, options.cap, options.binary_values, hash);
    if (!m || m->n() != g.n()) {
      cached.matrices.clear();
      break;
    }
    cached.matrices.push_back(std::move(*m));
  }
  if (cached.order_count() == order_count) return cached;

  DecoupledStack stack = decouple(g, order_count, options);
  for (int l = 1; l <= order_count; ++l)
    save_order_cache(cache_dir / cache_file_name(l, options.cap, options.binary_values, hash),
                     stack.order(l), l, options.cap, options.binary_values, hash);
  return stack;
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv("ORDREC_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

}  // namespace ordrec
