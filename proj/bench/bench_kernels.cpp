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

// OpenMP kernels against their serial references on random bipartite graphs.
// Run with OMP_NUM_THREADS set to compare scaling, e.g.
//   OMP_NUM_THREADS=8 ./bench_kernels --benchmark_filter=spmm

#include <benchmark/benchmark.h>

#include <map>

#include "ordrec/graph.hpp"
#include "ordrec/kernels.hpp"
#include "ordrec/rng.hpp"
#include "ordrec/synthetic.hpp"

namespace {

using namespace ordrec;

constexpr std::size_t kDim = 64;

struct Problem {
  InteractionGraph graph;
  SparseMatrix normalized;
  DenseMatrix x;
};

// Side length per benchmark argument; the density keeps about 20 items per user.
const Problem& problem(std::int64_t side) {
  static std::map<std::int64_t, Problem> cache;
  auto it = cache.find(side);
  if (it == cache.end()) {
    const auto n = static_cast<std::size_t>(side);
    Problem p{build_bipartite(random_bipartite(n, n, 20.0 / static_cast<double>(n), 1)), {}, {}};
    p.normalized = symmetric_normalize(p.graph.adjacency);
    p.x = DenseMatrix(p.graph.n(), kDim);
    SplitMix64 rng(stream_key(2, {}));
    for (double& v : p.x.data()) v = rng.normal();
    it = cache.emplace(side, std::move(p)).first;
  }
  return it->second;
}

void set_counters(benchmark::State& state, const SparseMatrix& a) {
  state.counters["nnz"] = static_cast<double>(a.nnz());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

template <DenseMatrix (*Spmm)(const SparseMatrix&, const DenseMatrix&)>
void BM_spmm(benchmark::State& state) {
  const auto& p = problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Spmm(p.normalized, p.x));
  set_counters(state, p.normalized);
}

template <SparseMatrix (*Spgemm)(const SparseMatrix&, const SparseMatrix&)>
void BM_spgemm(benchmark::State& state) {
  const auto& p = problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Spgemm(p.graph.adjacency, p.graph.adjacency));
  set_counters(state, p.graph.adjacency);
}

template <std::vector<double> (*Dots)(const SparseMatrix&, const DenseMatrix&, const DenseMatrix&)>
void BM_entry_dots(benchmark::State& state) {
  const auto& p = problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Dots(p.normalized, p.x, p.x));
  set_counters(state, p.normalized);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (std::int64_t side : {1000, 4000, 16000}) b->Arg(side);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_spmm<kernels::spmm>)->Name("spmm/parallel")->Apply(sizes);
BENCHMARK(BM_spmm<reference::spmm>)->Name("spmm/serial")->Apply(sizes);
BENCHMARK(BM_spgemm<kernels::spgemm>)->Name("spgemm/parallel")->Apply(sizes);
BENCHMARK(BM_spgemm<reference::spgemm>)->Name("spgemm/serial")->Apply(sizes);
BENCHMARK(BM_entry_dots<kernels::entry_dots>)->Name("entry_dots/parallel")->Apply(sizes);
BENCHMARK(BM_entry_dots<reference::entry_dots>)->Name("entry_dots/serial")->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
