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

#include "ordrec/model.hpp"

#include <algorithm>
#include <cmath>

#include "ordrec/error.hpp"
#include "ordrec/kernels.hpp"
#include "ordrec/rng.hpp"

namespace ordrec {
namespace {

DenseMatrix mean_of(std::span<const DenseMatrix* const> parts) {
  DenseMatrix out(parts.front()->rows(), parts.front()->cols());
  auto dst = out.data();
  for (const DenseMatrix* part : parts) {
    const auto src = part->data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  const double count = static_cast<double>(parts.size());
  for (double& v : dst) v /= count;
  return out;
}

void check_finite(const DenseMatrix& m, const char* what) {
  for (double v : m.data())
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite value in ") + what);
}

// Relaxed similarity-slot probability of one edge and its hard indicator.
void mask_edge(double s, double tau, double g_similar, double g_dissimilar, bool hard,
               double& weight, double& soft) {
  const double p_similar = std::clamp(s, kMaskClamp, 1.0 - kMaskClamp);
  const double p_dissimilar = std::clamp(1.0 - s, kMaskClamp, 1.0 - kMaskClamp);
  const double a = (std::log(p_similar) + g_similar) / tau;
  const double b = (std::log(p_dissimilar) + g_dissimilar) / tau;
  // Two-way softmax, first component.
  const double m = std::max(a, b);
  const double ea = std::exp(a - m);
  const double eb = std::exp(b - m);
  soft = ea / (ea + eb);
  weight = hard ? (a >= b ? 1.0 : 0.0) : soft;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::full: return "full";
    case Mode::no_denoise: return "no_denoise";
    case Mode::no_decouple: return "no_decouple";
    case Mode::mf: return "mf";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "full") return Mode::full;
  if (text == "no_denoise") return Mode::no_denoise;
  if (text == "no_decouple") return Mode::no_decouple;
  if (text == "mf") return Mode::mf;
  throw ValidationError("unknown mode '" + text + "'");
}

std::string to_string(HiddenMode mode) { return mode == HiddenMode::prior ? "prior" : "shared"; }

HiddenMode parse_hidden_mode(const std::string& text) {
  if (text == "prior") return HiddenMode::prior;
  if (text == "shared") return HiddenMode::shared;
  throw ValidationError("unknown hidden-state mode '" + text + "'");
}

EmbeddingTable init_embeddings(std::size_t n, std::size_t d, std::uint64_t seed, double stddev) {
  if (n == 0 || d == 0) throw ValidationError("embedding table needs n >= 1 and d >= 1");
  EmbeddingTable emb{DenseMatrix(n, d)};
  SplitMix64 rng(stream_key(seed, {0xe3b}));
  for (double& v : emb.x0.data()) v = stddev * rng.normal();
  return emb;
}

OrderTopology make_topology(const SparseMatrix& adjacency) {
  OrderTopology t;
  t.adjacency = adjacency;
  t.reference = symmetric_normalize(adjacency);
  t.entry_row = adjacency.entry_rows();
  t.mirror = adjacency.mirror_positions();
  t.edge_of.assign(adjacency.nnz(), -1);
  const auto cols = adjacency.col_indices();
  for (std::size_t e = 0; e < adjacency.nnz(); ++e) {
    if (t.entry_row[e] <= cols[e]) {
      t.edge_of[e] = static_cast<std::int64_t>(t.edge_entry.size());
      t.edge_entry.push_back(static_cast<EntryOffset>(e));
    }
  }
  for (std::size_t e = 0; e < adjacency.nnz(); ++e)
    if (t.edge_of[e] < 0) t.edge_of[e] = t.edge_of[static_cast<std::size_t>(t.mirror[e])];
  return t;
}

ModelContext::ModelContext(InteractionGraph graph, DecoupledStack stack, std::optional<int> layer_count)
    : graph_(std::move(graph)), stack_(std::move(stack)) {
  layer_count_ = layer_count.value_or(stack_.order_count());
  if (layer_count_ < 0) throw ValidationError("layer count must be nonnegative");
  for (const auto& m : stack_.matrices) {
    if (m.n() != graph_.n()) throw ValidationError("decoupled matrix size differs from the graph");
    orders_.push_back(make_topology(m));
  }
  normalized_adjacency_ = symmetric_normalize(graph_.adjacency);
}

DenseMatrix hidden_state(std::span<const DenseMatrix* const> prior_outputs) {
  if (prior_outputs.empty()) throw ValidationError("hidden_state needs at least one input");
  for (const DenseMatrix* m : prior_outputs)
    if (!m->same_shape(*prior_outputs.front()))
      throw ValidationError("hidden_state inputs differ in shape");
  return mean_of(prior_outputs);
}

double similarity01(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  const double cos = (na > 0.0 && nb > 0.0) ? dot(a, b) / (na * nb) : 0.0;
  return (cos + 1.0) / 2.0;
}

std::vector<double> edge_similarity(const DenseMatrix& hidden, const OrderTopology& topology) {
  check_finite(hidden, "hidden state");
  const auto cols = topology.adjacency.col_indices();
  const auto edges = static_cast<std::int64_t>(topology.edge_count());
  std::vector<double> s(topology.edge_count());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < edges; ++k) {
    const auto e = static_cast<std::size_t>(topology.edge_entry[static_cast<std::size_t>(k)]);
    s[static_cast<std::size_t>(k)] =
        similarity01(hidden.row(static_cast<std::size_t>(topology.entry_row[e])),
                     hidden.row(static_cast<std::size_t>(cols[e])));
  }
  return s;
}

GumbelNoise draw_gumbel_noise(std::size_t edge_count, std::uint64_t seed) {
  const SplitMix64 stream(stream_key(seed, {0x6a3b}));
  GumbelNoise noise{std::vector<double>(edge_count), std::vector<double>(edge_count)};
  const auto edges = static_cast<std::int64_t>(edge_count);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < edges; ++k) {
    const auto i = static_cast<std::uint64_t>(k);
    noise.similar[i] = gumbel_from_uniform(to_open_unit(stream.at(2 * i)));
    noise.dissimilar[i] = gumbel_from_uniform(to_open_unit(stream.at(2 * i + 1)));
  }
  return noise;
}

MaskDraw gumbel_mask(std::span<const double> similarity, double tau, const GumbelNoise& noise, bool hard) {
  if (!(tau > 0.0)) throw ValidationError("Gumbel temperature must be positive");
  if (noise.similar.size() != similarity.size() || noise.dissimilar.size() != similarity.size())
    throw ValidationError("noise and similarity arrays differ in length");
  MaskDraw draw{std::vector<double>(similarity.size()), std::vector<double>(similarity.size())};
  for (std::size_t k = 0; k < similarity.size(); ++k) {
    const double s = similarity[k];
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("similarity outside [0, 1]");
    mask_edge(s, tau, noise.similar[k], noise.dissimilar[k], hard, draw.weight[k], draw.soft[k]);
  }
  return draw;
}

MaskDraw gumbel_mask(std::span<const double> similarity, double tau, std::uint64_t seed, bool hard) {
  return gumbel_mask(similarity, tau, draw_gumbel_noise(similarity.size(), seed), hard);
}

MaskDraw deterministic_mask(std::span<const double> similarity, double tau, bool hard) {
  const GumbelNoise zero{std::vector<double>(similarity.size(), 0.0),
                         std::vector<double>(similarity.size(), 0.0)};
  return gumbel_mask(similarity, tau, zero, hard);
}

EdgeMask expand_mask(const OrderTopology& topology, std::span<const double> edge_weights, int order,
                     double tau, bool hard, std::optional<std::uint64_t> noise_seed) {
  if (edge_weights.size() != topology.edge_count())
    throw ValidationError("edge weight count does not match the order's edges");
  EdgeMask mask{order, std::vector<double>(topology.adjacency.nnz()), tau, hard, noise_seed};
  for (std::size_t e = 0; e < mask.weights.size(); ++e)
    mask.weights[e] = edge_weights[static_cast<std::size_t>(topology.edge_of[e])];
  return mask;
}

SparseMatrix denoise_adjacency(const SparseMatrix& a_hat, const EdgeMask& mask) {
  if (mask.weights.size() != a_hat.nnz())
    throw ValidationError("mask is not aligned with the adjacency storage");
  std::vector<double> masked(a_hat.nnz());
  const auto vals = a_hat.values();
  for (std::size_t e = 0; e < masked.size(); ++e) masked[e] = mask.weights[e] * vals[e];
  return symmetric_normalize(a_hat.with_values(std::move(masked)));
}

ForwardState forward(const EmbeddingTable& emb, const ModelContext& ctx, const ForwardOptions& options) {
  if (emb.n() != ctx.n())
    throw ValidationError("embedding table has " + std::to_string(emb.n()) + " rows but the graph has " +
                          std::to_string(ctx.n()) + " nodes");
  if (!(options.tau > 0.0)) throw ValidationError("Gumbel temperature must be positive");
  const DenseMatrix& x0 = emb.x0;
  ForwardState st;
  st.options = options;
  const int order_count = ctx.order_count();

  if (options.mode == Mode::mf) {
    st.pooled = x0;
    return st;
  }
  if (options.mode == Mode::no_decouple) {
    if (ctx.layer_count() < 1) throw ValidationError("mode no_decouple needs at least one layer");
    st.layers.push_back(x0);
    for (int l = 1; l <= ctx.layer_count(); ++l)
      st.layers.push_back(kernels::spmm(ctx.normalized_adjacency(), st.layers.back()));
    std::vector<const DenseMatrix*> parts;
    for (const auto& layer : st.layers) parts.push_back(&layer);
    st.pooled = mean_of(parts);
    return st;
  }
  if (order_count < 1) throw ValidationError("mode " + to_string(options.mode) + " needs at least one order");

  if (options.mask_override && options.mask_override->size() != static_cast<std::size_t>(order_count))
    throw ValidationError("mask override must provide one weight array per order");
  const bool compute_masks = options.mode == Mode::full && options.mask_override == nullptr;
  st.masks_trainable = compute_masks;

  DenseMatrix shared_hidden;
  if (compute_masks && options.hidden == HiddenMode::shared) {
    std::vector<DenseMatrix> unmasked;
    for (int l = 1; l < order_count; ++l) unmasked.push_back(kernels::spmm(ctx.order(l).reference, x0));
    std::vector<const DenseMatrix*> parts{&x0};
    for (const auto& m : unmasked) parts.push_back(&m);
    shared_hidden = mean_of(parts);
  }

  st.orders.resize(static_cast<std::size_t>(order_count));
  for (int l = 1; l <= order_count; ++l) {
    const OrderTopology& topo = ctx.order(l);
    OrderState& os = st.orders[static_cast<std::size_t>(l - 1)];
    if (options.mask_override) {
      const auto& w = (*options.mask_override)[static_cast<std::size_t>(l - 1)];
      if (w.size() != topo.adjacency.nnz())
        throw ValidationError("mask override for order " + std::to_string(l) + " is misaligned");
      os.mask = EdgeMask{l, w, options.tau, options.hard, options.noise_seed};
    } else if (!compute_masks) {
      os.mask = EdgeMask{l, std::vector<double>(topo.adjacency.nnz(), 1.0), options.tau, false, std::nullopt};
    } else {
      if (options.hidden == HiddenMode::prior) {
        std::vector<const DenseMatrix*> parts{&x0};
        for (int m = 1; m < l; ++m) parts.push_back(&st.orders[static_cast<std::size_t>(m - 1)].output);
        os.hidden = mean_of(parts);
      } else {
        os.hidden = shared_hidden;
      }
      os.similarity = edge_similarity(os.hidden, topo);
      os.mask_draw = options.noise_seed
                         ? gumbel_mask(os.similarity, options.tau,
                                       stream_key(*options.noise_seed, {static_cast<std::uint64_t>(l)}),
                                       options.hard)
                         : deterministic_mask(os.similarity, options.tau, options.hard);
      os.mask = expand_mask(topo, os.mask_draw.weight, l, options.tau, options.hard, options.noise_seed);
    }

    const auto a_vals = topo.adjacency.values();
    os.masked.resize(a_vals.size());
    for (std::size_t e = 0; e < a_vals.size(); ++e) os.masked[e] = os.mask.weights[e] * a_vals[e];
    os.denoised = symmetric_normalize(topo.adjacency.with_values(os.masked), os.inv_sqrt_degree);
    os.output = kernels::spmm(os.denoised, x0);
  }

  std::vector<const DenseMatrix*> parts{&x0};
  for (const auto& os : st.orders) parts.push_back(&os.output);
  st.pooled = mean_of(parts);
  return st;
}

double score(const DenseMatrix& pooled, std::size_t n_users, std::size_t user, std::size_t item) {
  if (user >= n_users) throw ValidationError("user index out of range");
  if (n_users + item >= pooled.rows()) throw ValidationError("item index out of range");
  return dot(pooled.row(user), pooled.row(n_users + item));
}

}  // namespace ordrec
