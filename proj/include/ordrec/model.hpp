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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordrec/decouple.hpp"
#include "ordrec/dense.hpp"
#include "ordrec/graph.hpp"
#include "ordrec/sparse.hpp"

namespace ordrec {

/// Forward-pass variants. no_denoise and no_decouple are the two ablation
/// arms; mf scores raw embeddings.
enum class Mode { full, no_denoise, no_decouple, mf };

/// How the per-order hidden state is pooled. `prior` averages X_0..X_{l-1}
/// of the current pass. `shared` uses one state for every order, averaging
/// X_0 with the unmasked propagations of orders 1..L-1.
enum class HiddenMode { prior, shared };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);
std::string to_string(HiddenMode mode);
HiddenMode parse_hidden_mode(const std::string& text);

struct EmbeddingTable {
  DenseMatrix x0;
  std::size_t d() const { return x0.cols(); }
  std::size_t n() const { return x0.rows(); }
};

/// N(0, stddev^2) entries, deterministic under seed.
EmbeddingTable init_embeddings(std::size_t n, std::size_t d, std::uint64_t seed, double stddev = 0.01);

/// Storage bookkeeping for one order: canonical edges (u <= v) and where
/// each stored entry and its mirror live.
struct OrderTopology {
  SparseMatrix adjacency;                // \hat A^l
  SparseMatrix reference;                // symmetric_normalize(\hat A^l)
  std::vector<NodeIndex> entry_row;      // per entry
  std::vector<EntryOffset> mirror;       // per entry
  std::vector<std::int64_t> edge_of;     // per entry -> canonical edge id
  std::vector<EntryOffset> edge_entry;   // per canonical edge -> entry with row <= col
  std::size_t edge_count() const { return edge_entry.size(); }
};

OrderTopology make_topology(const SparseMatrix& adjacency);

/// Everything the forward pass needs that does not change during training.
class ModelContext {
 public:
  /// `stack` may be empty for mode mf. `layer_count` sets the depth of
  /// classic propagation (no_decouple); it defaults to the stack's order count.
  ModelContext(InteractionGraph graph, DecoupledStack stack, std::optional<int> layer_count = std::nullopt);

  std::size_t n_users() const { return graph_.n_users; }
  std::size_t n_items() const { return graph_.n_items; }
  std::size_t n() const { return graph_.n(); }
  int order_count() const { return static_cast<int>(orders_.size()); }
  int layer_count() const { return layer_count_; }
  const OrderTopology& order(int l) const { return orders_.at(static_cast<std::size_t>(l - 1)); }
  /// Normalized training adjacency used by classic propagation.
  const SparseMatrix& normalized_adjacency() const { return normalized_adjacency_; }
  const InteractionGraph& graph() const { return graph_; }
  const DecoupledStack& stack() const { return stack_; }

 private:
  InteractionGraph graph_;
  DecoupledStack stack_;
  std::vector<OrderTopology> orders_;
  SparseMatrix normalized_adjacency_;
  int layer_count_ = 0;
};

/// Elementwise mean of the inputs; all must share one shape.
DenseMatrix hidden_state(std::span<const DenseMatrix* const> prior_outputs);

/// (cos + 1) / 2, with cos taken as 0 when either vector has zero norm.
double similarity01(std::span<const double> a, std::span<const double> b);

/// Similarity per canonical edge of `topology`.
std::vector<double> edge_similarity(const DenseMatrix& hidden, const OrderTopology& topology);

inline constexpr double kMaskClamp = 1e-10;

/// Gumbel(0, 1) variates for the similarity and dissimilarity slot of each edge.
struct GumbelNoise {
  std::vector<double> similar;
  std::vector<double> dissimilar;
};

/// Counter-based: edge k uses stream positions 2k and 2k + 1.
GumbelNoise draw_gumbel_noise(std::size_t edge_count, std::uint64_t seed);

/// Per-edge mask weights. `soft` is the relaxed similarity-slot probability;
/// `weight` equals it in soft mode and is its argmax indicator in hard mode.
struct MaskDraw {
  std::vector<double> weight;
  std::vector<double> soft;
};

MaskDraw gumbel_mask(std::span<const double> similarity, double tau, const GumbelNoise& noise, bool hard);
MaskDraw gumbel_mask(std::span<const double> similarity, double tau, std::uint64_t seed, bool hard);
/// Noise-free variant used at inference.
MaskDraw deterministic_mask(std::span<const double> similarity, double tau, bool hard);

/// Mask weights aligned to the storage of \hat A^l (both directions).
struct EdgeMask {
  int order = 0;
  std::vector<double> weights;
  double tau = 0.5;
  bool hard = false;
  std::optional<std::uint64_t> noise_seed;
};

EdgeMask expand_mask(const OrderTopology& topology, std::span<const double> edge_weights, int order,
                     double tau, bool hard, std::optional<std::uint64_t> noise_seed);

/// W (.) \hat A followed by symmetric normalization with value-sum degrees.
SparseMatrix denoise_adjacency(const SparseMatrix& a_hat, const EdgeMask& mask);

struct ForwardOptions {
  Mode mode = Mode::full;
  double tau = 0.5;
  bool hard = false;
  HiddenMode hidden = HiddenMode::prior;
  /// Seed for Gumbel noise; nullopt runs the deterministic inference pass.
  std::optional<std::uint64_t> noise_seed;
  /// Frozen per-entry mask weights for every order (no gradient to masks).
  const std::vector<std::vector<double>>* mask_override = nullptr;
};

/// Per-order intermediates kept for the backward pass.
struct OrderState {
  std::vector<double> similarity;  // per canonical edge
  MaskDraw mask_draw;              // per canonical edge
  EdgeMask mask;                   // per entry
  std::vector<double> masked;      // \check A^l values per entry
  std::vector<double> inv_sqrt_degree;
  SparseMatrix denoised;           // \tilde A^l
  DenseMatrix output;              // X_l
  DenseMatrix hidden;              // H_l (empty when masks are not computed)
};

struct ForwardState {
  ForwardOptions options;
  std::vector<OrderState> orders;        // full / no_denoise
  std::vector<DenseMatrix> layers;       // no_decouple: X^0..X^L
  DenseMatrix pooled;                    // X
  bool masks_trainable = false;

  int order_count() const { return static_cast<int>(orders.size()); }
};

ForwardState forward(const EmbeddingTable& emb, const ModelContext& ctx, const ForwardOptions& options);

/// Inner product of the pooled user and item rows.
double score(const DenseMatrix& pooled, std::size_t n_users, std::size_t user, std::size_t item);

}  // namespace ordrec
