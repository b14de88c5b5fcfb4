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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordrec/checkpoint.hpp"
#include "ordrec/data.hpp"
#include "ordrec/dense.hpp"
#include "ordrec/model.hpp"

namespace ordrec {

/// What the L2 term covers: the whole embedding table (squared Frobenius
/// norm of X_0), or the rows a batch touches, once per triple and divided by
/// the batch size.
enum class RegScope { table, batch };
/// How L_d aggregates each order: plain sum over stored entries, or their mean.
enum class LdScale { sum, mean };

std::string to_string(RegScope scope);
RegScope parse_reg_scope(const std::string& text);
std::string to_string(LdScale scale);
LdScale parse_ld_scale(const std::string& text);

struct TrainConfig {
  std::size_t d = 64;
  std::size_t batch_size = 2048;
  int order_count = 2;  // L
  double learning_rate = 1e-3;
  double beta = 0.4;     // weight of the denoising-consistency term
  double lambda = 1e-4;  // L2 coefficient
  RegScope reg_scope = RegScope::table;
  LdScale ld_scale = LdScale::sum;
  double tau = 0.5;      // Gumbel-softmax temperature
  int patience = 10;
  int max_epochs = 300;
  std::uint64_t seed = 1;
  Mode mode = Mode::full;
  HiddenMode hidden = HiddenMode::prior;
  bool hard = false;
  std::optional<std::size_t> cap;
  bool binary_values = false;
  double init_std = 0.01;
  std::size_t eval_k = 20;

  /// Throws ValidationError on out-of-range settings.
  void validate() const;
};

struct LossTerms {
  double bpr = 0.0;
  double ld = 0.0;
  double reg = 0.0;
  double total = 0.0;
};

struct GradientBundle {
  DenseMatrix d_x0;
  LossTerms terms;
};

/// Mean of -ln sigmoid(pos - neg) over the batch.
double bpr_loss(std::span<const double> y_pos, std::span<const double> y_neg);

/// Sum over orders and stored entries of |denoised - reference|. Each
/// denoised pattern must be contained in its reference pattern.
double ld_loss(std::span<const SparseMatrix> denoised, std::span<const SparseMatrix> reference);

/// Squared Frobenius norm of X_0.
double l2_reg(const EmbeddingTable& emb);

/// Loss parameters shared by loss evaluation and the gradient.
struct LossSettings {
  double beta = 0.4;
  double lambda = 1e-4;
  RegScope reg_scope = RegScope::table;
  LdScale ld_scale = LdScale::sum;
};

/// Forward pass plus loss terms on a batch (no gradient).
LossTerms batch_loss(const EmbeddingTable& emb, const ModelContext& ctx, std::span<const BprTriple> batch,
                     const ForwardOptions& options, const LossSettings& settings);

/// L_total on a batch and its exact gradient with respect to X_0. Gumbel
/// noise is fixed by options.noise_seed.
GradientBundle gradient(const EmbeddingTable& emb, const ModelContext& ctx, std::span<const BprTriple> batch,
                        const ForwardOptions& options, const LossSettings& settings);

struct AdamState {
  DenseMatrix m;
  DenseMatrix v;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const EmbeddingTable& emb);
void adam_step(EmbeddingTable& emb, const DenseMatrix& grad, AdamState& state, double learning_rate);

/// Stops after `patience` consecutive epochs without a strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  /// Records an epoch's metric; returns true when it is a new best.
  bool observe(int epoch, double metric);
  bool should_stop() const { return epochs_without_improvement_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_metric() const { return best_metric_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_metric_ = 0.0;
  bool has_best_ = false;
  int epochs_without_improvement_ = 0;
};

struct EpochLog {
  int epoch = 0;
  LossTerms loss;  // batch means
  double val_recall = 0.0;
  double seconds = 0.0;
};

/// `epoch,loss_total,loss_bpr,loss_ld,loss_reg,val_recall@20,seconds`
std::string log_csv_header();
std::string log_csv_row(const EpochLog& row);

/// One optimizer over a fixed split; fit() drives it epoch by epoch.
class Trainer {
 public:
  Trainer(const SplitDataset& split, const ModelContext& ctx, const TrainConfig& cfg);

  /// One shuffled pass over the training positives; returns batch-mean losses.
  LossTerms run_epoch(int epoch);
  const EmbeddingTable& embeddings() const { return emb_; }

 private:
  const SplitDataset& split_;
  const ModelContext& ctx_;
  TrainConfig cfg_;
  NegativeSampler sampler_;
  EmbeddingTable emb_;
  AdamState adam_;
};

struct FitResult {
  Checkpoint best;
  int best_epoch = 0;
  int epochs_run = 0;
  std::vector<EpochLog> log;
};

struct FitHooks {
  /// Replaces validation Recall@k when set (used to script metric sequences).
  std::function<double(int epoch, const EmbeddingTable&)> validation_metric;
  /// Called after every epoch with the log row.
  std::function<void(const EpochLog&)> on_epoch;
};

/// Epoch loop: shuffle, batch, sample negatives, gradient, Adam; validation
/// after each epoch with the deterministic forward pass; best checkpoint kept.
FitResult fit(const SplitDataset& split, const ModelContext& ctx, const TrainConfig& cfg,
              const FitHooks& hooks = {});

/// Options for the stochastic training-time forward pass of a step.
ForwardOptions training_forward_options(const TrainConfig& cfg, std::uint64_t noise_seed);
/// Options for the deterministic inference pass.
ForwardOptions inference_forward_options(const TrainConfig& cfg);

}  // namespace ordrec
