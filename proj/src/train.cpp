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

#include "ordrec/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "ordrec/error.hpp"
#include "ordrec/eval.hpp"
#include "ordrec/kernels.hpp"
#include "ordrec/rng.hpp"

namespace ordrec {
namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Sum of |denoised - reference| over the reference's stored entries.
double ld_single(const SparseMatrix& denoised, const SparseMatrix& reference) {
  if (denoised.n() != reference.n()) throw ValidationError("L_d operands differ in size");
  const auto dv = denoised.values();
  const auto rv = reference.values();
  double sum = 0.0;
  if (denoised.same_pattern(reference)) {
    for (std::size_t e = 0; e < rv.size(); ++e) sum += std::abs(dv[e] - rv[e]);
    return sum;
  }
  const auto dc = denoised.col_indices();
  const auto rc = reference.col_indices();
  for (std::size_t r = 0; r < reference.n(); ++r) {
    EntryOffset d = denoised.row_begin(r);
    for (EntryOffset e = reference.row_begin(r); e < reference.row_end(r); ++e) {
      double value = 0.0;
      if (d < denoised.row_end(r) && dc[d] < rc[e])
        throw ValidationError("denoised pattern is not contained in the reference pattern");
      if (d < denoised.row_end(r) && dc[d] == rc[e]) value = dv[d++];
      sum += std::abs(value - rv[e]);
    }
    if (d != denoised.row_end(r))
      throw ValidationError("denoised pattern is not contained in the reference pattern");
  }
  return sum;
}

// Factor applied to one order's L_d sum.
double ld_entry_weight(const SparseMatrix& reference, LdScale scale) {
  if (scale == LdScale::sum || reference.nnz() == 0) return 1.0;
  return 1.0 / static_cast<double>(reference.nnz());
}

std::size_t item_row(const ModelContext& ctx, ItemIndex item) { return ctx.n_users() + static_cast<std::size_t>(item); }

// Squared norms of the X_0 rows each triple touches, averaged over the batch.
double batch_l2(const EmbeddingTable& emb, const ModelContext& ctx, std::span<const BprTriple> batch) {
  double sum = 0.0;
  for (const auto& t : batch)
    for (std::size_t row : {static_cast<std::size_t>(t.user), item_row(ctx, t.pos_item), item_row(ctx, t.neg_item)}) {
      const auto x = emb.x0.row(row);
      sum += dot(x, x);
    }
  return sum / static_cast<double>(batch.size());
}

struct Margins {
  std::vector<double> pos;
  std::vector<double> neg;
};

Margins batch_scores(const ForwardState& st, const ModelContext& ctx, std::span<const BprTriple> batch) {
  Margins m{std::vector<double>(batch.size()), std::vector<double>(batch.size())};
  for (std::size_t t = 0; t < batch.size(); ++t) {
    m.pos[t] = score(st.pooled, ctx.n_users(), static_cast<std::size_t>(batch[t].user),
                     static_cast<std::size_t>(batch[t].pos_item));
    m.neg[t] = score(st.pooled, ctx.n_users(), static_cast<std::size_t>(batch[t].user),
                     static_cast<std::size_t>(batch[t].neg_item));
  }
  return m;
}

LossTerms terms_of(const EmbeddingTable& emb, const ModelContext& ctx, const ForwardState& st,
                   std::span<const BprTriple> batch, const Margins& margins, const LossSettings& settings) {
  LossTerms t;
  t.bpr = bpr_loss(margins.pos, margins.neg);
  for (int l = 1; l <= st.order_count(); ++l) {
    const SparseMatrix& reference = ctx.order(l).reference;
    t.ld += ld_single(st.orders[static_cast<std::size_t>(l - 1)].denoised, reference) *
            ld_entry_weight(reference, settings.ld_scale);
  }
  t.reg = settings.reg_scope == RegScope::table ? l2_reg(emb) : batch_l2(emb, ctx, batch);
  t.total = t.bpr + settings.beta * t.ld + settings.lambda * t.reg;
  const std::pair<const char*, double> named[] = {{"bpr", t.bpr}, {"ld", t.ld}, {"reg", t.reg}};
  for (const auto& [name, value] : named)
    if (!std::isfinite(value)) throw NumericError(std::string("non-finite loss term ") + name);
  return t;
}

void check_batch(const ModelContext& ctx, std::span<const BprTriple> batch) {
  if (batch.empty()) throw ValidationError("empty batch");
  for (const auto& t : batch) {
    if (t.user < 0 || static_cast<std::size_t>(t.user) >= ctx.n_users() || t.pos_item < 0 ||
        t.neg_item < 0 || static_cast<std::size_t>(t.pos_item) >= ctx.n_items() ||
        static_cast<std::size_t>(t.neg_item) >= ctx.n_items())
      throw ValidationError("batch triple out of range");
  }
}

// Adjoint of X_l = \tilde A^l X_0 through normalization, masking, the Gumbel
// relaxation and cosine similarity; returns dL/dH_l.
DenseMatrix mask_path_backward(const OrderState& os, const OrderTopology& topo, const DenseMatrix& d_output,
                               const DenseMatrix& x0, double ld_weight, double tau) {
  const SparseMatrix& a_hat = topo.adjacency;
  const auto cols = a_hat.col_indices();
  const auto a_vals = a_hat.values();
  const auto ref_vals = topo.reference.values();
  const auto den_vals = os.denoised.values();
  const auto& r = os.inv_sqrt_degree;
  const auto& masked = os.masked;
  const auto n = static_cast<std::int64_t>(a_hat.n());

  // dL/d\tilde A per entry: propagation plus the L_d subgradient.
  std::vector<double> d_norm = kernels::entry_dots(a_hat, d_output, x0);
  for (std::size_t e = 0; e < d_norm.size(); ++e) d_norm[e] += ld_weight * sign(den_vals[e] - ref_vals[e]);

  // \tilde A_uv = \check A_uv r_u r_v with r = deg^-1/2, deg the value row sum.
  std::vector<double> d_deg(a_hat.n(), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t u = 0; u < n; ++u) {
    const auto row = static_cast<std::size_t>(u);
    if (r[row] == 0.0) continue;
    double d_r = 0.0;
    for (EntryOffset e = a_hat.row_begin(row); e < a_hat.row_end(row); ++e) {
      const auto m = static_cast<std::size_t>(topo.mirror[static_cast<std::size_t>(e)]);
      const auto v = static_cast<std::size_t>(cols[e]);
      d_r += (d_norm[static_cast<std::size_t>(e)] * masked[static_cast<std::size_t>(e)] + d_norm[m] * masked[m]) * r[v];
    }
    d_deg[row] = -0.5 * r[row] * r[row] * r[row] * d_r;
  }
  std::vector<double> d_masked(a_hat.nnz());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t u = 0; u < n; ++u) {
    const auto row = static_cast<std::size_t>(u);
    for (EntryOffset e = a_hat.row_begin(row); e < a_hat.row_end(row); ++e) {
      const auto i = static_cast<std::size_t>(e);
      d_masked[i] = d_norm[i] * (r[row] * r[static_cast<std::size_t>(cols[e])]) + d_deg[row];
    }
  }

  // Per canonical edge: weight -> relaxed softmax -> similarity -> cosine.
  const auto edges = static_cast<std::int64_t>(topo.edge_count());
  std::vector<double> d_cos(topo.edge_count());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < edges; ++k) {
    const auto ki = static_cast<std::size_t>(k);
    const auto e = static_cast<std::size_t>(topo.edge_entry[ki]);
    const auto m = static_cast<std::size_t>(topo.mirror[e]);
    double d_w = d_masked[e] * a_vals[e];
    if (m != e) d_w += d_masked[m] * a_vals[m];
    const double soft = os.mask_draw.soft[ki];
    const double s = os.similarity[ki];
    const double q = 1.0 - s;
    double d_logit_ds = 0.0;
    if (s > kMaskClamp && s < 1.0 - kMaskClamp) d_logit_ds += 1.0 / s;
    if (q > kMaskClamp && q < 1.0 - kMaskClamp) d_logit_ds += 1.0 / q;
    d_cos[ki] = d_w * soft * (1.0 - soft) * d_logit_ds / tau * 0.5;
  }

  const DenseMatrix& h = os.hidden;
  std::vector<double> norm(h.rows());
  for (std::size_t v = 0; v < h.rows(); ++v) norm[v] = std::sqrt(dot(h.row(v), h.row(v)));
  DenseMatrix d_hidden(h.rows(), h.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t u = 0; u < n; ++u) {
    const auto row = static_cast<std::size_t>(u);
    if (norm[row] == 0.0) continue;
    const auto hu = h.row(row);
    auto out = d_hidden.row(row);
    for (EntryOffset e = a_hat.row_begin(row); e < a_hat.row_end(row); ++e) {
      const auto v = static_cast<std::size_t>(cols[e]);
      if (norm[v] == 0.0 || v == row) continue;
      const auto hv = h.row(v);
      const double g = d_cos[static_cast<std::size_t>(topo.edge_of[static_cast<std::size_t>(e)])];
      const double inv = 1.0 / (norm[row] * norm[v]);
      const double cos = dot(hu, hv) * inv;
      // d cos / d h_u = h_v / (|h_u||h_v|) - cos h_u / |h_u|^2
      axpy(g * inv, hv, out);
      axpy(-g * cos / (norm[row] * norm[row]), hu, out);
    }
  }
  return d_hidden;
}

DenseMatrix scaled(const DenseMatrix& m, double factor) {
  DenseMatrix out = m;
  for (double& v : out.data()) v *= factor;
  return out;
}

void add_into(DenseMatrix& dst, const DenseMatrix& src, double factor = 1.0) {
  auto d = dst.data();
  const auto s = src.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += factor * s[k];
}

}  // namespace

std::string to_string(RegScope scope) { return scope == RegScope::table ? "table" : "batch"; }

RegScope parse_reg_scope(const std::string& text) {
  if (text == "table") return RegScope::table;
  if (text == "batch") return RegScope::batch;
  throw ValidationError("unknown reg_scope '" + text + "' (expected table or batch)");
}

std::string to_string(LdScale scale) { return scale == LdScale::sum ? "sum" : "mean"; }

LdScale parse_ld_scale(const std::string& text) {
  if (text == "sum") return LdScale::sum;
  if (text == "mean") return LdScale::mean;
  throw ValidationError("unknown ld_scale '" + text + "' (expected sum or mean)");
}

void TrainConfig::validate() const {
  if (d < 1) throw ValidationError("d must be at least 1");
  if (batch_size < 1) throw ValidationError("batch_size must be at least 1");
  if (mode != Mode::mf && (order_count < 1 || order_count > kMaxOrder))
    throw ValidationError("L must lie in [1, " + std::to_string(kMaxOrder) + "]");
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(beta >= 0.0)) throw ValidationError("beta must be nonnegative");
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be nonnegative");
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (patience < 1) throw ValidationError("patience must be at least 1");
  if (max_epochs < 1) throw ValidationError("max_epochs must be at least 1");
  if (!(init_std > 0.0)) throw ValidationError("init_std must be positive");
  if (eval_k < 1) throw ValidationError("eval_k must be at least 1");
}

double bpr_loss(std::span<const double> y_pos, std::span<const double> y_neg) {
  if (y_pos.empty()) throw ValidationError("BPR loss of an empty batch");
  if (y_pos.size() != y_neg.size()) throw ValidationError("BPR score arrays differ in length");
  double sum = 0.0;
  for (std::size_t t = 0; t < y_pos.size(); ++t) sum += softplus(-(y_pos[t] - y_neg[t]));
  return sum / static_cast<double>(y_pos.size());
}

double ld_loss(std::span<const SparseMatrix> denoised, std::span<const SparseMatrix> reference) {
  if (denoised.size() != reference.size()) throw ValidationError("L_d needs one reference per order");
  double sum = 0.0;
  for (std::size_t l = 0; l < denoised.size(); ++l) sum += ld_single(denoised[l], reference[l]);
  return sum;
}

double l2_reg(const EmbeddingTable& emb) {
  double sum = 0.0;
  for (double v : emb.x0.data()) sum += v * v;
  return sum;
}

LossTerms batch_loss(const EmbeddingTable& emb, const ModelContext& ctx, std::span<const BprTriple> batch,
                     const ForwardOptions& options, const LossSettings& settings) {
  check_batch(ctx, batch);
  const ForwardState st = forward(emb, ctx, options);
  return terms_of(emb, ctx, st, batch, batch_scores(st, ctx, batch), settings);
}

GradientBundle gradient(const EmbeddingTable& emb, const ModelContext& ctx, std::span<const BprTriple> batch,
                        const ForwardOptions& options, const LossSettings& settings) {
  check_batch(ctx, batch);
  const ForwardState st = forward(emb, ctx, options);
  const Margins margins = batch_scores(st, ctx, batch);
  GradientBundle out;
  out.terms = terms_of(emb, ctx, st, batch, margins, settings);

  const std::size_t n = emb.n();
  const std::size_t d = emb.d();
  const std::size_t n_users = ctx.n_users();
  const DenseMatrix& x0 = emb.x0;
  const DenseMatrix& pooled = st.pooled;

  // dL_BPR / dX
  DenseMatrix d_pooled(n, d);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const double c = -sigmoid(-(margins.pos[t] - margins.neg[t])) * inv_batch;
    const auto u = static_cast<std::size_t>(batch[t].user);
    const std::size_t p = n_users + static_cast<std::size_t>(batch[t].pos_item);
    const std::size_t q = n_users + static_cast<std::size_t>(batch[t].neg_item);
    axpy(c, pooled.row(p), d_pooled.row(u));
    axpy(-c, pooled.row(q), d_pooled.row(u));
    axpy(c, pooled.row(u), d_pooled.row(p));
    axpy(-c, pooled.row(u), d_pooled.row(q));
  }

  DenseMatrix g;
  switch (options.mode) {
    case Mode::mf:
      g = std::move(d_pooled);
      break;
    case Mode::no_decouple: {
      const auto layers = static_cast<int>(st.layers.size()) - 1;
      const double share = 1.0 / static_cast<double>(layers + 1);
      DenseMatrix carry = scaled(d_pooled, share);
      for (int l = layers; l >= 1; --l) {
        DenseMatrix next = scaled(d_pooled, share);
        kernels::spmm_accumulate(ctx.normalized_adjacency(), carry, next);
        carry = std::move(next);
      }
      g = std::move(carry);
      break;
    }
    case Mode::full:
    case Mode::no_denoise: {
      const int orders = st.order_count();
      const double share = 1.0 / static_cast<double>(orders + 1);
      std::vector<DenseMatrix> d_out;
      for (int l = 0; l <= orders; ++l) d_out.push_back(scaled(d_pooled, share));
      const bool shared_hidden = st.masks_trainable && options.hidden == HiddenMode::shared;
      DenseMatrix d_shared = shared_hidden ? DenseMatrix(n, d) : DenseMatrix();
      g = DenseMatrix(n, d);
      for (int l = orders; l >= 1; --l) {
        const OrderState& os = st.orders[static_cast<std::size_t>(l - 1)];
        // \tilde A^l is symmetric, so its transpose product is itself.
        kernels::spmm_accumulate(os.denoised, d_out[static_cast<std::size_t>(l)], g);
        if (!st.masks_trainable) continue;
        const double ld_weight = settings.beta * ld_entry_weight(ctx.order(l).reference, settings.ld_scale);
        const DenseMatrix d_hidden =
            mask_path_backward(os, ctx.order(l), d_out[static_cast<std::size_t>(l)], x0, ld_weight, options.tau);
        if (shared_hidden) {
          add_into(d_shared, d_hidden);
        } else {
          for (int m = 0; m < l; ++m) add_into(d_out[static_cast<std::size_t>(m)], d_hidden, 1.0 / l);
        }
      }
      if (shared_hidden) {
        const double part = 1.0 / static_cast<double>(orders);
        add_into(g, d_shared, part);
        for (int m = 1; m < orders; ++m) kernels::spmm_accumulate(ctx.order(m).reference, d_shared, g, part);
      }
      add_into(g, d_out[0]);
      break;
    }
  }
  if (settings.reg_scope == RegScope::table) {
    add_into(g, x0, 2.0 * settings.lambda);
  } else {
    const double coef = 2.0 * settings.lambda * inv_batch;
    for (const auto& t : batch)
      for (std::size_t row : {static_cast<std::size_t>(t.user), item_row(ctx, t.pos_item), item_row(ctx, t.neg_item)})
        axpy(coef, x0.row(row), g.row(row));
  }
  for (double v : g.data())
    if (!std::isfinite(v)) throw NumericError("non-finite gradient entry");
  out.d_x0 = std::move(g);
  return out;
}

AdamState make_adam_state(const EmbeddingTable& emb) {
  AdamState s;
  s.m = DenseMatrix(emb.n(), emb.d());
  s.v = DenseMatrix(emb.n(), emb.d());
  return s;
}

void adam_step(EmbeddingTable& emb, const DenseMatrix& grad, AdamState& state, double learning_rate) {
  if (!grad.same_shape(emb.x0) || !state.m.same_shape(emb.x0) || !state.v.same_shape(emb.x0))
    throw ValidationError("Adam operands differ in shape");
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  auto x = emb.x0.data();
  auto m = state.m.data();
  auto v = state.v.data();
  const auto g = grad.data();
  for (std::size_t k = 0; k < x.size(); ++k) {
    m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
    v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
    x[k] -= learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + state.epsilon);
  }
}

bool EarlyStopping::observe(int epoch, double metric) {
  if (!has_best_ || metric > best_metric_) {
    has_best_ = true;
    best_metric_ = metric;
    best_epoch_ = epoch;
    epochs_without_improvement_ = 0;
    return true;
  }
  ++epochs_without_improvement_;
  return false;
}

std::string log_csv_header() { return "epoch,loss_total,loss_bpr,loss_ld,loss_reg,val_recall@20,seconds\n"; }

std::string log_csv_row(const EpochLog& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g,%.6f,%.3f\n", row.epoch, row.loss.total,
                row.loss.bpr, row.loss.ld, row.loss.reg, row.val_recall, row.seconds);
  return buf;
}

ForwardOptions training_forward_options(const TrainConfig& cfg, std::uint64_t noise_seed) {
  ForwardOptions o = inference_forward_options(cfg);
  o.noise_seed = noise_seed;
  return o;
}

ForwardOptions inference_forward_options(const TrainConfig& cfg) {
  ForwardOptions o;
  o.mode = cfg.mode;
  o.tau = cfg.tau;
  o.hard = cfg.hard;
  o.hidden = cfg.hidden;
  return o;
}

Trainer::Trainer(const SplitDataset& split, const ModelContext& ctx, const TrainConfig& cfg)
    : split_(split),
      ctx_(ctx),
      cfg_(cfg),
      sampler_(split.train),
      emb_(init_embeddings(ctx.n(), cfg.d, stream_key(cfg.seed, {1}), cfg.init_std)),
      adam_(make_adam_state(emb_)) {
  cfg_.validate();
  if (split.train.pairs.empty()) throw ValidationError("training set is empty");
  if (split.train.n_users != ctx.n_users() || split.train.n_items != ctx.n_items())
    throw ValidationError("split and model context disagree on dimensions");
}

LossTerms Trainer::run_epoch(int epoch) {
  std::vector<Interaction> order = split_.train.pairs;
  SplitMix64 rng(stream_key(cfg_.seed, {2, static_cast<std::uint64_t>(epoch)}));
  shuffle(std::span<Interaction>(order), rng);

  LossTerms sum;
  std::size_t batches = 0;
  const LossSettings settings{cfg_.beta, cfg_.lambda, cfg_.reg_scope, cfg_.ld_scale};
  for (std::size_t start = 0; start < order.size(); start += cfg_.batch_size) {
    const std::size_t end = std::min(order.size(), start + cfg_.batch_size);
    const auto step = static_cast<std::uint64_t>(batches);
    const auto triples = sampler_.sample(std::span<const Interaction>(order).subspan(start, end - start),
                                         stream_key(cfg_.seed, {3, static_cast<std::uint64_t>(epoch), step}));
    const auto options =
        training_forward_options(cfg_, stream_key(cfg_.seed, {4, static_cast<std::uint64_t>(epoch), step}));
    GradientBundle bundle;
    try {
      bundle = gradient(emb_, ctx_, triples, options, settings);
    } catch (const NumericError& e) {
      throw NumericError("training diverged in epoch " + std::to_string(epoch) + ": " + e.what());
    }
    adam_step(emb_, bundle.d_x0, adam_, cfg_.learning_rate);
    sum.bpr += bundle.terms.bpr;
    sum.ld += bundle.terms.ld;
    sum.reg += bundle.terms.reg;
    sum.total += bundle.terms.total;
    ++batches;
  }
  const double nb = static_cast<double>(batches);
  return {sum.bpr / nb, sum.ld / nb, sum.reg / nb, sum.total / nb};
}

FitResult fit(const SplitDataset& split, const ModelContext& ctx, const TrainConfig& cfg, const FitHooks& hooks) {
  if (split.validation.pairs.empty()) throw ValidationError("validation set is empty");
  Trainer trainer(split, ctx, cfg);
  EarlyStopping stopper(cfg.patience);
  FitResult result;
  result.best.embeddings = trainer.embeddings();
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochLog row;
    row.epoch = epoch;
    row.loss = trainer.run_epoch(epoch);
    if (hooks.validation_metric) {
      row.val_recall = hooks.validation_metric(epoch, trainer.embeddings());
    } else {
      const ForwardState st = forward(trainer.embeddings(), ctx, inference_forward_options(cfg));
      row.val_recall = evaluate_embeddings(st.pooled, split, cfg.eval_k, Phase::validation).recall;
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (stopper.observe(epoch, row.val_recall)) result.best.embeddings = trainer.embeddings();
    result.log.push_back(row);
    result.epochs_run = epoch;
    if (hooks.on_epoch) hooks.on_epoch(row);
    if (stopper.should_stop()) break;
  }
  result.best_epoch = stopper.best_epoch();

  auto& h = result.best.header;
  h.n_users = ctx.n_users();
  h.n_items = ctx.n_items();
  h.d = cfg.d;
  h.order_count = cfg.mode == Mode::mf ? 0 : cfg.order_count;
  h.mode = cfg.mode;
  h.tau = cfg.tau;
  h.hard = cfg.hard;
  h.hidden = cfg.hidden;
  h.cap = cfg.cap;
  h.binary_values = cfg.binary_values;
  h.seed = cfg.seed;
  h.best_epoch = result.best_epoch;
  return result;
}

}  // namespace ordrec
