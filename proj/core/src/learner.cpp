// Copyright 2026 The netaug Authors
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

#include "netaug/learner.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <thread>

#include "netaug/error.hpp"

namespace netaug {
namespace {

// RandomSource::derive keys; each names an independent stream of the run.
enum Stream : std::uint64_t {
  kInitStream = 1,
  kShuffleStream = 2,
  kViewStream = 3,
  kClassifierStream = 4,
  kUnlabeledShuffleStream = 5,
  kUnlabeledAugStream = 6,
  kWeakStream = 7,
};

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
}

std::vector<std::size_t> shuffled_order(std::size_t n, RandomSource rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());
  return order;
}

Optimizer make_optimizer(const TrainConfig& cfg, std::size_t total_steps) {
  auto oc = cfg.optimizer;
  if (oc.cosine && oc.total_steps == 0) oc.total_steps = total_steps;
  return Optimizer(oc);
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

void check_labels(std::span<const int> labels, std::size_t num_classes) {
  std::vector<bool> seen(num_classes, false);
  for (int y : labels) {
    if (y < 0 || std::size_t(y) >= num_classes) {
      throw DimensionMismatch("label " + std::to_string(y) + " outside [0, " +
                              std::to_string(num_classes) + ")");
    }
    seen[std::size_t(y)] = true;
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (!seen[c]) throw MissingClass("no labeled sample for class " + std::to_string(c));
  }
}

ModelParams with_fresh_classifier(const ModelParams& init, std::size_t num_classes,
                                  std::uint64_t seed) {
  ModelParams params = init;
  params.projection.reset();
  auto rng = RandomSource::derive(seed, kClassifierStream);
  attach_classifier(params, num_classes, rng);
  return params;
}

/// One labeled minibatch as finetune and train_netfm see it.
struct LabeledBatch {
  Matrix x;
  std::vector<int> y;
};

LabeledBatch labeled_batch(std::span<const DirectionTrace> labeled,
                           std::span<const int> labels,
                           std::span<const std::size_t> idx, std::size_t epoch,
                           const TrainConfig& cfg, std::optional<double> weak_flip,
                           std::size_t input_length) {
  std::vector<DirectionTrace> views(idx.size());
  LabeledBatch b;
  b.y.resize(idx.size());
  parallel_for(idx.size(), cfg.threads, [&](std::size_t k) {
    const auto i = idx[k];
    if (weak_flip) {
      auto rng = RandomSource::derive(cfg.seed, kWeakStream, epoch * labeled.size() + i);
      views[k] = flip_augment(labeled[i], *weak_flip, rng);
    } else {
      views[k] = labeled[i];
    }
    b.y[k] = labels[i];
  });
  b.x = to_input_matrix(views, input_length);
  return b;
}

void axpy(ModelParams& y, double a, const ModelParams& x) {
  auto yb = parameter_blocks(y);
  const auto xb = parameter_blocks(x);
  for (std::size_t b = 0; b < yb.size(); ++b) {
    for (std::size_t i = 0; i < yb[b].size(); ++i) yb[b][i] += a * xb[b][i];
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (batch < 1) throw InvalidArgument("train: batch must be >= 1");
  if (!(optimizer.learning_rate >= 0.0)) {
    throw InvalidArgument("train: learning rate must be >= 0");
  }
}

ViewAugmenter ViewAugmenter::net_augment(AugmentConfig cfg, BurstSizeDistribution dist) {
  cfg.validate();
  return ViewAugmenter(Kind::kNet, cfg,
                       std::make_shared<const BurstSizeDistribution>(std::move(dist)));
}

ViewAugmenter ViewAugmenter::flip(double p_flip) {
  AugmentConfig cfg;
  cfg.p_flip = p_flip;
  cfg.validate();
  return ViewAugmenter(Kind::kFlip, cfg, nullptr);
}

ViewAugmenter ViewAugmenter::identity() {
  return ViewAugmenter(Kind::kIdentity, AugmentConfig{}, nullptr);
}

DirectionTrace ViewAugmenter::operator()(const DirectionTrace& t,
                                         RandomSource& rng) const {
  switch (kind_) {
    case Kind::kNet:
      return netaug::net_augment(t, cfg_, *dist_, rng);
    case Kind::kFlip:
      return flip_augment(t, cfg_.p_flip, rng);
    case Kind::kIdentity:
      break;
  }
  return t;
}

UnlabeledCorpus::UnlabeledCorpus(std::vector<DirectionTrace> traces)
    : traces_(std::move(traces)) {
  for (auto& t : traces_) t.set_label(std::nullopt);
}

ModelParams init_pretrain_model(const ModelDims& dims, std::uint64_t seed) {
  auto rng = RandomSource::derive(seed, kInitStream);
  auto params = init_encoder(dims, rng);
  attach_projection(params, dims.projection_hidden, dims.projection_dim(), rng);
  return params;
}

TrainResult pretrain(const UnlabeledCorpus& corpus, const ModelParams& init,
                     const TrainConfig& cfg, const ViewAugmenter& augment,
                     const SslConfig& ssl) {
  cfg.validate();
  ssl.validate();
  if (cfg.batch < 2) throw InvalidArgument("pretrain: batch must be >= 2");
  if (!init.projection) throw InvalidArgument("pretrain: model has no projection head");
  const auto traces = corpus.traces();
  if (traces.size() < cfg.batch) {
    throw InsufficientData("pretrain: " + std::to_string(traces.size()) +
                           " traces for batch " + std::to_string(cfg.batch));
  }
  for (const auto& t : traces) {
    if (t.label()) throw std::logic_error("pretrain: labeled trace reached pre-training");
  }

  TrainResult result{init, {}};
  auto& params = result.params;
  const auto n = traces.size();
  const auto steps = n / cfg.batch;
  auto opt = make_optimizer(cfg, steps * cfg.epochs);
  const auto length = params.input_length();

  std::vector<DirectionTrace> views(2 * cfg.batch);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order =
        shuffled_order(n, RandomSource::derive(cfg.seed, kShuffleStream, epoch));
    const auto first = result.history.step_loss.size();
    for (std::size_t s = 0; s < steps; ++s) {
      parallel_for(cfg.batch, cfg.threads, [&](std::size_t k) {
        const auto i = order[s * cfg.batch + k];
        auto rng = RandomSource::derive(cfg.seed, kViewStream, epoch * n + i);
        views[2 * k] = augment(traces[i], rng);
        views[2 * k + 1] = augment(traces[i], rng);
      });
      const Matrix x = to_input_matrix(views, length);
      auto grads = params.zeros_like();
      const double loss = contrastive_loss_grad(params, x, ssl.tau_s, &grads);
      opt.step(params, grads);
      result.history.step_loss.push_back(loss);
    }
    result.history.epoch_loss.push_back(
        mean(std::span(result.history.step_loss).subspan(first)));
  }
  return result;
}

TrainResult finetune(const ModelParams& init, std::span<const DirectionTrace> labeled,
                     std::size_t num_classes, const TrainConfig& cfg,
                     const FinetuneOptions& options) {
  cfg.validate();
  if (labeled.empty()) throw InsufficientData("finetune: no labeled traces");
  const auto labels = labels_of(labeled);
  check_labels(labels, num_classes);

  TrainResult result{with_fresh_classifier(init, num_classes, cfg.seed), {}};
  auto& params = result.params;
  const auto n = labeled.size();
  const auto steps = (n + cfg.batch - 1) / cfg.batch;
  auto opt = make_optimizer(cfg, steps * cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order =
        shuffled_order(n, RandomSource::derive(cfg.seed, kShuffleStream, epoch));
    const auto first = result.history.step_loss.size();
    for (std::size_t s = 0; s < steps; ++s) {
      const auto lo = s * cfg.batch;
      const auto idx = std::span(order).subspan(lo, std::min(cfg.batch, n - lo));
      const auto batch = labeled_batch(labeled, labels, idx, epoch, cfg,
                                       options.weak_flip, params.input_length());
      auto grads = params.zeros_like();
      const double loss = classification_loss_grad(params, batch.x, batch.y, &grads);
      opt.step(params, grads);
      result.history.step_loss.push_back(loss);
    }
    result.history.epoch_loss.push_back(
        mean(std::span(result.history.step_loss).subspan(first)));
  }
  return result;
}

TrainResult train_netfm(const ModelParams& init, std::span<const DirectionTrace> labeled,
                        const UnlabeledCorpus& unlabeled, std::size_t num_classes,
                        const TrainConfig& cfg, const SslConfig& ssl,
                        const AugmentConfig& strong, const BurstSizeDistribution& dist,
                        double p_flip_weak) {
  cfg.validate();
  ssl.validate();
  strong.validate();
  if (labeled.empty()) throw InsufficientData("netfm: no labeled traces");
  const auto labels = labels_of(labeled);
  check_labels(labels, num_classes);
  const auto n = labeled.size();
  const auto per_step = std::size_t(ssl.mu) * std::min(cfg.batch, n);
  const auto pool = unlabeled.traces();
  if (pool.size() < per_step) {
    throw InsufficientData("netfm: need " + std::to_string(per_step) +
                           " unlabeled traces per step, have " +
                           std::to_string(pool.size()));
  }

  TrainResult result{with_fresh_classifier(init, num_classes, cfg.seed), {}};
  auto& params = result.params;
  const auto steps = (n + cfg.batch - 1) / cfg.batch;
  auto opt = make_optimizer(cfg, steps * cfg.epochs);
  const auto length = params.input_length();

  std::vector<std::size_t> upool;
  std::size_t ucursor = 0;
  std::uint64_t ucycle = 0;
  std::uint64_t global_step = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order =
        shuffled_order(n, RandomSource::derive(cfg.seed, kShuffleStream, epoch));
    const auto first = result.history.step_loss.size();
    for (std::size_t s = 0; s < steps; ++s, ++global_step) {
      const auto lo = s * cfg.batch;
      const auto idx = std::span(order).subspan(lo, std::min(cfg.batch, n - lo));
      const auto batch =
          labeled_batch(labeled, labels, idx, epoch, cfg, p_flip_weak, length);
      auto grads = params.zeros_like();
      const double ls = classification_loss_grad(params, batch.x, batch.y, &grads);

      const auto count = std::size_t(ssl.mu) * idx.size();
      std::vector<std::size_t> uidx(count);
      for (auto& u : uidx) {
        if (ucursor == upool.size()) {
          upool = shuffled_order(
              pool.size(),
              RandomSource::derive(cfg.seed, kUnlabeledShuffleStream, ucycle++));
          ucursor = 0;
        }
        u = upool[ucursor++];
      }
      std::vector<DirectionTrace> weak(count);
      std::vector<DirectionTrace> strong_views(count);
      parallel_for(count, cfg.threads, [&](std::size_t j) {
        auto rng = RandomSource::derive(cfg.seed, kUnlabeledAugStream, global_step * per_step + j);
        weak[j] = flip_augment(pool[uidx[j]], p_flip_weak, rng);
        strong_views[j] = net_augment(pool[uidx[j]], strong, dist, rng);
      });
      const Matrix pw = predict_batch(params, weak);
      const Matrix xs = to_input_matrix(strong_views, length);
      const Matrix ps = softmax_rows(
          classifier_logits(params, encoder_forward(params, xs).output));
      const auto lu = fixmatch_unsupervised_loss(pw, ps, ssl.tau_f);

      auto grads_u = params.zeros_like();
      if (lu.retained > 0) {
        std::vector<double> weights(count);
        for (std::size_t j = 0; j < count; ++j) weights[j] = lu.mask[j] ? 1.0 : 0.0;
        classification_loss_grad(params, xs, lu.pseudo_labels, &grads_u, weights,
                                 double(count));
      }
      axpy(grads, ssl.lambda_u, grads_u);
      opt.step(params, grads);

      result.history.step_loss.push_back(fixmatch_total_loss(ls, lu.loss, ssl.lambda_u));
      result.history.supervised_loss.push_back(ls);
      result.history.unlabeled_loss.push_back(lu.loss);
      result.history.retained.push_back(lu.retained);
    }
    result.history.epoch_loss.push_back(
        mean(std::span(result.history.step_loss).subspan(first)));
  }
  return result;
}

std::vector<DirectionTrace> select_per_class(std::span<const DirectionTrace> traces,
                                             std::size_t n, std::uint64_t seed) {
  const auto order = shuffled_order(traces.size(), RandomSource(seed));
  std::map<Label, std::size_t> taken;
  std::vector<DirectionTrace> out;
  for (auto i : order) {
    const auto& t = traces[i];
    if (!t.label()) throw MissingLabel("select_per_class: unlabeled trace");
    auto& k = taken[*t.label()];
    if (n == 0 || k < n) {
      out.push_back(t);
      ++k;
    }
  }
  return out;
}

std::vector<int> labels_of(std::span<const DirectionTrace> traces) {
  std::vector<int> labels;
  labels.reserve(traces.size());
  for (const auto& t : traces) {
    if (!t.label()) throw MissingLabel("labeled trace expected");
    labels.push_back(*t.label());
  }
  return labels;
}

}  // namespace netaug
