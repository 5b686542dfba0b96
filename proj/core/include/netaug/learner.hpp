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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "netaug/augment.hpp"
#include "netaug/distribution.hpp"
#include "netaug/model.hpp"
#include "netaug/optimizer.hpp"
#include "netaug/ssl.hpp"

namespace netaug {

struct TrainConfig {
  std::size_t batch = 64;
  std::size_t epochs = 30;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  /// Labeled traces per class taken by select_per_class; 0 keeps all.
  std::size_t n_labeled = 0;
  /// Worker cap for per-trace augmentation; results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

/// Produces one augmented view per call.
class ViewAugmenter {
 public:
  static ViewAugmenter net_augment(AugmentConfig cfg, BurstSizeDistribution dist);
  static ViewAugmenter flip(double p_flip);
  static ViewAugmenter identity();

  DirectionTrace operator()(const DirectionTrace& t, RandomSource& rng) const;

 private:
  enum class Kind { kNet, kFlip, kIdentity };
  ViewAugmenter(Kind kind, AugmentConfig cfg,
                std::shared_ptr<const BurstSizeDistribution> dist)
      : kind_(kind), cfg_(cfg), dist_(std::move(dist)) {}

  Kind kind_;
  AugmentConfig cfg_;
  std::shared_ptr<const BurstSizeDistribution> dist_;
};

/// Label-free view of a corpus; the only input type pre-training accepts.
class UnlabeledCorpus {
 public:
  explicit UnlabeledCorpus(std::vector<DirectionTrace> traces);

  std::span<const DirectionTrace> traces() const noexcept { return traces_; }
  std::size_t size() const noexcept { return traces_.size(); }

 private:
  std::vector<DirectionTrace> traces_;
};

struct TrainHistory {
  std::vector<double> step_loss;
  std::vector<double> epoch_loss;  // mean of step_loss within each epoch
  // NetFM only.
  std::vector<double> supervised_loss;
  std::vector<double> unlabeled_loss;
  std::vector<std::size_t> retained;
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

/// Fresh encoder plus projection head drawn from `seed`.
ModelParams init_pretrain_model(const ModelDims& dims, std::uint64_t seed);

/// Contrastive pre-training: each minibatch of N traces yields 2N views
/// (two independent augmentations per trace); the encoder and projection
/// head descend on NT-Xent. Partial trailing batches are dropped.
/// Throws InsufficientData when the corpus is smaller than one batch.
TrainResult pretrain(const UnlabeledCorpus& corpus, const ModelParams& init,
                     const TrainConfig& cfg, const ViewAugmenter& augment,
                     const SslConfig& ssl);

struct FinetuneOptions {
  /// Flip probability applied to every labeled batch; none disables it.
  std::optional<double> weak_flip;
};

/// Drops any projection head, attaches a freshly initialized classifier for
/// `num_classes` classes and trains every weight with cross-entropy.
/// Throws MissingClass when some class in [0, num_classes) has no sample.
TrainResult finetune(const ModelParams& init, std::span<const DirectionTrace> labeled,
                     std::size_t num_classes, const TrainConfig& cfg,
                     const FinetuneOptions& options = {});

/// FixMatch-style training: weak flips on the labeled batch and on mu times
/// as many unlabeled traces, NetAugment as the strong view, loss
/// l_s + lambda_u * l_u. Steps follow the labeled minibatches of finetune,
/// so lambda_u = 0 reproduces finetune with weak_flip = p_flip_weak.
TrainResult train_netfm(const ModelParams& init, std::span<const DirectionTrace> labeled,
                        const UnlabeledCorpus& unlabeled, std::size_t num_classes,
                        const TrainConfig& cfg, const SslConfig& ssl,
                        const AugmentConfig& strong, const BurstSizeDistribution& dist,
                        double p_flip_weak);

/// Up to n traces of every label, in input order after a seeded shuffle.
std::vector<DirectionTrace> select_per_class(std::span<const DirectionTrace> traces,
                                             std::size_t n, std::uint64_t seed);

/// Labels of a labeled set; throws MissingLabel on an unlabeled trace.
std::vector<int> labels_of(std::span<const DirectionTrace> traces);

}  // namespace netaug
