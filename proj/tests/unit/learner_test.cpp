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

#include <gtest/gtest.h>

#include <random>

#include "netaug/error.hpp"
#include "netaug/evaluation.hpp"
#include "netaug/learner.hpp"
#include "netaug/synthgen.hpp"
#include "test_support.hpp"

using namespace netaug;

namespace {

constexpr std::size_t kLen = 64;

ModelDims small_dims(std::size_t input = kLen) {
  ModelDims d;
  d.input = input;
  d.hidden = {16};
  d.embedding = 8;
  d.projection_hidden = 8;
  return d;
}

std::vector<DirectionTrace> random_corpus(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  std::vector<DirectionTrace> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testkit::random_trace_between(gen, kLen, 30, kLen));
  }
  return out;
}

// Class c: one long incoming burst at a class-specific offset.
std::vector<DirectionTrace> labeled_toy(std::size_t classes, std::size_t per_class,
                                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<DirectionTrace> out;
  for (std::size_t k = 0; k < per_class; ++k) {
    for (std::size_t c = 0; c < classes; ++c) {
      std::vector<Cell> cells(kLen, 1);
      for (std::size_t i = 8 * c; i < 8 * c + 8; ++i) cells[i] = -1;
      std::bernoulli_distribution flip(0.05);
      for (auto& x : cells) {
        if (flip(gen)) x = Cell(-x);
      }
      out.emplace_back(std::move(cells), Label(c));
    }
  }
  return out;
}

TrainConfig quick(std::size_t batch, std::size_t epochs, double lr, std::uint64_t seed) {
  TrainConfig c;
  c.batch = batch;
  c.epochs = epochs;
  c.optimizer.learning_rate = lr;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Optimizer, SgdStep) {
  RandomSource rng(1);
  auto p = init_encoder(small_dims(), rng);
  auto g = p.zeros_like();
  g.encoder[0].weight.setConstant(2.0);
  auto before = p;
  Optimizer opt({OptimizerKind::kSgd, 0.1});
  opt.step(p, g);
  EXPECT_LT((p.encoder[0].weight - (before.encoder[0].weight.array() - 0.2).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  EXPECT_EQ(p.encoder[1].weight, before.encoder[1].weight);
}

TEST(Optimizer, AdamFirstStepIsSignedLearningRate) {
  RandomSource rng(2);
  auto p = init_encoder(small_dims(), rng);
  auto g = p.zeros_like();
  g.encoder[0].weight.setConstant(-3.0);
  auto before = p;
  Optimizer opt(OptimizerConfig{});
  opt.step(p, g);
  // m_hat / (sqrt(v_hat) + eps) = g / (|g| + eps).
  const double step = 1e-3 * 3.0 / (3.0 + 1e-8);
  EXPECT_LT((p.encoder[0].weight - (before.encoder[0].weight.array() + step).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(Optimizer, CosineDecaysToZero) {
  OptimizerConfig c;
  c.cosine = true;
  c.total_steps = 4;
  Optimizer opt(c);
  RandomSource rng(3);
  auto p = init_encoder(small_dims(), rng);
  auto g = p.zeros_like();
  EXPECT_DOUBLE_EQ(opt.current_learning_rate(), 1e-3);
  for (int i = 0; i < 2; ++i) opt.step(p, g);
  EXPECT_NEAR(opt.current_learning_rate(), 0.5e-3, 1e-15);
  for (int i = 0; i < 2; ++i) opt.step(p, g);
  EXPECT_NEAR(opt.current_learning_rate(), 0.0, 1e-15);
}

TEST(UnlabeledCorpus, StripsLabels) {
  auto labeled = labeled_toy(3, 2, 1);
  UnlabeledCorpus c(labeled);
  for (const auto& t : c.traces()) EXPECT_FALSE(t.label().has_value());
  EXPECT_EQ(c.size(), labeled.size());
}

TEST(Pretrain, ZeroLearningRateLeavesParams) {
  UnlabeledCorpus corpus(random_corpus(1, 40));
  auto init = init_pretrain_model(small_dims(), 1);
  auto dist = build_distribution(corpus.traces());
  auto r = pretrain(corpus, init, quick(8, 1, 0.0, 1),
                    ViewAugmenter::net_augment(AugmentConfig{}, dist), SslConfig{});
  EXPECT_EQ(r.params, init);
  EXPECT_EQ(r.history.step_loss.size(), 5u);
}

TEST(Pretrain, DeterministicAndIndependentOfThreads) {
  UnlabeledCorpus corpus(random_corpus(2, 36));
  auto init = init_pretrain_model(small_dims(), 2);
  auto dist = build_distribution(corpus.traces());
  auto aug = ViewAugmenter::net_augment(AugmentConfig{}, dist);
  auto cfg = quick(8, 3, 1e-2, 5);
  auto a = pretrain(corpus, init, cfg, aug, SslConfig{});
  auto b = pretrain(corpus, init, cfg, aug, SslConfig{});
  cfg.threads = 3;
  auto c = pretrain(corpus, init, cfg, aug, SslConfig{});
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.params, c.params);
  EXPECT_EQ(a.history.step_loss, c.history.step_loss);
  // Partial trailing batch dropped: 36 / 8 = 4 steps per epoch.
  EXPECT_EQ(a.history.step_loss.size(), 12u);
  EXPECT_NE(a.params, init);
}

TEST(Pretrain, Errors) {
  UnlabeledCorpus corpus(random_corpus(3, 5));
  auto init = init_pretrain_model(small_dims(), 3);
  EXPECT_THROW(pretrain(corpus, init, quick(8, 1, 1e-3, 1), ViewAugmenter::flip(0.1),
                        SslConfig{}),
               InsufficientData);
  EXPECT_THROW(pretrain(corpus, init, quick(1, 1, 1e-3, 1), ViewAugmenter::flip(0.1),
                        SslConfig{}),
               InvalidArgument);
}

TEST(Pretrain, LossDecreasesOnSyntheticData) {
  RandomSource rng(4);
  auto templates = make_templates(6, rng);
  const auto sup = superior_profile();
  auto timed = make_dataset(templates, std::span(&sup, 1), 20, rng);
  std::vector<DirectionTrace> traces;
  for (const auto& t : timed) traces.push_back(to_direction_trace(t, 200));
  UnlabeledCorpus corpus(traces);
  auto dist = build_distribution(corpus.traces());
  AugmentConfig aug;
  aug.low_cells = 100;
  aug.high_cells = 400;
  auto r = pretrain(corpus, init_pretrain_model(small_dims(200), 4), quick(24, 30, 1e-3, 4),
                    ViewAugmenter::net_augment(aug, dist), SslConfig{});
  ASSERT_EQ(r.history.epoch_loss.size(), 30u);
  EXPECT_LT(r.history.epoch_loss.back(), r.history.epoch_loss.front());
}

TEST(Finetune, ZeroLearningRateMatchesFreshHead) {
  auto labeled = labeled_toy(4, 2, 5);
  auto init = init_pretrain_model(small_dims(), 5);
  auto none = finetune(init, labeled, 4, quick(4, 0, 1e-3, 6));
  auto zero = finetune(init, labeled, 4, quick(4, 3, 0.0, 6));
  EXPECT_EQ(none.params, zero.params);
  EXPECT_FALSE(zero.params.projection.has_value());
  EXPECT_EQ(zero.params.num_classes(), 4u);
  EXPECT_EQ(predict_batch(none.params, labeled), predict_batch(zero.params, labeled));
}

TEST(Finetune, SeparableToyReachesFullTrainingAccuracy) {
  auto labeled = labeled_toy(5, 1, 6);
  auto init = init_pretrain_model(small_dims(), 6);
  auto r = finetune(init, labeled, 5, quick(5, 200, 1e-2, 7));
  EXPECT_EQ(closed_world_accuracy(predict_batch(r.params, labeled), labels_of(labeled)), 1.0);
  auto again = finetune(init, labeled, 5, quick(5, 200, 1e-2, 7));
  EXPECT_EQ(r.params, again.params);
}

TEST(Finetune, KeepsPartialBatchAndRejectsMissingClass) {
  auto labeled = labeled_toy(3, 3, 7);
  auto init = init_pretrain_model(small_dims(), 7);
  auto r = finetune(init, labeled, 3, quick(4, 2, 1e-3, 1));
  EXPECT_EQ(r.history.step_loss.size(), 6u);  // ceil(9 / 4) = 3 per epoch
  EXPECT_THROW(finetune(init, labeled, 4, quick(4, 1, 1e-3, 1)), MissingClass);
  std::vector<DirectionTrace> unlabeled = {DirectionTrace(std::vector<Cell>(kLen, 1))};
  EXPECT_THROW(finetune(init, unlabeled, 1, quick(4, 1, 1e-3, 1)), MissingLabel);
}

class NetFm : public ::testing::Test {
 protected:
  void SetUp() override {
    labeled = labeled_toy(3, 2, 8);
    pool = UnlabeledCorpus(random_corpus(9, 60));
    dist = build_distribution(pool.traces());
    init = init_pretrain_model(small_dims(), 8);
  }
  std::vector<DirectionTrace> labeled;
  UnlabeledCorpus pool{{}};
  BurstSizeDistribution dist{{1}, {1}};
  ModelParams init;
};

TEST_F(NetFm, ZeroLambdaMatchesWeakFinetune) {
  SslConfig ssl;
  ssl.lambda_u = 0.0;
  ssl.mu = 5;
  ssl.tau_f = 0.0;  // every pseudo-label retained, so the zeroed term is nontrivial
  auto cfg = quick(4, 5, 1e-2, 3);
  auto fm = train_netfm(init, labeled, pool, 3, cfg, ssl, AugmentConfig{}, dist, 0.1);
  auto ft = finetune(init, labeled, 3, cfg, FinetuneOptions{0.1});
  EXPECT_EQ(fm.params, ft.params);
  EXPECT_EQ(fm.history.supervised_loss, ft.history.step_loss);
}

TEST_F(NetFm, UnitThresholdContributesNothing) {
  SslConfig ssl;
  ssl.tau_f = 1.0;
  ssl.mu = 5;
  auto r = train_netfm(init, labeled, pool, 3, quick(4, 4, 1e-3, 4), ssl, AugmentConfig{},
                       dist, 0.1);
  ASSERT_EQ(r.history.unlabeled_loss.size(), 8u);
  for (std::size_t s = 0; s < 8; ++s) {
    EXPECT_EQ(r.history.unlabeled_loss[s], 0.0);
    EXPECT_EQ(r.history.retained[s], 0u);
    EXPECT_EQ(r.history.step_loss[s], r.history.supervised_loss[s]);
  }
}

TEST_F(NetFm, RetainedSeriesRecordedAndDeterministic) {
  SslConfig ssl;
  ssl.tau_f = 0.4;
  ssl.mu = 5;
  auto cfg = quick(4, 6, 1e-2, 5);
  auto a = train_netfm(init, labeled, pool, 3, cfg, ssl, AugmentConfig{}, dist, 0.1);
  auto b = train_netfm(init, labeled, pool, 3, cfg, ssl, AugmentConfig{}, dist, 0.1);
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.history.retained.size(), 12u);
  std::size_t total = 0;
  for (auto r : a.history.retained) {
    EXPECT_LE(r, 20u);
    total += r;
  }
  EXPECT_GT(total, 0u);
}

TEST_F(NetFm, InsufficientUnlabeled) {
  SslConfig ssl;  // mu = 19 needs 76 traces for batch 4
  EXPECT_THROW(train_netfm(init, labeled, pool, 3, quick(4, 1, 1e-3, 1), ssl,
                           AugmentConfig{}, dist, 0.1),
               InsufficientData);
}

TEST(SelectPerClass, CapsEachLabel) {
  auto labeled = labeled_toy(4, 6, 10);
  auto sel = select_per_class(labeled, 2, 1);
  ASSERT_EQ(sel.size(), 8u);
  std::vector<int> count(4, 0);
  for (int y : labels_of(sel)) ++count[std::size_t(y)];
  for (int c : count) EXPECT_EQ(c, 2);
  EXPECT_EQ(select_per_class(labeled, 0, 1).size(), labeled.size());
  EXPECT_EQ(sel, select_per_class(labeled, 2, 1));
}
