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

#include <array>
#include <numeric>
#include <set>
#include <random>

#include "netaug/augment.hpp"
#include "netaug/error.hpp"
#include "test_support.hpp"

using namespace netaug;

namespace {

const BurstSizeDistribution& small_dist() {
  static const BurstSizeDistribution d({1, 2, 3, 4}, {5, 3, 2, 1});
  return d;
}

AugmentConfig identity_config() {
  AugmentConfig c;
  c.shift_max = 0;
  c.r_upsample = 0.0;
  c.r_downsample = 0.0;
  c.r_insert = 0.0;
  c.r_merge = 0.0;
  return c;
}

std::int64_t incoming_sum(const BurstSequence& b) { return b.incoming_cells(); }

std::int64_t outgoing_sum(const BurstSequence& b) { return b.outgoing_cells(); }

BurstSequence random_bursts(std::mt19937_64& gen, std::size_t pairs) {
  std::uniform_int_distribution<int> out(1, 5), in(1, 40);
  std::vector<BurstSize> b;
  for (std::size_t i = 0; i < pairs; ++i) {
    b.push_back(out(gen));
    b.push_back(-in(gen));
  }
  return BurstSequence(std::move(b));
}

}  // namespace

TEST(AugmentConfig, Validation) {
  EXPECT_NO_THROW(AugmentConfig{}.validate());
  AugmentConfig c;
  c.n_merge = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.r_insert = 1.5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.low_cells = c.high_cells;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.shift_max = -1;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(NetAugment, IdentityConfiguration) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 200; ++i) {
    auto t = testkit::random_trace_between(gen, 300, 21, 300);
    RandomSource rng{std::uint64_t(i)};
    EXPECT_EQ(net_augment(t, identity_config(), small_dist(), rng), t);
  }
}

TEST(NetAugment, PrefixPreservedWhenNotShifted) {
  std::mt19937_64 gen(2);
  AugmentConfig cfg;
  for (int i = 0; i < 500; ++i) {
    auto t = testkit::random_trace_between(gen, 400, 21, 400);
    for (auto m : {Manipulation::kModifyIncoming, Manipulation::kMergeIncoming,
                   Manipulation::kInsertOutgoing}) {
      RandomSource rng{std::uint64_t(i)};
      auto out = net_augment_with(t, m, cfg, small_dist(), rng, 0);
      ASSERT_EQ(out.length(), t.length());
      EXPECT_TRUE(std::equal(t.cells().begin(), t.cells().begin() + 20, out.cells().begin()));
    }
  }
}

TEST(NetAugment, DrawnShiftZeroKeepsPrefix) {
  std::mt19937_64 gen(3);
  AugmentConfig cfg;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto t = testkit::random_trace_between(gen, 300, 50, 300);
    RandomSource rng(seed);
    AugmentRecord rec;
    auto out = net_augment(t, cfg, small_dist(), rng, &rec);
    EXPECT_GE(rec.shift, 0);
    EXPECT_LE(rec.shift, cfg.shift_max);
    EXPECT_EQ(out.leading_zeros(), std::size_t(rec.shift));
    if (rec.shift == 0) {
      ++checked;
      EXPECT_TRUE(std::equal(t.cells().begin(), t.cells().begin() + 20, out.cells().begin()));
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(NetAugment, DeterministicPerSeed) {
  std::mt19937_64 gen(4);
  auto t = testkit::random_trace(gen, 500, 450);
  RandomSource a(42), b(42);
  EXPECT_EQ(net_augment(t, AugmentConfig{}, small_dist(), a),
            net_augment(t, AugmentConfig{}, small_dist(), b));
}

TEST(NetAugment, ManipulationChoiceIsUniform) {
  std::mt19937_64 gen(5);
  auto t = testkit::random_trace(gen, 200, 150);
  std::array<int, 3> hits{};
  for (std::uint64_t s = 0; s < 3000; ++s) {
    RandomSource rng(s);
    AugmentRecord rec;
    net_augment(t, AugmentConfig{}, small_dist(), rng, &rec);
    ++hits[std::size_t(rec.manipulation)];
  }
  for (int h : hits) EXPECT_NEAR(h / 3000.0, 1.0 / 3.0, 0.04);
}

TEST(NetAugment, TooShort) {
  std::vector<Cell> cells(100, 0);
  for (int i = 0; i < 20; ++i) cells[std::size_t(i)] = 1;
  RandomSource rng(0);
  EXPECT_THROW(net_augment(DirectionTrace(cells), AugmentConfig{}, small_dist(), rng),
               TraceTooShort);
  cells[20] = -1;
  EXPECT_NO_THROW(net_augment(DirectionTrace(cells), AugmentConfig{}, small_dist(), rng));
}

TEST(ModifyIncoming, Examples) {
  AugmentConfig cfg;
  const BurstSequence b({3, -8, 2, -20});
  // 900 nonzero cells: delta forced to +r_upsample, so sizes never shrink.
  for (std::uint64_t s = 0; s < 200; ++s) {
    RandomSource rng(s);
    auto out = modify_incoming_burst_sizes(b, 900, cfg, rng);
    EXPECT_EQ(out[0], 3);
    EXPECT_EQ(out[1], -8);
    EXPECT_EQ(out[2], 2);
    EXPECT_LE(out[3], -20);
    EXPECT_GE(out[3], -40);
  }
  for (std::uint64_t s = 0; s < 200; ++s) {
    RandomSource rng(s);
    auto out = modify_incoming_burst_sizes(b, 5000, cfg, rng);
    EXPECT_GE(out[3], -20);
    EXPECT_LE(out[3], -10);
  }
  EXPECT_EQ(scale_incoming_burst(-20, 1.0, 1.0), -40);
  EXPECT_EQ(scale_incoming_burst(-20, 0.0, 1.0), -20);
  EXPECT_EQ(scale_incoming_burst(-10, 0.25, -0.5), -9);  // -8.75 rounds to -9
  EXPECT_EQ(scale_incoming_burst(-1, 1.0, -1.0), -1);
}

TEST(ModifyIncoming, MiddleBandUsesBothDirections) {
  AugmentConfig cfg;
  const BurstSequence b({1, -100});
  int up = 0, down = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    RandomSource rng(s);
    auto v = modify_incoming_burst_sizes(b, 2000, cfg, rng)[1];
    up += v < -100;
    down += v > -100;
  }
  EXPECT_GT(up, 150);
  EXPECT_GT(down, 150);
}

TEST(InsertOutgoing, Examples) {
  AugmentConfig cfg;
  cfg.r_insert = 0.0;
  std::mt19937_64 gen(6);
  auto b = random_bursts(gen, 30);
  RandomSource rng(1);
  EXPECT_EQ(insert_outgoing_bursts(b, cfg, small_dist(), rng), b);

  auto split = split_incoming_burst(-10, 3, 4);
  EXPECT_EQ(split, (std::vector<BurstSize>{-3, 4, -7}));
  EXPECT_EQ(-(split[0] + split[2]), 10);

  cfg.r_insert = 1.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    RandomSource r(s);
    EXPECT_EQ(insert_outgoing_bursts(BurstSequence({2, -6, 1}), cfg, small_dist(), r),
              BurstSequence({2, -6, 1}));
  }
}

TEST(InsertOutgoing, PositionRange) {
  AugmentConfig cfg;
  cfg.r_insert = 1.0;
  std::set<int> positions;
  for (std::uint64_t s = 0; s < 500; ++s) {
    RandomSource r(s);
    auto out = insert_outgoing_bursts(BurstSequence({-9}), cfg, small_dist(), r);
    ASSERT_EQ(out.size(), 3u);
    positions.insert(-out[0]);
    EXPECT_EQ(out[0] + out[2], -9);
    EXPECT_GT(small_dist().probability(out[1]), 0.0);
  }
  EXPECT_EQ(positions, (std::set<int>{3, 4, 5, 6}));
}

TEST(MergeIncoming, Examples) {
  AugmentConfig cfg;
  cfg.r_merge = 0.0;
  std::mt19937_64 gen(7);
  auto b = random_bursts(gen, 30);
  RandomSource rng(1);
  EXPECT_EQ(merge_incoming_bursts(b, cfg, rng), b);

  auto merged = merge_at(BurstSequence({-3, 2, -4, 1, -5}), 0, 2);
  EXPECT_EQ(merged, BurstSequence({-7, 1, -5}));
  EXPECT_EQ(merged.incoming_cells(), 12);

  cfg.r_merge = 1.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    RandomSource r(s);
    EXPECT_EQ(merge_incoming_bursts(BurstSequence({2, -5, 3}), cfg, r),
              BurstSequence({2, -5, 3}));
  }
  EXPECT_EQ(merge_at(BurstSequence({-1, 1, -2}), 0, 5), BurstSequence({-3}));
  EXPECT_THROW(merge_at(BurstSequence({1, -2}), 0, 2), InvalidArgument);
}

TEST(Manipulations, ConserveIncomingAndStayValid) {
  std::mt19937_64 gen(8);
  AugmentConfig cfg;
  cfg.r_insert = 0.5;
  cfg.r_merge = 0.4;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    auto b = random_bursts(gen, 1 + s % 40);
    RandomSource r1(s), r2(s + 1);
    auto ins = insert_outgoing_bursts(b, cfg, small_dist(), r1);
    auto mer = merge_incoming_bursts(b, cfg, r2);
    // The constructor re-checks the nonzero/alternating invariant.
    for (const auto* seq : {&ins, &mer}) {
      const std::vector<BurstSize> raw(seq->bursts().begin(), seq->bursts().end());
      EXPECT_NO_THROW(BurstSequence{raw});
    }
    EXPECT_EQ(incoming_sum(ins), incoming_sum(b));
    EXPECT_EQ(incoming_sum(mer), incoming_sum(b));
    EXPECT_GE(outgoing_sum(ins), outgoing_sum(b));
    EXPECT_LE(outgoing_sum(mer), outgoing_sum(b));
  }
}

TEST(ShiftTrace, AddsLeadingZerosOnFullTraces) {
  std::mt19937_64 gen(9);
  for (std::size_t n = 0; n <= 10; ++n) {
    auto t = testkit::random_trace(gen, 100, 100);
    auto s = shift_trace(t, n);
    EXPECT_EQ(s.length(), 100u);
    EXPECT_EQ(s.leading_zeros(), t.leading_zeros() + n);
    EXPECT_TRUE(std::equal(t.cells().begin(), t.cells().end() - std::ptrdiff_t(n),
                           s.cells().begin() + std::ptrdiff_t(n)));
  }
}

TEST(FlipAugment, Extremes) {
  std::mt19937_64 gen(10);
  auto t = testkit::random_trace(gen, 200, 150);
  RandomSource rng(1);
  EXPECT_EQ(flip_augment(t, 0.0, rng), t);
  auto neg = flip_augment(t, 1.0, rng);
  for (std::size_t i = 0; i < t.length(); ++i) EXPECT_EQ(neg.cells()[i], -t.cells()[i]);
  EXPECT_THROW(flip_augment(t, 1.1, rng), InvalidArgument);
}

TEST(FlipAugment, FlippedFractionConcentrates) {
  std::vector<Cell> cells(100000, 1);
  RandomSource rng(11);
  auto out = flip_augment(DirectionTrace(cells), 0.1, rng);
  const auto flipped = out.incoming_count();
  EXPECT_NEAR(double(flipped) / 1e5, 0.1, 0.01);
}
