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
#include "netaug/trace.hpp"
#include "test_support.hpp"

using namespace netaug;

namespace {

TimedTrace timed(std::vector<std::tuple<double, int, unsigned>> cells,
                 std::optional<Label> label = std::nullopt) {
  std::vector<TimedCell> out;
  for (auto [t, d, s] : cells) out.push_back({t, Cell(d), s});
  return TimedTrace(std::move(out), label);
}

DirectionTrace with_nonzero(std::size_t n, Label label, std::size_t length = 200) {
  std::vector<Cell> cells(length, 0);
  for (std::size_t i = 0; i < n; ++i) cells[i] = (i % 3 == 0) ? 1 : -1;
  return DirectionTrace(std::move(cells), label);
}

}  // namespace

TEST(DirectionTrace, RejectsOutOfRangeCells) {
  EXPECT_THROW(DirectionTrace({1, 2, 0}), InvalidArgument);
  EXPECT_NO_THROW(DirectionTrace({1, -1, 0}));
}

TEST(DirectionTrace, ZeroLayout) {
  EXPECT_TRUE(DirectionTrace({0, 0, 1, -1, 0}).has_canonical_zero_layout());
  EXPECT_TRUE(DirectionTrace({0, 0, 0}).has_canonical_zero_layout());
  EXPECT_FALSE(DirectionTrace({1, 0, -1}).has_canonical_zero_layout());
}

TEST(TimedTrace, Invariants) {
  EXPECT_THROW(TimedTrace({}), InvalidArgument);
  EXPECT_THROW(timed({{1.0, 1, 512}, {0.5, -1, 512}}), InvalidArgument);
  EXPECT_THROW(timed({{0.0, 0, 512}}), InvalidArgument);
  EXPECT_NO_THROW(timed({{0.0, 1, 512}, {0.0, -1, 514}}));
}

TEST(ToDirectionTrace, PadsTruncatesAndKeepsLabel) {
  auto t = timed({{0, 1, 512}, {0.1, -1, 512}, {0.2, -1, 512}}, 4);
  auto d = to_direction_trace(t, 5);
  EXPECT_EQ(d, DirectionTrace({1, -1, -1, 0, 0}, 4));

  std::vector<std::tuple<double, int, unsigned>> seven(7, {0.0, 1, 512});
  EXPECT_EQ(to_direction_trace(timed(seven), 5), DirectionTrace({1, 1, 1, 1, 1}));

  std::vector<std::tuple<double, int, unsigned>> alt;
  std::vector<Cell> expect;
  for (int i = 0; i < 5000; ++i) {
    alt.emplace_back(i * 0.001, i % 2 ? -1 : 1, 512);
    expect.push_back(i % 2 ? -1 : 1);
  }
  EXPECT_EQ(to_direction_trace(timed(alt), 5000), DirectionTrace(expect));
}

TEST(ToDirectionTrace, IdempotentUnderRenormalize) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    auto t = testkit::random_trace_between(gen, 300, 0, 400);
    auto once = renormalize(t, 300);
    EXPECT_EQ(renormalize(once, 300), once);
  }
}

TEST(Ncm, HandArithmetic) {
  // 400000 incoming bytes over 10 s: exactly the 40 kBps boundary.
  std::vector<std::tuple<double, int, unsigned>> cells;
  cells.emplace_back(0.0, 1, 512);
  for (int i = 0; i < 625; ++i) cells.emplace_back(10.0 * (i + 1) / 625.0, -1, 640);
  EXPECT_DOUBLE_EQ(compute_ncm(timed(cells)).value, 40000.0);

  EXPECT_EQ(compute_ncm(timed({{0, 1, 512}, {5.0, 1, 512}})).value, 0.0);
  EXPECT_EQ(compute_ncm(timed({{0, -1, 512}, {1.0, -1, 512}})).value, 1024.0);
}

TEST(Ncm, DegenerateTraces) {
  EXPECT_THROW(compute_ncm(timed({{0, -1, 512}})), DegenerateTrace);
  EXPECT_THROW(compute_ncm(timed({{2.0, -1, 512}, {2.0, 1, 512}})), DegenerateTrace);
}

TEST(Ncm, TranslationInvariant) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dt(0.0, 0.05);
  std::bernoulli_distribution dir(0.6);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<TimedCell> a;
    double t = 0.0;
    for (int i = 0; i < 100; ++i) {
      t += dt(gen);
      a.push_back({t, dir(gen) ? Cell(-1) : Cell(1), 512});
    }
    auto b = a;
    for (auto& c : b) c.timestamp += 1000.0;
    EXPECT_NEAR(compute_ncm(TimedTrace(a)).value, compute_ncm(TimedTrace(b)).value,
                1e-6 * compute_ncm(TimedTrace(a)).value);
  }
}

TEST(PartitionByNcm, BoundaryGoesSuperior) {
  // One incoming cell over 1 s, so NCM equals its byte size.
  auto tr = [&](unsigned bytes) { return timed({{0.0, -1, bytes}, {1.0, 1, 512}}); };
  std::vector<TimedTrace> in = {tr(39999), tr(40000), tr(50000)};
  auto p = partition_by_ncm(in);
  ASSERT_EQ(p.superior.size(), 2u);
  ASSERT_EQ(p.inferior.size(), 1u);
  EXPECT_EQ(p.inferior[0], in[0]);
  EXPECT_EQ(p.superior[0], in[1]);
  EXPECT_EQ(p.superior[1], in[2]);

  auto empty = partition_by_ncm(std::vector<TimedTrace>{});
  EXPECT_TRUE(empty.superior.empty() && empty.inferior.empty());

  std::vector<TimedTrace> same(4, tr(41000));
  EXPECT_EQ(partition_by_ncm(same).superior.size(), 4u);
}

TEST(PartitionByNcm, DegenerateCarriesIndex) {
  std::vector<TimedTrace> in = {timed({{0.0, -1, 512}, {1.0, 1, 512}}),
                                timed({{0.0, -1, 512}})};
  try {
    partition_by_ncm(in);
    FAIL();
  } catch (const DegenerateTrace& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(FilterTraces, ClosedWorldMedianRule) {
  // Sizes [100, 100, 100, 10]: lower median 100, cutoff 20, drops the 10.
  std::vector<DirectionTrace> in = {with_nonzero(100, 0), with_nonzero(100, 0),
                                    with_nonzero(10, 0), with_nonzero(100, 0)};
  auto out = filter_traces(in, FilterPolicy{});
  ASSERT_EQ(out.size(), 3u);
  for (const auto& t : out) EXPECT_EQ(t.nonzero_count(), 100u);
}

TEST(FilterTraces, OpenWorldMinCellsIsStrict) {
  std::vector<DirectionTrace> in = {with_nonzero(19, -1), with_nonzero(20, -1),
                                    with_nonzero(21, -1)};
  FilterPolicy p{WorldMode::kOpen, 0.2, 20};
  auto out = filter_traces(in, p);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].nonzero_count(), 20u);
  EXPECT_EQ(out[1].nonzero_count(), 21u);
}

TEST(FilterTraces, EmptyTracesAlwaysDropped) {
  std::vector<DirectionTrace> in = {with_nonzero(0, 1), with_nonzero(50, 1)};
  EXPECT_EQ(filter_traces(in, FilterPolicy{}).size(), 1u);
  FilterPolicy open{WorldMode::kOpen, 0.2, 1};
  EXPECT_EQ(filter_traces(in, open).size(), 1u);
}

TEST(FilterTraces, MissingLabelAndPolicyValidation) {
  std::vector<DirectionTrace> in = {DirectionTrace({1, -1})};
  EXPECT_THROW(filter_traces(in, FilterPolicy{}), MissingLabel);
  EXPECT_THROW(filter_traces(in, FilterPolicy{WorldMode::kClosed, 1.0, 20}),
               InvalidArgument);
  EXPECT_THROW(filter_traces(in, FilterPolicy{WorldMode::kOpen, 0.2, 0}), InvalidArgument);
}

TEST(FilterTraces, NeverIncreasesPerLabelCounts) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<DirectionTrace> in;
    for (int i = 0; i < 30; ++i) {
      auto t = testkit::random_trace_between(gen, 100, 0, 100);
      t.set_label(lab(gen));
      in.push_back(t);
    }
    auto out = filter_traces(in, FilterPolicy{});
    for (int c = 0; c < 4; ++c) {
      auto count = [&](const auto& v) {
        return std::count_if(v.begin(), v.end(),
                             [&](const DirectionTrace& t) { return *t.label() == c; });
      };
      EXPECT_LE(count(out), count(in));
    }
  }
}

TEST(LowerMedian, EvenCountTakesLower) {
  EXPECT_EQ(lower_median({4, 1, 3, 2}), 2u);
  EXPECT_EQ(lower_median({7}), 7u);
  EXPECT_THROW(lower_median({}), InvalidArgument);
}
