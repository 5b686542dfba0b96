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

#include <algorithm>
#include <random>

#include "netaug/bursts.hpp"
#include "netaug/error.hpp"
#include "test_support.hpp"

using namespace netaug;

namespace {

// Independent run-length oracle over a plain vector.
std::vector<int> runs(const std::vector<Cell>& cells) {
  std::vector<int> out;
  for (Cell c : cells) {
    if (c == 0) continue;
    if (!out.empty() && (out.back() > 0) == (c > 0)) {
      out.back() += c;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

TEST(BurstSequence, RejectsInvalid) {
  EXPECT_THROW(BurstSequence({2, 0, -1}), InvalidArgument);
  EXPECT_THROW(BurstSequence({2, 3}), InvalidArgument);
  EXPECT_NO_THROW(BurstSequence({2, -3, 1}));
  EXPECT_EQ(BurstSequence::normalized(std::vector<BurstSize>{2, 3, 0, -1, -4, 2}),
            BurstSequence({5, -5, 2}));
}

TEST(ExtractBursts, Examples) {
  EXPECT_EQ(extract_bursts(DirectionTrace({1, 1, -1, -1, -1, 1, 0, 0})),
            BurstSequence({2, -3, 1}));
  EXPECT_EQ(extract_bursts(DirectionTrace({-1, -1, -1})), BurstSequence({-3}));
  EXPECT_TRUE(extract_bursts(DirectionTrace({0, 0, 0})).empty());
  // Interior zeros are skipped.
  EXPECT_EQ(extract_bursts(DirectionTrace({1, 0, 1, -1})), BurstSequence({2, -1}));
}

TEST(BurstsToCells, Examples) {
  EXPECT_EQ(bursts_to_cells(BurstSequence({2, -3, 1}), 8),
            DirectionTrace({1, 1, -1, -1, -1, 1, 0, 0}));
  EXPECT_EQ(bursts_to_cells(BurstSequence{}, 4), DirectionTrace({0, 0, 0, 0}));
  EXPECT_EQ(bursts_to_cells(BurstSequence({-6}), 4), DirectionTrace({-1, -1, -1, -1}));
}

TEST(SplitPrefix, BoundariesAndReassembly) {
  std::mt19937_64 gen(2);
  auto t = testkit::random_trace(gen, 50, 40);
  for (std::size_t k : {std::size_t(0), std::size_t(20), std::size_t(50)}) {
    auto [prefix, rest] = split_prefix(t, k);
    EXPECT_EQ(prefix.size(), k);
    prefix.insert(prefix.end(), rest.begin(), rest.end());
    EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), t.cells().begin(), t.cells().end()));
  }
  EXPECT_TRUE(split_prefix(t, 0).prefix.empty());
  EXPECT_TRUE(split_prefix(t, 50).rest.empty());
  EXPECT_THROW(split_prefix(t, 51), InvalidArgument);
}

TEST(Bursts, RoundTripOnSuffixZeroTraces) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::size_t> len(1, 600);
  for (int i = 0; i < 2000; ++i) {
    const auto n = len(gen);
    auto t = testkit::random_trace_between(gen, n, 0, n);
    EXPECT_EQ(bursts_to_cells(extract_bursts(t), n), t);
  }
}

TEST(Bursts, MatchesRunOracleAndAlternates) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> cell(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    // Arbitrary cells, interior zeros included.
    std::vector<Cell> cells(std::size_t(1 + i % 200));
    for (auto& c : cells) c = Cell(cell(gen));
    auto b = extract_bursts(std::span<const Cell>(cells));
    auto oracle = runs(cells);
    ASSERT_EQ(b.size(), oracle.size());
    std::int64_t incoming = 0;
    for (Cell c : cells) incoming += (c < 0);
    for (std::size_t k = 0; k < b.size(); ++k) {
      EXPECT_EQ(b[k], oracle[k]);
      EXPECT_NE(b[k], 0);
      if (k > 0) EXPECT_NE(b[k] > 0, b[k - 1] > 0);
    }
    EXPECT_EQ(b.incoming_cells(), incoming);
  }
}
