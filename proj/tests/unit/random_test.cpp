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
#include <numeric>
#include <set>

#include "netaug/random.hpp"

using namespace netaug;

TEST(RandomSource, SameSeedSameStream) {
  RandomSource a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(RandomSource, DerivedStreamsAreDistinct) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    firsts.insert(RandomSource::derive(7, k).next_u64());
    firsts.insert(RandomSource::derive(7, 1, k).next_u64());
  }
  EXPECT_EQ(firsts.size(), 2000u);
  EXPECT_EQ(RandomSource::derive(7, 3, 4).next_u64(), RandomSource::derive(7, 3, 4).next_u64());
}

TEST(RandomSource, Uniform01Range) {
  RandomSource r(1);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(RandomSource, UniformIntIsInclusiveAndUnbiased) {
  RandomSource r(2);
  std::vector<int> hits(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.uniform_int(3, 9);
    ASSERT_GE(v, 3);
    ASSERT_LE(v, 9);
    ++hits[std::size_t(v - 3)];
  }
  for (int h : hits) EXPECT_NEAR(h / double(n), 1.0 / 7.0, 0.01);
  EXPECT_EQ(r.uniform_int(5, 5), 5);
}

TEST(RandomSource, NormalMoments) {
  RandomSource r(3);
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(RandomSource, ShuffleIsPermutation) {
  RandomSource r(4);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  r.shuffle(w.begin(), w.end());
  EXPECT_NE(w, v);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(w, v);
}
