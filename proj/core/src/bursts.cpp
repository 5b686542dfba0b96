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

#include "netaug/bursts.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "netaug/error.hpp"

namespace netaug {

BurstSequence::BurstSequence(std::vector<BurstSize> bursts)
    : bursts_(std::move(bursts)) {
  for (std::size_t i = 0; i < bursts_.size(); ++i) {
    if (bursts_[i] == 0) {
      throw InvalidArgument("burst " + std::to_string(i) + " is zero");
    }
    if (i > 0 && (bursts_[i] > 0) == (bursts_[i - 1] > 0)) {
      throw InvalidArgument("bursts " + std::to_string(i - 1) + " and " +
                            std::to_string(i) + " share a direction");
    }
  }
}

BurstSequence BurstSequence::normalized(std::span<const BurstSize> raw) {
  BurstSequence out;
  for (BurstSize b : raw) {
    if (b == 0) continue;
    if (!out.bursts_.empty() && (out.bursts_.back() > 0) == (b > 0)) {
      out.bursts_.back() += b;
    } else {
      out.bursts_.push_back(b);
    }
  }
  return out;
}

std::int64_t BurstSequence::incoming_cells() const noexcept {
  std::int64_t n = 0;
  for (BurstSize b : bursts_) {
    if (b < 0) n -= b;
  }
  return n;
}

std::int64_t BurstSequence::outgoing_cells() const noexcept {
  std::int64_t n = 0;
  for (BurstSize b : bursts_) {
    if (b > 0) n += b;
  }
  return n;
}

BurstSequence extract_bursts(std::span<const Cell> cells) {
  std::vector<BurstSize> runs;
  for (Cell c : cells) {
    if (c == 0) continue;
    if (!runs.empty() && (runs.back() > 0) == (c > 0)) {
      runs.back() += c;
    } else {
      runs.push_back(c);
    }
  }
  return BurstSequence(std::move(runs));
}

std::vector<Cell> expand_bursts(std::span<const BurstSize> bursts) {
  std::size_t total = 0;
  for (BurstSize b : bursts) total += std::size_t(std::abs(b));
  std::vector<Cell> cells;
  cells.reserve(total);
  for (BurstSize b : bursts) {
    cells.insert(cells.end(), std::size_t(std::abs(b)), b < 0 ? Cell{-1} : Cell{1});
  }
  return cells;
}

DirectionTrace bursts_to_cells(const BurstSequence& b, std::size_t length) {
  std::vector<Cell> cells(length, 0);
  std::size_t pos = 0;
  for (BurstSize v : b.bursts()) {
    const auto n = std::min(std::size_t(std::abs(v)), length - pos);
    std::fill_n(cells.begin() + std::ptrdiff_t(pos), n, v < 0 ? Cell{-1} : Cell{1});
    pos += n;
    if (pos == length) break;
  }
  return DirectionTrace(std::move(cells));
}

PrefixSplit split_prefix(const DirectionTrace& t, std::size_t k) {
  if (k > t.length()) throw InvalidArgument("split_prefix: k exceeds length");
  const auto cells = t.cells();
  return PrefixSplit{{cells.begin(), cells.begin() + std::ptrdiff_t(k)},
                     {cells.begin() + std::ptrdiff_t(k), cells.end()}};
}

}  // namespace netaug
