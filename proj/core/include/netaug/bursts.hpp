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

#include <cstdint>
#include <span>
#include <vector>

#include "netaug/trace.hpp"

namespace netaug {

/// Signed run length; negative = incoming run, positive = outgoing run.
using BurstSize = std::int32_t;

/// Maximal same-direction runs of a trace. No element is zero and
/// neighbours have opposite signs.
class BurstSequence {
 public:
  BurstSequence() = default;
  /// Throws InvalidArgument unless the values already satisfy the
  /// nonzero/alternating invariant.
  explicit BurstSequence(std::vector<BurstSize> bursts);

  /// Drops zeros and sums adjacent same-sign entries. Accepts any input.
  static BurstSequence normalized(std::span<const BurstSize> raw);

  std::span<const BurstSize> bursts() const noexcept { return bursts_; }
  std::size_t size() const noexcept { return bursts_.size(); }
  bool empty() const noexcept { return bursts_.empty(); }
  BurstSize operator[](std::size_t i) const noexcept { return bursts_[i]; }

  std::int64_t incoming_cells() const noexcept;
  std::int64_t outgoing_cells() const noexcept;

  friend bool operator==(const BurstSequence&, const BurstSequence&) = default;

 private:
  std::vector<BurstSize> bursts_;
};

BurstSequence extract_bursts(std::span<const Cell> cells);
inline BurstSequence extract_bursts(const DirectionTrace& t) {
  return extract_bursts(t.cells());
}

/// Expands every burst to |size| cells of its sign, without length limit.
std::vector<Cell> expand_bursts(std::span<const BurstSize> bursts);

/// Expands and truncates/zero-pads to `length`.
DirectionTrace bursts_to_cells(const BurstSequence& b, std::size_t length);

struct PrefixSplit {
  std::vector<Cell> prefix;
  std::vector<Cell> rest;
};

/// First k cells verbatim and the remainder. Requires k <= length.
PrefixSplit split_prefix(const DirectionTrace& t, std::size_t k);

}  // namespace netaug
