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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "netaug/random.hpp"
#include "netaug/trace.hpp"

namespace netaug {

/// Exact integer histogram of outgoing burst sizes, sampled by inverse CDF.
class BurstSizeDistribution {
 public:
  /// `support` strictly increasing and positive, `counts` positive and
  /// parallel; throws EmptyDistribution when empty, InvalidArgument
  /// otherwise.
  BurstSizeDistribution(std::vector<std::int32_t> support,
                        std::vector<std::uint64_t> counts);

  std::span<const std::int32_t> support() const noexcept { return support_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::span<const std::uint64_t> cumulative() const noexcept {
    return cumulative_;
  }
  std::uint64_t total() const noexcept { return cumulative_.back(); }

  double probability(std::int32_t size) const noexcept;

  std::int32_t sample(RandomSource& rng) const { return sample_at(rng.uniform01()); }
  /// Smallest support value whose cumulative share exceeds u, u in [0, 1).
  std::int32_t sample_at(double u) const noexcept;

  friend bool operator==(const BurstSizeDistribution&,
                         const BurstSizeDistribution&) = default;

 private:
  std::vector<std::int32_t> support_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> cumulative_;
};

/// Histogram over all positive bursts of every trace.
/// Throws NoOutgoingBursts if there are none.
BurstSizeDistribution build_distribution(std::span<const DirectionTrace> traces);

/// `.bdist` text: header `bdist v1`, then `size count` lines ascending.
void write_bdist(std::ostream& out, const BurstSizeDistribution& d);
BurstSizeDistribution read_bdist(std::istream& in);
void save_bdist(const std::filesystem::path& path, const BurstSizeDistribution& d);
BurstSizeDistribution load_bdist(const std::filesystem::path& path);

}  // namespace netaug
