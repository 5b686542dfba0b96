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
#include <string>

#include "netaug/bursts.hpp"
#include "netaug/distribution.hpp"
#include "netaug/random.hpp"
#include "netaug/trace.hpp"

namespace netaug {

/// NetAugment and FlipAugment hyperparameters.
struct AugmentConfig {
  int shift_max = 10;
  double r_upsample = 1.0;
  double r_downsample = 0.5;
  double r_insert = 0.3;
  int burst_size_threshold = 10;
  int n_merge = 5;
  double r_merge = 0.1;
  std::size_t preserve_prefix = 20;
  double p_flip = 0.1;
  std::size_t low_cells = 1000;
  std::size_t high_cells = 4000;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

enum class Manipulation : std::uint8_t {
  kModifyIncoming = 0,
  kMergeIncoming = 1,
  kInsertOutgoing = 2,
};

std::string to_string(Manipulation m);

/// Per-call trace of the random choices, for tests and diagnostics.
struct AugmentRecord {
  Manipulation manipulation = Manipulation::kModifyIncoming;
  int shift = 0;
};

/// Scales every incoming burst of at least `burst_size_threshold` cells by
/// (1 + u * delta), u ~ U[0,1) drawn per burst. delta is +r_upsample for
/// short traces, -r_downsample for long ones, and a coin flip in between.
BurstSequence modify_incoming_burst_sizes(const BurstSequence& b,
                                          std::size_t nonzero_count,
                                          const AugmentConfig& cfg,
                                          RandomSource& rng);

/// size * (1 + u * delta) rounded to nearest, magnitude at least 1.
BurstSize scale_incoming_burst(BurstSize size, double u, double delta);

/// Splits incoming bursts with probability r_insert and inserts an outgoing
/// burst sampled from `dist`. Bursts shorter than 7 cells are never split.
BurstSequence insert_outgoing_bursts(const BurstSequence& b,
                                     const AugmentConfig& cfg,
                                     const BurstSizeDistribution& dist,
                                     RandomSource& rng);

/// Incoming burst -m split at `position` around an outgoing burst of
/// `size`: {-position, +size, -(m - position)}.
std::vector<BurstSize> split_incoming_burst(BurstSize burst, int position,
                                            BurstSize size);

/// With probability r_merge at an incoming burst, merges it with the next
/// k-1 incoming bursts (k ~ U{2..n_merge}) and drops the outgoing bursts
/// in between.
BurstSequence merge_incoming_bursts(const BurstSequence& b,
                                    const AugmentConfig& cfg, RandomSource& rng);

/// Merges `k` incoming bursts starting at index `start` (which must hold an
/// incoming burst). Fewer than k remaining merges what remains.
BurstSequence merge_at(const BurstSequence& b, std::size_t start, int k);

/// Prepends n zeros and drops the last n cells; length is unchanged.
DirectionTrace shift_trace(const DirectionTrace& t, std::size_t n);

/// One NetAugment view of `t`, same length as the input. Throws
/// TraceTooShort when the trace has no more than preserve_prefix nonzero
/// cells.
DirectionTrace net_augment(const DirectionTrace& t, const AugmentConfig& cfg,
                           const BurstSizeDistribution& dist, RandomSource& rng,
                           AugmentRecord* record = nullptr);

/// net_augment with the manipulation and shift fixed by the caller; only
/// manipulation-local draws are taken from `rng`.
DirectionTrace net_augment_with(const DirectionTrace& t, Manipulation m,
                                const AugmentConfig& cfg,
                                const BurstSizeDistribution& dist,
                                RandomSource& rng, int shift);

/// Negates each nonzero cell independently with probability p_flip.
DirectionTrace flip_augment(const DirectionTrace& t, double p_flip,
                            RandomSource& rng);

}  // namespace netaug
