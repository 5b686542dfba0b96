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
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace netaug {

/// Class identifier. Non-negative values are monitored sites.
using Label = int;
inline constexpr Label kUnmonitored = -1;

using Cell = std::int8_t;

inline constexpr std::size_t kDefaultTraceLength = 5000;

/// Fixed-length sequence of cell directions in {-1, 0, +1}; the model input.
///
/// Zeros normally form a suffix (padding), optionally preceded by a run of
/// leading zeros introduced by the shift transform. Interior zeros are
/// accepted but are dropped by burst extraction.
class DirectionTrace {
 public:
  DirectionTrace() = default;
  /// Throws InvalidArgument if any element is outside {-1, 0, +1}.
  explicit DirectionTrace(std::vector<Cell> cells,
                          std::optional<Label> label = std::nullopt);

  std::size_t length() const noexcept { return cells_.size(); }
  std::span<const Cell> cells() const noexcept { return cells_; }
  Cell operator[](std::size_t i) const noexcept { return cells_[i]; }

  const std::optional<Label>& label() const noexcept { return label_; }
  void set_label(std::optional<Label> label) { label_ = label; }

  std::size_t nonzero_count() const noexcept;
  std::size_t incoming_count() const noexcept;
  std::size_t outgoing_count() const noexcept;
  std::size_t leading_zeros() const noexcept;

  /// True when zeros appear only as a leading and/or trailing run.
  bool has_canonical_zero_layout() const noexcept;

  friend bool operator==(const DirectionTrace&,
                         const DirectionTrace&) = default;

 private:
  std::vector<Cell> cells_;
  std::optional<Label> label_;
};

struct TimedCell {
  double timestamp = 0.0;  // seconds
  Cell direction = 1;      // -1 incoming, +1 outgoing
  std::uint32_t size = 512;

  friend bool operator==(const TimedCell&, const TimedCell&) = default;
};

/// Ordered cell records for a single page load.
class TimedTrace {
 public:
  /// Throws InvalidArgument on an empty list, decreasing timestamps,
  /// a direction other than +-1, or a zero size.
  explicit TimedTrace(std::vector<TimedCell> cells,
                      std::optional<Label> label = std::nullopt);

  std::span<const TimedCell> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const std::optional<Label>& label() const noexcept { return label_; }

  double duration() const noexcept {
    return cells_.back().timestamp - cells_.front().timestamp;
  }

  friend bool operator==(const TimedTrace&, const TimedTrace&) = default;

 private:
  std::vector<TimedCell> cells_;
  std::optional<Label> label_;
};

/// Downstream bytes per second.
struct NcmValue {
  double value = 0.0;
  friend auto operator<=>(const NcmValue&, const NcmValue&) = default;
};

inline constexpr double kDefaultNcmThreshold = 40000.0;  // 40 kBps

enum class WorldMode { kClosed, kOpen };

struct FilterPolicy {
  WorldMode mode = WorldMode::kClosed;
  double median_fraction = 0.20;
  std::size_t min_cells = 20;

  void validate() const;
};

/// Copies the first min(len, length) directions and zero-pads the rest.
DirectionTrace to_direction_trace(const TimedTrace& t, std::size_t length);

/// Truncates or zero-pads to `length`, keeping the label.
DirectionTrace renormalize(const DirectionTrace& t, std::size_t length);

/// Total incoming bytes over the first-to-last cell duration.
/// Throws DegenerateTrace for fewer than two cells or zero duration.
NcmValue compute_ncm(const TimedTrace& t);

struct NcmPartition {
  std::vector<TimedTrace> superior;
  std::vector<TimedTrace> inferior;
};

/// NCM >= threshold goes to `superior`. A degenerate trace aborts the call
/// with DegenerateTrace carrying its input index.
NcmPartition partition_by_ncm(std::span<const TimedTrace> traces,
                              double threshold = kDefaultNcmThreshold);

/// Removes empty traces, then applies the per-mode size rule. Closed world
/// drops traces whose nonzero-cell count is below median_fraction times the
/// per-label median (lower median); open world drops traces with fewer
/// than min_cells nonzero cells. Throws MissingLabel in closed-world mode.
std::vector<DirectionTrace> filter_traces(std::span<const DirectionTrace> traces,
                                          const FilterPolicy& policy);

/// Lower median of a non-empty set.
std::size_t lower_median(std::vector<std::size_t> values);

}  // namespace netaug
