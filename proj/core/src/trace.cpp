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

#include "netaug/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "netaug/error.hpp"

namespace netaug {

DirectionTrace::DirectionTrace(std::vector<Cell> cells,
                               std::optional<Label> label)
    : cells_(std::move(cells)), label_(label) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] < -1 || cells_[i] > 1) {
      throw InvalidArgument("direction trace: cell " + std::to_string(i) +
                            " is not in {-1, 0, +1}");
    }
  }
}

std::size_t DirectionTrace::nonzero_count() const noexcept {
  return std::size_t(std::count_if(cells_.begin(), cells_.end(),
                                   [](Cell c) { return c != 0; }));
}

std::size_t DirectionTrace::incoming_count() const noexcept {
  return std::size_t(std::count(cells_.begin(), cells_.end(), Cell{-1}));
}

std::size_t DirectionTrace::outgoing_count() const noexcept {
  return std::size_t(std::count(cells_.begin(), cells_.end(), Cell{1}));
}

std::size_t DirectionTrace::leading_zeros() const noexcept {
  auto it = std::find_if(cells_.begin(), cells_.end(),
                         [](Cell c) { return c != 0; });
  return std::size_t(it - cells_.begin());
}

bool DirectionTrace::has_canonical_zero_layout() const noexcept {
  auto first = std::find_if(cells_.begin(), cells_.end(),
                            [](Cell c) { return c != 0; });
  auto last = std::find_if(cells_.rbegin(), cells_.rend(),
                           [](Cell c) { return c != 0; });
  if (first == cells_.end()) return true;
  return std::find(first, last.base(), Cell{0}) == last.base();
}

TimedTrace::TimedTrace(std::vector<TimedCell> cells, std::optional<Label> label)
    : cells_(std::move(cells)), label_(label) {
  if (cells_.empty()) throw InvalidArgument("timed trace: no cells");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    if (c.direction != 1 && c.direction != -1) {
      throw InvalidArgument("timed trace: cell " + std::to_string(i) +
                            " direction must be +1 or -1");
    }
    if (c.size == 0) {
      throw InvalidArgument("timed trace: cell " + std::to_string(i) +
                            " has zero size");
    }
    if (!std::isfinite(c.timestamp)) {
      throw InvalidArgument("timed trace: non-finite timestamp");
    }
    if (i > 0 && c.timestamp < cells_[i - 1].timestamp) {
      throw InvalidArgument("timed trace: timestamps decrease at cell " +
                            std::to_string(i));
    }
  }
}

void FilterPolicy::validate() const {
  if (!(median_fraction > 0.0 && median_fraction < 1.0)) {
    throw InvalidArgument("filter policy: median fraction must be in (0, 1)");
  }
  if (min_cells < 1) throw InvalidArgument("filter policy: min cells < 1");
}

DirectionTrace to_direction_trace(const TimedTrace& t, std::size_t length) {
  std::vector<Cell> cells(length, 0);
  const auto n = std::min(length, t.size());
  for (std::size_t i = 0; i < n; ++i) cells[i] = t.cells()[i].direction;
  return DirectionTrace(std::move(cells), t.label());
}

DirectionTrace renormalize(const DirectionTrace& t, std::size_t length) {
  std::vector<Cell> cells(length, 0);
  const auto n = std::min(length, t.length());
  std::copy_n(t.cells().begin(), n, cells.begin());
  return DirectionTrace(std::move(cells), t.label());
}

NcmValue compute_ncm(const TimedTrace& t) {
  if (t.size() < 2) throw DegenerateTrace("NCM undefined: fewer than 2 cells");
  const double duration = t.duration();
  if (!(duration > 0.0)) throw DegenerateTrace("NCM undefined: zero duration");
  double downstream = 0.0;
  for (const auto& c : t.cells()) {
    if (c.direction == -1) downstream += c.size;
  }
  return NcmValue{downstream / duration};
}

NcmPartition partition_by_ncm(std::span<const TimedTrace> traces,
                              double threshold) {
  NcmPartition out;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    NcmValue ncm;
    try {
      ncm = compute_ncm(traces[i]);
    } catch (const DegenerateTrace& e) {
      throw DegenerateTrace(std::string(e.what()) + " (trace " +
                                std::to_string(i) + ")",
                            i);
    }
    (ncm.value >= threshold ? out.superior : out.inferior).push_back(traces[i]);
  }
  return out;
}

std::size_t lower_median(std::vector<std::size_t> values) {
  if (values.empty()) throw InvalidArgument("median of empty set");
  const auto mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + std::ptrdiff_t(mid),
                   values.end());
  return values[mid];
}

std::vector<DirectionTrace> filter_traces(std::span<const DirectionTrace> traces,
                                          const FilterPolicy& policy) {
  policy.validate();
  std::vector<DirectionTrace> out;
  if (policy.mode == WorldMode::kOpen) {
    for (const auto& t : traces) {
      const auto n = t.nonzero_count();
      if (n > 0 && n >= policy.min_cells) out.push_back(t);
    }
    return out;
  }

  std::map<Label, std::vector<std::size_t>> sizes;
  for (const auto& t : traces) {
    if (!t.label()) throw MissingLabel("closed-world filter: unlabeled trace");
    const auto n = t.nonzero_count();
    if (n > 0) sizes[*t.label()].push_back(n);
  }
  std::map<Label, double> cutoff;
  for (auto& [label, v] : sizes) {
    cutoff[label] = policy.median_fraction * double(lower_median(v));
  }
  for (const auto& t : traces) {
    const auto n = t.nonzero_count();
    if (n == 0) continue;
    if (double(n) < cutoff[*t.label()]) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace netaug
