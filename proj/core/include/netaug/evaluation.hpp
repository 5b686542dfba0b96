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
#include <iosfwd>
#include <span>
#include <vector>

#include "netaug/ssl.hpp"

namespace netaug {

/// Fraction of rows whose argmax (lowest index on ties) equals the label.
/// Throws InvalidArgument on empty input, DimensionMismatch if misaligned.
double closed_world_accuracy(const Matrix& preds, std::span<const int> labels);

enum class TruePositiveRule {
  /// Monitored trace whose best monitored probability exceeds the threshold.
  kAnyMonitored,
  /// Additionally requires the best monitored class to equal the label;
  /// a confident wrong class counts as a false negative.
  kClassCorrect,
};

struct OpenWorldOutcome {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double threshold = 0.0;

  /// 0 when nothing is flagged.
  double precision() const;
  double recall() const;
  /// 0 when precision and recall are both 0.
  double f1() const;

  friend bool operator==(const OpenWorldOutcome&, const OpenWorldOutcome&) = default;
};

struct OpenWorldInput {
  const Matrix* preds = nullptr;
  std::span<const bool> is_monitored;
  /// Label per row; only read for monitored rows.
  std::span<const int> labels;
  /// Columns [0, monitored_classes) are monitored sites; 0 means all.
  std::size_t monitored_classes = 0;
  TruePositiveRule rule = TruePositiveRule::kAnyMonitored;
};

/// A row is flagged when its largest monitored-class probability is
/// strictly greater than `threshold`.
OpenWorldOutcome open_world_eval(const OpenWorldInput& in, double threshold);

/// One outcome per threshold; thresholds must be ascending.
std::vector<OpenWorldOutcome> pr_curve(const OpenWorldInput& in,
                                       std::span<const double> thresholds);

/// `threshold precision recall f1` per line.
void write_pr_records(std::ostream& out, std::span<const OpenWorldOutcome> curve);

}  // namespace netaug
