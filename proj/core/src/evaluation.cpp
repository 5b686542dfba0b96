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

#include "netaug/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "netaug/error.hpp"

namespace netaug {

double closed_world_accuracy(const Matrix& preds, std::span<const int> labels) {
  if (preds.rows() == 0) throw InvalidArgument("closed_world_accuracy: empty input");
  if (std::size_t(preds.rows()) != labels.size()) {
    throw DimensionMismatch("closed_world_accuracy: rows and labels differ");
  }
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < preds.rows(); ++i) {
    if (argmax(preds.row(i).transpose()) == labels[std::size_t(i)]) ++correct;
  }
  return double(correct) / double(preds.rows());
}

double OpenWorldOutcome::precision() const {
  return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
}

double OpenWorldOutcome::recall() const {
  return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
}

double OpenWorldOutcome::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

namespace {

void check(const OpenWorldInput& in) {
  if (!in.preds) throw InvalidArgument("open_world_eval: no predictions");
  const auto rows = std::size_t(in.preds->rows());
  if (in.is_monitored.size() != rows || in.labels.size() != rows) {
    throw DimensionMismatch("open_world_eval: inputs are not aligned");
  }
  if (in.monitored_classes > std::size_t(in.preds->cols())) {
    throw DimensionMismatch("open_world_eval: more monitored classes than columns");
  }
}

}  // namespace

OpenWorldOutcome open_world_eval(const OpenWorldInput& in, double threshold) {
  check(in);
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("open_world_eval: threshold outside [0, 1]");
  }
  const auto& p = *in.preds;
  const auto monitored = Eigen::Index(in.monitored_classes ? in.monitored_classes
                                                           : std::size_t(p.cols()));
  OpenWorldOutcome out;
  out.threshold = threshold;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const auto row = p.row(i).head(monitored).transpose();
    const int best = argmax(row);
    const bool flagged = row(best) > threshold;
    if (in.is_monitored[std::size_t(i)]) {
      const bool hit = flagged && (in.rule == TruePositiveRule::kAnyMonitored ||
                                   best == in.labels[std::size_t(i)]);
      ++(hit ? out.tp : out.fn);
    } else {
      ++(flagged ? out.fp : out.tn);
    }
  }
  return out;
}

std::vector<OpenWorldOutcome> pr_curve(const OpenWorldInput& in,
                                       std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw InvalidArgument("pr_curve: thresholds must be ascending");
  }
  std::vector<OpenWorldOutcome> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back(open_world_eval(in, t));
  return out;
}

void write_pr_records(std::ostream& out, std::span<const OpenWorldOutcome> curve) {
  char buf[128];
  for (const auto& o : curve) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", o.threshold,
                  o.precision(), o.recall(), o.f1());
    out << buf;
  }
}

}  // namespace netaug
