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
#include <span>
#include <vector>

#include "netaug/bursts.hpp"
#include "netaug/random.hpp"
#include "netaug/trace.hpp"

namespace netaug {

// Synthetic page loads. Each site is a fixed burst skeleton; a visit
// perturbs incoming burst sizes with lognormal noise, lays the cells out in
// time at a condition-dependent bandwidth, and interleaves outgoing control
// cells drawn from a Poisson process over each incoming burst's transfer
// window. These perturbations live in byte/time space and use distributions
// unrelated to the cell-space uniform scaling of NetAugment.

/// Nominal downstream rate at bandwidth factor 1, bytes per second.
inline constexpr double kNominalRate = 25000.0;
inline constexpr std::uint32_t kCellBytes = 512;

struct SiteTemplate {
  Label class_id = 0;
  BurstSequence base;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
};

struct ConditionProfile {
  /// NCM at zero jitter is bandwidth * kNominalRate.
  double bandwidth = 1.0;
  /// Expected control-cell insertions per incoming burst.
  double control_rate = 0.0;
  /// Sigma of the per-cell lognormal inter-arrival jitter.
  double jitter = 0.0;

  void validate() const;
};

struct TemplateOptions {
  double noise_scale = 0.25;
  std::size_t min_pairs = 12;
  std::size_t max_pairs = 28;
  /// Incoming burst sizes are lognormal with a log-mean drawn uniformly in
  /// [log(min_incoming), log(max_incoming)].
  double min_incoming = 4.0;
  double max_incoming = 40.0;
  int max_outgoing = 4;
};

/// Distinct burst skeletons, one per class id 0..num_classes-1. Each starts
/// with an outgoing burst. Throws InvalidArgument when num_classes < 2.
std::vector<SiteTemplate> make_templates(std::size_t num_classes, RandomSource& rng,
                                         const TemplateOptions& options = {});

/// One page load with label tmpl.class_id.
TimedTrace render_visit(const SiteTemplate& tmpl, const ConditionProfile& profile,
                        RandomSource& rng);

/// visits x templates x profiles traces, each rendered from its own derived
/// stream, then shuffled.
std::vector<TimedTrace> make_dataset(std::span<const SiteTemplate> templates,
                                     std::span<const ConditionProfile> profiles,
                                     std::size_t visits, RandomSource& rng);

/// Default superior and inferior conditions of the desk-scale experiment.
ConditionProfile superior_profile();
ConditionProfile inferior_profile();

}  // namespace netaug
