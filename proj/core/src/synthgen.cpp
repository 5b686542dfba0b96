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

#include "netaug/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "netaug/error.hpp"

namespace netaug {
namespace {

int poisson(double mean, RandomSource& rng) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double p = rng.uniform01();
  while (p > limit) {
    ++k;
    p *= rng.uniform01();
  }
  return k;
}

}  // namespace

void ConditionProfile::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidArgument("condition profile: bandwidth must be positive");
  }
  if (!(control_rate >= 0.0)) throw InvalidArgument("condition profile: control rate < 0");
  if (!(jitter >= 0.0)) throw InvalidArgument("condition profile: jitter < 0");
}

ConditionProfile superior_profile() { return {2.0, 0.05, 0.1}; }
ConditionProfile inferior_profile() { return {0.4, 0.3, 0.1}; }

std::vector<SiteTemplate> make_templates(std::size_t num_classes, RandomSource& rng,
                                         const TemplateOptions& options) {
  if (num_classes < 2) throw InvalidArgument("make_templates: need at least 2 classes");
  if (options.min_pairs < 1 || options.max_pairs < options.min_pairs ||
      !(options.min_incoming >= 1.0) || options.max_incoming < options.min_incoming ||
      options.max_outgoing < 1 || !(options.noise_scale >= 0.0)) {
    throw InvalidArgument("make_templates: bad options");
  }
  const double lo = std::log(options.min_incoming);
  const double hi = std::log(options.max_incoming);
  std::vector<SiteTemplate> out;
  out.reserve(num_classes);
  while (out.size() < num_classes) {
    const auto pairs = std::size_t(
        rng.uniform_int(std::int64_t(options.min_pairs), std::int64_t(options.max_pairs)));
    std::vector<BurstSize> bursts;
    bursts.reserve(2 * pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
      bursts.push_back(BurstSize(rng.uniform_int(1, options.max_outgoing)));
      const double size = std::exp(lo + (hi - lo) * rng.uniform01());
      bursts.push_back(-std::max<BurstSize>(1, BurstSize(std::lround(size))));
    }
    BurstSequence base(std::move(bursts));
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const SiteTemplate& t) { return t.base == base; });
    if (duplicate) continue;
    out.push_back(SiteTemplate{Label(out.size()), std::move(base), options.noise_scale,
                               rng.next_u64()});
  }
  return out;
}

TimedTrace render_visit(const SiteTemplate& tmpl, const ConditionProfile& profile,
                        RandomSource& rng) {
  profile.validate();
  if (tmpl.base.empty()) throw InvalidArgument("render_visit: empty template");
  const double dt = double(kCellBytes) / (profile.bandwidth * kNominalRate);
  const double jitter_shift = 0.5 * profile.jitter * profile.jitter;

  std::vector<TimedCell> cells;
  double clock = 0.0;
  std::vector<double> arrivals;
  std::vector<std::pair<double, int>> controls;
  for (BurstSize b : tmpl.base.bursts()) {
    if (b > 0) {
      for (BurstSize k = 0; k < b; ++k) cells.push_back({clock, 1, kCellBytes});
      continue;
    }
    const double noise = tmpl.noise_scale > 0.0 ? std::exp(tmpl.noise_scale * rng.normal())
                                                : 1.0;
    const auto m = std::max<long>(1, std::lround(double(-b) * noise));

    const double start = clock;
    arrivals.clear();
    for (long k = 0; k < m; ++k) {
      double step = dt;
      if (profile.jitter > 0.0) step *= std::exp(profile.jitter * rng.normal() - jitter_shift);
      clock += step;
      arrivals.push_back(clock);
    }

    // Control cells at uniform times over the burst's transfer window.
    controls.clear();
    const int events = poisson(profile.control_rate, rng);
    for (int e = 0; e < events; ++e) {
      const double when = start + (clock - start) * rng.uniform01();
      const int size = rng.uniform01() < 0.3 ? 2 : 1;
      controls.emplace_back(when, size);
    }
    std::sort(controls.begin(), controls.end());

    std::size_t c = 0;
    for (double at : arrivals) {
      for (; c < controls.size() && controls[c].first < at; ++c) {
        for (int k = 0; k < controls[c].second; ++k) {
          cells.push_back({controls[c].first, 1, kCellBytes});
        }
      }
      cells.push_back({at, -1, kCellBytes});
    }
    for (; c < controls.size(); ++c) {
      for (int k = 0; k < controls[c].second; ++k) cells.push_back({clock, 1, kCellBytes});
    }
  }
  return TimedTrace(std::move(cells), tmpl.class_id);
}

std::vector<TimedTrace> make_dataset(std::span<const SiteTemplate> templates,
                                     std::span<const ConditionProfile> profiles,
                                     std::size_t visits, RandomSource& rng) {
  if (templates.empty() || profiles.empty() || visits == 0) {
    throw InvalidArgument("make_dataset: empty input");
  }
  const auto base = rng.next_u64();
  std::vector<TimedTrace> out;
  out.reserve(templates.size() * profiles.size() * visits);
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    for (const auto& tmpl : templates) {
      for (std::size_t v = 0; v < visits; ++v) {
        auto r = RandomSource::derive(base ^ tmpl.seed, p, v);
        out.push_back(render_visit(tmpl, profiles[p], r));
      }
    }
  }
  rng.shuffle(out.begin(), out.end());
  return out;
}

}  // namespace netaug
