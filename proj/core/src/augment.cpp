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

#include "netaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "netaug/error.hpp"

namespace netaug {
namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void AugmentConfig::validate() const {
  if (shift_max < 0) throw InvalidArgument("augment: shift_max < 0");
  // A zero resize rate is accepted; it turns the manipulation into identity.
  if (!in_unit(r_upsample) || !in_unit(r_downsample)) {
    throw InvalidArgument("augment: resize rates must be in [0, 1]");
  }
  if (!in_unit(r_insert) || !in_unit(r_merge) || !in_unit(p_flip)) {
    throw InvalidArgument("augment: probabilities must be in [0, 1]");
  }
  if (burst_size_threshold < 1) {
    throw InvalidArgument("augment: burst_size_threshold < 1");
  }
  if (n_merge < 2) throw InvalidArgument("augment: n_merge < 2");
  if (low_cells >= high_cells) {
    throw InvalidArgument("augment: low_cells must be below high_cells");
  }
}

std::string to_string(Manipulation m) {
  switch (m) {
    case Manipulation::kModifyIncoming:
      return "modify-incoming";
    case Manipulation::kMergeIncoming:
      return "merge-incoming";
    case Manipulation::kInsertOutgoing:
      return "insert-outgoing";
  }
  return "unknown";
}

BurstSize scale_incoming_burst(BurstSize size, double u, double delta) {
  const double scaled = std::round(double(size) * (1.0 + u * delta));
  const auto mag = std::max<long long>(1, std::llabs((long long)scaled));
  return size < 0 ? BurstSize(-mag) : BurstSize(mag);
}

BurstSequence modify_incoming_burst_sizes(const BurstSequence& b,
                                          std::size_t nonzero_count,
                                          const AugmentConfig& cfg,
                                          RandomSource& rng) {
  double delta;
  if (nonzero_count <= cfg.low_cells) {
    delta = cfg.r_upsample;
  } else if (nonzero_count > cfg.high_cells) {
    delta = -cfg.r_downsample;
  } else {
    delta = rng.uniform_int(0, 1) == 0 ? cfg.r_upsample : -cfg.r_downsample;
  }
  std::vector<BurstSize> out(b.bursts().begin(), b.bursts().end());
  for (auto& size : out) {
    if (size <= -cfg.burst_size_threshold) {
      size = scale_incoming_burst(size, rng.uniform01(), delta);
    }
  }
  return BurstSequence(std::move(out));
}

std::vector<BurstSize> split_incoming_burst(BurstSize burst, int position,
                                            BurstSize size) {
  const int m = -burst;
  if (burst >= 0 || position <= 0 || position >= m || size <= 0) {
    throw InvalidArgument("split_incoming_burst: bad arguments");
  }
  return {BurstSize(-position), size, BurstSize(-(m - position))};
}

BurstSequence insert_outgoing_bursts(const BurstSequence& b,
                                     const AugmentConfig& cfg,
                                     const BurstSizeDistribution& dist,
                                     RandomSource& rng) {
  std::vector<BurstSize> out;
  out.reserve(b.size() + b.size() / 2);
  for (BurstSize size : b.bursts()) {
    if (size >= 0) {
      out.push_back(size);
      continue;
    }
    const int m = -size;
    if (rng.uniform01() < cfg.r_insert && m >= 7) {
      const BurstSize inserted = dist.sample(rng);
      const int position = int(rng.uniform_int(3, m - 3));
      for (BurstSize v : split_incoming_burst(size, position, inserted)) {
        out.push_back(v);
      }
    } else {
      out.push_back(size);
    }
  }
  return BurstSequence::normalized(out);
}

BurstSequence merge_at(const BurstSequence& b, std::size_t start, int k) {
  if (start >= b.size() || b[start] >= 0) {
    throw InvalidArgument("merge_at: start is not an incoming burst");
  }
  std::vector<BurstSize> out(b.bursts().begin(),
                             b.bursts().begin() + std::ptrdiff_t(start));
  BurstSize merged = 0;
  int taken = 0;
  std::size_t i = start;
  std::size_t last_incoming = start;
  for (; i < b.size() && taken < k; ++i) {
    if (b[i] < 0) {
      merged += b[i];
      ++taken;
      last_incoming = i;
    }
  }
  out.push_back(merged);
  out.insert(out.end(), b.bursts().begin() + std::ptrdiff_t(last_incoming + 1),
             b.bursts().end());
  return BurstSequence::normalized(out);
}

BurstSequence merge_incoming_bursts(const BurstSequence& b,
                                    const AugmentConfig& cfg, RandomSource& rng) {
  std::vector<BurstSize> out;
  out.reserve(b.size());
  const auto in = b.bursts();
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] > 0 || !(rng.uniform01() < cfg.r_merge)) {
      out.push_back(in[i]);
      ++i;
      continue;
    }
    const int k = int(rng.uniform_int(2, cfg.n_merge));
    BurstSize merged = 0;
    int taken = 0;
    std::size_t last_incoming = i;
    for (std::size_t j = i; j < in.size() && taken < k; ++j) {
      if (in[j] < 0) {
        merged += in[j];
        ++taken;
        last_incoming = j;
      }
    }
    out.push_back(merged);
    i = last_incoming + 1;
  }
  return BurstSequence::normalized(out);
}

DirectionTrace shift_trace(const DirectionTrace& t, std::size_t n) {
  const auto len = t.length();
  n = std::min(n, len);
  std::vector<Cell> cells(len, 0);
  std::copy_n(t.cells().begin(), len - n, cells.begin() + std::ptrdiff_t(n));
  return DirectionTrace(std::move(cells), t.label());
}

namespace {

DirectionTrace augment_impl(const DirectionTrace& t, Manipulation m,
                            const AugmentConfig& cfg,
                            const BurstSizeDistribution& dist,
                            RandomSource& rng, int shift_or_draw,
                            AugmentRecord* record) {
  const auto nonzero = t.nonzero_count();
  if (nonzero <= cfg.preserve_prefix) {
    throw TraceTooShort("net_augment: trace has " + std::to_string(nonzero) +
                        " nonzero cells, needs more than " +
                        std::to_string(cfg.preserve_prefix));
  }
  const auto keep = std::min(cfg.preserve_prefix, t.length());
  auto [prefix, rest] = split_prefix(t, keep);
  const auto bursts = extract_bursts(rest);

  BurstSequence augmented;
  switch (m) {
    case Manipulation::kModifyIncoming:
      augmented = modify_incoming_burst_sizes(bursts, nonzero, cfg, rng);
      break;
    case Manipulation::kMergeIncoming:
      augmented = merge_incoming_bursts(bursts, cfg, rng);
      break;
    case Manipulation::kInsertOutgoing:
      augmented = insert_outgoing_bursts(bursts, cfg, dist, rng);
      break;
  }

  auto cells = std::move(prefix);
  const auto tail = expand_bursts(augmented.bursts());
  cells.insert(cells.end(), tail.begin(), tail.end());
  cells.resize(t.length(), 0);

  const int n =
      shift_or_draw >= 0 ? shift_or_draw : int(rng.uniform_int(0, cfg.shift_max));
  if (record) {
    record->manipulation = m;
    record->shift = n;
  }
  return shift_trace(DirectionTrace(std::move(cells), t.label()), std::size_t(n));
}

}  // namespace

DirectionTrace net_augment(const DirectionTrace& t, const AugmentConfig& cfg,
                           const BurstSizeDistribution& dist, RandomSource& rng,
                           AugmentRecord* record) {
  cfg.validate();
  if (t.nonzero_count() <= cfg.preserve_prefix) {
    return augment_impl(t, Manipulation::kModifyIncoming, cfg, dist, rng, -1,
                        record);  // throws TraceTooShort
  }
  const auto m = static_cast<Manipulation>(rng.uniform_int(0, 2));
  return augment_impl(t, m, cfg, dist, rng, -1, record);
}

DirectionTrace net_augment_with(const DirectionTrace& t, Manipulation m,
                                const AugmentConfig& cfg,
                                const BurstSizeDistribution& dist,
                                RandomSource& rng, int shift) {
  cfg.validate();
  if (shift < 0) throw InvalidArgument("net_augment_with: negative shift");
  return augment_impl(t, m, cfg, dist, rng, shift, nullptr);
}

DirectionTrace flip_augment(const DirectionTrace& t, double p_flip,
                            RandomSource& rng) {
  if (!in_unit(p_flip)) throw InvalidArgument("flip_augment: p_flip not in [0, 1]");
  std::vector<Cell> cells(t.cells().begin(), t.cells().end());
  for (auto& c : cells) {
    if (c != 0 && rng.uniform01() < p_flip) c = Cell(-c);
  }
  return DirectionTrace(std::move(cells), t.label());
}

}  // namespace netaug
