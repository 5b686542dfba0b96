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

#include "netaug/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "netaug/bursts.hpp"
#include "netaug/error.hpp"

namespace netaug {

BurstSizeDistribution::BurstSizeDistribution(std::vector<std::int32_t> support,
                                             std::vector<std::uint64_t> counts)
    : support_(std::move(support)), counts_(std::move(counts)) {
  if (support_.empty()) throw EmptyDistribution("burst size distribution is empty");
  if (support_.size() != counts_.size()) {
    throw InvalidArgument("support and counts differ in length");
  }
  cumulative_.reserve(counts_.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] <= 0) throw InvalidArgument("support values must be positive");
    if (i > 0 && support_[i] <= support_[i - 1]) {
      throw InvalidArgument("support must be strictly increasing");
    }
    if (counts_[i] == 0) throw InvalidArgument("counts must be positive");
    acc += counts_[i];
    cumulative_.push_back(acc);
  }
}

double BurstSizeDistribution::probability(std::int32_t size) const noexcept {
  auto it = std::lower_bound(support_.begin(), support_.end(), size);
  if (it == support_.end() || *it != size) return 0.0;
  return double(counts_[std::size_t(it - support_.begin())]) / double(total());
}

std::int32_t BurstSizeDistribution::sample_at(double u) const noexcept {
  // u < cumulative[i] / total  <=>  floor(u * total) < cumulative[i].
  auto r = static_cast<std::uint64_t>(std::floor(u * double(total())));
  r = std::min(r, total() - 1);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return support_[std::size_t(it - cumulative_.begin())];
}

BurstSizeDistribution build_distribution(std::span<const DirectionTrace> traces) {
  std::map<std::int32_t, std::uint64_t> hist;
  for (const auto& t : traces) {
    const auto bursts = extract_bursts(t);
    for (BurstSize b : bursts.bursts()) {
      if (b > 0) ++hist[b];
    }
  }
  if (hist.empty()) throw NoOutgoingBursts("corpus contains no outgoing bursts");
  std::vector<std::int32_t> support;
  std::vector<std::uint64_t> counts;
  for (const auto& [size, count] : hist) {
    support.push_back(size);
    counts.push_back(count);
  }
  return BurstSizeDistribution(std::move(support), std::move(counts));
}

void write_bdist(std::ostream& out, const BurstSizeDistribution& d) {
  out << "bdist v1\n";
  for (std::size_t i = 0; i < d.support().size(); ++i) {
    out << d.support()[i] << ' ' << d.counts()[i] << '\n';
  }
}

BurstSizeDistribution read_bdist(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || (line != "bdist v1" && line != "bdist v1\r")) {
    throw ParseError("expected header 'bdist v1'", 1);
  }
  std::vector<std::int32_t> support;
  std::vector<std::uint64_t> counts;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    long long size = 0;
    long long count = 0;
    std::string extra;
    if (!(ss >> size >> count) || (ss >> extra) || size <= 0 || count <= 0 ||
        size > INT32_MAX) {
      throw ParseError("expected 'size count'", lineno);
    }
    if (!support.empty() && size <= support.back()) {
      throw ParseError("sizes must be strictly ascending", lineno);
    }
    support.push_back(std::int32_t(size));
    counts.push_back(std::uint64_t(count));
  }
  return BurstSizeDistribution(std::move(support), std::move(counts));
}

void save_bdist(const std::filesystem::path& path, const BurstSizeDistribution& d) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  write_bdist(out, d);
}

BurstSizeDistribution load_bdist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_bdist(in);
}

}  // namespace netaug
