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

#include "netaug/optimizer.hpp"

#include <cmath>
#include <numbers>

#include "netaug/error.hpp"

namespace netaug {

Optimizer::Optimizer(OptimizerConfig cfg) : cfg_(cfg) {
  if (!(cfg_.learning_rate >= 0.0)) {
    throw InvalidArgument("optimizer: negative learning rate");
  }
}

double Optimizer::current_learning_rate() const noexcept {
  if (!cfg_.cosine || cfg_.total_steps == 0) return cfg_.learning_rate;
  const double frac = std::min(1.0, double(t_) / double(cfg_.total_steps));
  return cfg_.learning_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}

void Optimizer::step(ModelParams& params, const ModelParams& grads) {
  auto p = parameter_blocks(params);
  const auto g = parameter_blocks(grads);
  if (p.size() != g.size()) throw DimensionMismatch("optimizer: gradient structure");
  const double lr = current_learning_rate();
  ++t_;

  if (cfg_.kind == OptimizerKind::kSgd) {
    for (std::size_t b = 0; b < p.size(); ++b) {
      for (std::size_t i = 0; i < p[b].size(); ++i) p[b][i] -= lr * g[b][i];
    }
    return;
  }

  if (m_.empty()) {
    for (const auto& block : p) {
      m_.emplace_back(block.size(), 0.0);
      v_.emplace_back(block.size(), 0.0);
    }
  }
  if (m_.size() != p.size()) throw DimensionMismatch("optimizer: parameter structure changed");
  const double b1 = cfg_.beta1;
  const double b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, double(t_));
  const double c2 = 1.0 - std::pow(b2, double(t_));
  for (std::size_t b = 0; b < p.size(); ++b) {
    auto& m = m_[b];
    auto& v = v_[b];
    for (std::size_t i = 0; i < p[b].size(); ++i) {
      const double gi = g[b][i];
      m[i] = b1 * m[i] + (1.0 - b1) * gi;
      v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
      p[b][i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.epsilon);
    }
  }
}

}  // namespace netaug
