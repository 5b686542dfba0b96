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
#include <vector>

#include "netaug/model.hpp"

namespace netaug {

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Cosine decay of the learning rate to 0 over `total_steps` when > 0.
  bool cosine = false;
  std::size_t total_steps = 0;
};

/// SGD or Adam over the blocks of a ModelParams. The optimizer binds to the
/// parameter structure seen on the first step; changing heads afterwards
/// requires a fresh optimizer.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg);

  void step(ModelParams& params, const ModelParams& grads);

  std::size_t steps() const noexcept { return t_; }
  double current_learning_rate() const noexcept;

 private:
  OptimizerConfig cfg_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace netaug
