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

#include <cstdint>
#include <string>
#include <vector>

namespace netaug::cli {

struct GradCheckResult {
  std::string name;
  std::size_t instances = 0;
  double max_rel_error = 0.0;
};

/// Central-difference checks of the analytic gradients: NT-Xent, softmax
/// cross-entropy, projection head and the full encoder through both losses.
/// Dims are T=32, d_e=8, 2N=8.
std::vector<GradCheckResult> run_gradcheck(std::uint64_t seed, std::size_t instances,
                                           double step = 1e-5);

}  // namespace netaug::cli
