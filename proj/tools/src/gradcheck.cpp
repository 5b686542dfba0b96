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

#include "netaug/cli/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "netaug/model.hpp"
#include "netaug/random.hpp"
#include "netaug/ssl.hpp"

namespace netaug::cli {
namespace {

Matrix gaussian(Eigen::Index r, Eigen::Index c, RandomSource& rng) {
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

// Relative error with a 1e-6 floor on the magnitude, so entries where both
// gradients vanish do not divide by zero.
double rel_error(const double* analytic, double* x, std::size_t n,
                 const std::function<double()>& f, double h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double fp = f();
    x[i] = saved - h;
    const double fm = f();
    x[i] = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

ModelParams tiny_model(RandomSource& rng, std::size_t classes) {
  ModelDims dims;
  dims.input = 32;
  dims.hidden = {16};
  dims.embedding = 8;
  dims.projection_hidden = 16;
  auto p = init_encoder(dims, rng);
  attach_projection(p, dims.projection_hidden, dims.projection_dim(), rng);
  attach_classifier(p, classes, rng);
  for (auto& l : p.encoder) {
    for (auto& b : l.bias) b = 0.1 * rng.normal();
  }
  return p;
}

double model_error(ModelParams& p, const ModelParams& grads,
                   const std::function<double()>& f, double h) {
  auto blocks = parameter_blocks(p);
  const auto g = parameter_blocks(grads);
  double worst = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    worst = std::max(worst, rel_error(g[b].data(), blocks[b].data(), blocks[b].size(), f, h));
  }
  return worst;
}

}  // namespace

std::vector<GradCheckResult> run_gradcheck(std::uint64_t seed, std::size_t instances,
                                           double h) {
  std::vector<GradCheckResult> out = {
      {"nt_xent", instances, 0.0},
      {"softmax_cross_entropy", instances, 0.0},
      {"projection_head", instances, 0.0},
      {"encoder_contrastive", instances, 0.0},
      {"encoder_classification", instances, 0.0},
  };
  for (std::size_t k = 0; k < instances; ++k) {
    auto rng = RandomSource::derive(seed, k);

    Matrix z = gaussian(8, 5, rng);
    const auto nt = nt_xent_loss(z, 0.5);
    out[0].max_rel_error = std::max(
        out[0].max_rel_error,
        rel_error(nt.grad.data(), z.data(), std::size_t(z.size()),
                  [&] { return nt_xent_loss(z, 0.5).loss; }, h));

    Matrix logits = gaussian(8, 4, rng);
    std::vector<int> labels(8);
    for (auto& y : labels) y = int(rng.uniform_int(0, 3));
    const auto ce = softmax_cross_entropy(logits, labels);
    out[1].max_rel_error = std::max(
        out[1].max_rel_error,
        rel_error(ce.grad.data(), logits.data(), std::size_t(logits.size()),
                  [&] { return softmax_cross_entropy(logits, labels).loss; }, h));

    ProjectionHead head{gaussian(16, 8, rng), gaussian(2, 16, rng)};
    Matrix e = gaussian(8, 8, rng);
    const Matrix w = gaussian(8, 2, rng);
    auto f = [&] { return project_forward(e, head).z.cwiseProduct(w).sum(); };
    const auto pg = project_backward(project_forward(e, head), head, w);
    double worst = rel_error(pg.w1.data(), head.w1.data(), std::size_t(head.w1.size()), f, h);
    worst = std::max(worst,
                     rel_error(pg.w2.data(), head.w2.data(), std::size_t(head.w2.size()), f, h));
    worst = std::max(worst, rel_error(pg.e.data(), e.data(), std::size_t(e.size()), f, h));
    out[2].max_rel_error = std::max(out[2].max_rel_error, worst);

    auto params = tiny_model(rng, 4);
    const Matrix x = gaussian(8, 32, rng);
    auto grads = params.zeros_like();
    contrastive_loss_grad(params, x, 0.5, &grads);
    out[3].max_rel_error = std::max(
        out[3].max_rel_error,
        model_error(params, grads, [&] { return contrastive_loss_grad(params, x, 0.5, nullptr); },
                    h));

    grads = params.zeros_like();
    classification_loss_grad(params, x, labels, &grads);
    out[4].max_rel_error = std::max(
        out[4].max_rel_error,
        model_error(params, grads,
                    [&] { return classification_loss_grad(params, x, labels, nullptr); }, h));
  }
  return out;
}

}  // namespace netaug::cli
