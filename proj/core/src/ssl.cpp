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

#include "netaug/ssl.hpp"

#include <cmath>
#include <string>

#include "netaug/error.hpp"

namespace netaug {

void SslConfig::validate() const {
  if (!(tau_s > 0.0)) throw InvalidArgument("ssl: tau_s must be positive");
  if (!(tau_f >= 0.0 && tau_f <= 1.0)) {
    throw InvalidArgument("ssl: tau_f must be in [0, 1]");
  }
  if (!(lambda_u >= 0.0)) throw InvalidArgument("ssl: lambda_u must be >= 0");
  if (mu < 1) throw InvalidArgument("ssl: mu must be >= 1");
}

double cosine_sim(const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& v) {
  if (u.size() != v.size()) throw DimensionMismatch("cosine_sim: sizes differ");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine_sim: zero vector");
  return u.dot(v) / (nu * nv);
}

LossGrad nt_xent_loss(const Matrix& z, double tau_s) {
  const auto rows = z.rows();
  if (rows < 2 || rows % 2 != 0) {
    throw DimensionMismatch("nt_xent_loss: need an even number >= 2 of rows");
  }
  if (!(tau_s > 0.0)) throw InvalidArgument("nt_xent_loss: tau_s must be positive");

  const Vector norms = z.rowwise().norm();
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (norms(i) == 0.0) throw ZeroVector("nt_xent_loss: zero row");
  }
  const Matrix n = norms.cwiseInverse().asDiagonal() * z;
  const Matrix s = (n * n.transpose()) / tau_s;

  // g(i, k) = dL / ds(i, k); diagonal stays zero.
  Matrix g = Matrix::Zero(rows, rows);
  double total = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index pos = i ^ 1;
    double mx = -INFINITY;
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (k != i) mx = std::max(mx, s(i, k));
    }
    double denom = 0.0;
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (k != i) denom += std::exp(s(i, k) - mx);
    }
    const double lse = mx + std::log(denom);
    total += lse - s(i, pos);
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (k != i) g(i, k) = std::exp(s(i, k) - lse);
    }
    g(i, pos) -= 1.0;
  }
  const double scale = 1.0 / double(rows);
  g *= scale;

  // s = n n^T / tau, so dL/dn = (g + g^T) n / tau.
  const Matrix dn = (g + g.transpose()) * n / tau_s;
  Matrix dz(rows, z.cols());
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto ni = n.row(i);
    const double proj = dn.row(i).dot(ni);
    dz.row(i) = (dn.row(i) - proj * ni) / norms(i);
  }
  return LossGrad{total * scale, std::move(dz)};
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

void validate_prob_batch(const Matrix& probs, double tol) {
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    if ((probs.row(i).array() < 0.0).any() || !probs.row(i).allFinite()) {
      throw InvalidArgument("probability row " + std::to_string(i) +
                            " has a negative or non-finite entry");
    }
    if (std::abs(probs.row(i).sum() - 1.0) > tol) {
      throw InvalidArgument("probability row " + std::to_string(i) +
                            " does not sum to 1");
    }
  }
}

double cross_entropy(int true_class, const Eigen::Ref<const Vector>& q) {
  if (true_class < 0 || true_class >= q.size()) {
    throw DimensionMismatch("cross_entropy: class index out of range");
  }
  const double p = q(true_class);
  if (!(p > 0.0)) throw ZeroProbability("cross_entropy: q[true class] is zero");
  return -std::log(p);
}

double cross_entropy(const Eigen::Ref<const Vector>& p_true,
                     const Eigen::Ref<const Vector>& q) {
  if (p_true.size() != q.size()) {
    throw DimensionMismatch("cross_entropy: sizes differ");
  }
  int cls = -1;
  for (Eigen::Index i = 0; i < p_true.size(); ++i) {
    if (p_true(i) == 1.0 && cls < 0) {
      cls = int(i);
    } else if (p_true(i) != 0.0) {
      throw InvalidArgument("cross_entropy: target is not one-hot");
    }
  }
  if (cls < 0) throw InvalidArgument("cross_entropy: target is not one-hot");
  return cross_entropy(cls, q);
}

double fixmatch_supervised_loss(std::span<const int> labels,
                                const Matrix& probs_weak) {
  if (labels.size() != std::size_t(probs_weak.rows()) || labels.empty()) {
    throw DimensionMismatch("supervised loss: batch sizes differ");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    total += cross_entropy(labels[b], probs_weak.row(Eigen::Index(b)).transpose());
  }
  return total / double(labels.size());
}

int argmax(const Eigen::Ref<const Vector>& row) {
  int best = 0;
  for (Eigen::Index i = 1; i < row.size(); ++i) {
    if (row(i) > row(best)) best = int(i);
  }
  return best;
}

UnsupervisedLoss fixmatch_unsupervised_loss(const Matrix& probs_weak,
                                            const Matrix& probs_strong,
                                            double tau_f) {
  if (probs_weak.rows() != probs_strong.rows() ||
      probs_weak.cols() != probs_strong.cols() || probs_weak.rows() == 0) {
    throw DimensionMismatch("unsupervised loss: batch shapes differ");
  }
  UnsupervisedLoss out;
  const auto rows = probs_weak.rows();
  out.pseudo_labels.resize(std::size_t(rows));
  out.mask.resize(std::size_t(rows));
  double total = 0.0;
  for (Eigen::Index b = 0; b < rows; ++b) {
    const Vector q = probs_weak.row(b).transpose();
    const int cls = argmax(q);
    out.pseudo_labels[std::size_t(b)] = cls;
    if (q(cls) >= tau_f) {
      out.mask[std::size_t(b)] = true;
      ++out.retained;
      total += cross_entropy(cls, probs_strong.row(b).transpose());
    }
  }
  out.loss = total / double(rows);
  return out;
}

LossGrad softmax_cross_entropy(const Matrix& logits, std::span<const int> labels,
                               std::span<const double> weights,
                               double denominator) {
  const auto rows = logits.rows();
  if (labels.size() != std::size_t(rows) ||
      (!weights.empty() && weights.size() != std::size_t(rows))) {
    throw DimensionMismatch("softmax_cross_entropy: batch sizes differ");
  }
  if (denominator <= 0.0) denominator = double(rows);
  LossGrad out;
  out.grad = softmax_rows(logits);
  double total = 0.0;
  for (Eigen::Index b = 0; b < rows; ++b) {
    const int y = labels[std::size_t(b)];
    if (y < 0 || y >= logits.cols()) {
      throw DimensionMismatch("softmax_cross_entropy: label out of range");
    }
    const double w = weights.empty() ? 1.0 : weights[std::size_t(b)];
    if (w != 0.0) {
      const double mx = logits.row(b).maxCoeff();
      const double lse = mx + std::log((logits.row(b).array() - mx).exp().sum());
      total += w * (lse - logits(b, y));
    }
    out.grad(b, y) -= 1.0;
    out.grad.row(b) *= w / denominator;
  }
  out.loss = total / denominator;
  return out;
}

Vector project(const Eigen::Ref<const Vector>& e, const ProjectionHead& head) {
  if (head.w1.cols() != e.size() || head.w2.cols() != head.w1.rows()) {
    throw DimensionMismatch("project: shapes do not compose");
  }
  return head.w2 * (head.w1 * e).cwiseMax(0.0);
}

ProjectionCache project_forward(const Matrix& e, const ProjectionHead& head) {
  if (head.w1.cols() != e.cols() || head.w2.cols() != head.w1.rows()) {
    throw DimensionMismatch("project: shapes do not compose");
  }
  ProjectionCache c;
  c.e = e;
  c.hidden = e * head.w1.transpose();
  c.z = c.hidden.cwiseMax(0.0) * head.w2.transpose();
  return c;
}

ProjectionGrad project_backward(const ProjectionCache& cache,
                                const ProjectionHead& head, const Matrix& dz) {
  ProjectionGrad g;
  const Matrix act = cache.hidden.cwiseMax(0.0);
  g.w2 = dz.transpose() * act;
  const Matrix dact = dz * head.w2;
  const Matrix dh = dact.cwiseProduct(
      (cache.hidden.array() > 0.0).cast<double>().matrix());
  g.w1 = dh.transpose() * cache.e;
  g.e = dh * head.w1;
  return g;
}

}  // namespace netaug
