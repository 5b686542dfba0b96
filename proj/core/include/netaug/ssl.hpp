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

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace netaug {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Temperatures, pseudo-label threshold and unlabeled weighting.
struct SslConfig {
  double tau_s = 0.5;
  double tau_f = 0.95;
  double lambda_u = 1.0;
  int mu = 19;

  void validate() const;
};

/// u.v / (|u| |v|). Throws ZeroVector if either norm is zero.
double cosine_sim(const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& v);

struct LossGrad {
  double loss = 0.0;
  Matrix grad;  // same shape as the input
};

/// NT-Xent over 2N projection rows where rows 2k and 2k+1 form the positive
/// pair of source k. The loss is the mean of the 2N ordered-pair terms and
/// `grad` is its gradient with respect to every row.
LossGrad nt_xent_loss(const Matrix& z, double tau_s);

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

/// Throws InvalidArgument unless every row is nonnegative and sums to 1
/// within `tol`.
void validate_prob_batch(const Matrix& probs, double tol = 1e-9);

/// -log q[true_class]. Throws ZeroProbability when q[true_class] == 0.
double cross_entropy(int true_class, const Eigen::Ref<const Vector>& q);
/// One-hot overload; throws InvalidArgument if `p_true` is not one-hot.
double cross_entropy(const Eigen::Ref<const Vector>& p_true,
                     const Eigen::Ref<const Vector>& q);

/// Mean cross-entropy of the weak-view predictions against the labels.
double fixmatch_supervised_loss(std::span<const int> labels,
                                const Matrix& probs_weak);

struct UnsupervisedLoss {
  double loss = 0.0;
  std::size_t retained = 0;
  std::vector<int> pseudo_labels;  // argmax of each weak row, lowest on ties
  std::vector<bool> mask;          // max(weak row) >= tau_f
};

/// Pseudo-labels from the weak rows, cross-entropy on the strong rows for
/// the confident ones, averaged over all rows.
UnsupervisedLoss fixmatch_unsupervised_loss(const Matrix& probs_weak,
                                            const Matrix& probs_strong,
                                            double tau_f);

inline double fixmatch_total_loss(double ls, double lu, double lambda_u) {
  return ls + lambda_u * lu;
}

/// Index of the largest element; ties go to the lowest index.
int argmax(const Eigen::Ref<const Vector>& row);

/// Mean softmax cross-entropy over rows of `logits`, with its gradient
/// (q - onehot) / B. `weights` scales each row's term (default 1).
LossGrad softmax_cross_entropy(const Matrix& logits, std::span<const int> labels,
                               std::span<const double> weights = {},
                               double denominator = 0.0);

/// Two-layer projection head z = W2 relu(W1 e).
struct ProjectionHead {
  Matrix w1;  // hidden x d_e
  Matrix w2;  // d_z x hidden
};

Vector project(const Eigen::Ref<const Vector>& e, const ProjectionHead& head);

/// Batched forward over rows of `e`; keeps the hidden pre-activation for
/// the backward pass.
struct ProjectionCache {
  Matrix e;       // B x d_e
  Matrix hidden;  // B x hidden, pre-activation
  Matrix z;       // B x d_z
};
ProjectionCache project_forward(const Matrix& e, const ProjectionHead& head);

struct ProjectionGrad {
  Matrix w1;
  Matrix w2;
  Matrix e;  // gradient with respect to the input rows
};
ProjectionGrad project_backward(const ProjectionCache& cache,
                                const ProjectionHead& head, const Matrix& dz);

}  // namespace netaug
