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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "netaug/random.hpp"
#include "netaug/ssl.hpp"
#include "netaug/trace.hpp"

namespace netaug {

/// y = W x + b, W is out x in.
struct DenseLayer {
  Matrix weight;
  Vector bias;

  std::size_t in() const { return std::size_t(weight.cols()); }
  std::size_t out() const { return std::size_t(weight.rows()); }
};

/// Shape of the feed-forward encoder and its heads.
struct ModelDims {
  std::size_t input = 500;
  std::vector<std::size_t> hidden = {256, 128};
  std::size_t embedding = 64;
  std::size_t projection_hidden = 64;
  /// 0 selects embedding / 4.
  std::size_t projection_out = 0;

  std::size_t projection_dim() const {
    return projection_out ? projection_out : embedding / 4;
  }
};

/// Encoder f (relu between layers, linear output), optional projection head
/// g for pre-training, optional softmax classifier for fine-tuning.
struct ModelParams {
  std::vector<DenseLayer> encoder;
  std::optional<ProjectionHead> projection;
  std::optional<DenseLayer> classifier;

  std::size_t input_length() const { return encoder.front().in(); }
  std::size_t embedding_dim() const { return encoder.back().out(); }
  std::size_t num_classes() const { return classifier ? classifier->out() : 0; }

  /// Same structure, all values zero.
  ModelParams zeros_like() const;
  /// Number of scalar parameters.
  std::size_t size() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

/// Glorot-uniform weights, zero biases.
Matrix glorot_uniform(std::size_t rows, std::size_t cols, RandomSource& rng);

ModelParams init_encoder(const ModelDims& dims, RandomSource& rng);
void attach_projection(ModelParams& params, std::size_t hidden, std::size_t out,
                       RandomSource& rng);
void attach_classifier(ModelParams& params, std::size_t num_classes,
                       RandomSource& rng);

/// Every parameter block in a fixed order: encoder (W, b)..., projection
/// (W1, W2), classifier (W, b).
std::vector<std::span<double>> parameter_blocks(ModelParams& params);
std::vector<std::span<const double>> parameter_blocks(const ModelParams& params);

/// Rows of the returned matrix are the cells of each trace as doubles.
/// Throws DimensionMismatch when a trace length differs from `length`.
Matrix to_input_matrix(std::span<const DirectionTrace> traces, std::size_t length);

struct EncoderCache {
  std::vector<Matrix> inputs;  // input to each layer
  std::vector<Matrix> pre;     // pre-activation of each layer
  Matrix output;               // embeddings, B x d_e
};

EncoderCache encoder_forward(const ModelParams& params, const Matrix& x);

/// Accumulates the encoder gradient for dL/d(embeddings) into `grads`;
/// returns dL/dx.
Matrix encoder_backward(const ModelParams& params, const EncoderCache& cache,
                        const Matrix& d_embedding, ModelParams& grads);

/// Classifier logits for rows of embeddings.
Matrix classifier_logits(const ModelParams& params, const Matrix& embeddings);

Vector encode(const DirectionTrace& t, const ModelParams& params);
Vector classify(const DirectionTrace& t, const ModelParams& params);
/// One probability row per trace, input order preserved.
Matrix predict_batch(const ModelParams& params,
                     std::span<const DirectionTrace> traces);

/// Loss and gradient of mean NT-Xent over the projected embeddings of x.
double contrastive_loss_grad(const ModelParams& params, const Matrix& x,
                             double tau_s, ModelParams* grads);

/// Loss and gradient of weighted mean softmax cross-entropy over x.
double classification_loss_grad(const ModelParams& params, const Matrix& x,
                                std::span<const int> labels, ModelParams* grads,
                                std::span<const double> weights = {},
                                double denominator = 0.0);

// Checkpoint: "NETAUGCK", u32 version, dims header, then row-major
// little-endian float64 blocks in parameter_blocks order.
void write_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace netaug
