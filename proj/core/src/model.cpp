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

#include "netaug/model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "netaug/error.hpp"

namespace netaug {

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (auto block : parameter_blocks(z)) std::fill(block.begin(), block.end(), 0.0);
  return z;
}

std::size_t ModelParams::size() const {
  std::size_t n = 0;
  for (auto block : parameter_blocks(*this)) n += block.size();
  return n;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  auto same_shape = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols();
  };
  if (a.encoder.size() != b.encoder.size() ||
      a.projection.has_value() != b.projection.has_value() ||
      a.classifier.has_value() != b.classifier.has_value()) {
    return false;
  }
  for (std::size_t i = 0; i < a.encoder.size(); ++i) {
    if (!same_shape(a.encoder[i].weight, b.encoder[i].weight)) return false;
  }
  if (a.projection && (!same_shape(a.projection->w1, b.projection->w1) ||
                       !same_shape(a.projection->w2, b.projection->w2))) {
    return false;
  }
  if (a.classifier && !same_shape(a.classifier->weight, b.classifier->weight)) {
    return false;
  }
  const auto ba = parameter_blocks(a);
  const auto bb = parameter_blocks(b);
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (std::memcmp(ba[i].data(), bb[i].data(), ba[i].size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, RandomSource& rng) {
  const double limit = std::sqrt(6.0 / double(rows + cols));
  Matrix w(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      w(Eigen::Index(r), Eigen::Index(c)) = (2.0 * rng.uniform01() - 1.0) * limit;
    }
  }
  return w;
}

ModelParams init_encoder(const ModelDims& dims, RandomSource& rng) {
  if (dims.input == 0 || dims.embedding == 0) {
    throw InvalidArgument("model: zero input or embedding size");
  }
  ModelParams p;
  std::size_t in = dims.input;
  auto add = [&](std::size_t out) {
    p.encoder.push_back({glorot_uniform(out, in, rng), Vector::Zero(Eigen::Index(out))});
    in = out;
  };
  for (auto h : dims.hidden) {
    if (h == 0) throw InvalidArgument("model: zero hidden size");
    add(h);
  }
  add(dims.embedding);
  return p;
}

void attach_projection(ModelParams& params, std::size_t hidden, std::size_t out,
                       RandomSource& rng) {
  if (hidden == 0 || out == 0) throw InvalidArgument("model: zero projection size");
  const auto d = params.embedding_dim();
  params.projection = ProjectionHead{glorot_uniform(hidden, d, rng),
                                     glorot_uniform(out, hidden, rng)};
}

void attach_classifier(ModelParams& params, std::size_t num_classes,
                       RandomSource& rng) {
  if (num_classes < 1) throw InvalidArgument("model: no classes");
  params.classifier = DenseLayer{glorot_uniform(num_classes, params.embedding_dim(), rng),
                                 Vector::Zero(Eigen::Index(num_classes))};
}

namespace {

template <class P>
auto blocks_impl(P& params) {
  using Span = std::conditional_t<std::is_const_v<P>, std::span<const double>,
                                  std::span<double>>;
  std::vector<Span> out;
  auto add = [&](auto& m) { out.emplace_back(m.data(), std::size_t(m.size())); };
  for (auto& layer : params.encoder) {
    add(layer.weight);
    add(layer.bias);
  }
  if (params.projection) {
    add(params.projection->w1);
    add(params.projection->w2);
  }
  if (params.classifier) {
    add(params.classifier->weight);
    add(params.classifier->bias);
  }
  return out;
}

}  // namespace

std::vector<std::span<double>> parameter_blocks(ModelParams& params) {
  return blocks_impl(params);
}

std::vector<std::span<const double>> parameter_blocks(const ModelParams& params) {
  return blocks_impl(params);
}

Matrix to_input_matrix(std::span<const DirectionTrace> traces, std::size_t length) {
  Matrix x(Eigen::Index(traces.size()), Eigen::Index(length));
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].length() != length) {
      throw DimensionMismatch("trace length " + std::to_string(traces[i].length()) +
                              " does not match model input " + std::to_string(length));
    }
    const auto cells = traces[i].cells();
    for (std::size_t j = 0; j < length; ++j) {
      x(Eigen::Index(i), Eigen::Index(j)) = cells[j];
    }
  }
  return x;
}

EncoderCache encoder_forward(const ModelParams& params, const Matrix& x) {
  if (params.encoder.empty()) throw DimensionMismatch("model: empty encoder");
  if (std::size_t(x.cols()) != params.input_length()) {
    throw DimensionMismatch("encoder input has " + std::to_string(x.cols()) +
                            " columns, expected " +
                            std::to_string(params.input_length()));
  }
  EncoderCache c;
  Matrix a = x;
  const auto n = params.encoder.size();
  for (std::size_t l = 0; l < n; ++l) {
    const auto& layer = params.encoder[l];
    Matrix z = a * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    c.inputs.push_back(std::move(a));
    a = l + 1 < n ? Matrix(z.cwiseMax(0.0)) : z;
    c.pre.push_back(std::move(z));
  }
  c.output = std::move(a);
  return c;
}

Matrix encoder_backward(const ModelParams& params, const EncoderCache& cache,
                        const Matrix& d_embedding, ModelParams& grads) {
  Matrix d = d_embedding;
  for (std::size_t l = params.encoder.size(); l-- > 0;) {
    if (l + 1 < params.encoder.size()) {
      d = d.cwiseProduct((cache.pre[l].array() > 0.0).cast<double>().matrix());
    }
    grads.encoder[l].weight.noalias() += d.transpose() * cache.inputs[l];
    grads.encoder[l].bias.noalias() += d.colwise().sum().transpose();
    d = d * params.encoder[l].weight;
  }
  return d;
}

Matrix classifier_logits(const ModelParams& params, const Matrix& embeddings) {
  if (!params.classifier) throw DimensionMismatch("model has no classifier head");
  Matrix logits = embeddings * params.classifier->weight.transpose();
  logits.rowwise() += params.classifier->bias.transpose();
  return logits;
}

Vector encode(const DirectionTrace& t, const ModelParams& params) {
  const Matrix x = to_input_matrix(std::span(&t, 1), params.input_length());
  return encoder_forward(params, x).output.row(0).transpose();
}

Vector classify(const DirectionTrace& t, const ModelParams& params) {
  return predict_batch(params, std::span(&t, 1)).row(0).transpose();
}

Matrix predict_batch(const ModelParams& params, std::span<const DirectionTrace> traces) {
  if (!params.classifier) throw DimensionMismatch("model has no classifier head");
  if (traces.empty()) return Matrix(0, Eigen::Index(params.num_classes()));
  const Matrix x = to_input_matrix(traces, params.input_length());
  return softmax_rows(classifier_logits(params, encoder_forward(params, x).output));
}

double contrastive_loss_grad(const ModelParams& params, const Matrix& x,
                             double tau_s, ModelParams* grads) {
  if (!params.projection) throw DimensionMismatch("model has no projection head");
  const auto enc = encoder_forward(params, x);
  const auto proj = project_forward(enc.output, *params.projection);
  auto loss = nt_xent_loss(proj.z, tau_s);
  if (grads) {
    auto pg = project_backward(proj, *params.projection, loss.grad);
    grads->projection->w1 += pg.w1;
    grads->projection->w2 += pg.w2;
    encoder_backward(params, enc, pg.e, *grads);
  }
  return loss.loss;
}

double classification_loss_grad(const ModelParams& params, const Matrix& x,
                                std::span<const int> labels, ModelParams* grads,
                                std::span<const double> weights, double denominator) {
  const auto enc = encoder_forward(params, x);
  const Matrix logits = classifier_logits(params, enc.output);
  auto ce = softmax_cross_entropy(logits, labels, weights, denominator);
  if (grads) {
    grads->classifier->weight.noalias() += ce.grad.transpose() * enc.output;
    grads->classifier->bias.noalias() += ce.grad.colwise().sum().transpose();
    const Matrix d_emb = ce.grad * params.classifier->weight;
    encoder_backward(params, enc, d_emb, *grads);
  }
  return ce.loss;
}

namespace {

constexpr std::array<char, 8> kMagic = {'N', 'E', 'T', 'A', 'U', 'G', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
  } else {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw ParseError("checkpoint truncated", 0);
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  return std::bit_cast<T>(bytes);
}

void put_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put<double>(out, m(r, c));
  }
}

void get_matrix(std::istream& in, Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get<double>(in);
  }
}

void get_vector(std::istream& in, Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = get<double>(in);
}

void put_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) put<double>(out, v(i));
}

Eigen::Index get_dim(std::istream& in) {
  const auto v = get<std::uint64_t>(in);
  if (v == 0 || v > (1ULL << 24)) throw ParseError("checkpoint: bad dimension", 0);
  return Eigen::Index(v);
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, std::uint32_t(params.encoder.size()));
  for (const auto& l : params.encoder) {
    put<std::uint64_t>(out, l.out());
    put<std::uint64_t>(out, l.in());
  }
  put<std::uint8_t>(out, params.projection ? 1 : 0);
  if (params.projection) {
    put<std::uint64_t>(out, std::uint64_t(params.projection->w1.rows()));
    put<std::uint64_t>(out, std::uint64_t(params.projection->w2.rows()));
  }
  put<std::uint8_t>(out, params.classifier ? 1 : 0);
  if (params.classifier) put<std::uint64_t>(out, params.classifier->out());

  for (const auto& l : params.encoder) {
    put_matrix(out, l.weight);
    put_vector(out, l.bias);
  }
  if (params.projection) {
    put_matrix(out, params.projection->w1);
    put_matrix(out, params.projection->w2);
  }
  if (params.classifier) {
    put_matrix(out, params.classifier->weight);
    put_vector(out, params.classifier->bias);
  }
}

ModelParams read_checkpoint(std::istream& in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError("not a netaug checkpoint", 0);
  }
  if (get<std::uint32_t>(in) != kVersion) {
    throw ParseError("unsupported checkpoint version", 0);
  }
  const auto layers = get<std::uint32_t>(in);
  if (layers == 0 || layers > 64) throw ParseError("checkpoint: bad layer count", 0);
  ModelParams p;
  Eigen::Index prev = 0;
  for (std::uint32_t i = 0; i < layers; ++i) {
    const auto rows = get_dim(in);
    const auto cols = get_dim(in);
    if (i > 0 && cols != prev) throw ParseError("checkpoint: layers do not compose", 0);
    prev = rows;
    p.encoder.push_back({Matrix(rows, cols), Vector(rows)});
  }
  if (get<std::uint8_t>(in)) {
    const auto hidden = get_dim(in);
    const auto out = get_dim(in);
    p.projection = ProjectionHead{Matrix(hidden, prev), Matrix(out, hidden)};
  }
  if (get<std::uint8_t>(in)) {
    const auto classes = get_dim(in);
    p.classifier = DenseLayer{Matrix(classes, prev), Vector(classes)};
  }
  for (auto& l : p.encoder) {
    get_matrix(in, l.weight);
    get_vector(in, l.bias);
  }
  if (p.projection) {
    get_matrix(in, p.projection->w1);
    get_matrix(in, p.projection->w2);
  }
  if (p.classifier) {
    get_matrix(in, p.classifier->weight);
    get_vector(in, p.classifier->bias);
  }
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  write_checkpoint(out, params);
  if (!out) throw Error("write failed: " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace netaug
