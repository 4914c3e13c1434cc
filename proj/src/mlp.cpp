/*
 * Copyright 2026 The shfl-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "shfl/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "shfl/kernels.hpp"
#include "shfl/rng.hpp"

namespace shfl {

namespace {

// Scratch for one forward/backward pass; reused across minibatch steps so a
// training call does not allocate per step.
struct Workspace {
  std::vector<double> x;  // gathered batch images
  std::vector<double> z1, a1, z2, a2, z3;
  std::vector<double> probs;
  std::vector<double> d3, d2, d1;  // layer deltas
  std::vector<double> losses;     // per-sample losses
  std::vector<double> grad;

  void resize(const MlpDims& d, int batch) {
    x.resize(std::size_t(batch) * d.input);
    z1.resize(std::size_t(batch) * d.hidden1);
    a1.resize(std::size_t(batch) * d.hidden1);
    z2.resize(std::size_t(batch) * d.hidden2);
    a2.resize(std::size_t(batch) * d.hidden2);
    z3.resize(std::size_t(batch) * d.output);
    probs.resize(std::size_t(batch) * d.output);
    d3.resize(std::size_t(batch) * d.output);
    d2.resize(std::size_t(batch) * d.hidden2);
    d1.resize(std::size_t(batch) * d.hidden1);
    losses.resize(batch);
    grad.resize(d.param_count());
  }
};

inline void relu(const double* z, double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
}

inline void relu_backward(const double* z, double* delta, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] <= 0.0) delta[i] = 0.0;
  }
}

// Row-wise softmax through log-sum-exp. Fills probs and, when labels are
// given, per-sample losses lse(z) - z[label].
void softmax_rows(const double* logits, int batch, int classes, double* probs,
                  const int* labels, double* losses) {
  for (int i = 0; i < batch; ++i) {
    const double* z = logits + std::size_t(i) * classes;
    double* p = probs + std::size_t(i) * classes;
    double zmax = z[0];
    for (int j = 1; j < classes; ++j) zmax = std::max(zmax, z[j]);
    double sum = 0.0;
    for (int j = 0; j < classes; ++j) {
      p[j] = std::exp(z[j] - zmax);
      sum += p[j];
    }
    const double inv = 1.0 / sum;
    for (int j = 0; j < classes; ++j) p[j] *= inv;
    if (labels != nullptr) {
      losses[i] = zmax + std::log(sum) - z[labels[i]];
    }
  }
}

void forward_pass(const MlpDims& d, const double* theta, const double* x, int batch,
                  Workspace& ws) {
  kernels::matmul_nn(batch, d.input, d.hidden1, x, theta + d.w1_off(), theta + d.b1_off(),
                     ws.z1.data());
  relu(ws.z1.data(), ws.a1.data(), std::size_t(batch) * d.hidden1);
  kernels::matmul_nn(batch, d.hidden1, d.hidden2, ws.a1.data(), theta + d.w2_off(),
                     theta + d.b2_off(), ws.z2.data());
  relu(ws.z2.data(), ws.a2.data(), std::size_t(batch) * d.hidden2);
  kernels::matmul_nn(batch, d.hidden2, d.output, ws.a2.data(), theta + d.w3_off(),
                     theta + d.b3_off(), ws.z3.data());
}

inline void colsum(const double* mat, int rows, int cols, double* out) {
  std::fill(out, out + cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    const double* row = mat + std::size_t(i) * cols;
    for (int j = 0; j < cols; ++j) out[j] += row[j];
  }
}

// Mean cross-entropy gradient for the gathered batch in ws.x; result in
// ws.grad (canonical layout). Also leaves per-sample losses in ws.losses.
void backward_pass(const MlpDims& d, const double* theta, std::span<const int> labels, int batch,
                   Workspace& ws) {
  forward_pass(d, theta, ws.x.data(), batch, ws);
  softmax_rows(ws.z3.data(), batch, d.output, ws.probs.data(), labels.data(), ws.losses.data());

  const double inv_batch = 1.0 / batch;
  for (int i = 0; i < batch; ++i) {
    const double* p = ws.probs.data() + std::size_t(i) * d.output;
    double* dz = ws.d3.data() + std::size_t(i) * d.output;
    for (int j = 0; j < d.output; ++j) dz[j] = p[j] * inv_batch;
    dz[labels[i]] -= inv_batch;
  }

  double* g = ws.grad.data();
  kernels::matmul_tn(d.hidden2, batch, d.output, ws.a2.data(), ws.d3.data(), g + d.w3_off());
  colsum(ws.d3.data(), batch, d.output, g + d.b3_off());

  kernels::matmul_nt(batch, d.output, d.hidden2, ws.d3.data(), theta + d.w3_off(), ws.d2.data());
  relu_backward(ws.z2.data(), ws.d2.data(), std::size_t(batch) * d.hidden2);
  kernels::matmul_tn(d.hidden1, batch, d.hidden2, ws.a1.data(), ws.d2.data(), g + d.w2_off());
  colsum(ws.d2.data(), batch, d.hidden2, g + d.b2_off());

  kernels::matmul_nt(batch, d.hidden2, d.hidden1, ws.d2.data(), theta + d.w2_off(), ws.d1.data());
  relu_backward(ws.z1.data(), ws.d1.data(), std::size_t(batch) * d.hidden1);
  kernels::matmul_tn(d.input, batch, d.hidden1, ws.x.data(), ws.d1.data(), g + d.w1_off());
  colsum(ws.d1.data(), batch, d.hidden1, g + d.b1_off());
}

void gather_batch(const Dataset& data, std::span<const int> idx, double* out, int* labels_out) {
  const int dim = data.dim;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto img = data.image(idx[i]);
    std::copy(img.begin(), img.end(), out + i * dim);
    labels_out[i] = data.labels[idx[i]];
  }
}

}  // namespace

Mlp::Mlp(MlpDims dims, ParamVector params) : dims_(dims), params_(std::move(params)) {
  if (static_cast<int>(params_.size()) != dims_.param_count()) {
    throw std::invalid_argument("Mlp: parameter count " + std::to_string(params_.size()) +
                                " does not match layout " + std::to_string(dims_.param_count()));
  }
}

Mlp Mlp::init(MlpDims dims, std::uint64_t seed) {
  std::vector<double> p(dims.param_count(), 0.0);
  Rng rng(derive_seed(seed, SeedStream::kModelInit));
  const auto glorot = [&rng](double* w, int count, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (int i = 0; i < count; ++i) w[i] = rng.uniform(-limit, limit);
  };
  glorot(p.data() + dims.w1_off(), dims.w1_count(), dims.input, dims.hidden1);
  glorot(p.data() + dims.w2_off(), dims.w2_count(), dims.hidden1, dims.hidden2);
  glorot(p.data() + dims.w3_off(), dims.w3_count(), dims.hidden2, dims.output);
  return Mlp(dims, ParamVector(std::move(p)));
}

std::vector<double> forward_probs(const Mlp& model, std::span<const double> images, int batch) {
  const MlpDims& d = model.dims();
  if (batch <= 0 || images.size() != std::size_t(batch) * d.input) {
    throw std::invalid_argument("forward_probs: image buffer does not match batch×input");
  }
  Workspace ws;
  ws.resize(d, batch);
  forward_pass(d, model.params().data(), images.data(), batch, ws);
  std::vector<double> probs(std::size_t(batch) * d.output);
  softmax_rows(ws.z3.data(), batch, d.output, probs.data(), nullptr, nullptr);
  return probs;
}

ParamVector gradient(const Mlp& model, std::span<const double> images,
                     std::span<const int> labels, int batch) {
  if (batch <= 0) throw std::invalid_argument("gradient: empty batch");
  const MlpDims& d = model.dims();
  if (images.size() != std::size_t(batch) * d.input || labels.size() != std::size_t(batch)) {
    throw std::invalid_argument("gradient: batch size mismatch");
  }
  Workspace ws;
  ws.resize(d, batch);
  std::copy(images.begin(), images.end(), ws.x.begin());
  backward_pass(d, model.params().data(), labels, batch, ws);
  return ParamVector(std::move(ws.grad));
}

double mean_loss(const Mlp& model, std::span<const double> images, std::span<const int> labels,
                 int batch) {
  if (batch <= 0) throw std::invalid_argument("mean_loss: empty batch");
  const MlpDims& d = model.dims();
  Workspace ws;
  ws.resize(d, batch);
  forward_pass(d, model.params().data(), images.data(), batch, ws);
  softmax_rows(ws.z3.data(), batch, d.output, ws.probs.data(), labels.data(), ws.losses.data());
  return kernels::block_sum(std::span<const double>(ws.losses.data(), std::size_t(batch))) / batch;
}

ParamVector train_local(const Mlp& start, const Dataset& data, std::span<const int> shard,
                        const TrainConfig& cfg) {
  if (shard.empty()) throw std::invalid_argument("train_local: empty shard");
  if (cfg.learning_rate < 0.0) throw std::invalid_argument("train_local: negative learning rate");
  if (cfg.epochs < 1 || cfg.batch_size < 1) {
    throw std::invalid_argument("train_local: epochs and batch_size must be >= 1");
  }
  if (data.dim != start.dims().input) {
    throw std::invalid_argument("train_local: input dimension mismatch");
  }

  const MlpDims& d = start.dims();
  std::vector<double> theta(start.params().vec());
  std::vector<int> order(shard.begin(), shard.end());
  std::vector<int> batch_labels(cfg.batch_size);
  Workspace ws;
  ws.resize(d, cfg.batch_size);
  const double step = cfg.direction == TrainConfig::Direction::kAscent ? cfg.learning_rate
                                                                       : -cfg.learning_rate;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_seed(cfg.seed, SeedStream::kEpochShuffle, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    for (std::size_t pos = 0; pos < order.size(); pos += std::size_t(cfg.batch_size)) {
      const int m =
          static_cast<int>(std::min<std::size_t>(cfg.batch_size, order.size() - pos));
      gather_batch(data, std::span<const int>(order.data() + pos, std::size_t(m)), ws.x.data(),
                   batch_labels.data());
      backward_pass(d, theta.data(), std::span<const int>(batch_labels.data(), std::size_t(m)), m,
                    ws);
      const double* g = ws.grad.data();
      for (int t = 0; t < d.param_count(); ++t) theta[t] += step * g[t];
    }
  }
  return ParamVector(std::move(theta));
}

EvalResult evaluate(const Mlp& model, const Dataset& test) {
  if (test.n == 0) throw std::invalid_argument("evaluate: empty test set");
  const MlpDims& d = model.dims();
  if (test.dim != d.input) throw std::invalid_argument("evaluate: input dimension mismatch");

  constexpr int kChunk = 512;
  Workspace ws;
  ws.resize(d, std::min(kChunk, test.n));
  std::vector<double> losses(test.n);
  long correct = 0;
  for (int lo = 0; lo < test.n; lo += kChunk) {
    const int m = std::min(kChunk, test.n - lo);
    forward_pass(d, model.params().data(), test.images.data() + std::size_t(lo) * d.input, m, ws);
    softmax_rows(ws.z3.data(), m, d.output, ws.probs.data(), test.labels.data() + lo,
                 losses.data() + lo);
    for (int i = 0; i < m; ++i) {
      const double* z = ws.z3.data() + std::size_t(i) * d.output;
      int arg = 0;
      for (int j = 1; j < d.output; ++j) {
        if (z[j] > z[arg]) arg = j;  // ties keep the lowest class index
      }
      if (arg == test.labels[lo + i]) ++correct;
    }
  }
  EvalResult r;
  r.accuracy = static_cast<double>(correct) / test.n;
  r.mean_loss = kernels::block_sum(losses) / test.n;
  return r;
}

}  // namespace shfl
