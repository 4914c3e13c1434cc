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

#pragma once

#include <cstdint>
#include <span>

#include "shfl/data.hpp"
#include "shfl/param_vector.hpp"

namespace shfl {

/// Two-hidden-layer MLP shape. Parameters live in one flat vector with the
/// canonical layout [W1 row-major (input×hidden1), b1, W2, b2, W3, b3].
struct MlpDims {
  int input = 784;
  int hidden1 = 200;
  int hidden2 = 200;
  int output = 10;

  int w1_count() const { return input * hidden1; }
  int w2_count() const { return hidden1 * hidden2; }
  int w3_count() const { return hidden2 * output; }
  int param_count() const {
    return w1_count() + hidden1 + w2_count() + hidden2 + w3_count() + output;
  }
  int w1_off() const { return 0; }
  int b1_off() const { return w1_count(); }
  int w2_off() const { return b1_off() + hidden1; }
  int b2_off() const { return w2_off() + w2_count(); }
  int w3_off() const { return b2_off() + hidden2; }
  int b3_off() const { return w3_off() + w3_count(); }

  friend bool operator==(const MlpDims&, const MlpDims&) = default;
};

/// The standard 784→200→200→10 configuration (199,210 parameters).
inline constexpr MlpDims mlp_2nn() { return MlpDims{}; }

/// ReLU-ReLU-softmax MLP over a flat ParamVector. Flatten/unflatten is the
/// identity on the canonical layout, so round-trips are exact.
class Mlp {
 public:
  Mlp(MlpDims dims, ParamVector params);

  /// Glorot-uniform weights, zero biases; deterministic per seed.
  static Mlp init(MlpDims dims, std::uint64_t seed);

  const MlpDims& dims() const { return dims_; }
  const ParamVector& params() const { return params_; }

  std::span<const double> w1() const { return params_.values().subspan(dims_.w1_off(), dims_.w1_count()); }
  std::span<const double> b1() const { return params_.values().subspan(dims_.b1_off(), dims_.hidden1); }
  std::span<const double> w2() const { return params_.values().subspan(dims_.w2_off(), dims_.w2_count()); }
  std::span<const double> b2() const { return params_.values().subspan(dims_.b2_off(), dims_.hidden2); }
  std::span<const double> w3() const { return params_.values().subspan(dims_.w3_off(), dims_.w3_count()); }
  std::span<const double> b3() const { return params_.values().subspan(dims_.b3_off(), dims_.output); }

 private:
  MlpDims dims_;
  ParamVector params_;
};

struct TrainConfig {
  enum class Direction { kDescent, kAscent };

  double learning_rate = 0.1;
  int epochs = 5;
  int batch_size = 32;
  Direction direction = Direction::kDescent;
  std::uint64_t seed = 0;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

/// Class probabilities for a batch of images (row-major batch×dim input,
/// batch×output result). Each output row is a softmax simplex point.
std::vector<double> forward_probs(const Mlp& model, std::span<const double> images, int batch);

/// Gradient of the mean cross-entropy loss over the batch with respect to the
/// flat parameters. Cross-entropy goes through log-sum-exp, never through
/// clipped probabilities.
ParamVector gradient(const Mlp& model, std::span<const double> images,
                     std::span<const int> labels, int batch);

/// Mean cross-entropy loss over the batch (no gradient).
double mean_loss(const Mlp& model, std::span<const double> images, std::span<const int> labels,
                 int batch);

/// Minibatch SGD over the shard: epochs × ceil(|shard|/batch) steps, final
/// partial batch included, order reshuffled per (seed, epoch). Descent steps
/// θ−lr·g, ascent θ+lr·g. Returns the trained flat parameters.
ParamVector train_local(const Mlp& start, const Dataset& data, std::span<const int> shard,
                        const TrainConfig& cfg);

/// Accuracy (argmax, ties to the lowest class index) and mean loss over a
/// test set.
EvalResult evaluate(const Mlp& model, const Dataset& test);

}  // namespace shfl
