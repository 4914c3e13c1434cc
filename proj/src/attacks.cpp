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

#include "shfl/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "shfl/rng.hpp"

namespace shfl {

namespace {

// theta scaled onto the sphere of radius `target` (model mode) or its delta
// from the global model scaled onto that sphere (delta mode). Unprojected
// gradient ascent diverges past float64 range within a few dozen steps, so
// the bound is enforced after every step, not only at the end.
void project(std::vector<double>& theta, const ParamVector& global, double target,
             PgaNormalize mode) {
  if (mode == PgaNormalize::kModel) {
    double sq = 0.0;
    for (double v : theta) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm == 0.0) throw std::invalid_argument("pga_update: ascent reached the zero vector");
    const double s = target / norm;
    for (double& v : theta) v *= s;
  } else {
    double sq = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double d = theta[i] - global[i];
      sq += d * d;
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0) return;  // no update yet; nothing to bound
    const double s = target / norm;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] = global[i] + s * (theta[i] - global[i]);
    }
  }
}

}  // namespace

ParamVector pga_update(const Mlp& global, const Dataset& data, std::span<const int> shard,
                       const TrainConfig& cfg, PgaNormalize mode) {
  if (shard.empty()) throw std::invalid_argument("pga_update: empty shard");
  const double target = l2_norm(global.params());
  if (target == 0.0) {
    throw std::invalid_argument("pga_update: global model has zero norm");
  }

  const MlpDims& dims = global.dims();
  std::vector<double> theta(global.params().vec());
  std::vector<int> order(shard.begin(), shard.end());
  const int batch = cfg.batch_size;
  std::vector<double> images(std::size_t(batch) * dims.input);
  std::vector<int> labels(batch);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_seed(cfg.seed, SeedStream::kEpochShuffle, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    for (std::size_t pos = 0; pos < order.size(); pos += std::size_t(batch)) {
      const int m = static_cast<int>(std::min<std::size_t>(batch, order.size() - pos));
      for (int i = 0; i < m; ++i) {
        const int idx = order[pos + i];
        const auto img = data.image(idx);
        std::copy(img.begin(), img.end(), images.begin() + std::size_t(i) * dims.input);
        labels[i] = data.labels[idx];
      }
      const Mlp current(dims, ParamVector(theta));
      const ParamVector g = gradient(current, {images.data(), std::size_t(m) * dims.input},
                                     {labels.data(), std::size_t(m)}, m);
      for (int t = 0; t < dims.param_count(); ++t) theta[t] += cfg.learning_rate * g[t];
      project(theta, global.params(), target, mode);
    }
  }
  if (mode == PgaNormalize::kModel) {
    return scale_to_norm(ParamVector(std::move(theta)), target);
  }
  return ParamVector(std::move(theta));
}

Dataset apply_lf(const Dataset& data, const ShardAssignment& assignment,
                 std::span<const int> attacker_ids, std::uint64_t seed) {
  Dataset out = data;
  for (int id : attacker_ids) {
    if (id < 0 || id >= assignment.n_nodes()) {
      throw std::invalid_argument("apply_lf: attacker id " + std::to_string(id) +
                                  " outside node range");
    }
    out.labels = flip_labels(std::move(out.labels), assignment.shard(id), out.n_classes,
                             derive_seed(seed, SeedStream::kLabelFlip,
                                         static_cast<std::uint64_t>(id)));
  }
  return out;
}

}  // namespace shfl
