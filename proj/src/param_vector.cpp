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

#include "shfl/param_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shfl/kernels.hpp"

namespace shfl {

ParamVector::ParamVector(std::vector<double> values) : v_(std::move(values)) {
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_[i])) {
      throw std::invalid_argument("ParamVector: non-finite entry at index " + std::to_string(i));
    }
  }
}

double l2_norm(const ParamVector& v) {
  return std::sqrt(kernels::block_dot(v.values(), v.values()));
}

double l2_distance(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l2_distance: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  // Blocked like kernels::block_dot so the result is thread-count independent.
  const std::size_t n = a.size();
  const std::size_t nb = (n + kernels::kSumBlock - 1) / kernels::kSumBlock;
  double total = 0.0;
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t lo = bi * kernels::kSumBlock;
    const std::size_t hi = std::min(lo + kernels::kSumBlock, n);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    total += acc;
  }
  return std::sqrt(total);
}

ParamVector weighted_sum(std::span<const ParamVector> vectors, std::span<const double> weights) {
  if (vectors.empty()) throw std::invalid_argument("weighted_sum: empty input");
  if (vectors.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum: |vectors| != |weights|");
  }
  const std::size_t n = vectors.front().size();
  std::vector<const double*> rows(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) throw std::invalid_argument("weighted_sum: length mismatch");
    rows[i] = vectors[i].data();
  }
  std::vector<double> out(n);
  kernels::weighted_sum_rows(rows, weights, out);
  return ParamVector(std::move(out));
}

ParamVector scale_to_norm(const ParamVector& v, double target) {
  if (target < 0.0) throw std::invalid_argument("scale_to_norm: negative target");
  if (target == 0.0) return ParamVector::zeros(v.size());
  const double norm = l2_norm(v);
  if (norm == 0.0) {
    throw std::invalid_argument("scale_to_norm: zero vector with nonzero target");
  }
  const double s = target / norm;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
  return ParamVector(std::move(out));
}

}  // namespace shfl
