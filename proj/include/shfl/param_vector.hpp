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

#include <cstddef>
#include <span>
#include <vector>

namespace shfl {

/// Flat vector of 64-bit model parameters. Length is fixed at construction
/// and all entries are checked finite; every aggregation rule and distance
/// in the simulator operates on this type. Values are immutable through the
/// public surface, so instances can be shared freely across training workers.
class ParamVector {
 public:
  ParamVector() = default;

  /// Takes ownership of `values`; throws std::invalid_argument on NaN/Inf.
  explicit ParamVector(std::vector<double> values);

  static ParamVector zeros(std::size_t n) { return ParamVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> values() const { return v_; }
  const std::vector<double>& vec() const { return v_; }
  const double* data() const { return v_.data(); }

  friend bool operator==(const ParamVector& a, const ParamVector& b) { return a.v_ == b.v_; }

 private:
  std::vector<double> v_;
};

/// Euclidean norm. Uses a fixed blocked summation order, so the result does
/// not depend on thread count.
double l2_norm(const ParamVector& v);

/// l2_norm(a - b); throws on length mismatch.
double l2_distance(const ParamVector& a, const ParamVector& b);

/// Σ_i weights[i]·vectors[i]. Weights are used as given; normalization is the
/// caller's business. Throws on empty input or length mismatch.
ParamVector weighted_sum(std::span<const ParamVector> vectors, std::span<const double> weights);

/// Rescales v so its norm equals `target`. target = 0 returns the zero
/// vector; a zero input with nonzero target is an error.
ParamVector scale_to_norm(const ParamVector& v, double target);

}  // namespace shfl
