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

#include "shfl/kernels.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#define SHFL_OMP_FOR _Pragma("omp parallel for schedule(static) if(!omp_in_parallel())")
#else
#define SHFL_OMP_FOR
#endif

namespace shfl::kernels {

namespace {

// Shared element-level routines. Both the OpenMP and serial entry points call
// these, which is what makes the twins bit-identical.

inline void row_times_matrix(int k, int n, const double* a_row, const double* b,
                             const double* bias, double* c_row) {
  if (bias != nullptr) {
    std::copy(bias, bias + n, c_row);
  } else {
    std::fill(c_row, c_row + n, 0.0);
  }
  for (int t = 0; t < k; ++t) {
    const double av = a_row[t];
    const double* b_row = b + static_cast<std::size_t>(t) * n;
    for (int j = 0; j < n; ++j) c_row[j] += av * b_row[j];
  }
}

// B[n×k] transposed into out[k×n]; lets the nt product run with the same
// contiguous inner loop as the nn case (and the same per-element addition
// order as a direct dot).
inline std::vector<double> transpose(int rows, int cols, const double* b) {
  std::vector<double> out(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out[static_cast<std::size_t>(j) * rows + i] = b[static_cast<std::size_t>(i) * cols + j];
    }
  }
  return out;
}

inline void col_times_matrix(int m, int k, int n, int i, const double* a, const double* b,
                             double* c_row) {
  std::fill(c_row, c_row + n, 0.0);
  for (int t = 0; t < k; ++t) {
    const double av = a[static_cast<std::size_t>(t) * m + i];
    const double* b_row = b + static_cast<std::size_t>(t) * n;
    for (int j = 0; j < n; ++j) c_row[j] += av * b_row[j];
  }
}

inline double sum_block(const double* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i];
  return acc;
}

inline double dot_block(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

inline void weighted_sum_span(std::span<const double* const> rows, std::span<const double> w,
                              std::size_t lo, std::size_t hi, double* out) {
  std::fill(out + lo, out + hi, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double wi = w[i];
    const double* row = rows[i];
    for (std::size_t d = lo; d < hi; ++d) out[d] += wi * row[d];
  }
}

inline std::size_t block_count(std::size_t n) { return (n + kSumBlock - 1) / kSumBlock; }

}  // namespace

void matmul_nn(int m, int k, int n, const double* a, const double* b, const double* bias,
               double* c) {
  SHFL_OMP_FOR
  for (int i = 0; i < m; ++i) {
    row_times_matrix(k, n, a + static_cast<std::size_t>(i) * k, b, bias,
                     c + static_cast<std::size_t>(i) * n);
  }
}

void matmul_nt(int m, int k, int n, const double* a, const double* b, double* c) {
  const std::vector<double> bt = transpose(n, k, b);
  SHFL_OMP_FOR
  for (int i = 0; i < m; ++i) {
    row_times_matrix(k, n, a + static_cast<std::size_t>(i) * k, bt.data(), nullptr,
                     c + static_cast<std::size_t>(i) * n);
  }
}

void matmul_tn(int m, int k, int n, const double* a, const double* b, double* c) {
  SHFL_OMP_FOR
  for (int i = 0; i < m; ++i) {
    col_times_matrix(m, k, n, i, a, b, c + static_cast<std::size_t>(i) * n);
  }
}

double block_sum(std::span<const double> x) {
  const std::size_t nb = block_count(x.size());
  if (nb <= 1) return sum_block(x.data(), x.size());
  std::vector<double> partials(nb);
  const auto nbi = static_cast<std::ptrdiff_t>(nb);
  SHFL_OMP_FOR
  for (std::ptrdiff_t bi = 0; bi < nbi; ++bi) {
    const std::size_t lo = static_cast<std::size_t>(bi) * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, x.size());
    partials[static_cast<std::size_t>(bi)] = sum_block(x.data() + lo, hi - lo);
  }
  return sum_block(partials.data(), partials.size());
}

double block_dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t nb = block_count(a.size());
  if (nb <= 1) return dot_block(a.data(), b.data(), a.size());
  std::vector<double> partials(nb);
  const auto nbi = static_cast<std::ptrdiff_t>(nb);
  SHFL_OMP_FOR
  for (std::ptrdiff_t bi = 0; bi < nbi; ++bi) {
    const std::size_t lo = static_cast<std::size_t>(bi) * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, a.size());
    partials[static_cast<std::size_t>(bi)] = dot_block(a.data() + lo, b.data() + lo, hi - lo);
  }
  return sum_block(partials.data(), partials.size());
}

void weighted_sum_rows(std::span<const double* const> rows, std::span<const double> w,
                       std::span<double> out) {
  const std::size_t nb = block_count(out.size());
  const auto nbi = static_cast<std::ptrdiff_t>(nb);
  SHFL_OMP_FOR
  for (std::ptrdiff_t bi = 0; bi < nbi; ++bi) {
    const std::size_t lo = static_cast<std::size_t>(bi) * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, out.size());
    weighted_sum_span(rows, w, lo, hi, out.data());
  }
}

namespace serial {

void matmul_nn(int m, int k, int n, const double* a, const double* b, const double* bias,
               double* c) {
  for (int i = 0; i < m; ++i) {
    row_times_matrix(k, n, a + static_cast<std::size_t>(i) * k, b, bias,
                     c + static_cast<std::size_t>(i) * n);
  }
}

void matmul_nt(int m, int k, int n, const double* a, const double* b, double* c) {
  const std::vector<double> bt = transpose(n, k, b);
  for (int i = 0; i < m; ++i) {
    row_times_matrix(k, n, a + static_cast<std::size_t>(i) * k, bt.data(), nullptr,
                     c + static_cast<std::size_t>(i) * n);
  }
}

void matmul_tn(int m, int k, int n, const double* a, const double* b, double* c) {
  for (int i = 0; i < m; ++i) {
    col_times_matrix(m, k, n, i, a, b, c + static_cast<std::size_t>(i) * n);
  }
}

double block_sum(std::span<const double> x) {
  const std::size_t nb = block_count(x.size());
  if (nb <= 1) return sum_block(x.data(), x.size());
  std::vector<double> partials(nb);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t lo = bi * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, x.size());
    partials[bi] = sum_block(x.data() + lo, hi - lo);
  }
  return sum_block(partials.data(), partials.size());
}

double block_dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t nb = block_count(a.size());
  if (nb <= 1) return dot_block(a.data(), b.data(), a.size());
  std::vector<double> partials(nb);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t lo = bi * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, a.size());
    partials[bi] = dot_block(a.data() + lo, b.data() + lo, hi - lo);
  }
  return sum_block(partials.data(), partials.size());
}

void weighted_sum_rows(std::span<const double* const> rows, std::span<const double> w,
                       std::span<double> out) {
  const std::size_t nb = block_count(out.size());
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t lo = bi * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, out.size());
    weighted_sum_span(rows, w, lo, hi, out.data());
  }
}

}  // namespace serial

}  // namespace shfl::kernels
