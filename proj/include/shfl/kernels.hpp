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

namespace shfl::kernels {

// Dense row-major kernels behind model training, evaluation, and
// aggregation. Every kernel here has a serial twin in kernels::serial with
// identical per-element arithmetic; the OpenMP versions only change which
// thread computes which output element, never the accumulation order inside
// an element. Outputs are therefore bit-identical to the serial versions for
// any thread count. Tests assert that equality; the bench target measures
// the speedup.

/// C[m×n] = A[m×k]·B[k×n] (+ bias broadcast over rows when bias != nullptr).
void matmul_nn(int m, int k, int n, const double* a, const double* b, const double* bias,
               double* c);

/// C[m×n] = A[m×k]·B[n×k]^T.
void matmul_nt(int m, int k, int n, const double* a, const double* b, double* c);

/// C[m×n] = A[k×m]^T·B[k×n].
void matmul_tn(int m, int k, int n, const double* a, const double* b, double* c);

/// Sum of x with a fixed blocked association (2048-element blocks, partials
/// combined in block order). Bit-reproducible for any thread count.
double block_sum(std::span<const double> x);

/// Dot product with the same blocked association as block_sum.
double block_dot(std::span<const double> a, std::span<const double> b);

/// out[d] = Σ_i w[i]·rows[i][d], accumulated in ascending i for every d.
void weighted_sum_rows(std::span<const double* const> rows, std::span<const double> w,
                       std::span<double> out);

inline constexpr std::size_t kSumBlock = 2048;

namespace serial {

void matmul_nn(int m, int k, int n, const double* a, const double* b, const double* bias,
               double* c);
void matmul_nt(int m, int k, int n, const double* a, const double* b, double* c);
void matmul_tn(int m, int k, int n, const double* a, const double* b, double* c);
double block_sum(std::span<const double> x);
double block_dot(std::span<const double> a, std::span<const double> b);
void weighted_sum_rows(std::span<const double* const> rows, std::span<const double> w,
                       std::span<double> out);

}  // namespace serial

}  // namespace shfl::kernels
