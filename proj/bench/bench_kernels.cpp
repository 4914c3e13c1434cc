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

// Times the OpenMP kernels against their serial reference twins on the
// shapes the trainer actually uses, and verifies the outputs are
// bit-identical while at it.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shfl/kernels.hpp"
#include "shfl/rng.hpp"

namespace {

using shfl::Rng;
namespace k = shfl::kernels;

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count() / reps;
}

void report(const std::string& name, double serial_ms, double omp_ms, bool identical) {
  std::printf("%-32s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   %s\n", name.c_str(),
              serial_ms, omp_ms, serial_ms / omp_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  Rng rng(42);
  const int reps = 20;

  {
    // Forward-layer shape: batch 512 through 784x200.
    const int m = 512, kk = 784, n = 200;
    auto a = random_vec(std::size_t(m) * kk, rng);
    auto b = random_vec(std::size_t(kk) * n, rng);
    auto bias = random_vec(n, rng);
    std::vector<double> c1(std::size_t(m) * n), c2(c1.size());
    const double ts = time_ms(
        [&] { k::serial::matmul_nn(m, kk, n, a.data(), b.data(), bias.data(), c1.data()); },
        reps);
    const double tp = time_ms(
        [&] { k::matmul_nn(m, kk, n, a.data(), b.data(), bias.data(), c2.data()); }, reps);
    report("matmul_nn 512x784x200", ts, tp, c1 == c2);
  }
  {
    // Backward data shape: delta (512x200) times transposed 200x200 weights.
    const int m = 512, kk = 200, n = 200;
    auto a = random_vec(std::size_t(m) * kk, rng);
    auto b = random_vec(std::size_t(n) * kk, rng);
    std::vector<double> c1(std::size_t(m) * n), c2(c1.size());
    const double ts =
        time_ms([&] { k::serial::matmul_nt(m, kk, n, a.data(), b.data(), c1.data()); }, reps);
    const double tp = time_ms([&] { k::matmul_nt(m, kk, n, a.data(), b.data(), c2.data()); }, reps);
    report("matmul_nt 512x200x200", ts, tp, c1 == c2);
  }
  {
    // Weight-gradient shape: 784x512 transposed times 512x200.
    const int m = 784, kk = 512, n = 200;
    auto a = random_vec(std::size_t(kk) * m, rng);
    auto b = random_vec(std::size_t(kk) * n, rng);
    std::vector<double> c1(std::size_t(m) * n), c2(c1.size());
    const double ts =
        time_ms([&] { k::serial::matmul_tn(m, kk, n, a.data(), b.data(), c1.data()); }, reps);
    const double tp = time_ms([&] { k::matmul_tn(m, kk, n, a.data(), b.data(), c2.data()); }, reps);
    report("matmul_tn 784x512x200", ts, tp, c1 == c2);
  }
  {
    // Aggregation shape: 30 models of 199,210 parameters.
    const std::size_t dim = 199210;
    const int count = 30;
    std::vector<std::vector<double>> models;
    std::vector<const double*> rows;
    for (int i = 0; i < count; ++i) {
      models.push_back(random_vec(dim, rng));
      rows.push_back(models.back().data());
    }
    auto w = random_vec(count, rng);
    std::vector<double> out1(dim), out2(dim);
    const double ts = time_ms([&] { k::serial::weighted_sum_rows(rows, w, out1); }, reps);
    const double tp = time_ms([&] { k::weighted_sum_rows(rows, w, out2); }, reps);
    report("weighted_sum_rows 30x199210", ts, tp, out1 == out2);
  }
  {
    auto v = random_vec(1 << 22, rng);
    double s1 = 0.0, s2 = 0.0;
    const double ts = time_ms([&] { s1 = k::serial::block_sum(v); }, reps);
    const double tp = time_ms([&] { s2 = k::block_sum(v); }, reps);
    report("block_sum 4M", ts, tp, s1 == s2);
  }
  {
    auto a = random_vec(1 << 22, rng);
    auto b = random_vec(1 << 22, rng);
    double s1 = 0.0, s2 = 0.0;
    const double ts = time_ms([&] { s1 = k::serial::block_dot(a, b); }, reps);
    const double tp = time_ms([&] { s2 = k::block_dot(a, b); }, reps);
    report("block_dot 4M", ts, tp, s1 == s2);
  }
  return 0;
}
