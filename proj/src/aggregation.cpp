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

#include "shfl/aggregation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "shfl/kernels.hpp"
#include "shfl/rng.hpp"

namespace shfl {

double trust_metric(const ParamVector& update, const ParamVector& global) {
  return l2_distance(update, global);
}

std::vector<int> select_clients_shfl(std::span<const ClientUpdate> updates,
                                     const ParamVector& global, int a, int m,
                                     std::uint64_t seed) {
  const int n = static_cast<int>(updates.size());
  if (a < 0 || m < 0) throw std::invalid_argument("select_clients_shfl: negative a or m");
  if (m > n - a) {
    throw std::invalid_argument("select_clients_shfl: m=" + std::to_string(m) +
                                " exceeds remaining clients " + std::to_string(n - a));
  }

  struct Ranked {
    double t;
    int node_id;
  };
  std::vector<Ranked> ranking(updates.size());
  for (int i = 0; i < n; ++i) {
    ranking[i] = {trust_metric(updates[i].model, global), updates[i].node_id};
  }
  std::sort(ranking.begin(), ranking.end(), [](const Ranked& x, const Ranked& y) {
    if (x.t != y.t) return x.t < y.t;
    return x.node_id < y.node_id;
  });

  // Keep the n-a most trusted, then draw uniformly among them. The draw is
  // made over the remaining ids in ascending order so it is independent of
  // the input ordering.
  std::vector<int> remaining(static_cast<std::size_t>(n - a));
  for (int i = 0; i < n - a; ++i) remaining[i] = ranking[i].node_id;
  std::sort(remaining.begin(), remaining.end());

  Rng rng(seed);
  const std::vector<int> picks = rng.sample_without_replacement(n - a, m);
  std::vector<int> out(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i) out[i] = remaining[picks[i]];
  return out;
}

std::vector<double> edge_weights(std::span<const ClientUpdate> selected) {
  if (selected.empty()) throw std::invalid_argument("edge_weights: empty selection");
  std::int64_t total = 0;
  for (const auto& u : selected) {
    if (u.data_size < 1) throw std::invalid_argument("edge_weights: data_size must be >= 1");
    total += u.data_size;
  }
  std::vector<double> w(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    w[i] = static_cast<double>(selected[i].data_size) / static_cast<double>(total);
  }
  return w;
}

EdgeAggregate edge_aggregate(std::span<const ClientUpdate> selected) {
  const std::vector<double> w = edge_weights(selected);

  // Accumulate in ascending node id so the result is independent of the
  // input ordering.
  std::vector<std::size_t> order(selected.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&selected](std::size_t a, std::size_t b) {
    return selected[a].node_id < selected[b].node_id;
  });

  const std::size_t dim = selected.front().model.size();
  std::vector<const double*> rows(selected.size());
  std::vector<double> weights(selected.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const ClientUpdate& u = selected[order[i]];
    if (u.model.size() != dim) {
      throw std::invalid_argument("edge_aggregate: model length mismatch");
    }
    rows[i] = u.model.data();
    weights[i] = w[order[i]];
    total += u.data_size;
  }
  std::vector<double> out(dim);
  kernels::weighted_sum_rows(rows, weights, out);
  return {ParamVector(std::move(out)), total};
}

ParamVector fedavg(std::span<const ClientUpdate> updates) {
  return edge_aggregate(updates).model;
}

ParamVector multi_krum(std::span<const ParamVector> updates, int f, int k) {
  const int n = static_cast<int>(updates.size());
  if (f < 0) throw std::invalid_argument("multi_krum: negative f");
  if (n < f + 3) {
    throw std::invalid_argument("multi_krum: need at least f+3 updates, got " +
                                std::to_string(n));
  }
  if (k < 1 || k > n - f) throw std::invalid_argument("multi_krum: k out of range");
  const std::size_t dim = updates.front().size();
  for (const auto& u : updates) {
    if (u.size() != dim) throw std::invalid_argument("multi_krum: model length mismatch");
  }

  // Pairwise squared distances; each pair computed once.
  std::vector<double> dist2(std::size_t(n) * n, 0.0);
  const auto pair_count = static_cast<std::ptrdiff_t>(std::size_t(n) * (n - 1) / 2);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (std::ptrdiff_t p = 0; p < pair_count; ++p) {
    // Unrank p -> (i, j), i < j, in row-major upper-triangle order.
    std::ptrdiff_t i = 0;
    std::ptrdiff_t rem = p;
    while (rem >= n - 1 - i) {
      rem -= n - 1 - i;
      ++i;
    }
    const std::ptrdiff_t j = i + 1 + rem;
    const double* a = updates[static_cast<std::size_t>(i)].data();
    const double* b = updates[static_cast<std::size_t>(j)].data();
    double acc = 0.0;
    for (std::size_t t = 0; t < dim; ++t) {
      const double delta = a[t] - b[t];
      acc += delta * delta;
    }
    dist2[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = acc;
    dist2[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] = acc;
  }

  // Score: sum of the n-f-2 smallest peer distances, ascending.
  const int neighbors = n - f - 2;
  std::vector<double> score(n);
  std::vector<double> row(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) row[pos++] = dist2[std::size_t(i) * n + j];
    }
    std::sort(row.begin(), row.end());
    double acc = 0.0;
    for (int t = 0; t < neighbors; ++t) acc += row[t];
    score[i] = acc;
  }

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&score](int x, int y) {
    if (score[x] != score[y]) return score[x] < score[y];
    return x < y;
  });

  // Mean over the k best, accumulated in ascending score order; with
  // distinct scores this makes the output independent of input ordering.
  std::vector<double> out(dim, 0.0);
  for (int c = 0; c < k; ++c) {
    const double* u = updates[static_cast<std::size_t>(idx[c])].data();
    for (std::size_t t = 0; t < dim; ++t) out[t] += u[t];
  }
  for (double& v : out) v /= k;
  return ParamVector(std::move(out));
}

ParamVector trimmed_mean(std::span<const ParamVector> updates, int m) {
  const int n = static_cast<int>(updates.size());
  if (m < 0) throw std::invalid_argument("trimmed_mean: negative m");
  if (n <= 2 * m) {
    throw std::invalid_argument("trimmed_mean: need more than 2m updates, got " +
                                std::to_string(n));
  }
  const std::size_t dim = updates.front().size();
  for (const auto& u : updates) {
    if (u.size() != dim) throw std::invalid_argument("trimmed_mean: model length mismatch");
  }

  std::vector<double> out(dim);
  const int keep = n - 2 * m;
  const auto dimi = static_cast<std::ptrdiff_t>(dim);
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<double> column(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::ptrdiff_t t = 0; t < dimi; ++t) {
      for (int i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] =
          updates[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      std::sort(column.begin(), column.end());
      double acc = 0.0;
      for (int i = m; i < n - m; ++i) acc += column[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(t)] = acc / keep;
    }
  }
  return ParamVector(std::move(out));
}

}  // namespace shfl
