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
#include <vector>

#include "shfl/param_vector.hpp"

namespace shfl {

/// One client's contribution to an aggregation round.
struct ClientUpdate {
  int node_id = 0;
  ParamVector model;
  std::int64_t data_size = 0;  // training samples behind this update
};

/// Distance of a client update from the current global model; smaller means
/// more trusted.
double trust_metric(const ParamVector& update, const ParamVector& global);

/// Trust-based selection at an edge: ranks the updates by trust metric
/// (ties by ascending node id), drops the `a` least trusted, then draws m
/// nodes uniformly without replacement from the remainder. Returns sorted
/// node ids, deterministic per seed. Requires m <= |updates| - a.
std::vector<int> select_clients_shfl(std::span<const ClientUpdate> updates,
                                     const ParamVector& global, int a, int m,
                                     std::uint64_t seed);

/// Data-volume weights d_i / Σ d_v for the selected clients; sums to 1.
std::vector<double> edge_weights(std::span<const ClientUpdate> selected);

struct EdgeAggregate {
  ParamVector model;
  std::int64_t data_total = 0;
};

/// Data-weighted model average plus the total sample count behind it.
EdgeAggregate edge_aggregate(std::span<const ClientUpdate> selected);

/// Plain data-size-weighted mean; same arithmetic as edge_aggregate's model.
ParamVector fedavg(std::span<const ClientUpdate> updates);

/// Each update is scored by the sum of squared distances to its
/// n - f - 2 nearest peers (summed in ascending distance order); the k
/// lowest-scoring updates (ties by index) are averaged unweighted.
/// Requires |updates| >= f + 3 and k <= |updates| - f.
ParamVector multi_krum(std::span<const ParamVector> updates, int f, int k);

/// Coordinate-wise: sort, drop the m smallest and m largest, average the
/// rest (summed in ascending value order). Requires |updates| > 2m.
ParamVector trimmed_mean(std::span<const ParamVector> updates, int m);

}  // namespace shfl
