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

/// Everything the cloud tracks about one edge server within a round.
struct EdgeReport {
  int edge_id = 0;
  ParamVector model;            // aggregated edge model
  std::int64_t data_total = 0;  // samples behind it
  double distance = -1.0;       // L2 distance to the global model
  double score = -1.0;          // priority score derived from distance and data
  double weight = -1.0;         // solved aggregation weight
};

/// ζ = the weight floor any edge receives, τ = the total weight budget.
/// Feasibility requires n_edges·ζ <= τ.
struct CloudConfig {
  double zeta = 0.1;
  double tau = 10.0;

  friend bool operator==(const CloudConfig&, const CloudConfig&) = default;
};

double edge_distance(const ParamVector& edge_model, const ParamVector& global);

/// Priority scores x_i = (D_i / min_j D_j) · (max_j b_j / b_i). Distances are
/// clamped below at 1e-9·max_j b_j so a zero-distance edge (identical to the
/// global model) cannot divide by zero; when every distance is zero the
/// distance ratio is taken as 1 for all edges.
std::vector<double> edge_scores(std::span<const EdgeReport> reports);

struct KktResult {
  std::vector<double> weights;
  /// 0 when the direct clamped/free split already satisfied the constraints;
  /// otherwise the number of refinement passes that re-tested membership.
  int refine_passes = 0;
};

/// Closed-form solution of
///     max Σ x_i·log(w_i + 1)  s.t.  w_i >= ζ, Σ w_i <= τ.
/// Splits edges into a clamped set (weight ζ) and a free set via the score
/// threshold test, evaluates the free weights in closed form, then verifies
/// w_i >= ζ and Σw = τ; if the one-shot split violates the floor, membership
/// is re-tested within the free set until a fixed point.
KktResult kkt_weights(std::span<const double> x, const CloudConfig& cfg);

/// Independent bisection water-filling solver for the same program: weights
/// w_i(v) = max(ζ, x_i/v - 1) with the level v bisected until Σ w_i(v) = τ
/// to 1e-10. Used to cross-check kkt_weights; shares no code with it.
std::vector<double> oracle_weights(std::span<const double> x, const CloudConfig& cfg);

/// Objective value Σ x_i·log(1 + w_i).
double weights_objective(std::span<const double> x, std::span<const double> w);

/// Global model Σ (w_i/τ)·model_i. Requires solved weights summing to τ.
ParamVector cloud_aggregate(std::span<const EdgeReport> reports, const CloudConfig& cfg);

struct CloudRound {
  ParamVector global;
  std::vector<EdgeReport> reports;  // with distance/score/weight filled in
  int refine_passes = 0;
};

/// One full cloud aggregation round: distances, scores, weights, new global.
CloudRound run_cloud_round(std::vector<EdgeReport> reports, const ParamVector& global,
                           const CloudConfig& cfg);

}  // namespace shfl
