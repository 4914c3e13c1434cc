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

#include "shfl/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shfl/kernels.hpp"

namespace shfl {

namespace {

constexpr double kDistanceClampRel = 1e-9;

void check_feasible(std::size_t n, const CloudConfig& cfg) {
  if (cfg.zeta <= 0.0 || cfg.tau <= 0.0) {
    throw std::invalid_argument("cloud: zeta and tau must be positive");
  }
  if (static_cast<double>(n) * cfg.zeta > cfg.tau * (1.0 + 1e-12)) {
    throw std::invalid_argument("cloud: infeasible constraints, n*zeta=" +
                                std::to_string(n * cfg.zeta) + " exceeds tau=" +
                                std::to_string(cfg.tau));
  }
}

void check_scores(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("cloud: no scores");
  for (double v : x) {
    if (!(v > 0.0)) throw std::invalid_argument("cloud: scores must be positive");
  }
}

}  // namespace

double edge_distance(const ParamVector& edge_model, const ParamVector& global) {
  return l2_distance(edge_model, global);
}

std::vector<double> edge_scores(std::span<const EdgeReport> reports) {
  if (reports.empty()) throw std::invalid_argument("edge_scores: no reports");
  double max_b = 0.0;
  std::int64_t min_d = reports.front().data_total;
  for (const auto& r : reports) {
    if (r.data_total < 1) throw std::invalid_argument("edge_scores: data_total must be >= 1");
    if (r.distance < 0.0) throw std::invalid_argument("edge_scores: distance not computed");
    max_b = std::max(max_b, r.distance);
    min_d = std::min(min_d, r.data_total);
  }

  std::vector<double> x(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const double data_ratio =
        static_cast<double>(reports[i].data_total) / static_cast<double>(min_d);
    double dist_ratio = 1.0;  // all-zero distances degenerate to symmetry
    if (max_b > 0.0) {
      const double clamped = std::max(reports[i].distance, kDistanceClampRel * max_b);
      dist_ratio = max_b / clamped;
    }
    x[i] = data_ratio * dist_ratio;
  }
  return x;
}

KktResult kkt_weights(std::span<const double> x, const CloudConfig& cfg) {
  check_scores(x);
  const std::size_t n = x.size();
  check_feasible(n, cfg);

  double sum_all = 0.0;
  for (double v : x) sum_all += v;

  // Direct split: an edge is clamped to ζ when its free-form weight over the
  // full set would not exceed ζ.
  std::vector<bool> clamped(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double candidate =
        (x[i] * (cfg.tau + static_cast<double>(n) - 1.0) - (sum_all - x[i])) / sum_all;
    clamped[i] = cfg.zeta >= candidate;
  }

  const auto free_weights = [&x, &cfg, n](const std::vector<bool>& is_clamped,
                                          std::vector<double>& w) {
    std::size_t n_clamped = 0;
    double sum_free = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_clamped[i]) {
        ++n_clamped;
      } else {
        sum_free += x[i];
      }
    }
    const double n_free = static_cast<double>(n - n_clamped);
    const double budget = cfg.tau - static_cast<double>(n_clamped) * cfg.zeta;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_clamped[i]) {
        w[i] = cfg.zeta;
      } else {
        w[i] = (x[i] * (budget + n_free - 1.0) - (sum_free - x[i])) / sum_free;
      }
    }
  };

  KktResult result;
  result.weights.assign(n, 0.0);
  free_weights(clamped, result.weights);

  // The one-shot split can leave a free weight below ζ; re-test membership
  // within the free set until a fixed point. The free set never empties:
  // with a single free edge its weight is τ minus the clamped budget, which
  // feasibility keeps at or above ζ.
  while (true) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!clamped[i] && result.weights[i] < cfg.zeta) {
        clamped[i] = true;
        moved = true;
      }
    }
    if (!moved) break;
    ++result.refine_passes;
    free_weights(clamped, result.weights);
  }

  double sum_w = 0.0;
  for (double w : result.weights) {
    sum_w += w;
    if (w < cfg.zeta - 1e-12) {
      throw std::runtime_error("kkt_weights: weight below floor after refinement");
    }
  }
  if (std::abs(sum_w - cfg.tau) > 1e-9) {
    throw std::runtime_error("kkt_weights: weights sum to " + std::to_string(sum_w) +
                             ", expected tau");
  }
  return result;
}

std::vector<double> oracle_weights(std::span<const double> x, const CloudConfig& cfg) {
  check_scores(x);
  const std::size_t n = x.size();
  check_feasible(n, cfg);

  const auto fill = [&x, &cfg](double level, std::vector<double>& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      w[i] = std::max(cfg.zeta, x[i] / level - 1.0);
      sum += w[i];
    }
    return sum;
  };

  // Level bounds: at lo every edge sits at its unclamped value (sum >= τ);
  // at hi everything is clamped (sum = nζ <= τ).
  double sum_all = 0.0;
  double max_x = 0.0;
  for (double v : x) {
    sum_all += v;
    max_x = std::max(max_x, v);
  }
  double lo = sum_all / (cfg.tau + static_cast<double>(n));
  double hi = max_x / (1.0 + cfg.zeta);
  if (hi < lo) hi = lo;
  lo = std::min(lo, hi);

  std::vector<double> w(n);
  double sum = fill(hi, w);
  if (std::abs(sum - cfg.tau) <= 1e-10) return w;

  for (int iter = 0; iter < 500; ++iter) {
    const double mid = 0.5 * (lo + hi);
    sum = fill(mid, w);
    if (std::abs(sum - cfg.tau) <= 1e-10) return w;
    if (sum > cfg.tau) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-300) break;
  }
  fill(0.5 * (lo + hi), w);
  return w;
}

double weights_objective(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw std::invalid_argument("weights_objective: size mismatch");
  double obj = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) obj += x[i] * std::log1p(w[i]);
  return obj;
}

ParamVector cloud_aggregate(std::span<const EdgeReport> reports, const CloudConfig& cfg) {
  if (reports.empty()) throw std::invalid_argument("cloud_aggregate: no reports");
  double sum_w = 0.0;
  for (const auto& r : reports) {
    if (r.weight < 0.0) throw std::invalid_argument("cloud_aggregate: unsolved weights");
    sum_w += r.weight;
  }
  if (std::abs(sum_w - cfg.tau) > 1e-9) {
    throw std::invalid_argument("cloud_aggregate: weights do not sum to tau");
  }

  const std::size_t dim = reports.front().model.size();
  std::vector<const double*> rows(reports.size());
  std::vector<double> coeff(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].model.size() != dim) {
      throw std::invalid_argument("cloud_aggregate: model length mismatch");
    }
    rows[i] = reports[i].model.data();
    coeff[i] = reports[i].weight / cfg.tau;
  }
  std::vector<double> out(dim);
  kernels::weighted_sum_rows(rows, coeff, out);
  return ParamVector(std::move(out));
}

CloudRound run_cloud_round(std::vector<EdgeReport> reports, const ParamVector& global,
                           const CloudConfig& cfg) {
  if (reports.empty()) throw std::invalid_argument("run_cloud_round: no reports");
  for (auto& r : reports) r.distance = edge_distance(r.model, global);
  const std::vector<double> x = edge_scores(reports);
  const KktResult solved = kkt_weights(x, cfg);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    reports[i].score = x[i];
    reports[i].weight = solved.weights[i];
  }
  CloudRound round;
  round.global = cloud_aggregate(reports, cfg);
  round.reports = std::move(reports);
  round.refine_passes = solved.refine_passes;
  return round;
}

}  // namespace shfl
