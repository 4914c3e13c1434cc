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
#include <string>
#include <vector>

#include "shfl/attacks.hpp"
#include "shfl/cloud.hpp"
#include "shfl/data.hpp"
#include "shfl/mlp.hpp"

namespace shfl {

enum class Defense { kShfl, kFedAvg, kMultiKrum, kTrimmedMean };
enum class ShardingMode { kIid, kNonIid };
enum class TopologyMode { kHierarchical, kFlat };

struct Topology {
  int n_clients = 100;
  int n_edges = 10;
  int clients_per_edge = 10;
  TopologyMode mode = TopologyMode::kHierarchical;

  friend bool operator==(const Topology&, const Topology&) = default;
};

struct DataSpec {
  enum class Kind { kSynthetic, kIdx };
  Kind kind = Kind::kSynthetic;
  // kIdx
  std::string images_path, labels_path, test_images_path, test_labels_path;
  int subsample = 0;  // 0 = use everything
  // kSynthetic
  int synthetic_n = 10000;
  int synthetic_test_n = 2000;
  int classes = 10;
  double noise = 0.25;

  friend bool operator==(const DataSpec&, const DataSpec&) = default;
};

struct SimConfig {
  Topology topology;
  DataSpec data;
  ShardingMode sharding = ShardingMode::kIid;
  Defense defense = Defense::kShfl;

  AttackKind attack_kind = AttackKind::kNone;
  int attack_count = 0;
  PgaNormalize pga_normalize = PgaNormalize::kModel;

  TrainConfig train;  // seed field is ignored; per-client seeds are derived
  int clients_per_round = 30;
  int selection_period = 3;
  int rounds = 100;
  int est_attackers_per_edge = 0;  // the `a` of trust-based selection
  CloudConfig cloud;

  // Baseline aggregation knobs; -1 derives a default from the attack count
  // scaled to the participant fraction.
  int multikrum_f = -1;
  int multikrum_k = -1;
  int trimmedmean_m = -1;

  std::uint64_t master_seed = 1;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct EdgeRoundInfo {
  double distance = 0.0;
  double score = 0.0;
  double weight = 0.0;
};

struct RoundRecord {
  int round = 0;
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::vector<int> selected;  // aggregating clients, ascending
  int attackers_selected = 0;
  std::vector<EdgeRoundInfo> edges;  // per edge, hierarchical defense only
};

/// Uniform attacker placement without replacement; sorted, deterministic
/// per seed.
std::vector<int> place_attackers(int n_clients, int count, std::uint64_t seed);

/// Resolved baseline parameters (after -1 derivation) for a config.
struct BaselineParams {
  int multikrum_f = 0;
  int multikrum_k = 0;
  int trimmedmean_m = 0;
};
BaselineParams resolve_baseline_params(const SimConfig& cfg);

/// Throws std::invalid_argument describing the first violated constraint.
void validate_config(const SimConfig& cfg);

/// Runs the full experiment on the given train/test data. Deterministic per
/// master seed for any worker-thread count.
std::vector<RoundRecord> run_experiment_with_data(const SimConfig& cfg, const Dataset& train,
                                                  const Dataset& test);

/// Loads or generates the data described by cfg.data, then runs.
std::vector<RoundRecord> run_experiment(const SimConfig& cfg);

}  // namespace shfl
