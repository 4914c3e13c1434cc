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

#include "shfl/data.hpp"
#include "shfl/mlp.hpp"
#include "shfl/param_vector.hpp"

namespace shfl {

enum class AttackKind { kNone, kPga, kLf };

/// What the gradient-ascent attacker norm-bounds to the global model's norm:
/// the full poisoned parameter vector (default) or only its delta from the
/// global model.
enum class PgaNormalize { kModel, kDelta };

struct AttackConfig {
  AttackKind kind = AttackKind::kNone;
  std::vector<int> attacker_ids;  // sorted ascending
  std::uint64_t seed = 0;
  PgaNormalize pga_normalize = PgaNormalize::kModel;
};

/// Projected gradient-ascent model poisoning: minibatch ascent from the
/// global model with the benign hyperparameters, re-projected onto the norm
/// bound after every step (unprojected ascent overflows float64 within a few
/// dozen steps). kModel bounds the whole parameter vector to the global
/// model's L2 norm; kDelta bounds the update delta instead. The returned
/// vector satisfies the bound exactly. Throws if the global model has zero
/// norm.
ParamVector pga_update(const Mlp& global, const Dataset& data, std::span<const int> shard,
                       const TrainConfig& cfg, PgaNormalize mode = PgaNormalize::kModel);

/// Label-flipping data poisoning: returns a dataset whose labels inside each
/// attacker's shard are replaced by uniform draws over the other classes.
/// Images and benign shards are untouched; flips are seeded per attacker id,
/// so the result does not depend on iteration order.
Dataset apply_lf(const Dataset& data, const ShardAssignment& assignment,
                 std::span<const int> attacker_ids, std::uint64_t seed);

}  // namespace shfl
