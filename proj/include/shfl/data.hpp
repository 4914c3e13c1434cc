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
#include <string>
#include <vector>

namespace shfl {

/// Labeled image corpus. Images are row-major n×dim with values in [0, 1]
/// (byte inputs are scaled by 1/255). Read-only once loaded, so concurrent
/// training workers can share it.
struct Dataset {
  std::vector<double> images;
  std::vector<int> labels;
  int n = 0;
  int dim = 0;
  int n_classes = 10;

  std::span<const double> image(int i) const {
    return {images.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }
};

/// Node id -> sample indices. Shards are pairwise disjoint, cover every
/// assigned sample, and are never empty.
struct ShardAssignment {
  std::vector<std::vector<int>> node_shards;

  int n_nodes() const { return static_cast<int>(node_shards.size()); }
  const std::vector<int>& shard(int node) const {
    return node_shards[static_cast<std::size_t>(node)];
  }
};

/// Parses the classic big-endian IDX pair (image magic 0x00000803, label
/// magic 0x00000801). Throws std::runtime_error naming the offending file on
/// bad magic, truncation, or a count mismatch between the two files.
Dataset load_idx(const std::string& image_path, const std::string& label_path);

/// Gaussian class-blob images, clamped to [0,1]. Classes are balanced within
/// ±1 and the result is deterministic per seed.
Dataset gen_synthetic(int n, int classes, std::uint64_t seed, int dim = 784,
                      double noise = 0.25);

/// Samples [begin, end) of d.
Dataset slice(const Dataset& d, int begin, int end);

/// First n samples of d.
Dataset subsample(const Dataset& d, int n);

/// Random permutation followed by contiguous equal splits; when n is not
/// divisible by n_nodes the first n % n_nodes shards take one extra sample.
ShardAssignment shard_iid(const Dataset& d, int n_nodes, std::uint64_t seed);

/// Label-sorted partition: each label's samples are split into
/// n_nodes / n_classes shards and node i receives shard (i mod s) of label
/// (i div s), so every node holds exactly one label. Remainders within a
/// label go one-per-shard.
ShardAssignment shard_noniid(const Dataset& d, int n_nodes);

/// Returns `labels` with every entry listed in shard_indices replaced by a
/// uniform draw over the other classes (never the original label).
std::vector<int> flip_labels(std::vector<int> labels, std::span<const int> shard_indices,
                             int n_classes, std::uint64_t seed);

}  // namespace shfl
