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

#include "shfl/data.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "shfl/rng.hpp"

namespace shfl {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& in, const std::string& path) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    throw std::runtime_error("idx: truncated header in " + path);
  }
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace

Dataset load_idx(const std::string& image_path, const std::string& label_path) {
  std::ifstream img(image_path, std::ios::binary);
  if (!img) throw std::runtime_error("idx: cannot open " + image_path);
  std::ifstream lab(label_path, std::ios::binary);
  if (!lab) throw std::runtime_error("idx: cannot open " + label_path);

  const std::uint32_t img_magic = read_be32(img, image_path);
  if (img_magic != kImageMagic) {
    char hex[16];
    std::snprintf(hex, sizeof hex, "0x%08x", img_magic);
    throw std::runtime_error("idx: bad image magic " + std::string(hex) + " in " + image_path);
  }
  const std::uint32_t n = read_be32(img, image_path);
  const std::uint32_t rows = read_be32(img, image_path);
  const std::uint32_t cols = read_be32(img, image_path);

  const std::uint32_t lab_magic = read_be32(lab, label_path);
  if (lab_magic != kLabelMagic) {
    char hex[16];
    std::snprintf(hex, sizeof hex, "0x%08x", lab_magic);
    throw std::runtime_error("idx: bad label magic " + std::string(hex) + " in " + label_path);
  }
  const std::uint32_t n_lab = read_be32(lab, label_path);
  if (n != n_lab) {
    throw std::runtime_error("idx: image count " + std::to_string(n) + " in " + image_path +
                             " does not match label count " + std::to_string(n_lab) + " in " +
                             label_path);
  }

  Dataset d;
  d.n = static_cast<int>(n);
  d.dim = static_cast<int>(rows * cols);
  const std::size_t total = std::size_t(n) * d.dim;
  std::vector<unsigned char> raw(total);
  if (!img.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(total))) {
    throw std::runtime_error("idx: truncated image data in " + image_path);
  }
  d.images.resize(total);
  for (std::size_t i = 0; i < total; ++i) d.images[i] = raw[i] / 255.0;

  std::vector<unsigned char> rawlab(n);
  if (!lab.read(reinterpret_cast<char*>(rawlab.data()), static_cast<std::streamsize>(n))) {
    throw std::runtime_error("idx: truncated label data in " + label_path);
  }
  d.labels.resize(n);
  int max_label = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    d.labels[i] = rawlab[i];
    max_label = std::max(max_label, d.labels[i]);
  }
  d.n_classes = std::max(10, max_label + 1);
  return d;
}

Dataset gen_synthetic(int n, int classes, std::uint64_t seed, int dim, double noise) {
  if (classes < 2) throw std::invalid_argument("gen_synthetic: need at least 2 classes");
  if (n < classes) throw std::invalid_argument("gen_synthetic: n must be >= classes");

  Rng rng(derive_seed(seed, SeedStream::kSyntheticData));
  std::vector<double> means(std::size_t(classes) * dim);
  for (double& m : means) m = rng.uniform(0.15, 0.85);

  Dataset d;
  d.n = n;
  d.dim = dim;
  d.n_classes = classes;
  d.images.resize(std::size_t(n) * dim);
  d.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;  // balanced within ±1
    d.labels[i] = c;
    const double* mean = means.data() + std::size_t(c) * dim;
    double* img = d.images.data() + std::size_t(i) * dim;
    for (int t = 0; t < dim; ++t) {
      img[t] = std::clamp(mean[t] + noise * rng.normal(), 0.0, 1.0);
    }
  }
  return d;
}

Dataset slice(const Dataset& d, int begin, int end) {
  if (begin < 0 || end > d.n || begin >= end) {
    throw std::invalid_argument("slice: range out of bounds");
  }
  Dataset out;
  out.n = end - begin;
  out.dim = d.dim;
  out.n_classes = d.n_classes;
  out.images.assign(d.images.begin() + std::size_t(begin) * d.dim,
                    d.images.begin() + std::size_t(end) * d.dim);
  out.labels.assign(d.labels.begin() + begin, d.labels.begin() + end);
  return out;
}

Dataset subsample(const Dataset& d, int n) { return slice(d, 0, n); }

ShardAssignment shard_iid(const Dataset& d, int n_nodes, std::uint64_t seed) {
  if (n_nodes <= 0) throw std::invalid_argument("shard_iid: n_nodes must be positive");
  if (d.n < n_nodes) throw std::invalid_argument("shard_iid: fewer samples than nodes");

  std::vector<int> perm(d.n);
  for (int i = 0; i < d.n; ++i) perm[i] = i;
  Rng rng(derive_seed(seed, SeedStream::kShard));
  rng.shuffle(perm);

  const int base = d.n / n_nodes;
  const int extra = d.n % n_nodes;
  ShardAssignment a;
  a.node_shards.resize(n_nodes);
  int pos = 0;
  for (int node = 0; node < n_nodes; ++node) {
    const int len = base + (node < extra ? 1 : 0);
    a.node_shards[node].assign(perm.begin() + pos, perm.begin() + pos + len);
    pos += len;
  }
  return a;
}

ShardAssignment shard_noniid(const Dataset& d, int n_nodes) {
  const int classes = d.n_classes;
  if (n_nodes % classes != 0) {
    throw std::invalid_argument("shard_noniid: n_nodes must be a multiple of the class count");
  }
  const int shards_per_label = n_nodes / classes;

  std::vector<std::vector<int>> by_label(classes);
  for (int i = 0; i < d.n; ++i) by_label[d.labels[i]].push_back(i);

  ShardAssignment a;
  a.node_shards.resize(n_nodes);
  for (int label = 0; label < classes; ++label) {
    const auto& idx = by_label[label];
    const int count = static_cast<int>(idx.size());
    if (count < shards_per_label) {
      throw std::invalid_argument("shard_noniid: label " + std::to_string(label) +
                                  " has too few samples (" + std::to_string(count) + ")");
    }
    const int base = count / shards_per_label;
    const int extra = count % shards_per_label;
    int pos = 0;
    for (int s = 0; s < shards_per_label; ++s) {
      const int len = base + (s < extra ? 1 : 0);
      const int node = label * shards_per_label + s;
      a.node_shards[node].assign(idx.begin() + pos, idx.begin() + pos + len);
      pos += len;
    }
  }
  return a;
}

std::vector<int> flip_labels(std::vector<int> labels, std::span<const int> shard_indices,
                             int n_classes, std::uint64_t seed) {
  if (n_classes < 2) throw std::invalid_argument("flip_labels: need at least 2 classes");
  Rng rng(derive_seed(seed, SeedStream::kLabelFlip));
  for (int idx : shard_indices) {
    const int original = labels[idx];
    // Uniform over the other classes: draw in [0, classes-1) and skip past
    // the original.
    int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes - 1)));
    if (pick >= original) ++pick;
    labels[idx] = pick;
  }
  return labels;
}

}  // namespace shfl
