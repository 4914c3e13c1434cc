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

#include "shfl/sim.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

#include "shfl/aggregation.hpp"
#include "shfl/rng.hpp"

namespace shfl {

namespace {

// Runs fn(i) for i in [0, n) across worker threads. Exceptions are captured
// and the first one rethrown after the loop so a throw inside a worker
// cannot terminate the process.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

struct Engine {
  const SimConfig& cfg;
  const Dataset& train_data;  // after any label poisoning
  const Dataset& test_data;
  const ShardAssignment& shards;
  const std::vector<int>& attacker_ids;  // sorted
  BaselineParams baseline;
  MlpDims dims = mlp_2nn();

  bool is_attacker(int node) const {
    return std::binary_search(attacker_ids.begin(), attacker_ids.end(), node);
  }

  std::vector<int> edge_clients(int edge) const {
    std::vector<int> ids(cfg.topology.clients_per_edge);
    for (int i = 0; i < cfg.topology.clients_per_edge; ++i) {
      ids[i] = edge * cfg.topology.clients_per_edge + i;
    }
    return ids;
  }

  // One client's local round: benign descent, or the poisoning behavior of
  // an attacker. LF attackers train honestly on their (already poisoned)
  // shard.
  ParamVector client_update(const Mlp& global, int node, int round) const {
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cfg.master_seed, SeedStream::kClientTrain,
                          static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(node));
    const auto& shard = shards.shard(node);
    if (cfg.attack_kind == AttackKind::kPga && is_attacker(node)) {
      return pga_update(global, train_data, shard, tc, cfg.pga_normalize);
    }
    return train_local(global, train_data, shard, tc);
  }

  // Trains `nodes` concurrently; results land in slots[node].
  void train_nodes(const Mlp& global, const std::vector<int>& nodes, int round,
                   std::vector<ParamVector>& slots) const {
    parallel_for(static_cast<int>(nodes.size()), [&](int i) {
      const int node = nodes[i];
      slots[node] = client_update(global, node, round);
    });
  }

  ClientUpdate make_update(int node, std::vector<ParamVector>& slots) const {
    return ClientUpdate{node, std::move(slots[node]),
                        static_cast<std::int64_t>(shards.shard(node).size())};
  }
};

std::vector<int> uniform_selection(int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  return rng.sample_without_replacement(n, k);
}

// Evaluates the new global model and completes the round's record.
void finish_round(const Engine& eng, const Mlp& global, RoundRecord& rec,
                  std::vector<RoundRecord>& records) {
  const EvalResult ev = evaluate(global, eng.test_data);
  rec.accuracy = ev.accuracy;
  rec.mean_loss = ev.mean_loss;
  rec.attackers_selected = 0;
  for (int node : rec.selected) {
    if (eng.is_attacker(node)) ++rec.attackers_selected;
  }
  records.push_back(std::move(rec));
}

}  // namespace

std::vector<int> place_attackers(int n_clients, int count, std::uint64_t seed) {
  if (count < 0 || count > n_clients) {
    throw std::invalid_argument("place_attackers: count out of range");
  }
  Rng rng(derive_seed(seed, SeedStream::kAttackerPlacement));
  return rng.sample_without_replacement(n_clients, count);
}

BaselineParams resolve_baseline_params(const SimConfig& cfg) {
  BaselineParams p;
  // Expected attackers among the participants of one round, at least 1 when
  // an attack is configured at all.
  const double frac = static_cast<double>(cfg.clients_per_round) / cfg.topology.n_clients;
  int expected = static_cast<int>(cfg.attack_count * frac + 0.5);
  if (cfg.attack_count > 0) expected = std::max(1, expected);
  p.multikrum_f = cfg.multikrum_f >= 0 ? cfg.multikrum_f : expected;
  p.multikrum_k = cfg.multikrum_k >= 0 ? cfg.multikrum_k
                                       : std::max(1, cfg.clients_per_round - p.multikrum_f);
  p.trimmedmean_m = cfg.trimmedmean_m >= 0 ? cfg.trimmedmean_m : expected;
  return p;
}

void validate_config(const SimConfig& cfg) {
  const Topology& t = cfg.topology;
  if (t.n_clients < 1) throw std::invalid_argument("config: n_clients must be >= 1");
  if (cfg.rounds < 0) throw std::invalid_argument("config: rounds must be >= 0");
  if (cfg.selection_period < 1) throw std::invalid_argument("config: selection.period must be >= 1");
  if (cfg.clients_per_round < 1 || cfg.clients_per_round > t.n_clients) {
    throw std::invalid_argument("config: clients_per_round must be in [1, n_clients]");
  }
  if (cfg.attack_count < 0 || cfg.attack_count > t.n_clients) {
    throw std::invalid_argument("config: attack.count out of range");
  }
  if (cfg.train.learning_rate < 0.0) throw std::invalid_argument("config: train.lr must be >= 0");
  if (cfg.train.epochs < 1) throw std::invalid_argument("config: train.epochs must be >= 1");
  if (cfg.train.batch_size < 1) throw std::invalid_argument("config: train.batch_size must be >= 1");

  if (cfg.topology.mode == TopologyMode::kHierarchical) {
    if (t.n_edges < 1 || t.n_clients != t.n_edges * t.clients_per_edge) {
      throw std::invalid_argument(
          "config: hierarchical topology requires n_clients = n_edges * clients_per_edge");
    }
    if (cfg.clients_per_round % t.n_edges != 0) {
      throw std::invalid_argument(
          "config: clients_per_round must be divisible by n_edges in hierarchical mode");
    }
    const int m = cfg.clients_per_round / t.n_edges;
    if (cfg.est_attackers_per_edge < 0 ||
        m > t.clients_per_edge - cfg.est_attackers_per_edge) {
      throw std::invalid_argument(
          "config: per-edge selection needs m <= clients_per_edge - estimated_attackers_per_edge");
    }
    if (static_cast<double>(t.n_edges) * cfg.cloud.zeta > cfg.cloud.tau) {
      throw std::invalid_argument("config: infeasible cloud weights, n_edges*zeta > tau");
    }
  } else if (cfg.defense == Defense::kShfl) {
    throw std::invalid_argument("config: the shfl defense requires the hierarchical topology");
  }

  if (cfg.topology.mode == TopologyMode::kFlat) {
    const BaselineParams p = resolve_baseline_params(cfg);
    const int n = cfg.clients_per_round;
    if (cfg.defense == Defense::kMultiKrum) {
      if (n < p.multikrum_f + 3) {
        throw std::invalid_argument("config: multikrum needs clients_per_round >= f+3");
      }
      if (p.multikrum_k < 1 || p.multikrum_k > n - p.multikrum_f) {
        throw std::invalid_argument("config: multikrum k out of range");
      }
    }
    if (cfg.defense == Defense::kTrimmedMean && n <= 2 * p.trimmedmean_m) {
      throw std::invalid_argument("config: trimmed mean needs clients_per_round > 2m");
    }
  }
}

std::vector<RoundRecord> run_experiment_with_data(const SimConfig& cfg, const Dataset& train,
                                                  const Dataset& test) {
  validate_config(cfg);
  const Topology& topo = cfg.topology;

  ShardAssignment shards = cfg.sharding == ShardingMode::kIid
                               ? shard_iid(train, topo.n_clients, cfg.master_seed)
                               : shard_noniid(train, topo.n_clients);

  std::vector<int> attacker_ids;
  if (cfg.attack_kind != AttackKind::kNone && cfg.attack_count > 0) {
    attacker_ids = place_attackers(topo.n_clients, cfg.attack_count, cfg.master_seed);
  }

  // Label flipping poisons the shards once, up front; PGA acts at training
  // time inside client_update.
  Dataset poisoned;
  const Dataset* train_ptr = &train;
  if (cfg.attack_kind == AttackKind::kLf && !attacker_ids.empty()) {
    poisoned = apply_lf(train, shards, attacker_ids, cfg.master_seed);
    train_ptr = &poisoned;
  }

  Engine eng{cfg, *train_ptr, test, shards, attacker_ids, resolve_baseline_params(cfg),
             mlp_2nn()};
  eng.dims.input = train.dim;
  eng.dims.output = train.n_classes;

  Mlp global = Mlp::init(eng.dims, derive_seed(cfg.master_seed, SeedStream::kModelInit));

  const bool hierarchical = topo.mode == TopologyMode::kHierarchical;
  const int m_per_edge = hierarchical ? cfg.clients_per_round / topo.n_edges : 0;

  std::vector<std::vector<int>> selected_per_edge(hierarchical ? topo.n_edges : 0);
  std::vector<int> selected_flat;
  std::vector<ParamVector> slots(topo.n_clients);
  std::vector<RoundRecord> records;
  records.reserve(cfg.rounds);

  for (int round = 0; round < cfg.rounds; ++round) {
    const bool refresh = round % cfg.selection_period == 0;

    if (hierarchical) {
      if (refresh) {
        if (round == 0) {
          // No prior updates to rank: bootstrap uniformly per edge.
          for (int e = 0; e < topo.n_edges; ++e) {
            const auto picks = uniform_selection(
                topo.clients_per_edge, m_per_edge,
                derive_seed(cfg.master_seed, SeedStream::kSelectionBootstrap,
                            static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(e)));
            selected_per_edge[e].clear();
            for (int p : picks) selected_per_edge[e].push_back(e * topo.clients_per_edge + p);
          }
          std::vector<int> to_train;
          for (const auto& sel : selected_per_edge) {
            to_train.insert(to_train.end(), sel.begin(), sel.end());
          }
          eng.train_nodes(global, to_train, round, slots);
        } else {
          // Every client of every edge submits an update for trust scoring;
          // only the freshly selected ones feed the aggregation.
          std::vector<int> all(topo.n_clients);
          for (int i = 0; i < topo.n_clients; ++i) all[i] = i;
          eng.train_nodes(global, all, round, slots);
          for (int e = 0; e < topo.n_edges; ++e) {
            std::vector<ClientUpdate> candidates;
            candidates.reserve(topo.clients_per_edge);
            for (int node : eng.edge_clients(e)) {
              candidates.push_back(ClientUpdate{
                  node, slots[node], static_cast<std::int64_t>(shards.shard(node).size())});
            }
            selected_per_edge[e] = select_clients_shfl(
                candidates, global.params(), cfg.est_attackers_per_edge, m_per_edge,
                derive_seed(cfg.master_seed, SeedStream::kSelectionDraw,
                            static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(e)));
          }
        }
      } else {
        std::vector<int> to_train;
        for (const auto& sel : selected_per_edge) {
          to_train.insert(to_train.end(), sel.begin(), sel.end());
        }
        eng.train_nodes(global, to_train, round, slots);
      }

      // Per-edge aggregation, then the cloud round.
      std::vector<EdgeReport> reports;
      reports.reserve(topo.n_edges);
      for (int e = 0; e < topo.n_edges; ++e) {
        std::vector<ClientUpdate> members;
        members.reserve(selected_per_edge[e].size());
        for (int node : selected_per_edge[e]) {
          members.push_back(ClientUpdate{node, slots[node],
                                         static_cast<std::int64_t>(shards.shard(node).size())});
        }
        EdgeAggregate agg = edge_aggregate(members);
        reports.push_back(EdgeReport{e, std::move(agg.model), agg.data_total});
      }
      CloudRound cloud = run_cloud_round(std::move(reports), global.params(), cfg.cloud);

      RoundRecord rec;
      rec.round = round;
      for (int e = 0; e < topo.n_edges; ++e) {
        rec.selected.insert(rec.selected.end(), selected_per_edge[e].begin(),
                            selected_per_edge[e].end());
        rec.edges.push_back(EdgeRoundInfo{cloud.reports[e].distance, cloud.reports[e].score,
                                          cloud.reports[e].weight});
      }
      std::sort(rec.selected.begin(), rec.selected.end());
      global = Mlp(eng.dims, std::move(cloud.global));
      finish_round(eng, global, rec, records);
    } else {
      if (refresh) {
        selected_flat = uniform_selection(
            topo.n_clients, cfg.clients_per_round,
            derive_seed(cfg.master_seed, SeedStream::kSelectionBootstrap,
                        static_cast<std::uint64_t>(round), 0));
      }
      eng.train_nodes(global, selected_flat, round, slots);
      std::vector<ClientUpdate> round_updates;
      round_updates.reserve(selected_flat.size());
      for (int node : selected_flat) round_updates.push_back(eng.make_update(node, slots));

      ParamVector aggregated;
      switch (cfg.defense) {
        case Defense::kFedAvg:
          aggregated = fedavg(round_updates);
          break;
        case Defense::kMultiKrum: {
          std::vector<ParamVector> models;
          models.reserve(round_updates.size());
          for (auto& u : round_updates) models.push_back(std::move(u.model));
          aggregated = multi_krum(models, eng.baseline.multikrum_f, eng.baseline.multikrum_k);
          break;
        }
        case Defense::kTrimmedMean: {
          std::vector<ParamVector> models;
          models.reserve(round_updates.size());
          for (auto& u : round_updates) models.push_back(std::move(u.model));
          aggregated = trimmed_mean(models, eng.baseline.trimmedmean_m);
          break;
        }
        case Defense::kShfl:
          throw std::logic_error("flat topology cannot run the shfl defense");
      }

      RoundRecord rec;
      rec.round = round;
      rec.selected = selected_flat;
      global = Mlp(eng.dims, std::move(aggregated));
      finish_round(eng, global, rec, records);
    }
  }
  return records;
}

std::vector<RoundRecord> run_experiment(const SimConfig& cfg) {
  Dataset train, test;
  if (cfg.data.kind == DataSpec::Kind::kSynthetic) {
    // One generator pass so train and test share the class structure.
    const Dataset full = gen_synthetic(cfg.data.synthetic_n + cfg.data.synthetic_test_n,
                                       cfg.data.classes, cfg.master_seed, 784, cfg.data.noise);
    train = subsample(full, cfg.data.synthetic_n);
    test = slice(full, cfg.data.synthetic_n, full.n);
  } else {
    train = load_idx(cfg.data.images_path, cfg.data.labels_path);
    test = load_idx(cfg.data.test_images_path, cfg.data.test_labels_path);
  }
  if (cfg.data.subsample > 0 && cfg.data.subsample < train.n) {
    train = subsample(train, cfg.data.subsample);
  }
  return run_experiment_with_data(cfg, train, test);
}

}  // namespace shfl
