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

#include "shfl/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace shfl {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct RawConfig {
  std::unordered_map<std::string, std::string> values;
  std::unordered_map<std::string, int> lines;
  std::vector<std::string> consumed;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::string context(const std::string& key) const {
    const auto it = lines.find(key);
    return it == lines.end() ? key : "line " + std::to_string(it->second) + ": " + key;
  }
};

long long parse_int(const RawConfig& raw, const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(raw.context(key) + ": expected an integer, got '" + value + "'");
  }
}

double parse_double(const RawConfig& raw, const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(raw.context(key) + ": expected a number, got '" + value + "'");
  }
}

class Reader {
 public:
  explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

  int geti(const std::string& key, int fallback) {
    return static_cast<int>(get_int(key, fallback));
  }
  long long get_int(const std::string& key, long long fallback) {
    const auto it = raw_.values.find(key);
    if (it == raw_.values.end()) return fallback;
    used_.push_back(key);
    return parse_int(raw_, key, it->second);
  }
  double getd(const std::string& key, double fallback) {
    const auto it = raw_.values.find(key);
    if (it == raw_.values.end()) return fallback;
    used_.push_back(key);
    return parse_double(raw_, key, it->second);
  }
  std::string gets(const std::string& key, const std::string& fallback) {
    const auto it = raw_.values.find(key);
    if (it == raw_.values.end()) return fallback;
    used_.push_back(key);
    return it->second;
  }
  bool has(const std::string& key) const { return raw_.has(key); }

  std::string require(const std::string& key) {
    const auto it = raw_.values.find(key);
    if (it == raw_.values.end()) throw ConfigError("missing required key '" + key + "'");
    used_.push_back(key);
    return it->second;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : raw_.values) {
      (void)value;
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw ConfigError(raw_.context(key) + ": unknown key");
      }
    }
  }

  const RawConfig& raw() const { return raw_; }

 private:
  RawConfig raw_;
  std::vector<std::string> used_;
};

template <typename T>
T parse_enum(const RawConfig& raw, const std::string& key, const std::string& value,
             std::initializer_list<std::pair<const char*, T>> table) {
  for (const auto& [name, v] : table) {
    if (value == name) return v;
  }
  std::string allowed;
  for (const auto& [name, v] : table) {
    (void)v;
    if (!allowed.empty()) allowed += " | ";
    allowed += name;
  }
  throw ConfigError(raw.context(key) + ": invalid value '" + value + "' (expected " + allowed +
                    ")");
}

std::string data_dir_default(const std::string& filename) {
  const char* dir = std::getenv("SHFL_DATA_DIR");
  if (dir == nullptr || *dir == '\0') return "";
  std::string d(dir);
  if (d.back() != '/') d += '/';
  return d + filename;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SimConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                        stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (raw.values.count(key) > 0) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    raw.values[key] = value;
    raw.lines[key] = line_no;
  }

  Reader r(std::move(raw));
  SimConfig cfg;

  cfg.defense = parse_enum<Defense>(r.raw(), "defense", r.require("defense"),
                                    {{"shfl", Defense::kShfl},
                                     {"fedavg", Defense::kFedAvg},
                                     {"multikrum", Defense::kMultiKrum},
                                     {"trimmedmean", Defense::kTrimmedMean}});

  const std::string default_mode = cfg.defense == Defense::kShfl ? "hierarchical" : "flat";
  cfg.topology.mode = parse_enum<TopologyMode>(
      r.raw(), "topology.mode", r.gets("topology.mode", default_mode),
      {{"hierarchical", TopologyMode::kHierarchical}, {"flat", TopologyMode::kFlat}});
  cfg.topology.n_clients = r.geti("topology.n_clients", 100);
  cfg.topology.n_edges = r.geti("topology.n_edges", 10);
  cfg.topology.clients_per_edge = r.geti("topology.clients_per_edge", 10);

  cfg.data.kind = parse_enum<DataSpec::Kind>(
      r.raw(), "data.kind", r.gets("data.kind", "synthetic"),
      {{"synthetic", DataSpec::Kind::kSynthetic}, {"mnist", DataSpec::Kind::kIdx}});
  if (cfg.data.kind == DataSpec::Kind::kIdx) {
    cfg.data.images_path = r.gets("data.images_path", data_dir_default("train-images-idx3-ubyte"));
    cfg.data.labels_path = r.gets("data.labels_path", data_dir_default("train-labels-idx1-ubyte"));
    cfg.data.test_images_path =
        r.gets("data.test_images_path", data_dir_default("t10k-images-idx3-ubyte"));
    cfg.data.test_labels_path =
        r.gets("data.test_labels_path", data_dir_default("t10k-labels-idx1-ubyte"));
    const auto check = [](const std::string& v, const char* key) {
      if (v.empty()) {
        throw ConfigError(std::string("missing required key '") + key +
                          "' (set it or export SHFL_DATA_DIR)");
      }
    };
    check(cfg.data.images_path, "data.images_path");
    check(cfg.data.labels_path, "data.labels_path");
    check(cfg.data.test_images_path, "data.test_images_path");
    check(cfg.data.test_labels_path, "data.test_labels_path");
  } else {
    // Accept the path keys silently only if absent; they make no sense here.
    cfg.data.synthetic_n = r.geti("data.synthetic_n", 10000);
    cfg.data.synthetic_test_n = r.geti("data.synthetic_test_n", 2000);
    cfg.data.classes = r.geti("data.classes", 10);
    cfg.data.noise = r.getd("data.noise", 0.25);
  }
  cfg.data.subsample = r.geti("data.subsample", 0);

  cfg.sharding = parse_enum<ShardingMode>(
      r.raw(), "sharding", r.gets("sharding", "iid"),
      {{"iid", ShardingMode::kIid}, {"noniid", ShardingMode::kNonIid}});

  cfg.attack_kind = parse_enum<AttackKind>(r.raw(), "attack.kind", r.gets("attack.kind", "none"),
                                           {{"none", AttackKind::kNone},
                                            {"pga", AttackKind::kPga},
                                            {"lf", AttackKind::kLf}});
  cfg.attack_count = r.geti("attack.count", 0);
  cfg.pga_normalize = parse_enum<PgaNormalize>(
      r.raw(), "attack.pga_normalize", r.gets("attack.pga_normalize", "model"),
      {{"model", PgaNormalize::kModel}, {"delta", PgaNormalize::kDelta}});
  if (cfg.attack_kind == AttackKind::kNone && cfg.attack_count != 0) {
    throw ConfigError("attack.count must be 0 when attack.kind = none");
  }

  cfg.train.learning_rate = r.getd("train.lr", 0.1);
  cfg.train.epochs = r.geti("train.epochs", 5);
  cfg.train.batch_size = r.geti("train.batch_size", 32);

  cfg.clients_per_round = r.geti("clients_per_round", 30);
  cfg.selection_period = r.geti("selection.period", 3);
  cfg.rounds = r.geti("rounds", 100);
  cfg.est_attackers_per_edge = r.geti("estimated_attackers_per_edge", 0);

  cfg.cloud.zeta = r.getd("cloud.zeta", 0.1);
  cfg.cloud.tau = r.getd("cloud.tau", 10.0);

  cfg.multikrum_f = r.geti("defense.multikrum_f", -1);
  cfg.multikrum_k = r.geti("defense.multikrum_k", -1);
  cfg.trimmedmean_m = r.geti("defense.trimmedmean_m", -1);

  cfg.master_seed = static_cast<std::uint64_t>(r.get_int("seed", 1));

  r.reject_unknown();
  try {
    validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_to_key_values(const SimConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  const auto add = [&kv](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };

  switch (cfg.defense) {
    case Defense::kShfl: add("defense", "shfl"); break;
    case Defense::kFedAvg: add("defense", "fedavg"); break;
    case Defense::kMultiKrum: add("defense", "multikrum"); break;
    case Defense::kTrimmedMean: add("defense", "trimmedmean"); break;
  }
  add("topology.mode",
      cfg.topology.mode == TopologyMode::kHierarchical ? "hierarchical" : "flat");
  add("topology.n_clients", std::to_string(cfg.topology.n_clients));
  add("topology.n_edges", std::to_string(cfg.topology.n_edges));
  add("topology.clients_per_edge", std::to_string(cfg.topology.clients_per_edge));

  add("data.kind", cfg.data.kind == DataSpec::Kind::kSynthetic ? "synthetic" : "mnist");
  if (cfg.data.kind == DataSpec::Kind::kIdx) {
    add("data.images_path", cfg.data.images_path);
    add("data.labels_path", cfg.data.labels_path);
    add("data.test_images_path", cfg.data.test_images_path);
    add("data.test_labels_path", cfg.data.test_labels_path);
  } else {
    add("data.synthetic_n", std::to_string(cfg.data.synthetic_n));
    add("data.synthetic_test_n", std::to_string(cfg.data.synthetic_test_n));
    add("data.classes", std::to_string(cfg.data.classes));
    add("data.noise", fmt_double(cfg.data.noise));
  }
  add("data.subsample", std::to_string(cfg.data.subsample));

  add("sharding", cfg.sharding == ShardingMode::kIid ? "iid" : "noniid");
  switch (cfg.attack_kind) {
    case AttackKind::kNone: add("attack.kind", "none"); break;
    case AttackKind::kPga: add("attack.kind", "pga"); break;
    case AttackKind::kLf: add("attack.kind", "lf"); break;
  }
  add("attack.count", std::to_string(cfg.attack_count));
  add("attack.pga_normalize", cfg.pga_normalize == PgaNormalize::kModel ? "model" : "delta");

  add("train.lr", fmt_double(cfg.train.learning_rate));
  add("train.epochs", std::to_string(cfg.train.epochs));
  add("train.batch_size", std::to_string(cfg.train.batch_size));

  add("clients_per_round", std::to_string(cfg.clients_per_round));
  add("selection.period", std::to_string(cfg.selection_period));
  add("rounds", std::to_string(cfg.rounds));
  add("estimated_attackers_per_edge", std::to_string(cfg.est_attackers_per_edge));

  add("cloud.zeta", fmt_double(cfg.cloud.zeta));
  add("cloud.tau", fmt_double(cfg.cloud.tau));

  add("defense.multikrum_f", std::to_string(cfg.multikrum_f));
  add("defense.multikrum_k", std::to_string(cfg.multikrum_k));
  add("defense.trimmedmean_m", std::to_string(cfg.trimmedmean_m));

  add("seed", std::to_string(cfg.master_seed));
  return kv;
}

std::string render_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_to_key_values(cfg)) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace shfl
