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

#include "shfl/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "shfl/config.hpp"

namespace shfl {

namespace {

const char* defense_name(Defense d) {
  switch (d) {
    case Defense::kShfl: return "shfl";
    case Defense::kFedAvg: return "fedavg";
    case Defense::kMultiKrum: return "multikrum";
    case Defense::kTrimmedMean: return "trimmedmean";
  }
  return "?";
}

const char* attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::kNone: return "none";
    case AttackKind::kPga: return "pga";
    case AttackKind::kLf: return "lf";
  }
  return "?";
}

std::string basename_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name.erase(dot);
  return name;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string records_to_csv(const std::vector<RoundRecord>& records, const SimConfig& cfg) {
  std::string out = "round,accuracy,loss,defense,attack,n_attackers,attackers_selected,edge_weights\n";
  for (const auto& rec : records) {
    out += std::to_string(rec.round);
    out += ',';
    out += format_float(rec.accuracy);
    out += ',';
    out += format_float(rec.mean_loss);
    out += ',';
    out += defense_name(cfg.defense);
    out += ',';
    out += attack_name(cfg.attack_kind);
    out += ',';
    out += std::to_string(cfg.attack_count);
    out += ',';
    out += std::to_string(rec.attackers_selected);
    out += ',';
    for (std::size_t e = 0; e < rec.edges.size(); ++e) {
      if (e > 0) out += ';';
      out += format_float(rec.edges[e].weight);
    }
    out += '\n';
  }
  return out;
}

std::string summary_to_json(const std::vector<RoundRecord>& records, const SimConfig& cfg) {
  double max_acc = 0.0;
  double final_acc = 0.0;
  for (const auto& r : records) max_acc = std::max(max_acc, r.accuracy);
  if (!records.empty()) final_acc = records.back().accuracy;

  nlohmann::ordered_json j;
  j["rounds_completed"] = records.size();
  j["max_accuracy"] = max_acc;
  j["final_accuracy"] = final_acc;
  j["seed"] = cfg.master_seed;
  nlohmann::ordered_json echo;
  for (const auto& [k, v] : config_to_key_values(cfg)) echo[k] = v;
  j["config"] = echo;
  return j.dump(2) + "\n";
}

KktInstance parse_kkt_instance(const std::string& line) {
  const std::vector<std::string> sections = split(line, ';');
  if (sections.size() != 3) {
    throw std::runtime_error("expected 'x1,...,xn;zeta;tau'");
  }
  KktInstance inst;
  for (const std::string& tok : split(sections[0], ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("bad score value '" + tok + "'");
    }
    if (used != tok.size()) throw std::runtime_error("bad score value '" + tok + "'");
    inst.x.push_back(v);
  }
  try {
    inst.cloud.zeta = std::stod(sections[1]);
    inst.cloud.tau = std::stod(sections[2]);
  } catch (const std::exception&) {
    throw std::runtime_error("bad zeta/tau value");
  }
  return inst;
}

std::string merge_plot_data(const std::vector<std::string>& csv_paths) {
  std::string out = "experiment_label,round,accuracy\n";
  std::string expected_header;
  for (const std::string& path : csv_paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty csv " + path);
    if (expected_header.empty()) {
      expected_header = header;
    } else if (header != expected_header) {
      throw std::runtime_error("schema mismatch in " + path);
    }
    const std::vector<std::string> columns = split(header, ',');
    const auto round_it = std::find(columns.begin(), columns.end(), "round");
    const auto acc_it = std::find(columns.begin(), columns.end(), "accuracy");
    if (round_it == columns.end() || acc_it == columns.end()) {
      throw std::runtime_error("csv " + path + " lacks round/accuracy columns");
    }
    const std::size_t round_col = static_cast<std::size_t>(round_it - columns.begin());
    const std::size_t acc_col = static_cast<std::size_t>(acc_it - columns.begin());

    const std::string label = basename_stem(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> fields = split(line, ',');
      if (fields.size() <= std::max(round_col, acc_col)) {
        throw std::runtime_error("short row in " + path);
      }
      out += label;
      out += ',';
      out += fields[round_col];
      out += ',';
      out += fields[acc_col];
      out += '\n';
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace shfl
