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

#include <string>
#include <vector>

#include "shfl/sim.hpp"

namespace shfl {

/// %.12g — at least 10 significant digits as the output contract requires.
std::string format_float(double v);

/// Round records as CSV with header
/// round,accuracy,loss,defense,attack,n_attackers,attackers_selected,edge_weights.
/// edge_weights is semicolon-joined and only populated for the hierarchical
/// defense.
std::string records_to_csv(const std::vector<RoundRecord>& records, const SimConfig& cfg);

/// JSON run summary: max/final accuracy, seed, and a config echo that
/// re-parses to an equivalent SimConfig.
std::string summary_to_json(const std::vector<RoundRecord>& records, const SimConfig& cfg);

/// One x1,...,xn;zeta;tau verification instance.
struct KktInstance {
  std::vector<double> x;
  CloudConfig cloud;
};

/// Parses an instance line; throws std::runtime_error on malformed input.
KktInstance parse_kkt_instance(const std::string& line);

/// Merges run CSVs into long format (experiment_label,round,accuracy); the
/// label is the file's basename without extension. Throws on schema mismatch.
std::string merge_plot_data(const std::vector<std::string>& csv_paths);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace shfl
