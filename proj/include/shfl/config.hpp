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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shfl/sim.hpp"

namespace shfl {

/// Thrown for malformed or invalid configuration input; messages carry the
/// offending line or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the flat key=value experiment format ('#' comments, blank lines
/// ignored). Unknown keys, bad values, and missing required keys raise
/// ConfigError with line-level diagnostics. When mnist paths are omitted they
/// default to the standard filenames under $SHFL_DATA_DIR.
SimConfig parse_config_text(const std::string& text);
SimConfig load_config(const std::string& path);

/// The config as ordered key=value pairs; parsing the rendered text yields an
/// equivalent SimConfig.
std::vector<std::pair<std::string, std::string>> config_to_key_values(const SimConfig& cfg);
std::string render_config(const SimConfig& cfg);

}  // namespace shfl
