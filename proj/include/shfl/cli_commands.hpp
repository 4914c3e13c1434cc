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
#include <ostream>
#include <string>
#include <vector>

namespace shfl {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitVerification = 3;

struct RunOptions {
  std::string config_path;
  std::string out_path;
  std::string summary_path;  // empty: out_path + ".summary.json"
  int threads = 0;           // 0 keeps the OpenMP default
};
int cmd_run(const RunOptions& opt, std::ostream& log);

struct VerifyKktOptions {
  std::string instances_path;  // mutually exclusive with random_n > 0
  int random_n = 0;
  std::uint64_t seed = 7;
  std::string out_path;  // empty: stdout
  double tolerance = 1e-6;
};
int cmd_verify_kkt(const VerifyKktOptions& opt, std::ostream& out, std::ostream& log);

struct PlotDataOptions {
  std::vector<std::string> csv_paths;
  std::string out_path;  // empty: stdout
};
int cmd_plot_data(const PlotDataOptions& opt, std::ostream& out, std::ostream& log);

/// Random instance generator shared by cmd_verify_kkt and the acceptance
/// checks: n in [2,20], scores log-uniform in [0.1,10], tau log-uniform in
/// [0.5,50], zeta a uniform fraction of tau/n.
std::string random_kkt_instances(int count, std::uint64_t seed);

}  // namespace shfl
