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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shfl/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulator of secure hierarchical federated learning on edge networks"};
  app.require_subcommand(1);

  shfl::RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("--config", run_opt.config_path, "Experiment config (key = value lines)")
      ->required();
  run->add_option("--out", run_opt.out_path, "Per-round CSV output path")->required();
  run->add_option("--summary", run_opt.summary_path,
                  "JSON summary path (default: <out>.summary.json)");
  run->add_option("--threads", run_opt.threads, "Worker threads (0 = OpenMP default)");

  shfl::VerifyKktOptions vk_opt;
  CLI::App* vk = app.add_subcommand(
      "verify-kkt", "Check closed-form cloud weights against the water-filling oracle");
  vk->add_option("--instances", vk_opt.instances_path,
                 "File of x1,...,xn;zeta;tau lines");
  vk->add_option("--random", vk_opt.random_n, "Generate this many random instances");
  vk->add_option("--seed", vk_opt.seed, "Seed for --random");
  vk->add_option("--out", vk_opt.out_path, "CSV report path (default: stdout)");
  vk->add_option("--tolerance", vk_opt.tolerance, "Max weight delta (default 1e-6)");

  shfl::PlotDataOptions pd_opt;
  CLI::App* pd = app.add_subcommand("plot-data",
                                    "Merge run CSVs into long-format accuracy-vs-round data");
  pd->add_option("csvs", pd_opt.csv_paths, "Input CSV files")->required();
  pd->add_option("--out", pd_opt.out_path, "Merged CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : shfl::kExitValidation;
  }

  if (run->parsed()) return shfl::cmd_run(run_opt, std::cerr);
  if (vk->parsed()) {
    if (vk_opt.out_path.empty()) {
      return shfl::cmd_verify_kkt(vk_opt, std::cout, std::cerr);
    }
    std::ofstream out(vk_opt.out_path);
    if (!out) {
      std::cerr << "cannot open " << vk_opt.out_path << "\n";
      return shfl::kExitRuntime;
    }
    return shfl::cmd_verify_kkt(vk_opt, out, std::cerr);
  }
  if (pd->parsed()) return shfl::cmd_plot_data(pd_opt, std::cout, std::cerr);
  return shfl::kExitValidation;
}
