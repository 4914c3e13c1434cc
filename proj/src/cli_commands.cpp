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

#include "shfl/cli_commands.hpp"

#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shfl/cloud.hpp"
#include "shfl/config.hpp"
#include "shfl/io.hpp"
#include "shfl/rng.hpp"

namespace shfl {

int cmd_run(const RunOptions& opt, std::ostream& log) {
  SimConfig cfg;
  try {
    cfg = load_config(opt.config_path);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitValidation;
  }

#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif

  try {
    const std::vector<RoundRecord> records = run_experiment(cfg);
    write_file(opt.out_path, records_to_csv(records, cfg));
    const std::string summary_path =
        opt.summary_path.empty() ? opt.out_path + ".summary.json" : opt.summary_path;
    write_file(summary_path, summary_to_json(records, cfg));
    log << "wrote " << records.size() << " rounds to " << opt.out_path << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

std::string random_kkt_instances(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::ostringstream out;
  for (int i = 0; i < count; ++i) {
    const int n = 2 + static_cast<int>(rng.below(19));  // [2, 20]
    const double tau = std::exp(rng.uniform(std::log(0.5), std::log(50.0)));
    const double zeta = rng.uniform(0.01, 0.99) * tau / n;
    for (int j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << format_float(std::exp(rng.uniform(std::log(0.1), std::log(10.0))));
    }
    out << ';' << format_float(zeta) << ';' << format_float(tau) << '\n';
  }
  return out.str();
}

int cmd_verify_kkt(const VerifyKktOptions& opt, std::ostream& out, std::ostream& log) {
  std::string text;
  try {
    if (opt.random_n > 0) {
      text = random_kkt_instances(opt.random_n, opt.seed);
    } else if (!opt.instances_path.empty()) {
      text = read_file(opt.instances_path);
    } else {
      log << "verify-kkt: need --instances or --random\n";
      return kExitValidation;
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntime;
  }

  out << "instance,n,status,refine_passes,max_weight_delta,objective_delta,"
         "closed_form,oracle\n";
  int malformed = 0;
  int failed = 0;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    KktInstance inst;
    try {
      inst = parse_kkt_instance(line);
    } catch (const std::exception& e) {
      log << "line " << line_no << ": malformed instance: " << e.what() << "\n";
      out << line_no << ",0,malformed,0,,,,\n";
      ++malformed;
      continue;
    }
    try {
      const KktResult closed = kkt_weights(inst.x, inst.cloud);
      const std::vector<double> oracle = oracle_weights(inst.x, inst.cloud);
      double max_delta = 0.0;
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        max_delta = std::max(max_delta, std::abs(closed.weights[i] - oracle[i]));
      }
      const double obj_delta = std::abs(weights_objective(inst.x, closed.weights) -
                                        weights_objective(inst.x, oracle));
      const bool ok = max_delta <= opt.tolerance;
      if (!ok) ++failed;
      out << line_no << ',' << inst.x.size() << ',' << (ok ? "ok" : "fail") << ','
          << closed.refine_passes << ',' << format_float(max_delta) << ','
          << format_float(obj_delta) << ',';
      for (std::size_t i = 0; i < closed.weights.size(); ++i) {
        if (i > 0) out << ';';
        out << format_float(closed.weights[i]);
      }
      out << ',';
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        if (i > 0) out << ';';
        out << format_float(oracle[i]);
      }
      out << '\n';
    } catch (const std::invalid_argument& e) {
      log << "line " << line_no << ": " << e.what() << "\n";
      out << line_no << ',' << inst.x.size() << ",infeasible,0,,,,\n";
      ++malformed;
    }
  }

  if (failed > 0) {
    log << failed << " instance(s) exceeded the tolerance\n";
    return kExitVerification;
  }
  if (malformed > 0) return kExitValidation;
  return kExitOk;
}

int cmd_plot_data(const PlotDataOptions& opt, std::ostream& out, std::ostream& log) {
  if (opt.csv_paths.empty()) {
    log << "plot-data: need at least one csv\n";
    return kExitValidation;
  }
  try {
    const std::string merged = merge_plot_data(opt.csv_paths);
    if (opt.out_path.empty()) {
      out << merged;
    } else {
      write_file(opt.out_path, merged);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace shfl
