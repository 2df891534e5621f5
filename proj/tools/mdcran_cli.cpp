// SPDX-License-Identifier: Apache-2.0
//
// mdcran: joint radio/fronthaul design for packet-based C-RAN uplinks
// Copyright (C) 2026 The mdcran authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/// Command-line sweep harness. Subcommands:
///   sweep     --config <file> --out <csv> [--jobs N] [--mc-trials T]
///   summarize --in <csv> --out <csv>
///   validate  --config <file>
/// Exit codes: 0 success, 1 config error, 2 I/O error, 3 internal error.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "mdcran/config.hpp"
#include "mdcran/sweep.hpp"

namespace {

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              int jobs, long long mc_override) {
  mdcran::SweepSpec spec = mdcran::load_sweep_spec(config_path);
  if (mc_override >= 0) spec.trials_mc = mc_override;
  std::vector<mdcran::SweepResult> rows = mdcran::run_sweep(spec, jobs);
  mdcran::emit_csv(rows, out_path);
  std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  return 0;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path) {
  std::vector<mdcran::SweepResult> rows = mdcran::parse_csv(in_path);
  std::vector<mdcran::SummaryRow> summary = mdcran::summarize(rows);
  mdcran::emit_summary_csv(summary, out_path);
  std::printf("wrote %zu summary rows to %s\n", summary.size(),
              out_path.c_str());
  return 0;
}

int cmd_validate(const std::string& config_path) {
  mdcran::SweepSpec spec = mdcran::load_sweep_spec(config_path);
  std::size_t axes = spec.eps_axis.size() * spec.snr_db_axis.size() *
                     spec.capacity_axis.size() *
                     (spec.rf_fixed_axis.empty() ? 1 : spec.rf_fixed_axis.size());
  std::printf("config ok: %zu scheme(s) x %zu axis point(s) x %d channel(s) = %zu rows\n",
              spec.schemes.size(), axes, spec.n_channels,
              spec.schemes.size() * axes * static_cast<std::size_t>(spec.n_channels));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uplink C-RAN compression design sweeps over a congested packet fronthaul"};
  app.require_subcommand(1);

  std::string config_path, out_path, in_path;
  int jobs = 1;
  long long mc_trials = -1;

  CLI::App* sweep = app.add_subcommand("sweep", "run a sweep and write one CSV row per point");
  sweep->add_option("--config", config_path, "JSON sweep configuration")->required();
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--jobs", jobs, "worker threads (output is identical for any value)");
  sweep->add_option("--mc-trials", mc_trials, "override Monte Carlo validation trials per row");

  CLI::App* summ = app.add_subcommand("summarize", "average a sweep CSV across channel seeds");
  summ->add_option("--in", in_path, "sweep CSV to aggregate")->required();
  summ->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* val = app.add_subcommand("validate", "check a config file without running");
  val->add_option("--config", config_path, "JSON sweep configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(config_path, out_path, jobs, mc_trials);
    if (summ->parsed()) return cmd_summarize(in_path, out_path);
    if (val->parsed()) return cmd_validate(config_path);
    return 1;
  } catch (const mdcran::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const mdcran::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
