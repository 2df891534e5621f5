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

/// \file sweep.hpp
/// \brief Configuration-driven parameter sweeps with reproducible seeds and
///        a fixed-schema CSV contract.
///
/// A sweep enumerates (scheme, eps, snr, capacity[, fixed rate], channel)
/// combinations in a fixed nested order, solves each point independently and
/// emits one CSV row per point. Workers may process points in parallel: row
/// slots are preassigned, so the output is byte-identical for any job count.

#ifndef MDCRAN_SWEEP_HPP
#define MDCRAN_SWEEP_HPP

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mdcran/channel.hpp"
#include "mdcran/congestion.hpp"
#include "mdcran/optimizer.hpp"

namespace mdcran {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything one sweep needs. Axis lists multiply out; rf_fixed_axis empty
/// selects optimized-rate mode (the discrete rate search runs per point).
struct SweepSpec {
  long long packet_bits = 6000;
  long long frame_symbols = 5000;
  double max_delay_s = 1e-3;
  ChannelGeometry geometry;
  int num_ues = 2;
  int n_rx = 2;
  std::vector<int> n_tx_per_ue;  ///< empty: one antenna per UE
  double noise_power = 1.0;

  std::vector<double> eps_axis = {0.5};
  std::vector<double> snr_db_axis = {25.0};
  std::vector<double> capacity_axis = {100e6};
  std::vector<double> rf_fixed_axis;  ///< optional fixed-rate axis

  std::vector<std::string> schemes = {"mdc", "pd"};
  int n_channels = 50;
  std::uint64_t base_seed = 1;
  long long trials_mc = 0;
  SolverConfig solver;

  void validate() const {
    if (eps_axis.empty() || snr_db_axis.empty() || capacity_axis.empty())
      throw ConfigError("sweep axes must be nonempty");
    for (double e : eps_axis)
      if (!(e >= 0.0) || !(e < 1.0))
        throw ConfigError("eps_F values must lie in [0,1)");
    for (double c : capacity_axis)
      if (!(c > 0.0)) throw ConfigError("C_F_bps values must be positive");
    for (double r : rf_fixed_axis)
      if (!(r > 0.0)) throw ConfigError("R_F_fixed values must be positive");
    if (schemes.empty()) throw ConfigError("at least one scheme required");
    for (const auto& s : schemes)
      if (s != "mdc" && s != "pd")
        throw ConfigError("unknown scheme '" + s + "' (use mdc or pd)");
    if (n_channels < 1) throw ConfigError("n_channels must be >= 1");
    if (num_ues < 1 || n_rx < 1) throw ConfigError("N_U and n_R must be >= 1");
    if (!n_tx_per_ue.empty() &&
        static_cast<int>(n_tx_per_ue.size()) != num_ues)
      throw ConfigError("n_Uk must list one antenna count per UE");
    if (packet_bits < 1 || frame_symbols < 1 || !(max_delay_s > 0.0))
      throw ConfigError("fronthaul parameters must be positive");
    if (!(noise_power > 0.0)) throw ConfigError("N0 must be positive");
    if (trials_mc < 0) throw ConfigError("trials_mc must be >= 0");
  }
};

/// One CSV row.
struct SweepResult {
  std::string scheme;
  double eps = 0.0;
  double snr_db = 0.0;
  double capacity_bps = 0.0;
  std::uint64_t channel_seed = 0;
  double rf = 0.0;
  double expected_sum_rate = 0.0;
  double rate_layer1 = 0.0;
  double rate_layer2 = 0.0;
  std::array<double, 3> pmf = {1.0, 0.0, 0.0};
  int iterations = 0;
  bool converged = false;
  std::optional<double> mc_rate;
  std::optional<double> mc_stderr;
  std::string diagnostics;
};

namespace detail {

inline std::string join_diagnostics(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += '|';
    out += s;
  }
  // The CSV writer relies on rows being comma- and newline-free.
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

inline SweepResult run_sweep_point(const SweepSpec& spec,
                                   const std::string& scheme, double eps,
                                   double snr_db, double capacity,
                                   std::optional<double> rf_fixed,
                                   int channel_index, std::size_t row_index) {
  SweepResult row;
  row.scheme = scheme;
  row.eps = eps;
  row.snr_db = snr_db;
  row.capacity_bps = capacity;
  row.channel_seed = spec.base_seed + static_cast<std::uint64_t>(channel_index);

  FronthaulConfig cfg;
  cfg.packet_bits = spec.packet_bits;
  cfg.frame_symbols = spec.frame_symbols;
  cfg.capacity_bps = capacity;
  cfg.max_delay_s = spec.max_delay_s;
  cfg.route_failure_prob = {eps, eps};

  try {
    ChannelSizes sizes{spec.num_ues, spec.n_rx, spec.n_tx_per_ue};
    double power = spec.noise_power * std::pow(10.0, snr_db / 10.0);
    UplinkChannel ch = sample_channel(spec.geometry, sizes, spec.noise_power,
                                      power, row.channel_seed);

    if (scheme == "mdc") {
      MdcSolution sol = rf_fixed ? cccp_fixed_rf(*rf_fixed, ch, cfg,
                                                 std::nullopt, spec.solver)
                                 : search_rf_mdc(ch, cfg, spec.solver);
      row.rf = sol.rf;
      row.expected_sum_rate = sol.expected_sum_rate;
      row.rate_layer1 = sol.rate_layer1;
      row.rate_layer2 = sol.rate_layer2;
      row.pmf = sol.pmf;
      row.iterations = sol.iterations;
      row.converged = sol.converged;
      row.diagnostics = join_diagnostics(sol.diagnostics);
      if (spec.trials_mc > 0) {
        SimOutcome mc = simulate_expected_rate(
            sol, ch, cfg, spec.trials_mc,
            derive_stream(derive_stream(spec.base_seed, 0x6d63ULL), row_index));
        row.mc_rate = mc.empirical_expected_rate;
        row.mc_stderr = mc.std_error_rate;
      }
    } else {
      PdSolution sol = rf_fixed ? pd_fixed_rf(*rf_fixed, ch, cfg, spec.solver)
                                : optimize_pd(ch, cfg, spec.solver);
      row.rf = sol.rf;
      row.expected_sum_rate = sol.expected_sum_rate;
      row.rate_layer1 = sol.sum_rate;
      row.rate_layer2 = 0.0;
      row.pmf = sol.pmf;
      row.iterations = sol.iterations;
      row.converged = sol.converged;
      row.diagnostics = join_diagnostics(sol.diagnostics);
      if (spec.trials_mc > 0) {
        SimOutcome mc = simulate_expected_rate(
            sol, ch, cfg, spec.trials_mc,
            derive_stream(derive_stream(spec.base_seed, 0x6d63ULL), row_index));
        row.mc_rate = mc.empirical_expected_rate;
        row.mc_stderr = mc.std_error_rate;
      }
    }
  } catch (const std::exception& e) {
    row.converged = false;
    row.diagnostics = join_diagnostics({std::string("solver error: ") + e.what()});
  }
  return row;
}

}  // namespace detail

/// Runs the whole sweep. Points are enumerated scheme-major, then eps, snr,
/// capacity, fixed rate, channel; jobs > 1 distributes points over worker
/// threads without changing the output order or any numeric value.
inline std::vector<SweepResult> run_sweep(const SweepSpec& spec, int jobs = 1) {
  spec.validate();
  if (jobs < 1) jobs = 1;

  struct Job {
    std::string scheme;
    double eps, snr, cap;
    std::optional<double> rf;
    int channel;
  };
  std::vector<Job> todo;
  const bool fixed_mode = !spec.rf_fixed_axis.empty();
  for (const auto& scheme : spec.schemes)
    for (double eps : spec.eps_axis)
      for (double snr : spec.snr_db_axis)
        for (double cap : spec.capacity_axis) {
          std::vector<std::optional<double>> rf_points;
          if (fixed_mode)
            for (double r : spec.rf_fixed_axis) rf_points.push_back(r);
          else
            rf_points.push_back(std::nullopt);
          for (const auto& rf : rf_points)
            for (int c = 0; c < spec.n_channels; ++c)
              todo.push_back({scheme, eps, snr, cap, rf, c});
        }

  std::vector<SweepResult> results(todo.size());
  if (jobs == 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) {
      const Job& j = todo[i];
      results[i] = detail::run_sweep_point(spec, j.scheme, j.eps, j.snr, j.cap,
                                           j.rf, j.channel, i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= todo.size()) return;
        const Job& j = todo[i];
        results[i] = detail::run_sweep_point(spec, j.scheme, j.eps, j.snr,
                                             j.cap, j.rf, j.channel, i);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s, const char* col) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(std::string("CSV: bad numeric value in column ") + col);
  }
}

}  // namespace detail

inline const char* sweep_csv_header() {
  return "scheme,eps_F,snr_db,C_F_bps,channel_seed,R_F,expected_sum_rate,"
         "rate_layer1,rate_layer2,p_M0,p_M1,p_M2,iterations,converged,"
         "mc_rate,mc_stderr,diagnostics";
}

/// Writes the fixed 17-column CSV: UTF-8, LF endings, floats with 17
/// significant digits so parsing recovers every double exactly.
inline void emit_csv(const std::vector<SweepResult>& results,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << sweep_csv_header() << '\n';
  for (const auto& r : results) {
    out << r.scheme << ',' << detail::format_double(r.eps) << ','
        << detail::format_double(r.snr_db) << ','
        << detail::format_double(r.capacity_bps) << ',' << r.channel_seed << ','
        << detail::format_double(r.rf) << ','
        << detail::format_double(r.expected_sum_rate) << ','
        << detail::format_double(r.rate_layer1) << ','
        << detail::format_double(r.rate_layer2) << ','
        << detail::format_double(r.pmf[0]) << ','
        << detail::format_double(r.pmf[1]) << ','
        << detail::format_double(r.pmf[2]) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ','
        << (r.mc_rate ? detail::format_double(*r.mc_rate) : std::string())
        << ','
        << (r.mc_stderr ? detail::format_double(*r.mc_stderr) : std::string())
        << ',' << r.diagnostics << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}

/// Reads a sweep CSV produced by emit_csv.
inline std::vector<SweepResult> parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV: empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != sweep_csv_header())
    throw IoError("CSV: unexpected header in " + path);

  std::vector<SweepResult> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        f.push_back(line.substr(start));
        break;
      }
      f.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (f.size() != 17) throw IoError("CSV: expected 17 columns");
    SweepResult r;
    r.scheme = f[0];
    r.eps = detail::parse_double(f[1], "eps_F");
    r.snr_db = detail::parse_double(f[2], "snr_db");
    r.capacity_bps = detail::parse_double(f[3], "C_F_bps");
    r.channel_seed = static_cast<std::uint64_t>(
        std::strtoull(f[4].c_str(), nullptr, 10));
    r.rf = detail::parse_double(f[5], "R_F");
    r.expected_sum_rate = detail::parse_double(f[6], "expected_sum_rate");
    r.rate_layer1 = detail::parse_double(f[7], "rate_layer1");
    r.rate_layer2 = detail::parse_double(f[8], "rate_layer2");
    r.pmf = {detail::parse_double(f[9], "p_M0"),
             detail::parse_double(f[10], "p_M1"),
             detail::parse_double(f[11], "p_M2")};
    r.iterations = static_cast<int>(detail::parse_double(f[12], "iterations"));
    r.converged = detail::parse_double(f[13], "converged") != 0.0;
    if (!f[14].empty()) r.mc_rate = detail::parse_double(f[14], "mc_rate");
    if (!f[15].empty()) r.mc_stderr = detail::parse_double(f[15], "mc_stderr");
    r.diagnostics = f[16];
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Mean/stderr aggregate of one axis point across channel seeds.
struct SummaryRow {
  std::string scheme;
  double eps = 0.0;
  double snr_db = 0.0;
  double capacity_bps = 0.0;
  std::optional<double> rf;  ///< set when the rate was a sweep axis
  int n = 0;
  double mean_expected_sum_rate = 0.0;
  double stderr_expected_sum_rate = 0.0;
  double mean_rf = 0.0;
};

/// Averages expected rates across channel seeds. The rate joins the group
/// key exactly when the input swept it as an axis (detected by several rates
/// sharing one channel seed at one axis point); otherwise rates were chosen
/// by the optimizer and only their mean is reported.
inline std::vector<SummaryRow> summarize(const std::vector<SweepResult>& rows) {
  auto point_key = [](const SweepResult& r) {
    std::ostringstream k;
    k << r.scheme << '/' << detail::format_double(r.eps) << '/'
      << detail::format_double(r.snr_db) << '/'
      << detail::format_double(r.capacity_bps);
    return k.str();
  };
  bool rf_is_axis = false;
  {
    std::map<std::string, double> first_rf;
    for (const auto& r : rows) {
      std::string k = point_key(r) + '/' + std::to_string(r.channel_seed);
      auto [it, inserted] = first_rf.emplace(k, r.rf);
      if (!inserted && it->second != r.rf) {
        rf_is_axis = true;
        break;
      }
    }
  }

  std::map<std::string, std::size_t> index;
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> samples;
  std::vector<std::vector<double>> rf_samples;
  for (const auto& r : rows) {
    std::string k = point_key(r);
    if (rf_is_axis) k += '/' + detail::format_double(r.rf);
    auto [it, inserted] = index.emplace(k, out.size());
    if (inserted) {
      SummaryRow s;
      s.scheme = r.scheme;
      s.eps = r.eps;
      s.snr_db = r.snr_db;
      s.capacity_bps = r.capacity_bps;
      if (rf_is_axis) s.rf = r.rf;
      out.push_back(s);
      samples.emplace_back();
      rf_samples.emplace_back();
    }
    samples[it->second].push_back(r.expected_sum_rate);
    rf_samples[it->second].push_back(r.rf);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = samples[i];
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    double se = v.size() > 1
                    ? std::sqrt(var / (static_cast<double>(v.size()) *
                                       (static_cast<double>(v.size()) - 1.0)))
                    : 0.0;
    double mean_rf = 0.0;
    for (double x : rf_samples[i]) mean_rf += x;
    mean_rf /= static_cast<double>(rf_samples[i].size());
    out[i].n = static_cast<int>(v.size());
    out[i].mean_expected_sum_rate = mean;
    out[i].stderr_expected_sum_rate = se;
    out[i].mean_rf = mean_rf;
  }
  return out;
}

inline void emit_summary_csv(const std::vector<SummaryRow>& rows,
                             const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << "scheme,eps_F,snr_db,C_F_bps,R_F,n,mean_expected_sum_rate,"
         "stderr_expected_sum_rate,mean_R_F\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << detail::format_double(r.eps) << ','
        << detail::format_double(r.snr_db) << ','
        << detail::format_double(r.capacity_bps) << ','
        << (r.rf ? detail::format_double(*r.rf) : std::string()) << ',' << r.n
        << ',' << detail::format_double(r.mean_expected_sum_rate) << ','
        << detail::format_double(r.stderr_expected_sum_rate) << ','
        << detail::format_double(r.mean_rf) << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace mdcran

#endif  // MDCRAN_SWEEP_HPP
