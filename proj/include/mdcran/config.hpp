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

/// \file config.hpp
/// \brief JSON sweep configuration: schema documented in the README.

#ifndef MDCRAN_CONFIG_HPP
#define MDCRAN_CONFIG_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "mdcran/sweep.hpp"

namespace mdcran {

/// Parses a sweep configuration from JSON text. Unknown keys inside the
/// known sections are rejected so typos surface as config errors.
inline SweepSpec parse_sweep_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  SweepSpec spec;
  try {
    auto check_keys = [](const nlohmann::json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
          if (it.key() == k) ok = true;
        if (!ok)
          throw ConfigError(std::string("config: unknown key '") + it.key() +
                            "' in " + where);
      }
    };

    check_keys(j, {"base", "axes", "schemes", "n_channels", "base_seed",
                   "trials_mc", "solver"},
               "top level");

    if (j.contains("base")) {
      const auto& b = j.at("base");
      check_keys(b,
                 {"L_W", "B_F", "T_max_s", "radius_m", "ref_dist_m",
                  "pathloss_exp", "N_U", "n_R", "n_Uk", "N0"},
                 "base");
      if (b.contains("L_W")) spec.frame_symbols = b.at("L_W").get<long long>();
      if (b.contains("B_F")) spec.packet_bits = b.at("B_F").get<long long>();
      if (b.contains("T_max_s")) spec.max_delay_s = b.at("T_max_s").get<double>();
      if (b.contains("radius_m")) spec.geometry.radius_m = b.at("radius_m").get<double>();
      if (b.contains("ref_dist_m")) spec.geometry.ref_dist_m = b.at("ref_dist_m").get<double>();
      if (b.contains("pathloss_exp")) spec.geometry.pathloss_exp = b.at("pathloss_exp").get<double>();
      if (b.contains("N_U")) spec.num_ues = b.at("N_U").get<int>();
      if (b.contains("n_R")) spec.n_rx = b.at("n_R").get<int>();
      if (b.contains("n_Uk")) spec.n_tx_per_ue = b.at("n_Uk").get<std::vector<int>>();
      if (b.contains("N0")) spec.noise_power = b.at("N0").get<double>();
    }

    if (!j.contains("axes")) throw ConfigError("config: missing 'axes'");
    const auto& a = j.at("axes");
    check_keys(a, {"eps_F", "snr_db", "C_F_bps", "R_F_fixed"}, "axes");
    if (a.contains("eps_F")) spec.eps_axis = a.at("eps_F").get<std::vector<double>>();
    if (a.contains("snr_db")) spec.snr_db_axis = a.at("snr_db").get<std::vector<double>>();
    if (a.contains("C_F_bps")) spec.capacity_axis = a.at("C_F_bps").get<std::vector<double>>();
    if (a.contains("R_F_fixed")) spec.rf_fixed_axis = a.at("R_F_fixed").get<std::vector<double>>();

    if (j.contains("schemes")) spec.schemes = j.at("schemes").get<std::vector<std::string>>();
    if (j.contains("n_channels")) spec.n_channels = j.at("n_channels").get<int>();
    if (j.contains("base_seed")) spec.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("trials_mc")) spec.trials_mc = j.at("trials_mc").get<long long>();

    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      check_keys(s,
                 {"feasibility_tol", "kkt_tol", "rel_tol", "max_outer",
                  "max_inner", "mu_final", "n_starts", "start_seed"},
                 "solver");
      if (s.contains("feasibility_tol")) spec.solver.feasibility_tol = s.at("feasibility_tol").get<double>();
      if (s.contains("kkt_tol")) spec.solver.kkt_tol = s.at("kkt_tol").get<double>();
      if (s.contains("rel_tol")) spec.solver.rel_tol = s.at("rel_tol").get<double>();
      if (s.contains("max_outer")) spec.solver.max_outer = s.at("max_outer").get<int>();
      if (s.contains("max_inner")) spec.solver.max_inner = s.at("max_inner").get<int>();
      if (s.contains("mu_final")) spec.solver.mu_final = s.at("mu_final").get<double>();
      if (s.contains("n_starts")) spec.solver.n_starts = s.at("n_starts").get<int>();
      if (s.contains("start_seed")) spec.solver.start_seed = s.at("start_seed").get<std::uint64_t>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  spec.validate();
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_sweep_spec(text);
}

}  // namespace mdcran

#endif  // MDCRAN_CONFIG_HPP
