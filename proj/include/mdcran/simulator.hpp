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

/// \file simulator.hpp
/// \brief Slot-level Monte Carlo simulator of the multi-route fronthaul.
///
/// Serves as the independent cross-check of every analytic quantity in
/// congestion.hpp and of the expected sum-rate of optimized solutions: each
/// packet's slot count is sampled from the geometric law directly and the
/// description-count statistics are accumulated empirically.
///
/// RNG contract: all draws of trial t on route l come from a substream that
/// is a pure function of (seed, t, l), so sharding trials across workers and
/// merging counts reproduces a serial run exactly.

#ifndef MDCRAN_SIMULATOR_HPP
#define MDCRAN_SIMULATOR_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mdcran/congestion.hpp"
#include "mdcran/rng.hpp"

namespace mdcran {

/// Result of one Monte Carlo run.
struct SimOutcome {
  long long trials = 0;
  std::vector<double> empirical_pmf;         ///< description-count frequencies
  std::vector<double> route_delivery_freq;   ///< per-route delivery frequency
  double empirical_expected_rate = 0.0;      ///< mean credited rate per trial
  double std_error_rate = 0.0;               ///< standard error of that mean
};

namespace detail {

/// Slots one packet occupies: geometric with success probability 1-eps,
/// sampled by inverting the CDF. eps == 0 delivers in exactly one slot.
inline long long geometric_slots(double eps, SplitMix64& rng) {
  if (eps <= 0.0) return 1;
  double u = rng.next_unit();
  return static_cast<long long>(std::ceil(std::log(u) / std::log(eps)));
}

/// Whether all n_packets of one description fit within the deadline.
inline bool route_delivers(double eps, int n_packets, long long deadline,
                           SplitMix64& rng) {
  long long used = 0;
  for (int p = 0; p < n_packets; ++p) {
    used += geometric_slots(eps, rng);
    if (used > deadline) return false;
  }
  return true;
}

}  // namespace detail

/// Simulates delivery only: empirical description-count PMF over the routes
/// plus per-route delivery frequencies. Deterministic given seed.
inline SimOutcome simulate_delivery(const std::vector<double>& eps,
                                    int n_packets, int deadline,
                                    long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("simulate_delivery: trials must be >= 1");
  if (n_packets < 1) throw std::invalid_argument("simulate_delivery: packet count must be >= 1");
  if (deadline < 0) throw std::invalid_argument("simulate_delivery: deadline must be >= 0");
  if (eps.empty()) throw std::invalid_argument("simulate_delivery: at least one route required");

  const std::size_t routes = eps.size();
  std::vector<long long> count_m(routes + 1, 0);
  std::vector<long long> count_route(routes, 0);
  for (long long t = 0; t < trials; ++t) {
    int delivered = 0;
    for (std::size_t l = 0; l < routes; ++l) {
      SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(t), l));
      if (detail::route_delivers(eps[l], n_packets, deadline, rng)) {
        ++delivered;
        ++count_route[l];
      }
    }
    ++count_m[delivered];
  }

  SimOutcome out;
  out.trials = trials;
  out.empirical_pmf.resize(routes + 1);
  for (std::size_t m = 0; m <= routes; ++m)
    out.empirical_pmf[m] =
        static_cast<double>(count_m[m]) / static_cast<double>(trials);
  out.route_delivery_freq.resize(routes);
  for (std::size_t l = 0; l < routes; ++l)
    out.route_delivery_freq[l] =
        static_cast<double>(count_route[l]) / static_cast<double>(trials);
  return out;
}

namespace detail {

/// Shared tail: turn an empirical description-count PMF into rate moments
/// using the per-count credited rates. Keeps the mean an exact linear
/// function of the empirical PMF.
inline void credit_rates(SimOutcome& out, const std::vector<double>& rate_per_count) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t m = 0; m < out.empirical_pmf.size(); ++m) {
    mean += out.empirical_pmf[m] * rate_per_count[m];
    second += out.empirical_pmf[m] * rate_per_count[m] * rate_per_count[m];
  }
  out.empirical_expected_rate = mean;
  double var = second - mean * mean;
  if (var < 0.0) var = 0.0;
  out.std_error_rate = std::sqrt(var / static_cast<double>(out.trials));
}

inline SimOutcome simulate_rate_impl(double rf, const FronthaulConfig& cfg,
                                     const std::vector<double>& rate_per_count,
                                     long long trials, std::uint64_t seed) {
  if (!(rf > 0.0)) {
    // Nothing is transmitted: every trial delivers zero descriptions.
    SimOutcome out;
    out.trials = trials;
    out.empirical_pmf.assign(cfg.route_failure_prob.size() + 1, 0.0);
    out.empirical_pmf[0] = 1.0;
    out.route_delivery_freq.assign(cfg.route_failure_prob.size(), 0.0);
    return out;
  }
  int n_packets = packets_per_description(rf, cfg);
  int deadline = deadline_slots(cfg);
  SimOutcome out = simulate_delivery(cfg.route_failure_prob, n_packets,
                                     deadline, trials, seed);
  credit_rates(out, rate_per_count);
  return out;
}

}  // namespace detail

/// Simulates the expected rate of a two-description solution: one delivered
/// description credits the layer-1 rate, both credit layer 1 + layer 2.
inline SimOutcome simulate_layered_rate(double rf, double rate_layer1,
                                        double rate_layer2,
                                        const FronthaulConfig& cfg,
                                        long long trials, std::uint64_t seed) {
  cfg.validate();
  if (cfg.route_failure_prob.size() != 2)
    throw std::invalid_argument("simulate_layered_rate: two routes expected");
  return detail::simulate_rate_impl(
      rf, cfg, {0.0, rate_layer1, rate_layer1 + rate_layer2}, trials, seed);
}

/// Simulates the expected rate of a duplicate-packet solution: any delivered
/// copy credits the full sum rate.
inline SimOutcome simulate_duplicate_rate(double rf, double sum_rate,
                                          const FronthaulConfig& cfg,
                                          long long trials, std::uint64_t seed) {
  cfg.validate();
  if (cfg.route_failure_prob.size() != 2)
    throw std::invalid_argument("simulate_duplicate_rate: two routes expected");
  return detail::simulate_rate_impl(rf, cfg, {0.0, sum_rate, sum_rate}, trials,
                                    seed);
}

}  // namespace mdcran

#endif  // MDCRAN_SIMULATOR_HPP
