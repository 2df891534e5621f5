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

/// \file congestion.hpp
/// \brief Slotted-fronthaul congestion model: packet counts, slot deadlines,
///        per-route delivery probabilities and the description-count PMF.
///
/// The transport model: each description is split into fixed-size packets,
/// one packet occupies one fronthaul slot when transmission succeeds, and a
/// slot on route l succeeds independently with probability 1 - eps_l. The
/// number of slots a packet needs is geometric, so the slots needed by a
/// whole description follow a negative-binomial law. A description counts as
/// delivered when all of its packets arrive within the slot deadline.

#ifndef MDCRAN_CONGESTION_HPP
#define MDCRAN_CONGESTION_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdcran {

/// Per-link fronthaul transport parameters.
struct FronthaulConfig {
  long long packet_bits = 6000;      ///< payload bits per fronthaul packet
  long long frame_symbols = 5000;    ///< channel uses per wireless frame
  double capacity_bps = 100e6;       ///< fronthaul line rate in bit/s
  double max_delay_s = 1e-3;         ///< delivery deadline in seconds
  std::vector<double> route_failure_prob = {0.5, 0.5};  ///< per-route per-slot loss

  void validate() const {
    if (packet_bits < 1 || frame_symbols < 1)
      throw std::invalid_argument("FronthaulConfig: packet_bits and frame_symbols must be positive");
    if (!(capacity_bps > 0.0) || !(max_delay_s > 0.0))
      throw std::invalid_argument("FronthaulConfig: capacity and max delay must be positive");
    if (route_failure_prob.empty())
      throw std::invalid_argument("FronthaulConfig: at least one route required");
    for (double e : route_failure_prob)
      if (!(e >= 0.0) || !(e < 1.0))
        throw std::invalid_argument("FronthaulConfig: slot failure probabilities must lie in [0,1)");
  }
};

/// Number of packets needed to carry one description of a frame compressed
/// at rate_bits_per_symbol. A small tolerance absorbs the rounding noise of
/// rates assembled as multiples of packet_bits/frame_symbols, so exact grid
/// points never spill into an extra packet.
inline int packets_per_description(double rate_bits_per_symbol,
                                   const FronthaulConfig& cfg) {
  cfg.validate();
  if (!(rate_bits_per_symbol > 0.0))
    throw std::invalid_argument("packets_per_description: rate must be positive");
  double exact = static_cast<double>(cfg.frame_symbols) * rate_bits_per_symbol /
                 static_cast<double>(cfg.packet_bits);
  auto n = static_cast<long long>(std::ceil(exact - 1e-9));
  if (n < 1) n = 1;
  return static_cast<int>(n);
}

/// Delivery deadline expressed in fronthaul slots. One slot lasts one packet
/// duration packet_bits/capacity_bps.
inline int deadline_slots(const FronthaulConfig& cfg) {
  cfg.validate();
  double slots = cfg.max_delay_s * cfg.capacity_bps /
                 static_cast<double>(cfg.packet_bits);
  auto t = static_cast<long long>(std::floor(slots + 1e-9));
  if (t < 0) t = 0;
  return static_cast<int>(t);
}

/// Regularized incomplete beta function for positive integer parameters,
/// evaluated through the closed binomial sum
///   I_x(a,b) = sum_{j=a}^{a+b-1} C(a+b-1,j) x^j (1-x)^{a+b-1-j}.
/// For a+b-1 <= 50 every binomial coefficient is integer-exact in double
/// precision; beyond that the terms are formed in log space.
inline double regularized_incomplete_beta(double x, int a, int b) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: x must lie in [0,1]");
  if (a < 1 || b < 1)
    throw std::invalid_argument("regularized_incomplete_beta: integer parameters must be >= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const int n = a + b - 1;
  double sum = 0.0;
  if (n <= 50) {
    // C(n,a) by running product, then multiplicative updates.
    double binom = 1.0;
    for (int i = 1; i <= a; ++i)
      binom *= static_cast<double>(n - a + i) / static_cast<double>(i);
    double term = binom * std::pow(x, a) * std::pow(1.0 - x, n - a);
    for (int j = a;; ++j) {
      sum += term;
      if (j == n) break;
      term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * x /
              (1.0 - x);
    }
  } else {
    const double lx = std::log(x);
    const double l1mx = std::log1p(-x);
    const double lgn = std::lgamma(n + 1.0);
    for (int j = a; j <= n; ++j) {
      double lt = lgn - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                  j * lx + (n - j) * l1mx;
      sum += std::exp(lt);
    }
  }
  return sum < 1.0 ? sum : 1.0;
}

/// Probability that a description of n_packets packets, each losing a slot
/// independently with probability eps, fully arrives within deadline slots.
/// Zero when the deadline cannot even fit the packet count.
inline double delivery_probability(double eps, int n_packets, int deadline) {
  if (n_packets < 1)
    throw std::invalid_argument("delivery_probability: packet count must be >= 1");
  if (deadline < 0)
    throw std::invalid_argument("delivery_probability: deadline must be >= 0");
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw std::invalid_argument("delivery_probability: eps must lie in [0,1)");
  if (n_packets > deadline) return 0.0;
  if (eps == 0.0) return 1.0;
  return 1.0 - regularized_incomplete_beta(eps, deadline - n_packets + 1,
                                           n_packets);
}

/// PMF of the number of descriptions delivered over two independent routes.
inline std::array<double, 3> description_pmf_2path(double p1, double p2) {
  for (double p : {p1, p2})
    if (!(p >= 0.0) || p > 1.0)
      throw std::invalid_argument("description_pmf_2path: probabilities must lie in [0,1]");
  return {(1.0 - p1) * (1.0 - p2), p1 * (1.0 - p2) + p2 * (1.0 - p1), p1 * p2};
}

/// PMF of the number of delivered descriptions for any route count: the
/// Poisson-binomial law, computed by enumerating all delivery patterns.
/// Bounded to 20 routes so the enumeration stays tractable.
inline std::vector<double> description_pmf_general(
    const std::vector<double>& route_delivery_prob) {
  const std::size_t n = route_delivery_prob.size();
  if (n < 1)
    throw std::invalid_argument("description_pmf_general: need at least one route");
  if (n > 20)
    throw std::invalid_argument("description_pmf_general: enumeration supports at most 20 routes");
  for (double p : route_delivery_prob)
    if (!(p >= 0.0) || p > 1.0)
      throw std::invalid_argument("description_pmf_general: probabilities must lie in [0,1]");
  std::vector<double> pmf(n + 1, 0.0);
  const std::uint32_t patterns = 1u << n;
  for (std::uint32_t mask = 0; mask < patterns; ++mask) {
    double prob = 1.0;
    for (std::size_t l = 0; l < n; ++l)
      prob *= (mask >> l) & 1u ? route_delivery_prob[l]
                               : 1.0 - route_delivery_prob[l];
    pmf[std::popcount(mask)] += prob;
  }
  return pmf;
}

}  // namespace mdcran

#endif  // MDCRAN_CONGESTION_HPP
