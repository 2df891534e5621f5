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

/// \file channel.hpp
/// \brief Uplink wireless channel: random flat-fading realizations over a
///        disc deployment, and the achievable-rate functions for two-layer
///        superposition coding with successive interference cancellation.
///
/// Rate conventions: all rates are in bits per channel use. Every user
/// splits its transmit power P between two message layers; the receiver
/// decodes layer 1 treating layer 2 as noise, cancels it, then decodes
/// layer 2. Quantization noise added by fronthaul compression enters the
/// effective noise covariance of each decoding stage.

#ifndef MDCRAN_CHANNEL_HPP
#define MDCRAN_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mdcran/hermitian.hpp"
#include "mdcran/rng.hpp"

namespace mdcran {

/// Disc deployment geometry for random placements.
struct ChannelGeometry {
  double radius_m = 100.0;
  double ref_dist_m = 30.0;
  double pathloss_exp = 3.0;
};

/// Antenna/user dimensions of one uplink cell.
struct ChannelSizes {
  int num_ues = 2;
  int n_rx = 2;
  std::vector<int> n_tx_per_ue;  ///< empty means one antenna per UE
};

/// Distance-based gain 1 / (1 + (d/d0)^eta).
inline double path_loss(double distance_m, double ref_dist_m,
                        double pathloss_exp) {
  if (!(ref_dist_m > 0.0))
    throw std::invalid_argument("path_loss: reference distance must be positive");
  return 1.0 / (1.0 + std::pow(distance_m / ref_dist_m, pathloss_exp));
}

/// Per-UE split of the symbol power budget across the two message layers.
struct PowerSplit {
  std::vector<double> layer1;
  std::vector<double> layer2;

  std::size_t num_ues() const { return layer1.size(); }

  /// Checks nonnegativity and that each UE's layers add up to total_power.
  void validate(double total_power) const {
    if (layer1.size() != layer2.size() || layer1.empty())
      throw std::invalid_argument("PowerSplit: layer vectors must be nonempty and equal length");
    for (std::size_t k = 0; k < layer1.size(); ++k) {
      if (!(layer1[k] >= 0.0) || !(layer2[k] >= 0.0))
        throw std::invalid_argument("PowerSplit: layer powers must be nonnegative");
      if (std::abs(layer1[k] + layer2[k] - total_power) > 1e-9 * total_power)
        throw std::invalid_argument("PowerSplit: layers must sum to the power budget");
    }
  }

  static PowerSplit even(int num_ues, double total_power) {
    PowerSplit s;
    s.layer1.assign(num_ues, total_power / 2.0);
    s.layer2.assign(num_ues, total_power / 2.0);
    return s;
  }
};

/// One flat-fading uplink realization: per-UE channel matrices into a single
/// multi-antenna receiver, plus the noise covariance and power budget.
/// Immutable after construction; operations on it are pure.
struct UplinkChannel {
  int n_rx = 0;
  std::vector<int> n_tx_per_ue;
  std::vector<MatrixC> per_ue_channel;  ///< n_rx x n_tx_per_ue[k] each
  HermitianMatrix noise_cov = HermitianMatrix::identity(1);
  double power = 1.0;

  int num_ues() const { return static_cast<int>(per_ue_channel.size()); }

  int total_tx() const {
    return std::accumulate(n_tx_per_ue.begin(), n_tx_per_ue.end(), 0);
  }

  /// All per-UE channels side by side: the n_rx x total_tx matrix.
  MatrixC stacked() const {
    MatrixC h = MatrixC::Zero(n_rx, total_tx());
    Eigen::Index col = 0;
    for (const auto& hk : per_ue_channel) {
      h.block(0, col, n_rx, hk.cols()) = hk;
      col += hk.cols();
    }
    return h;
  }

  /// Gram matrix of one UE's channel.
  MatrixC ue_gram(int k) const {
    return per_ue_channel.at(k) * per_ue_channel.at(k).adjoint();
  }

  /// Received-signal gram at full power: sum_k H_k H_k^H.
  MatrixC full_gram() const {
    MatrixC g = MatrixC::Zero(n_rx, n_rx);
    for (const auto& hk : per_ue_channel) g += hk * hk.adjoint();
    return g;
  }

  /// Covariance contributed by the layer-2 signals: sum_k P_k2 H_k H_k^H.
  MatrixC layer2_gram(const PowerSplit& split) const {
    MatrixC g = MatrixC::Zero(n_rx, n_rx);
    for (int k = 0; k < num_ues(); ++k)
      g += split.layer2[k] * (per_ue_channel[k] * per_ue_channel[k].adjoint());
    return g;
  }

  void validate() const {
    if (n_rx < 1) throw std::invalid_argument("UplinkChannel: n_rx must be >= 1");
    if (per_ue_channel.empty() ||
        per_ue_channel.size() != n_tx_per_ue.size())
      throw std::invalid_argument("UplinkChannel: inconsistent UE lists");
    for (std::size_t k = 0; k < per_ue_channel.size(); ++k)
      if (per_ue_channel[k].rows() != n_rx ||
          per_ue_channel[k].cols() != n_tx_per_ue[k])
        throw std::invalid_argument("UplinkChannel: channel block size mismatch");
    if (noise_cov.dim() != n_rx)
      throw std::invalid_argument("UplinkChannel: noise covariance dimension mismatch");
    if (!noise_cov.is_psd())
      throw std::invalid_argument("UplinkChannel: noise covariance must be PSD");
    if (!(power > 0.0))
      throw std::invalid_argument("UplinkChannel: power budget must be positive");
  }
};

/// Draws one channel realization: receiver and UE positions uniform over the
/// disc, i.i.d. circularly-symmetric complex Gaussian entries with variance
/// set by the distance-based path loss, and white noise of power noise_power
/// per receive antenna. Deterministic function of rng_seed.
inline UplinkChannel sample_channel(const ChannelGeometry& geometry,
                                    const ChannelSizes& sizes,
                                    double noise_power, double power,
                                    std::uint64_t rng_seed) {
  if (!(geometry.radius_m > 0.0) || !(geometry.ref_dist_m > 0.0))
    throw std::invalid_argument("sample_channel: geometry lengths must be positive");
  if (sizes.num_ues < 1 || sizes.n_rx < 1)
    throw std::invalid_argument("sample_channel: sizes must be >= 1");
  std::vector<int> n_tx = sizes.n_tx_per_ue;
  if (n_tx.empty()) n_tx.assign(sizes.num_ues, 1);
  if (static_cast<int>(n_tx.size()) != sizes.num_ues)
    throw std::invalid_argument("sample_channel: per-UE antenna list length mismatch");
  for (int t : n_tx)
    if (t < 1) throw std::invalid_argument("sample_channel: antenna counts must be >= 1");
  if (!(noise_power > 0.0) || !(power > 0.0))
    throw std::invalid_argument("sample_channel: noise power and power budget must be positive");

  SplitMix64 rng(derive_stream(rng_seed, 0x636861ULL));
  auto draw_position = [&](double& x, double& y) {
    double r = geometry.radius_m * std::sqrt(rng.next_unit());
    double theta = rng.next_uniform(0.0, 6.283185307179586476925286766559);
    x = r * std::cos(theta);
    y = r * std::sin(theta);
  };

  double rx_x = 0.0;
  double rx_y = 0.0;
  draw_position(rx_x, rx_y);

  UplinkChannel ch;
  ch.n_rx = sizes.n_rx;
  ch.n_tx_per_ue = n_tx;
  ch.noise_cov = HermitianMatrix::identity(sizes.n_rx, noise_power);
  ch.power = power;
  ch.per_ue_channel.reserve(sizes.num_ues);
  for (int k = 0; k < sizes.num_ues; ++k) {
    double ue_x = 0.0;
    double ue_y = 0.0;
    draw_position(ue_x, ue_y);
    double dist = std::hypot(ue_x - rx_x, ue_y - rx_y);
    double gain = path_loss(dist, geometry.ref_dist_m, geometry.pathloss_exp);
    MatrixC hk(sizes.n_rx, n_tx[k]);
    for (Eigen::Index i = 0; i < hk.rows(); ++i)
      for (Eigen::Index j = 0; j < hk.cols(); ++j)
        hk(i, j) = rng.next_complex_normal(gain);
    ch.per_ue_channel.push_back(std::move(hk));
  }
  ch.validate();
  return ch;
}

/// Covariance of the received signal at full transmit power.
inline HermitianMatrix received_covariance(const UplinkChannel& ch) {
  ch.validate();
  return HermitianMatrix(ch.power * ch.full_gram() + ch.noise_cov.matrix());
}

namespace detail {

inline double log2_det_or_throw(const MatrixC& m, const char* what) {
  auto v = try_log2_det(m);
  if (!v) throw std::domain_error(what);
  return *v;
}

}  // namespace detail

/// Sum rate of the layer-1 signals decoded from one recovered description
/// (layer 2 and quantization noise side_cov treated as noise).
inline double layer1_sum_rate(const UplinkChannel& ch, const PowerSplit& split,
                              const HermitianMatrix& side_cov) {
  split.validate(ch.power);
  MatrixC noise2 = ch.layer2_gram(split) + ch.noise_cov.matrix() + side_cov.matrix();
  MatrixC full = ch.power * ch.full_gram() + ch.noise_cov.matrix() + side_cov.matrix();
  return detail::log2_det_or_throw(full, "layer1_sum_rate: singular log-det argument") -
         detail::log2_det_or_throw(noise2, "layer1_sum_rate: singular log-det argument");
}

/// Sum rate of the layer-2 signals decoded after layer-1 cancellation from
/// the refined (central) reconstruction with quantization noise central_cov.
inline double layer2_sum_rate(const UplinkChannel& ch, const PowerSplit& split,
                              const HermitianMatrix& central_cov) {
  split.validate(ch.power);
  MatrixC sig = ch.layer2_gram(split) + ch.noise_cov.matrix() + central_cov.matrix();
  MatrixC noise = ch.noise_cov.matrix() + central_cov.matrix();
  return detail::log2_det_or_throw(sig, "layer2_sum_rate: singular log-det argument") -
         detail::log2_det_or_throw(noise, "layer2_sum_rate: singular log-det argument");
}

/// Single-layer joint-decoding sum rate at full power with quantization
/// noise quant_cov: the rate of the duplicate-packet baseline.
inline double pd_sum_rate(const UplinkChannel& ch,
                          const HermitianMatrix& quant_cov) {
  ch.validate();
  MatrixC full = ch.power * ch.full_gram() + ch.noise_cov.matrix() + quant_cov.matrix();
  MatrixC noise = ch.noise_cov.matrix() + quant_cov.matrix();
  return detail::log2_det_or_throw(full, "pd_sum_rate: singular log-det argument") -
         detail::log2_det_or_throw(noise, "pd_sum_rate: singular log-det argument");
}

}  // namespace mdcran

#endif  // MDCRAN_CHANNEL_HPP
