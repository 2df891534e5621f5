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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "mdcran/channel.hpp"
#include "mdcran/rng.hpp"

using namespace mdcran;

namespace {

/// Scalar single-UE channel with |h| = h_abs.
UplinkChannel scalar_channel(double h_abs, double noise_power, double power) {
  UplinkChannel ch;
  ch.n_rx = 1;
  ch.n_tx_per_ue = {1};
  MatrixC h(1, 1);
  h(0, 0) = Complex(h_abs, 0.0);
  ch.per_ue_channel = {h};
  ch.noise_cov = HermitianMatrix::identity(1, noise_power);
  ch.power = power;
  return ch;
}

PowerSplit split_of(std::vector<double> p1, std::vector<double> p2) {
  PowerSplit s;
  s.layer1 = std::move(p1);
  s.layer2 = std::move(p2);
  return s;
}

HermitianMatrix scalar_cov(double v) {
  return HermitianMatrix::identity(1, v);
}

UplinkChannel random_channel(int num_ues, int n_rx, double power,
                             std::uint64_t seed) {
  ChannelGeometry geo;
  ChannelSizes sizes;
  sizes.num_ues = num_ues;
  sizes.n_rx = n_rx;
  return sample_channel(geo, sizes, 1.0, power, seed);
}

HermitianMatrix random_psd(int n, SplitMix64& rng, double ridge = 0.05) {
  MatrixC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.next_complex_normal(1.0);
  return HermitianMatrix(a * a.adjoint() + ridge * MatrixC::Identity(n, n));
}

}  // namespace

TEST_CASE("path loss") {
  REQUIRE(path_loss(30.0, 30.0, 3.0) == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(path_loss(0.0, 30.0, 3.0) == 1.0);
  REQUIRE(path_loss(60.0, 30.0, 3.0) == Catch::Approx(1.0 / 9.0).margin(1e-15));
  REQUIRE_THROWS_AS(path_loss(10.0, 0.0, 3.0), std::invalid_argument);
}

TEST_CASE("sample_channel is a pure function of its seed") {
  ChannelGeometry geo;
  ChannelSizes sizes;
  sizes.num_ues = 3;
  sizes.n_rx = 2;
  UplinkChannel a = sample_channel(geo, sizes, 1.0, 10.0, 42);
  UplinkChannel b = sample_channel(geo, sizes, 1.0, 10.0, 42);
  UplinkChannel c = sample_channel(geo, sizes, 1.0, 10.0, 43);
  REQUIRE(a.per_ue_channel.size() == 3);
  bool any_differs = false;
  for (int k = 0; k < 3; ++k) {
    REQUIRE(a.per_ue_channel[k] == b.per_ue_channel[k]);
    if (a.per_ue_channel[k] != c.per_ue_channel[k]) any_differs = true;
  }
  REQUIRE(any_differs);
}

TEST_CASE("sample_channel rejects invalid parameters") {
  ChannelGeometry geo;
  ChannelSizes sizes;
  sizes.num_ues = 1;
  sizes.n_rx = 1;
  REQUIRE_THROWS_AS(sample_channel(geo, sizes, 0.0, 1.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_channel(geo, sizes, 1.0, -1.0, 1), std::invalid_argument);
  ChannelSizes bad = sizes;
  bad.num_ues = 0;
  REQUIRE_THROWS_AS(sample_channel(geo, bad, 1.0, 1.0, 1), std::invalid_argument);
  ChannelGeometry badgeo = geo;
  badgeo.radius_m = 0.0;
  REQUIRE_THROWS_AS(sample_channel(badgeo, sizes, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("channel entries carry the modeled variance") {
  // With a tiny deployment radius every distance is ~0, so entries should be
  // unit-variance complex Gaussians.
  ChannelGeometry geo;
  geo.radius_m = 1e-6;
  ChannelSizes sizes;
  sizes.num_ues = 40;
  sizes.n_rx = 8;
  UplinkChannel ch = sample_channel(geo, sizes, 1.0, 1.0, 7);
  double acc = 0.0;
  int count = 0;
  for (const auto& hk : ch.per_ue_channel) {
    acc += hk.squaredNorm();
    count += static_cast<int>(hk.size());
  }
  double mean_sq = acc / count;  // 320 samples, stderr ~ 1/sqrt(320)
  REQUIRE(mean_sq == Catch::Approx(1.0).margin(0.2));
}

TEST_CASE("received covariance") {
  UplinkChannel sc = scalar_channel(1.0, 1.0, 1.0);
  REQUIRE(received_covariance(sc).matrix()(0, 0).real() ==
          Catch::Approx(2.0).margin(1e-15));

  UplinkChannel zero = scalar_channel(0.0, 1.5, 3.0);
  REQUIRE(received_covariance(zero).matrix()(0, 0).real() ==
          Catch::Approx(1.5).margin(1e-15));

  UplinkChannel eye;
  eye.n_rx = 2;
  eye.n_tx_per_ue = {2};
  eye.per_ue_channel = {MatrixC::Identity(2, 2)};
  eye.noise_cov = HermitianMatrix::identity(2);
  eye.power = 2.0;
  MatrixC sigma = received_covariance(eye).matrix();
  // Direct evaluation oracle: P * H H^H + noise.
  MatrixC oracle = 2.0 * MatrixC::Identity(2, 2) + MatrixC::Identity(2, 2);
  REQUIRE((sigma - oracle).norm() == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("layer rates, scalar oracles") {
  UplinkChannel ch = scalar_channel(1.0, 1.0, 1.0);

  // All power in layer 1, side noise 1: log2(3/2).
  REQUIRE(layer1_sum_rate(ch, split_of({1.0}, {0.0}), scalar_cov(1.0)) ==
          Catch::Approx(std::log2(1.5)).margin(1e-12));
  // No layer-1 power: zero rate.
  REQUIRE(layer1_sum_rate(ch, split_of({0.0}, {1.0}), scalar_cov(1.0)) ==
          Catch::Approx(0.0).margin(1e-12));
  // Even split, no quantization noise: log2(2/1.5).
  REQUIRE(layer1_sum_rate(ch, split_of({0.5}, {0.5}), scalar_cov(0.0)) ==
          Catch::Approx(std::log2(2.0 / 1.5)).margin(1e-12));

  // No layer-2 power: zero rate.
  REQUIRE(layer2_sum_rate(ch, split_of({1.0}, {0.0}), scalar_cov(1.0)) ==
          Catch::Approx(0.0).margin(1e-12));
  // Full power in layer 2, central noise 1: log2(3/2).
  REQUIRE(layer2_sum_rate(ch, split_of({0.0}, {1.0}), scalar_cov(1.0)) ==
          Catch::Approx(std::log2(1.5)).margin(1e-12));
  // Rate vanishes monotonically as the central noise blows up.
  double r3 = layer2_sum_rate(ch, split_of({0.0}, {1.0}), scalar_cov(1e3));
  double r6 = layer2_sum_rate(ch, split_of({0.0}, {1.0}), scalar_cov(1e6));
  REQUIRE(r3 > r6);
  REQUIRE(r6 == Catch::Approx(0.0).margin(1e-5));

  REQUIRE(pd_sum_rate(ch, scalar_cov(1.0)) ==
          Catch::Approx(std::log2(1.5)).margin(1e-12));
  REQUIRE(pd_sum_rate(scalar_channel(0.0, 1.0, 1.0), scalar_cov(1.0)) ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("layer rates add up to the joint-decoding rate") {
  // With the central noise equal to the side noise, layer1 + layer2 telescopes
  // to the single-layer rate, for any power split.
  SplitMix64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    int num_ues = 1 + static_cast<int>(rng.next() % 3);
    int n_rx = 1 + static_cast<int>(rng.next() % 3);
    double power = rng.next_uniform(0.5, 50.0);
    UplinkChannel ch = random_channel(num_ues, n_rx, power, 1000 + trial);
    HermitianMatrix omega = random_psd(n_rx, rng);
    PowerSplit split;
    for (int k = 0; k < num_ues; ++k) {
      double a = rng.next_uniform(0.0, power);
      split.layer1.push_back(a);
      split.layer2.push_back(power - a);
    }
    double lhs = layer1_sum_rate(ch, split, omega) +
                 layer2_sum_rate(ch, split, omega);
    double rhs = pd_sum_rate(ch, omega);
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("rates are monotone in the quantization noise") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    int n_rx = 1 + static_cast<int>(rng.next() % 3);
    UplinkChannel ch = random_channel(2, n_rx, 8.0, 2000 + trial);
    HermitianMatrix lo = random_psd(n_rx, rng);
    HermitianMatrix bump = random_psd(n_rx, rng, 0.0);
    HermitianMatrix hi(lo.matrix() + bump.matrix());
    PowerSplit split = PowerSplit::even(2, 8.0);

    REQUIRE(layer1_sum_rate(ch, split, lo) >=
            layer1_sum_rate(ch, split, hi) - 1e-10);
    REQUIRE(layer2_sum_rate(ch, split, lo) >=
            layer2_sum_rate(ch, split, hi) - 1e-10);
    REQUIRE(pd_sum_rate(ch, lo) >= pd_sum_rate(ch, hi) - 1e-10);

    // Nonnegative and finite throughout.
    for (double v : {layer1_sum_rate(ch, split, lo),
                     layer2_sum_rate(ch, split, hi), pd_sum_rate(ch, lo)}) {
      REQUIRE(v >= -1e-12);
      REQUIRE(std::isfinite(v));
    }
  }
}
