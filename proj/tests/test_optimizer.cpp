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

#include "mdcran/optimizer.hpp"

using namespace mdcran;

namespace {

FronthaulConfig config_with(double eps, double capacity_bps = 100e6) {
  FronthaulConfig cfg;
  cfg.packet_bits = 6000;
  cfg.frame_symbols = 5000;
  cfg.capacity_bps = capacity_bps;
  cfg.max_delay_s = 1e-3;
  cfg.route_failure_prob = {eps, eps};
  return cfg;
}

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

UplinkChannel seeded_channel(int num_ues, int n_rx, double power,
                             std::uint64_t seed) {
  ChannelGeometry geo;
  ChannelSizes sizes;
  sizes.num_ues = num_ues;
  sizes.n_rx = n_rx;
  return sample_channel(geo, sizes, 1.0, power, seed);
}

/// Brute-force oracle for single-UE scalar instances: iterated log-spaced
/// grids over (layer-1 power, side noise, central noise) with feasibility
/// filtering through the scalar closed forms. Entirely independent of the
/// matrix code paths.
struct ScalarOracle {
  double h2, n0, power, rf, w1, w2, floor_delta;

  double g1(double side) const {
    double s = power * h2 + n0;
    return std::log2(s + side) - std::log2(side);
  }
  double gsum(double side, double central) const {
    double s = power * h2 + n0;
    return std::log2(1.0 + s / central + 2.0 * s / side) +
           2.0 * std::log2(s + side) - std::log2(side * (side + 2.0 * s));
  }
  double objective(double p1, double side, double central) const {
    double f1 = std::log2(power * h2 + n0 + side) -
                std::log2((power - p1) * h2 + n0 + side);
    double f2 = std::log2((power - p1) * h2 + n0 + central) -
                std::log2(n0 + central);
    return w1 * f1 + w2 * f2;
  }

  double best = -1.0;
  double best_p1 = 0.0, best_side = 0.0, best_central = 0.0;

  void scan(double p_lo, double p_hi, double s_lo, double s_hi, double c_lo,
            double c_hi, int pts) {
    auto logspace = [&](double lo, double hi, int i) {
      return lo * std::pow(hi / lo, static_cast<double>(i) / (pts - 1));
    };
    for (int ip = 0; ip <= pts; ++ip) {
      // include the exact endpoints 0 and P for the power coordinate
      double p1 = ip == 0 ? 0.0
                          : (ip == pts ? power
                                       : logspace(p_lo, p_hi, ip - 1));
      for (int is = 0; is < pts; ++is) {
        double side = logspace(s_lo, s_hi, is);
        if (g1(side) > rf) continue;
        for (int ic = 0; ic < pts; ++ic) {
          double central = logspace(c_lo, c_hi, ic);
          if (gsum(side, central) > 2.0 * rf) continue;
          double v = objective(p1, side, central);
          if (v > best) {
            best = v;
            best_p1 = p1;
            best_side = side;
            best_central = central;
          }
        }
      }
    }
  }

  double solve() {
    double s = power * h2 + n0;
    double p_lo = 1e-6 * power, p_hi = power;
    double s_lo = floor_delta, s_hi = 1e4 * s;
    double c_lo = floor_delta, c_hi = 1e4 * s;
    scan(p_lo, p_hi, s_lo, s_hi, c_lo, c_hi, 200);
    for (int pass = 0; pass < 2; ++pass) {
      double zoom = std::pow(10.0, -(pass + 0.0));
      auto rng = [&](double c, double lo, double hi) {
        double span = std::pow(hi / lo, 0.08 * zoom);
        return std::pair<double, double>(std::max(lo, c / span),
                                         std::min(hi, c * span));
      };
      auto [pl, ph] = rng(std::max(best_p1, p_lo), p_lo, p_hi);
      auto [sl, sh] = rng(best_side, s_lo, s_hi);
      auto [cl, chh] = rng(best_central, c_lo, c_hi);
      scan(pl, ph, sl, sh, cl, chh, 200);
    }
    return best;
  }
};

/// 1-D oracle for the duplicate-packet design at fixed rate.
double pd_scalar_oracle(double h2, double n0, double power, double rf,
                        double weight, double floor_delta) {
  double s = power * h2 + n0;
  auto g = [&](double om) { return std::log2(s + om) - std::log2(om); };
  auto obj = [&](double om) {
    return weight * (std::log2(power * h2 + n0 + om) - std::log2(n0 + om));
  };
  double best = 0.0;
  double lo = floor_delta, hi = 1e6 * s;
  for (int rounds = 0; rounds < 3; ++rounds) {
    double best_om = -1.0;
    for (int i = 0; i < 400; ++i) {
      double om = lo * std::pow(hi / lo, i / 399.0);
      if (g(om) > rf) continue;
      double v = obj(om);
      if (v > best) {
        best = v;
        best_om = om;
      }
    }
    if (best_om < 0.0) break;
    double span = std::pow(hi / lo, 0.01);
    lo = std::max(floor_delta, best_om / span);
    hi = best_om * span;
  }
  return best;
}

}  // namespace

TEST_CASE("congestion weights for a fixed rate") {
  FronthaulConfig cfg = config_with(0.5, 15e6);  // deadline 2 slots
  CongestionState st = mdc_congestion(1.2, cfg);
  REQUIRE(st.n_packets == 1);
  REQUIRE(st.deadline == 2);
  REQUIRE(st.pmf[0] == Catch::Approx(0.0625).margin(1e-12));
  REQUIRE(st.pmf[1] == Catch::Approx(0.375).margin(1e-12));
  REQUIRE(st.pmf[2] == Catch::Approx(0.5625).margin(1e-12));
  REQUIRE(st.weights.layer1 == Catch::Approx(0.9375).margin(1e-12));
  REQUIRE(st.weights.layer2 == Catch::Approx(0.5625).margin(1e-12));

  CongestionState pd = pd_congestion(1.2, cfg);
  REQUIRE(pd.weights.layer1 == Catch::Approx(1.0 - 0.0625).margin(1e-12));
  REQUIRE(pd.weights.layer2 == 0.0);
}

TEST_CASE("expected sum rate composition") {
  // Scalar setup engineered so both layer rates equal log2(3/2).
  UplinkChannel ch = scalar_channel(1.0, 0.25, 1.0);
  PowerSplit split;
  split.layer1 = {0.5};
  split.layer2 = {0.5};
  MdcQuantizer q(HermitianMatrix::identity(1, 0.25),
                 HermitianMatrix::identity(1, 0.75));
  REQUIRE(layer1_sum_rate(ch, split, q.side_cov) ==
          Catch::Approx(std::log2(1.5)).margin(1e-12));
  REQUIRE(layer2_sum_rate(ch, split, q.central_cov) ==
          Catch::Approx(std::log2(1.5)).margin(1e-12));

  FronthaulConfig cfg = config_with(0.5, 15e6);
  double expected = expected_sum_rate_mdc(1.2, split, q, ch, cfg);
  REQUIRE(expected == Catch::Approx(1.5 * std::log2(1.5)).margin(1e-12));
  REQUIRE(expected == Catch::Approx(0.8775).margin(2e-4));

  // Saturated congestion: essentially nothing arrives.
  FronthaulConfig dead = config_with(1.0 - 1e-9, 15e6);
  REQUIRE(expected_sum_rate_mdc(1.2, split, q, ch, dead) ==
          Catch::Approx(0.0).margin(1e-6));

  // Perfect fronthaul: both descriptions always arrive.
  FronthaulConfig perfect = config_with(0.0, 15e6);
  REQUIRE(expected_sum_rate_mdc(1.2, split, q, ch, perfect) ==
          Catch::Approx(2.0 * std::log2(1.5)).margin(1e-12));
}

TEST_CASE("inner solve: degenerate weights return a feasible point") {
  UplinkChannel ch = seeded_channel(2, 2, 10.0, 17);
  HermitianMatrix sy = received_covariance(ch);
  double c = 64.0;
  MdcQuantizer q(HermitianMatrix::identity(2, c),
                 HermitianMatrix::identity(2, c));
  while (g_individual(sy, q) > 2.4 || g_sum(sy, q) > 4.8) {
    c *= 2.0;
    q = MdcQuantizer(HermitianMatrix::identity(2, c),
                     HermitianMatrix::identity(2, c));
  }
  InnerProblem prob{2.4, RateWeights{0.0, 0.0}, ch,
                    LinearizationPoint{PowerSplit::even(2, 10.0), q}};
  InnerSolution sol = solve_inner_convex(prob);
  REQUIRE(sol.surrogate_value == 0.0);
  REQUIRE(g_individual(sy, sol.quantizer) <= 2.4 + 1e-6);
  REQUIRE(g_sum(sy, sol.quantizer) <= 4.8 + 1e-6);
  sol.split.validate(10.0);
}

TEST_CASE("inner solve: minorization audit at the returned point") {
  for (std::uint64_t seed : {21, 22, 23}) {
    UplinkChannel ch = seeded_channel(2, 2, 31.6, seed);
    FronthaulConfig cfg = config_with(0.3);
    CongestionState st = mdc_congestion(3.6, cfg);
    detail::ChannelContext cc(ch);
    LinearizationPoint at = detail::default_start(cc, 3.6);
    InnerProblem prob{3.6, st.weights, ch, at};
    InnerSolution sol = solve_inner_convex(prob);
    REQUIRE(sol.kkt_residual <= 1e-6);
    double exact =
        st.weights.layer1 * layer1_sum_rate(ch, sol.split, sol.quantizer.side_cov) +
        st.weights.layer2 * layer2_sum_rate(ch, sol.split, sol.quantizer.central_cov);
    REQUIRE(sol.surrogate_value <= exact + 1e-9);
    // Ascent relative to the linearization point.
    double at_value =
        st.weights.layer1 * layer1_sum_rate(ch, at.split, at.quantizer.side_cov) +
        st.weights.layer2 * layer2_sum_rate(ch, at.split, at.quantizer.central_cov);
    REQUIRE(sol.surrogate_value >= at_value - 1e-9);
  }
}

TEST_CASE("inner solve: generous rate drives the noise to the floor") {
  UplinkChannel ch = scalar_channel(1.0, 1.0, 4.0);
  detail::ChannelContext cc(ch);
  FronthaulConfig cfg = config_with(0.2);
  CongestionState st = mdc_congestion(20.4, cfg);
  LinearizationPoint at = detail::default_start(cc, 20.4);
  InnerProblem prob{20.4, st.weights, ch, at};
  InnerSolution sol = solve_inner_convex(prob);
  // Side noise small enough that the layer-1 rate is within a whisker of the
  // unquantized rate at the returned split.
  double side = sol.quantizer.side_cov.matrix()(0, 0).real();
  REQUIRE(side < 1e-3);
}

TEST_CASE("fixed-rate design: monotone objective and feasibility") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    UplinkChannel ch = seeded_channel(2, 2, 316.23, seed);
    FronthaulConfig cfg = config_with(0.5);
    MdcSolution sol = cccp_fixed_rf(6.0, ch, cfg);
    REQUIRE(sol.converged);
    for (std::size_t i = 1; i < sol.objective_trace.size(); ++i)
      REQUIRE(sol.objective_trace[i] >= sol.objective_trace[i - 1] - 1e-8);

    HermitianMatrix sy = received_covariance(ch);
    REQUIRE(g_individual(sy, sol.quantizer) <= 6.0 + 1e-6);
    REQUIRE(g_sum(sy, sol.quantizer) <= 12.0 + 1e-6);
    sol.split.validate(ch.power);
    REQUIRE(sol.expected_sum_rate ==
            Catch::Approx(sol.pmf[1] * sol.rate_layer1 +
                          sol.pmf[2] * (sol.rate_layer1 + sol.rate_layer2))
                .margin(1e-9));
  }
}

TEST_CASE("fixed-rate design: deterministic and stable under rerun") {
  UplinkChannel ch = seeded_channel(2, 2, 100.0, 7);
  FronthaulConfig cfg = config_with(0.4);
  MdcSolution a = cccp_fixed_rf(4.8, ch, cfg);
  MdcSolution b = cccp_fixed_rf(4.8, ch, cfg);
  REQUIRE(a.expected_sum_rate == b.expected_sum_rate);
  REQUIRE(a.split.layer1 == b.split.layer1);
  REQUIRE(a.quantizer.side_cov.matrix() == b.quantizer.side_cov.matrix());

  // Restarting from the returned point converges immediately.
  MdcSolution c = cccp_fixed_rf(
      4.8, ch, cfg, LinearizationPoint{a.split, a.quantizer});
  REQUIRE(c.iterations <= 2);
  REQUIRE(std::abs(c.expected_sum_rate - a.expected_sum_rate) <=
          1e-6 * std::max(1.0, a.expected_sum_rate));
}

TEST_CASE("perfect fronthaul: layered design beats the baseline at equal rate") {
  UplinkChannel ch = seeded_channel(2, 2, 316.23, 12);
  FronthaulConfig cfg = config_with(0.0);
  MdcSolution mdc = cccp_fixed_rf(8.4, ch, cfg);
  PdSolution pd = pd_fixed_rf(8.4, ch, cfg);
  REQUIRE(mdc.expected_sum_rate >= pd.expected_sum_rate - 1e-6);
}

TEST_CASE("scalar instances match the brute-force oracle") {
  int idx = 0;
  for (double eps : {0.1, 0.5, 0.9}) {
    ++idx;
    UplinkChannel ch = seeded_channel(1, 1, 316.23, 40 + idx);
    FronthaulConfig cfg = config_with(eps);
    double rf = 6.0;
    MdcSolution sol = cccp_fixed_rf(rf, ch, cfg);
    CongestionState st = mdc_congestion(rf, cfg);
    detail::ChannelContext cc(ch);

    ScalarOracle oracle;
    oracle.h2 = std::norm(ch.per_ue_channel[0](0, 0));
    oracle.n0 = 1.0;
    oracle.power = ch.power;
    oracle.rf = rf;
    oracle.w1 = st.weights.layer1;
    oracle.w2 = st.weights.layer2;
    oracle.floor_delta = cc.floor_delta;
    double ref = oracle.solve();
    REQUIRE(sol.expected_sum_rate ==
            Catch::Approx(ref).epsilon(0.01).margin(1e-9));

    PdSolution pd = pd_fixed_rf(rf, ch, cfg);
    CongestionState pst = pd_congestion(rf, cfg);
    double pd_ref = pd_scalar_oracle(oracle.h2, 1.0, ch.power, rf,
                                     pst.weights.layer1, cc.floor_delta);
    REQUIRE(pd.expected_sum_rate ==
            Catch::Approx(pd_ref).epsilon(0.01).margin(1e-9));
  }
}

TEST_CASE("rate search: grid construction and dominance") {
  UplinkChannel ch = seeded_channel(2, 2, 316.23, 3);
  FronthaulConfig cfg = config_with(0.5);
  MdcSolution sol = search_rf_mdc(ch, cfg);
  REQUIRE(sol.search_trace.size() == 17);  // deadline 16 slots, plus one
  REQUIRE(sol.search_trace.front().rf == Catch::Approx(1.2).margin(1e-12));
  REQUIRE(sol.search_trace.back().rf == Catch::Approx(20.4).margin(1e-9));
  for (const auto& pt : sol.search_trace)
    REQUIRE(sol.expected_sum_rate >= pt.expected_sum_rate);
  // Ties break toward the smaller rate.
  for (const auto& pt : sol.search_trace)
    if (pt.expected_sum_rate == sol.expected_sum_rate) {
      REQUIRE(sol.rf <= pt.rf);
      break;
    }
}

TEST_CASE("rate search under saturated congestion returns ~zero") {
  UplinkChannel ch = seeded_channel(1, 1, 10.0, 5);
  // Near-certain slot loss: every grid point is dominated by ~zero weights.
  FronthaulConfig cfg = config_with(1.0 - 1e-9);
  MdcSolution sol = search_rf_mdc(ch, cfg);
  REQUIRE(sol.expected_sum_rate <= 1e-6);
  PdSolution pd = optimize_pd(ch, cfg);
  REQUIRE(pd.expected_sum_rate <= 1e-6);

  // Heavy (but not total) congestion still yields a small positive rate.
  FronthaulConfig heavy = config_with(0.9999);
  MdcSolution sol2 = search_rf_mdc(ch, heavy);
  REQUIRE(sol2.expected_sum_rate >= 0.0);
  REQUIRE(sol2.expected_sum_rate <= 1e-2);
}

TEST_CASE("duplicate-packet baseline: probabilities and limits") {
  FronthaulConfig cfg = config_with(0.5, 15e6);
  CongestionState st = pd_congestion(1.2, cfg);
  // Per-route delivery 0.75: Pr[any copy] = 1 - 0.0625.
  REQUIRE(st.weights.layer1 == Catch::Approx(0.9375).margin(1e-12));

  // With delivery probability 0.5 per route the any-copy probability is 0.75.
  auto pmf = description_pmf_2path(0.5, 0.5);
  REQUIRE(1.0 - pmf[0] == Catch::Approx(0.75).margin(1e-12));

  // Reliable fronthaul, generous rate: expected rate approaches the
  // unquantized sum rate.
  UplinkChannel ch = seeded_channel(1, 1, 100.0, 9);
  FronthaulConfig perfect = config_with(0.0);
  PdSolution sol = optimize_pd(ch, perfect);
  double unquantized = pd_sum_rate(
      ch, HermitianMatrix::identity(1, detail::ChannelContext(ch).floor_delta));
  REQUIRE(sol.expected_sum_rate >= 0.98 * unquantized);
}
