#include <cstdio>
#include "mdcran/optimizer.hpp"
using namespace mdcran;
int main() {
  ChannelGeometry geo; ChannelSizes sizes; sizes.num_ues = 1; sizes.n_rx = 1;
  UplinkChannel ch = sample_channel(geo, sizes, 1.0, 316.23, 41);
  FronthaulConfig cfg; cfg.capacity_bps = 100e6; cfg.route_failure_prob = {0.1, 0.1};
  double rf = 6.0;
  CongestionState st = mdc_congestion(rf, cfg);
  double h2 = std::norm(ch.per_ue_channel[0](0,0));
  double P = ch.power, n0 = 1.0, s = P*h2 + n0;
  detail::ChannelContext cc(ch);
  std::printf("h2=%.6g P=%.4g s=%.6g w=(%.6g, %.6g) delta=%.3g\n",
              h2, P, s, st.weights.layer1, st.weights.layer2, cc.floor_delta);

  auto g1 = [&](double side){ return std::log2(s+side)-std::log2(side); };
  auto gsum = [&](double side, double c){ return std::log2(1.0+s/c+2.0*s/side)
      + 2.0*std::log2(s+side) - std::log2(side*(side+2.0*s)); };
  auto obj = [&](double p1, double side, double c){
    double f1 = std::log2(P*h2+n0+side) - std::log2((P-p1)*h2+n0+side);
    double f2 = std::log2((P-p1)*h2+n0+c) - std::log2(n0+c);
    return st.weights.layer1*f1 + st.weights.layer2*f2; };

  // coarse exhaustive scan
  double best=-1, bp=0, bs=0, bc=0;
  for (int ip = 0; ip <= 200; ++ip) {
    double p1 = P * ip / 200.0;
    for (int is = 0; is < 200; ++is) {
      double side = cc.floor_delta * std::pow(1e4*s/cc.floor_delta, is/199.0);
      if (g1(side) > rf) continue;
      for (int ic = 0; ic < 200; ++ic) {
        double c = cc.floor_delta * std::pow(1e4*s/cc.floor_delta, ic/199.0);
        if (gsum(side, c) > 2*rf) continue;
        double v = obj(p1, side, c);
        if (v > best) { best=v; bp=p1; bs=side; bc=c; }
      }
    }
  }
  std::printf("oracle: f=%.8g at p1=%.6g (p1/P=%.4g) side=%.6g central=%.6g\n",
              best, bp, bp/P, bs, bc);
  std::printf("  g1=%.6g (rf=%g)  gsum=%.6g (2rf=%g)\n", g1(bs), rf, gsum(bs,bc), 2*rf);

  MdcSolution sol = cccp_fixed_rf(rf, ch, cfg);
  double sp1 = sol.split.layer1[0];
  double sside = sol.quantizer.side_cov.matrix()(0,0).real();
  double scen = sol.quantizer.central_cov.matrix()(0,0).real();
  std::printf("cccp:  f=%.8g at p1=%.6g (p1/P=%.4g) side=%.6g central=%.6g iters=%d conv=%d kkt=%.3g\n",
              sol.expected_sum_rate, sp1, sp1/P, sside, scen,
              sol.iterations, sol.converged, sol.kkt_residual);
  std::printf("  g1=%.6g gsum=%.6g diag:", g1(sside), gsum(sside, scen));
  for (auto& d : sol.diagnostics) std::printf(" [%s]", d.c_str());
  std::printf("\n");

  // objective along p1 with (side, central) optimized by scan for each p1
  for (double frac : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0}) {
    double p1 = frac * P, bestv = -1, bss=0, bcc=0;
    for (int is = 0; is < 300; ++is) {
      double side = cc.floor_delta * std::pow(1e4*s/cc.floor_delta, is/299.0);
      if (g1(side) > rf) continue;
      for (int ic = 0; ic < 300; ++ic) {
        double c = cc.floor_delta * std::pow(1e4*s/cc.floor_delta, ic/299.0);
        if (gsum(side, c) > 2*rf) continue;
        double v = obj(p1, side, c);
        if (v > bestv) { bestv = v; bss=side; bcc=c; }
      }
    }
    std::printf("  p1/P=%.2f: best f=%.8g side=%.4g central=%.4g\n", frac, bestv, bss, bcc);
  }
  return 0;
}
