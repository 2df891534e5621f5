// Prototype outer-acceleration variants against the plain loop.
#include <cstdio>
#include "mdcran/optimizer.hpp"
using namespace mdcran;
using namespace mdcran::detail;

struct Ctx {
  UplinkChannel ch; ChannelContext cc; CongestionState st; double rf;
  MdcLayout lay;
  Ctx(UplinkChannel c, FronthaulConfig cfg, double r)
      : ch(c), cc(c), st(mdc_congestion(r, cfg)), rf(r), lay{cc.num_ues, cc.n} {}
  double exact(const Eigen::VectorXd& x) const {
    PowerSplit sp; sp.layer1.resize(cc.num_ues); sp.layer2.resize(cc.num_ues);
    for (int k = 0; k < cc.num_ues; ++k) { sp.layer1[k] = x[k]; sp.layer2[k] = cc.power - x[k]; }
    MdcQuantizer q(HermitianMatrix(unpack_hermitian(x.data()+lay.side_offset(), cc.n)),
                   HermitianMatrix(unpack_hermitian(x.data()+lay.central_offset(), cc.n)));
    return st.weights.layer1 * layer1_sum_rate(ch, sp, q.side_cov) +
           st.weights.layer2 * layer2_sum_rate(ch, sp, q.central_cov);
  }
  bool valid(const Eigen::VectorXd& x) const { return valid_mdc_point(cc, rf, x, lay); }
  LinearizationPoint to_point(const Eigen::VectorXd& x) const {
    PowerSplit sp; sp.layer1.resize(cc.num_ues); sp.layer2.resize(cc.num_ues);
    for (int k = 0; k < cc.num_ues; ++k) { sp.layer1[k] = x[k]; sp.layer2[k] = cc.power - x[k]; }
    return {sp, MdcQuantizer(HermitianMatrix(unpack_hermitian(x.data()+lay.side_offset(), cc.n)),
                             HermitianMatrix(unpack_hermitian(x.data()+lay.central_offset(), cc.n)))};
  }
};

// 1-D maximize exact objective along xp + g*dir over feasible g in [1, inf).
static double line_max(const Ctx& c, const Eigen::VectorXd& xp,
                       const Eigen::VectorXd& dir, double f1, int* evals) {
  double best_g = 1.0, best_f = f1;
  double g = 2.0;
  double last_f = f1;
  // expand
  while (g <= 1048576.0) {
    Eigen::VectorXd xt = xp + g * dir;
    if (!c.valid(xt)) break;
    double f = c.exact(xt); ++*evals;
    if (f <= last_f) break;
    best_g = g; best_f = f; last_f = f;
    g *= 2.0;
  }
  // golden-ish refine between best_g/2 and min(g, cap)
  double lo = best_g / 2.0, hi = g;
  for (int it = 0; it < 12; ++it) {
    double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
    auto val = [&](double gg) {
      Eigen::VectorXd xt = xp + gg * dir;
      if (gg < 1.0 || !c.valid(xt)) return -1e300;
      ++*evals; return c.exact(xt);
    };
    double f1v = val(m1), f2v = val(m2);
    if (f1v >= f2v) hi = m2; else lo = m1;
    double fm = std::max(f1v, f2v);
    if (fm > best_f) { best_f = fm; best_g = f1v >= f2v ? m1 : m2; }
  }
  return best_g;
}

int main(int argc, char** argv) {
  int variant = argc > 1 ? atoi(argv[1]) : 2;
  int iters = argc > 2 ? atoi(argv[2]) : 200;
  ChannelGeometry geo; ChannelSizes sizes; sizes.num_ues = 2; sizes.n_rx = 2;
  UplinkChannel ch = sample_channel(geo, sizes, 1.0, 316.23, 7);
  FronthaulConfig cfg; cfg.capacity_bps = 100e6; cfg.route_failure_prob = {0.4, 0.4};
  Ctx c(ch, cfg, 4.8);

  LinearizationPoint at = default_start(c.cc, 4.8);
  Eigen::VectorXd x = pack_mdc_point(c.lay, at.split, at.quantizer.side_cov.matrix(),
                                     at.quantizer.central_cov.matrix());
  double f = c.exact(x);
  InnerAccuracy accl{1e-2, 1e-5, 1e-3};
  int evals = 0;
  Eigen::VectorXd x_hist = x;
  std::printf("variant %d\n", variant);
  for (int it = 1; it <= iters; ++it) {
    InnerProblem prob{4.8, c.st.weights, ch, c.to_point(x)};
    InnerSolution inner = solve_inner_impl(c.cc, prob, accl, 500);
    Eigen::VectorXd xn = pack_mdc_point(c.lay, inner.split,
                                        inner.quantizer.side_cov.matrix(),
                                        inner.quantizer.central_cov.matrix());
    Eigen::VectorXd dir = xn - x;
    double fn = c.exact(xn);
    if (variant >= 1 && fn > f) {
      double g = line_max(c, x, dir, fn, &evals);
      Eigen::VectorXd xt = x + g * dir;
      if (c.valid(xt)) { double ft = c.exact(xt); if (ft > fn) { xn = xt; fn = ft; } }
    }
    if (fn >= f) { x_hist = x; x = xn; f = fn; }
    if (variant >= 2 && it % 4 == 0) {
      Eigen::VectorXd wdir = x - x_hist;
      if (wdir.norm() > 0) {
        double g = line_max(c, x, wdir, f, &evals);
        Eigen::VectorXd xt = x + g * wdir;
        if (c.valid(xt)) { double ft = c.exact(xt); if (ft > f) { x = xt; f = ft; } }
      }
    }
    if (it % 10 == 0 || it <= 4)
      std::printf("  it %3d f=%.10g\n", it, f);
  }
  std::printf("final f=%.10g evals=%d\n", f, evals);
  return 0;
}
