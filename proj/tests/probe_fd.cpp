// Temporary diagnostic: finite-difference check of the barrier evaluator.
#include <cstdio>

#include "mdcran/optimizer.hpp"

using namespace mdcran;
using namespace mdcran::detail;

int main() {
  ChannelGeometry geo;
  ChannelSizes sizes;
  sizes.num_ues = 2;
  sizes.n_rx = 2;
  UplinkChannel ch = sample_channel(geo, sizes, 1.0, 316.23, 7);
  ChannelContext cc(ch);

  FronthaulConfig cfg;
  cfg.capacity_bps = 100e6;
  cfg.route_failure_prob = {0.4, 0.4};
  CongestionState st = mdc_congestion(4.8, cfg);

  LinearizationPoint at = default_start(cc, 4.8);
  BarrierProblem bp = build_mdc_subproblem(cc, st.weights, 4.8, at.split,
                                           at.quantizer.side_cov.matrix(),
                                           at.quantizer.central_cov.matrix());
  MdcLayout lay{cc.num_ues, cc.n};
  Eigen::VectorXd x0 = pack_mdc_point(lay, at.split,
                                      at.quantizer.side_cov.matrix(),
                                      at.quantizer.central_cov.matrix());
  auto xi = make_strict_interior(bp, x0, 1e-9 * (1 + 4.8));
  if (!xi) {
    std::printf("no interior!\n");
    return 1;
  }
  Eigen::VectorXd x = *xi;
  const double mu = 1e-3;

  BarrierEval e = eval_barrier(bp, x, mu, 2);
  std::printf("feasible=%d value=%.12g gradnorm=%.6g\n", e.feasible, e.value,
              e.grad.norm());

  // Surrogate value vs mdc_rates surrogate_objective (barrier-free parts):
  // compare objective part only by evaluating with mu=0.
  BarrierEval e0 = eval_barrier(bp, x, 0.0, 0);
  MdcQuantizer q(HermitianMatrix(unpack_hermitian(x.data() + lay.side_offset(), cc.n)),
                 HermitianMatrix(unpack_hermitian(x.data() + lay.central_offset(), cc.n)));
  PowerSplit sp;
  for (int k = 0; k < cc.num_ues; ++k) {
    sp.layer1.push_back(x[k]);
    sp.layer2.push_back(cc.power - x[k]);
  }
  double surr = surrogate_objective(sp, q, at, st.weights, ch);
  std::printf("barrier obj(mu=0)=%.12g   surrogate_objective=%.12g  diff=%.3g\n",
              e0.value, surr, e0.value - surr);

  // Finite-difference gradient and Hessian columns.
  double hstep = 1e-5;
  double max_gerr = 0.0, max_herr = 0.0;
  for (int i = 0; i < bp.dim; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += hstep;
    xm[i] -= hstep;
    BarrierEval ep = eval_barrier(bp, xp, mu, 1);
    BarrierEval em = eval_barrier(bp, xm, mu, 1);
    if (!ep.feasible || !em.feasible) {
      std::printf("coord %d: infeasible under fd step\n", i);
      continue;
    }
    double fd = (ep.value - em.value) / (2 * hstep);
    double gerr = std::abs(fd - e.grad[i]) / std::max(1.0, std::abs(e.grad[i]));
    max_gerr = std::max(max_gerr, gerr);
    if (gerr > 1e-4)
      std::printf("grad mismatch @%d: analytic=%.8g fd=%.8g\n", i, e.grad[i], fd);
    Eigen::VectorXd hcol_fd = (ep.grad - em.grad) / (2 * hstep);
    for (int j = 0; j < bp.dim; ++j) {
      double herr = std::abs(hcol_fd[j] - e.hess(j, i)) /
                    std::max(1.0, std::abs(e.hess(j, i)));
      if (herr > max_herr) max_herr = herr;
      if (herr > 1e-3)
        std::printf("hess mismatch @(%d,%d): analytic=%.8g fd=%.8g\n", j, i,
                    e.hess(j, i), hcol_fd[j]);
    }
  }
  std::printf("max grad rel err=%.3g  max hess rel err=%.3g\n", max_gerr,
              max_herr);

  // Try a full barrier maximize and report.
  InnerAccuracy acc{1.0, 1e-8, 1e-6};
  BarrierResult br = maximize_barrier(bp, x, acc, 500);
  std::printf("barrier solve: iters=%d kkt=%.3g converged=%d\n",
              br.newton_iterations, br.kkt_residual, br.converged);

  // CCCP trace
  MdcSolution sol = cccp_fixed_rf(4.8, ch, cfg);
  std::printf("cccp: iters=%d converged=%d expected=%.9g kkt=%.3g trace:",
              sol.iterations, sol.converged, sol.expected_sum_rate,
              sol.kkt_residual);
  for (std::size_t i = 0; i < sol.objective_trace.size() && i < 12; ++i)
    std::printf(" %.9g", sol.objective_trace[i]);
  std::printf("\n");
  return 0;
}
