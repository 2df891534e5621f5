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

/// \file optimizer.hpp
/// \brief Expected-sum-rate maximization over power splits, quantization
///        covariances and the per-description compression rate.
///
/// Outer structure: a 1-D discrete search over the compression output rate,
/// whose grid step is one fronthaul packet per frame. For each fixed rate the
/// remaining problem is a difference-of-convex program, solved by repeated
/// linearization: every concave log-det that appears on the wrong side is
/// replaced by its tangent plane at the current iterate, the resulting
/// concave subproblem is solved, and the iterate moves there. Each convex
/// subproblem is handled by a log-barrier interior-point method with exact
/// Newton steps over the real parameterization of (powers, Hermitian
/// covariances).
///
/// Monotonicity guarantee: a subproblem solution is accepted only when it
/// improves the surrogate objective over the current iterate; minorization
/// plus tangency then force the exact objective sequence to be nondecreasing.

#ifndef MDCRAN_OPTIMIZER_HPP
#define MDCRAN_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdcran/channel.hpp"
#include "mdcran/congestion.hpp"
#include "mdcran/hermitian.hpp"
#include "mdcran/mdc_rates.hpp"
#include "mdcran/rng.hpp"
#include "mdcran/simulator.hpp"

namespace mdcran {

/// Tunables of the solver stack. Tolerances are absolute in bits/symbol.
struct SolverConfig {
  double feasibility_tol = 1e-6;  ///< allowed violation of rate constraints
  double kkt_tol = 1e-6;          ///< gradient norm of the barrier objective
  double rel_tol = 1e-6;          ///< outer-loop relative objective change
  int max_outer = 100;            ///< linearization rounds per fixed rate
  int max_inner = 500;            ///< Newton iterations per subproblem
  double mu_final = 1e-8;         ///< final barrier weight
  int n_starts = 3;               ///< deterministic multistart count
  std::uint64_t start_seed = 0x5eedULL;  ///< jitter stream for extra starts
};

/// Congestion-side quantities attached to one compression rate choice.
struct CongestionState {
  int n_packets = 0;
  int deadline = 0;
  std::array<double, 3> pmf = {1.0, 0.0, 0.0};
  RateWeights weights;  ///< layer1: any description, layer2: both
};

/// Delivery statistics of the two-description scheme at rate rf.
inline CongestionState mdc_congestion(double rf, const FronthaulConfig& cfg) {
  cfg.validate();
  if (cfg.route_failure_prob.size() != 2)
    throw std::invalid_argument("mdc_congestion: exactly two routes expected");
  CongestionState st;
  st.n_packets = packets_per_description(rf, cfg);
  st.deadline = deadline_slots(cfg);
  double p1 = delivery_probability(cfg.route_failure_prob[0], st.n_packets,
                                   st.deadline);
  double p2 = delivery_probability(cfg.route_failure_prob[1], st.n_packets,
                                   st.deadline);
  st.pmf = description_pmf_2path(p1, p2);
  st.weights.layer1 = st.pmf[1] + st.pmf[2];
  st.weights.layer2 = st.pmf[2];
  return st;
}

/// Delivery statistics of the duplicate-packet scheme at rate rf. The PMF is
/// over the number of copies that arrive; any copy is enough to decode.
inline CongestionState pd_congestion(double rf, const FronthaulConfig& cfg) {
  CongestionState st = mdc_congestion(rf, cfg);
  st.weights.layer1 = st.pmf[1] + st.pmf[2];  // Pr[at least one copy]
  st.weights.layer2 = 0.0;
  return st;
}

/// Weighted two-layer expected sum-rate for explicit decision variables.
inline double expected_sum_rate_mdc(double rf, const PowerSplit& split,
                                    const MdcQuantizer& q,
                                    const UplinkChannel& ch,
                                    const FronthaulConfig& cfg) {
  CongestionState st = mdc_congestion(rf, cfg);
  return st.weights.layer1 * layer1_sum_rate(ch, split, q.side_cov) +
         st.weights.layer2 * layer2_sum_rate(ch, split, q.central_cov);
}

/// One evaluated grid point of the rate search.
struct RfSearchPoint {
  double rf = 0.0;
  double expected_sum_rate = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Solution of the two-description design at (or searched over) rate rf.
struct MdcSolution {
  double rf = 0.0;
  PowerSplit split;
  MdcQuantizer quantizer{HermitianMatrix::identity(1),
                         HermitianMatrix::identity(1)};
  double rate_layer1 = 0.0;
  double rate_layer2 = 0.0;
  double expected_sum_rate = 0.0;
  std::array<double, 3> pmf = {1.0, 0.0, 0.0};
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  std::vector<double> objective_trace;     ///< exact objective per outer round
  std::vector<std::string> diagnostics;
  std::vector<RfSearchPoint> search_trace;  ///< filled by the rate search
};

/// Solution of the duplicate-packet baseline.
struct PdSolution {
  double rf = 0.0;
  HermitianMatrix omega = HermitianMatrix::identity(1);
  double sum_rate = 0.0;
  double expected_sum_rate = 0.0;
  double pr_delivery = 0.0;
  std::array<double, 3> pmf = {1.0, 0.0, 0.0};
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  std::vector<double> objective_trace;
  std::vector<std::string> diagnostics;
  std::vector<RfSearchPoint> search_trace;
};

namespace detail {

constexpr double kLn2 = std::numbers::ln2;

// ---- real parameterization of Hermitian matrices -------------------------
// Order: n diagonal entries, then for each i<j (row-major) Re then Im.

inline int hermitian_params(int n) { return n * n; }

inline void pack_hermitian(const MatrixC& h, double* out) {
  const int n = static_cast<int>(h.rows());
  int m = 0;
  for (int i = 0; i < n; ++i) out[m++] = h(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out[m++] = h(i, j).real();
      out[m++] = h(i, j).imag();
    }
}

inline MatrixC unpack_hermitian(const double* x, int n) {
  MatrixC h(n, n);
  int m = 0;
  for (int i = 0; i < n; ++i) h(i, i) = Complex(x[i], 0.0);
  m = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      h(i, j) = Complex(x[m], x[m + 1]);
      h(j, i) = Complex(x[m], -x[m + 1]);
      m += 2;
    }
  return h;
}

/// Basis element m of the n-dim Hermitian space under the ordering above,
/// normalized so that for Hermitian G, real(tr(G * E_m)) equals the partial
/// derivative of tr-linear functionals with respect to parameter m.
inline MatrixC hermitian_basis(int n, int m) {
  MatrixC e = MatrixC::Zero(n, n);
  if (m < n) {
    e(m, m) = Complex(1.0, 0.0);
    return e;
  }
  int k = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (m == k) {
        e(i, j) = Complex(1.0, 0.0);
        e(j, i) = Complex(1.0, 0.0);
        return e;
      }
      if (m == k + 1) {
        e(i, j) = Complex(0.0, 1.0);
        e(j, i) = Complex(0.0, -1.0);
        return e;
      }
      k += 2;
    }
  throw std::logic_error("hermitian_basis: index out of range");
}

/// Accumulates w * real(tr(G * E_m)) over all basis elements of an n-dim
/// Hermitian block into out[offset + m], for Hermitian G.
inline void accumulate_hermitian_inner(const MatrixC& g, double w, int offset,
                                       Eigen::VectorXd& out) {
  const int n = static_cast<int>(g.rows());
  int m = offset;
  for (int i = 0; i < n; ++i) out[m++] += w * g(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out[m++] += w * 2.0 * g(i, j).real();
      out[m++] += w * 2.0 * g(i, j).imag();
    }
}

// ---- affine log-det atoms -------------------------------------------------

/// weight * log2 det(base + sum_i x[idx_i] * embed_i), with Hermitian
/// embeddings into the atom's (possibly block-stacked) space.
struct LogDetAtom {
  double weight = 1.0;
  MatrixC base;
  std::vector<int> idx;
  std::vector<MatrixC> embed;

  // workspace
  MatrixC assembled;
  MatrixC inv;
  double log2det = 0.0;

  void add_embed(int param, MatrixC e) {
    idx.push_back(param);
    embed.push_back(std::move(e));
  }

  bool assemble_value(const Eigen::VectorXd& x, bool need_inverse = true) {
    assembled = base;
    for (std::size_t i = 0; i < idx.size(); ++i)
      assembled += x[idx[i]] * embed[i];
    Eigen::LLT<MatrixC> llt(assembled);
    if (llt.info() != Eigen::Success) return false;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < assembled.rows(); ++i) {
      double d = std::real(llt.matrixLLT()(i, i));
      if (!(d > 0.0) || !std::isfinite(d)) return false;
      acc += std::log2(d);
    }
    log2det = 2.0 * acc;
    if (need_inverse)
      inv = llt.solve(MatrixC::Identity(assembled.rows(), assembled.cols()));
    return true;
  }

  void derivatives(Eigen::VectorXd& grad, Eigen::MatrixXd* hess,
                   double factor) const {
    // d log2det / dx_i = tr(inv * E_i) / ln2
    const double w = factor * weight / kLn2;
    std::vector<MatrixC> ks;
    if (hess) ks.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      MatrixC k = inv * embed[i];
      grad[idx[i]] += w * k.trace().real();
      if (hess) ks.push_back(std::move(k));
    }
    if (hess) {
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i; j < idx.size(); ++j) {
          double v = -w * (ks[i] * ks[j]).trace().real();
          (*hess)(idx[i], idx[j]) += v;
          if (idx[i] != idx[j]) (*hess)(idx[j], idx[i]) += v;
        }
    }
  }
};

struct LinearFunc {
  double constant = 0.0;
  Eigen::VectorXd coeff;
  double value(const Eigen::VectorXd& x) const {
    return constant + coeff.dot(x);
  }
};

struct ConvexConstraint {
  LinearFunc lin;                  // bits
  std::vector<LogDetAtom> atoms;   // convex parts carry negative weights
};

/// Barrier-augmented concave maximization problem over real parameters.
struct BarrierProblem {
  int dim = 0;
  LinearFunc obj_lin;
  std::vector<LogDetAtom> obj_atoms;
  std::vector<ConvexConstraint> constraints;
  std::vector<LogDetAtom> floor_atoms;  // PSD floors, weight +1
  std::vector<int> box_idx;
  std::vector<double> box_lo, box_hi;
};

struct BarrierEval {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  std::vector<double> con_slack;            // -c_i, filled at level >= 1
  std::vector<Eigen::VectorXd> con_grads;   // grad of c_i, filled at level >= 1
};

/// level: 0 value only, 1 +gradient, 2 +Hessian.
inline BarrierEval eval_barrier(BarrierProblem& p, const Eigen::VectorXd& x,
                                double mu, int level) {
  BarrierEval out;
  if (level >= 1) out.grad = Eigen::VectorXd::Zero(p.dim);
  if (level >= 2) out.hess = Eigen::MatrixXd::Zero(p.dim, p.dim);

  double value = p.obj_lin.value(x);
  if (level >= 1) out.grad += p.obj_lin.coeff;

  for (auto& atom : p.obj_atoms) {
    if (!atom.assemble_value(x, level >= 1)) return out;
    value += atom.weight * atom.log2det;
    if (level >= 1)
      atom.derivatives(out.grad, level >= 2 ? &out.hess : nullptr, 1.0);
  }

  for (auto& con : p.constraints) {
    double c = con.lin.value(x);
    Eigen::VectorXd cgrad;
    Eigen::MatrixXd chess;
    if (level >= 1) cgrad = con.lin.coeff;
    if (level >= 2) chess = Eigen::MatrixXd::Zero(p.dim, p.dim);
    for (auto& atom : con.atoms) {
      if (!atom.assemble_value(x, level >= 1)) return out;
      c += atom.weight * atom.log2det;
      if (level >= 1) atom.derivatives(cgrad, level >= 2 ? &chess : nullptr, 1.0);
    }
    if (!(c < 0.0)) return out;
    const double s = -c;
    value += mu * std::log2(s);
    if (level >= 1) {
      out.grad -= (mu / (kLn2 * s)) * cgrad;
      out.con_slack.push_back(s);
      out.con_grads.push_back(cgrad);
    }
    if (level >= 2) {
      out.hess -= (mu / (kLn2 * s)) * chess;
      out.hess -= (mu / (kLn2 * s * s)) * (cgrad * cgrad.transpose());
    }
  }

  for (auto& atom : p.floor_atoms) {
    if (!atom.assemble_value(x, level >= 1)) return out;
    value += mu * atom.weight * atom.log2det;
    if (level >= 1)
      atom.derivatives(out.grad, level >= 2 ? &out.hess : nullptr, mu);
  }

  for (std::size_t b = 0; b < p.box_idx.size(); ++b) {
    const int i = p.box_idx[b];
    const double lo = x[i] - p.box_lo[b];
    const double hi = p.box_hi[b] - x[i];
    if (!(lo > 0.0) || !(hi > 0.0)) return out;
    value += mu * (std::log2(lo) + std::log2(hi));
    if (level >= 1) out.grad[i] += (mu / kLn2) * (1.0 / lo - 1.0 / hi);
    if (level >= 2)
      out.hess(i, i) -= (mu / kLn2) * (1.0 / (lo * lo) + 1.0 / (hi * hi));
  }

  out.feasible = true;
  out.value = value;
  return out;
}

struct BarrierResult {
  Eigen::VectorXd x;
  double kkt_residual = std::numeric_limits<double>::infinity();
  int newton_iterations = 0;
  bool converged = false;
};

struct InnerAccuracy {
  double mu_initial = 1.0;
  double mu_final = 1e-9;
  double tol = 1e-6;
};

/// Damped-Newton log-barrier path following. x0 must be strictly feasible.
inline BarrierResult maximize_barrier(BarrierProblem& p,
                                      const Eigen::VectorXd& x0,
                                      const InnerAccuracy& acc, int budget) {
  BarrierResult res;
  res.x = x0;
  Eigen::VectorXd x = x0;

  std::vector<double> stages;
  for (double mu = acc.mu_initial; mu > acc.mu_final; mu *= 0.03)
    stages.push_back(mu);
  stages.push_back(acc.mu_final);

  int used = 0;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const double mu = stages[s];
    const bool last = s + 1 == stages.size();
    const double stage_tol = last ? acc.tol : std::max(acc.tol, 0.3 * mu);
    double stale_gnorm = std::numeric_limits<double>::infinity();
    int stale_count = 0;
    while (used < budget) {
      BarrierEval e = eval_barrier(p, x, mu, 2);
      if (!e.feasible)
        throw std::runtime_error("maximize_barrier: iterate left the feasible region");

      // Newton direction on the Jacobi-equilibrated system (coordinates mix
      // watts with covariance entries, so raw LDLT loses digits), with a
      // Levenberg fallback: the convex subproblems solve at shift zero, the
      // exact-polish problems may need damping.
      Eigen::VectorXd d;
      bool have_newton = false;
      Eigen::MatrixXd neg_hess = -e.hess;
      const double max_diag =
          std::max(1e-300, neg_hess.diagonal().cwiseAbs().maxCoeff());
      Eigen::VectorXd equil(p.dim);
      for (int i = 0; i < p.dim; ++i) {
        double h = std::abs(neg_hess(i, i));
        equil[i] = 1.0 / std::sqrt(std::max(h, 1e-12 * max_diag));
      }
      Eigen::MatrixXd scaled =
          equil.asDiagonal() * neg_hess * equil.asDiagonal();
      Eigen::VectorXd gscaled = equil.asDiagonal() * e.grad;
      for (double shift = 0.0; shift <= 1e6;
           shift = shift == 0.0 ? 1e-12 : shift * 100.0) {
        Eigen::MatrixXd m = scaled;
        if (shift > 0.0) m += shift * Eigen::MatrixXd::Identity(p.dim, p.dim);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
        if (ldlt.info() != Eigen::Success) continue;
        Eigen::VectorXd cand = equil.asDiagonal() * ldlt.solve(gscaled);
        if (cand.allFinite() && e.grad.dot(cand) > 0.0) {
          d = cand;
          have_newton = shift == 0.0;
          break;
        }
      }
      if (d.size() == 0) d = e.grad;

      // Newton decrement: the scale-invariant first-order residual of the
      // barrier objective. Falls back to the gradient norm when the Hessian
      // solve needed damping.
      const double resid = have_newton
                               ? std::sqrt(std::max(0.0, e.grad.dot(d)))
                               : e.grad.norm();
      if (last) res.kkt_residual = resid;
      if (resid <= stage_tol) break;
      // Stage-level stagnation: stop once the residual refuses to move.
      if (resid >= 0.98 * stale_gnorm) {
        if (++stale_count >= 8) break;
      } else {
        stale_gnorm = resid;
        stale_count = 0;
      }
      ++used;

      // Fraction-to-boundary clamp: constraint slacks shrink at least
      // linearly (the c_i are convex), and boxes are exact, so this keeps
      // full Newton steps from being burned on feasibility rejections.
      double t = 1.0;
      for (std::size_t ci = 0; ci < e.con_slack.size(); ++ci) {
        double along = e.con_grads[ci].dot(d);
        if (along > 0.0) t = std::min(t, 0.95 * e.con_slack[ci] / along);
      }
      for (std::size_t b = 0; b < p.box_idx.size(); ++b) {
        const int i = p.box_idx[b];
        if (d[i] > 0.0) t = std::min(t, 0.995 * (p.box_hi[b] - x[i]) / d[i]);
        if (d[i] < 0.0) t = std::min(t, 0.995 * (p.box_lo[b] - x[i]) / d[i]);
      }

      const double slope = e.grad.dot(d);
      bool stepped = false;
      while (t >= 1e-18) {
        Eigen::VectorXd xn = x + t * d;
        BarrierEval en = eval_barrier(p, xn, mu, 0);
        if (en.feasible && en.value >= e.value + 1e-4 * t * slope) {
          x = xn;
          stepped = true;
          break;
        }
        t *= 0.5;
      }
      if (!stepped || t < 1e-13) break;  // numerical precision floor
    }
    if (used >= budget) break;
  }

  // Residual bookkeeping for callers that stopped early.
  if (!std::isfinite(res.kkt_residual)) {
    BarrierEval e = eval_barrier(p, x, acc.mu_final, 1);
    res.kkt_residual = e.feasible ? e.grad.norm()
                                  : std::numeric_limits<double>::infinity();
  }
  res.x = x;
  res.newton_iterations = used;
  res.converged = res.kkt_residual <= acc.tol;
  return res;
}

// ---- subproblem construction ----------------------------------------------

/// Shared precomputed channel quantities.
struct ChannelContext {
  int n = 0;       // receive antennas
  int num_ues = 0;
  double power = 0.0;
  MatrixC noise;            // noise covariance
  std::vector<MatrixC> gram;  // per-UE channel gram
  MatrixC full;             // received covariance at full power
  double floor_delta = 0.0;

  explicit ChannelContext(const UplinkChannel& ch) {
    ch.validate();
    n = ch.n_rx;
    num_ues = ch.num_ues();
    power = ch.power;
    noise = ch.noise_cov.matrix();
    gram.reserve(num_ues);
    for (int k = 0; k < num_ues; ++k) {
      MatrixC g = ch.ue_gram(k);
      gram.push_back(0.5 * (g + g.adjoint()).eval());
    }
    full = noise;
    for (const auto& g : gram) full += power * g;
    full = 0.5 * (full + full.adjoint()).eval();
    floor_delta = 1e-8 * full.trace().real() / n;
  }
};

inline MatrixC tile(const MatrixC& sigma, int copies) {
  const int n = static_cast<int>(sigma.rows());
  MatrixC out(n * copies, n * copies);
  for (int i = 0; i < copies; ++i)
    for (int j = 0; j < copies; ++j) out.block(i * n, j * n, n, n) = sigma;
  return out;
}

inline MatrixC embed_block(const MatrixC& e, int blocks, std::initializer_list<int> at) {
  const int n = static_cast<int>(e.rows());
  MatrixC out = MatrixC::Zero(n * blocks, n * blocks);
  for (int b : at) out.block(b * n, b * n, n, n) = e;
  return out;
}

/// Parameter layout of the two-description subproblem:
/// [p_1..p_NU | side covariance params | central covariance params].
struct MdcLayout {
  int num_ues = 0;
  int n = 0;
  int dim() const { return num_ues + 2 * hermitian_params(n); }
  int side_offset() const { return num_ues; }
  int central_offset() const { return num_ues + hermitian_params(n); }
};

inline Eigen::VectorXd pack_mdc_point(const MdcLayout& lay,
                                      const PowerSplit& split,
                                      const MatrixC& side,
                                      const MatrixC& central) {
  Eigen::VectorXd x(lay.dim());
  for (int k = 0; k < lay.num_ues; ++k) x[k] = split.layer1[k];
  pack_hermitian(side, x.data() + lay.side_offset());
  pack_hermitian(central, x.data() + lay.central_offset());
  return x;
}

/// Builds the barrier subproblem of one linearization round: concave
/// objective terms stay, linearized terms enter the linear parts, the two
/// compression-rate constraints become convex, PSD floors and power boxes
/// close the domain.
inline BarrierProblem build_mdc_subproblem(const ChannelContext& cc,
                                           const RateWeights& w, double rf,
                                           const PowerSplit& split_t,
                                           const MatrixC& side_t,
                                           const MatrixC& central_t) {
  const int n = cc.n;
  const int np = hermitian_params(n);
  MdcLayout lay{cc.num_ues, n};
  BarrierProblem p;
  p.dim = lay.dim();
  p.obj_lin.coeff = Eigen::VectorXd::Zero(p.dim);

  auto inv_of = [](const MatrixC& m) {
    Eigen::LLT<MatrixC> llt(m);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("build_mdc_subproblem: linearization matrix not PD");
    return llt.solve(MatrixC::Identity(m.rows(), m.cols())).eval();
  };
  auto log2det_of = [](const MatrixC& m) {
    auto v = try_log2_det(m);
    if (!v)
      throw std::runtime_error("build_mdc_subproblem: linearization matrix not PD");
    return *v;
  };

  // Layer-2 covariance at the linearization split.
  MatrixC d_t = cc.noise;
  for (int k = 0; k < cc.num_ues; ++k)
    d_t += (cc.power - split_t.layer1[k]) * cc.gram[k];

  // --- objective ---
  if (w.layer1 > 0.0) {
    LogDetAtom a1;  // log2det(full + side)
    a1.weight = w.layer1;
    a1.base = cc.full;
    for (int m = 0; m < np; ++m)
      a1.add_embed(lay.side_offset() + m, hermitian_basis(n, m));
    p.obj_atoms.push_back(std::move(a1));

    // - w1 * phi(D(p) + side, B1), linear in (p, side).
    MatrixC b1 = d_t + side_t;
    MatrixC b1inv = inv_of(b1);
    p.obj_lin.constant += -w.layer1 * (log2det_of(b1) +
        ((b1inv * (cc.full - b1)).trace().real()) / kLn2);
    for (int k = 0; k < cc.num_ues; ++k)
      p.obj_lin.coeff[k] +=
          w.layer1 * (b1inv * cc.gram[k]).trace().real() / kLn2;
    accumulate_hermitian_inner(b1inv, -w.layer1 / kLn2, lay.side_offset(),
                               p.obj_lin.coeff);
  }

  if (w.layer2 > 0.0) {
    LogDetAtom a2;  // log2det(D(p) + central), affine in p and central
    a2.weight = w.layer2;
    a2.base = cc.full;
    for (int k = 0; k < cc.num_ues; ++k) a2.add_embed(k, -cc.gram[k]);
    for (int m = 0; m < np; ++m)
      a2.add_embed(lay.central_offset() + m, hermitian_basis(n, m));
    p.obj_atoms.push_back(std::move(a2));

    // - w2 * phi(noise + central, B2), linear in central.
    MatrixC b2 = cc.noise + central_t;
    MatrixC b2inv = inv_of(b2);
    p.obj_lin.constant += -w.layer2 * (log2det_of(b2) +
        ((b2inv * (cc.noise - b2)).trace().real()) / kLn2);
    accumulate_hermitian_inner(b2inv, -w.layer2 / kLn2, lay.central_offset(),
                               p.obj_lin.coeff);
  }

  // --- individual-description constraint ---
  {
    ConvexConstraint c1;
    c1.lin.coeff = Eigen::VectorXd::Zero(p.dim);
    MatrixC bc1 = cc.full + side_t;
    MatrixC bc1inv = inv_of(bc1);
    c1.lin.constant = log2det_of(bc1) +
                      ((bc1inv * (cc.full - bc1)).trace().real()) / kLn2 - rf;
    accumulate_hermitian_inner(bc1inv, 1.0 / kLn2, lay.side_offset(),
                               c1.lin.coeff);
    LogDetAtom om;  // -log2det(side)
    om.weight = -1.0;
    om.base = MatrixC::Zero(n, n);
    for (int m = 0; m < np; ++m)
      om.add_embed(lay.side_offset() + m, hermitian_basis(n, m));
    c1.atoms.push_back(std::move(om));
    p.constraints.push_back(std::move(c1));
  }

  // --- sum-rate constraint ---
  {
    ConvexConstraint c2;
    c2.lin.coeff = Eigen::VectorXd::Zero(p.dim);

    MatrixC tiles3 = tile(cc.full, 3);
    MatrixC obar_t = block_diag({central_t, side_t, side_t});
    MatrixC bc3 = tiles3 + obar_t;
    MatrixC bc3inv = inv_of(bc3);
    // phi(tiles3 + joint cov, bc3): the joint covariance is entirely
    // parameter-dependent, so the constant part uses base tiles3.
    c2.lin.constant = log2det_of(cc.full) + log2det_of(bc3) +
                      ((bc3inv * (tiles3 - bc3)).trace().real()) / kLn2 -
                      2.0 * rf;
    MatrixC cblock = bc3inv.block(0, 0, n, n);
    accumulate_hermitian_inner(0.5 * (cblock + cblock.adjoint()), 1.0 / kLn2,
                               lay.central_offset(), c2.lin.coeff);
    MatrixC sblock = bc3inv.block(n, n, n, n) + bc3inv.block(2 * n, 2 * n, n, n);
    accumulate_hermitian_inner(0.5 * (sblock + sblock.adjoint()), 1.0 / kLn2,
                               lay.side_offset(), c2.lin.coeff);

    // + 2 phi(full + side, bc1)
    MatrixC bc1 = cc.full + side_t;
    MatrixC bc1inv = inv_of(bc1);
    c2.lin.constant += 2.0 * (log2det_of(bc1) +
        ((bc1inv * (cc.full - bc1)).trace().real()) / kLn2);
    accumulate_hermitian_inner(bc1inv, 2.0 / kLn2, lay.side_offset(),
                               c2.lin.coeff);

    LogDetAtom w4;  // -log2det(tiles4 + diag(0, central, side, side))
    w4.weight = -1.0;
    w4.base = tile(cc.full, 4);
    for (int m = 0; m < np; ++m) {
      MatrixC e = hermitian_basis(n, m);
      w4.add_embed(lay.central_offset() + m, embed_block(e, 4, {1}));
      w4.add_embed(lay.side_offset() + m, embed_block(e, 4, {2, 3}));
    }
    c2.atoms.push_back(std::move(w4));

    LogDetAtom v2;  // -log2det(tiles2 + diag(side, side))
    v2.weight = -1.0;
    v2.base = tile(cc.full, 2);
    for (int m = 0; m < np; ++m)
      v2.add_embed(lay.side_offset() + m,
                   embed_block(hermitian_basis(n, m), 2, {0, 1}));
    c2.atoms.push_back(std::move(v2));
    p.constraints.push_back(std::move(c2));
  }

  // --- PSD floors and power boxes ---
  for (int which = 0; which < 2; ++which) {
    LogDetAtom fl;
    fl.weight = 1.0;
    fl.base = -cc.floor_delta * MatrixC::Identity(n, n);
    int off = which == 0 ? lay.side_offset() : lay.central_offset();
    for (int m = 0; m < np; ++m) fl.add_embed(off + m, hermitian_basis(n, m));
    p.floor_atoms.push_back(std::move(fl));
  }
  for (int k = 0; k < cc.num_ues; ++k) {
    p.box_idx.push_back(k);
    p.box_lo.push_back(0.0);
    p.box_hi.push_back(cc.power);
  }
  return p;
}

/// Duplicate-packet subproblem: single covariance, single rate constraint.
inline BarrierProblem build_pd_subproblem(const ChannelContext& cc, double w,
                                          double rf, const MatrixC& omega_t) {
  const int n = cc.n;
  const int np = hermitian_params(n);
  BarrierProblem p;
  p.dim = np;
  p.obj_lin.coeff = Eigen::VectorXd::Zero(p.dim);

  auto inv_of = [](const MatrixC& m) {
    Eigen::LLT<MatrixC> llt(m);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("build_pd_subproblem: linearization matrix not PD");
    return llt.solve(MatrixC::Identity(m.rows(), m.cols())).eval();
  };
  auto log2det_of = [](const MatrixC& m) {
    auto v = try_log2_det(m);
    if (!v)
      throw std::runtime_error("build_pd_subproblem: linearization matrix not PD");
    return *v;
  };

  if (w > 0.0) {
    LogDetAtom a;  // log2det(full + omega)
    a.weight = w;
    a.base = cc.full;
    for (int m = 0; m < np; ++m) a.add_embed(m, hermitian_basis(n, m));
    p.obj_atoms.push_back(std::move(a));

    MatrixC b = cc.noise + omega_t;
    MatrixC binv = inv_of(b);
    p.obj_lin.constant +=
        -w * (log2det_of(b) + ((binv * (cc.noise - b)).trace().real()) / kLn2);
    accumulate_hermitian_inner(binv, -w / kLn2, 0, p.obj_lin.coeff);
  }

  ConvexConstraint c;
  c.lin.coeff = Eigen::VectorXd::Zero(p.dim);
  MatrixC bc = cc.full + omega_t;
  MatrixC bcinv = inv_of(bc);
  c.lin.constant =
      log2det_of(bc) + ((bcinv * (cc.full - bc)).trace().real()) / kLn2 - rf;
  accumulate_hermitian_inner(bcinv, 1.0 / kLn2, 0, c.lin.coeff);
  LogDetAtom om;
  om.weight = -1.0;
  om.base = MatrixC::Zero(n, n);
  for (int m = 0; m < np; ++m) om.add_embed(m, hermitian_basis(n, m));
  c.atoms.push_back(std::move(om));
  p.constraints.push_back(std::move(c));

  LogDetAtom fl;
  fl.weight = 1.0;
  fl.base = -cc.floor_delta * MatrixC::Identity(n, n);
  for (int m = 0; m < np; ++m) fl.add_embed(m, hermitian_basis(n, m));
  p.floor_atoms.push_back(std::move(fl));
  return p;
}

/// Nudges a warm start into the strict interior of a subproblem by clipping
/// powers into the open box and inflating covariances until the linearized
/// constraints hold with margin. Inflation shrinks both linearized rate
/// functions near the linearization point, so small factors suffice.
inline std::optional<Eigen::VectorXd> make_strict_interior(
    BarrierProblem& p, const Eigen::VectorXd& start, double margin) {
  auto strictly_feasible = [&](const Eigen::VectorXd& x) {
    BarrierEval e = eval_barrier(p, x, 1.0, 0);
    if (!e.feasible) return false;
    for (auto& con : p.constraints) {
      double c = con.lin.value(x);
      for (auto& atom : con.atoms) {
        if (!atom.assemble_value(x, false)) return false;
        c += atom.weight * atom.log2det;
      }
      if (!(c <= -margin)) return false;
    }
    return true;
  };

  Eigen::VectorXd x = start;
  for (std::size_t b = 0; b < p.box_idx.size(); ++b) {
    const int i = p.box_idx[b];
    const double width = p.box_hi[b] - p.box_lo[b];
    x[i] = std::min(std::max(x[i], p.box_lo[b] + 1e-9 * width),
                    p.box_hi[b] - 1e-9 * width);
  }
  if (strictly_feasible(x)) return x;

  const int matrix_params = p.dim - static_cast<int>(p.box_idx.size());
  for (double h = 1e-6; h <= 0.6; h *= 8.0) {
    Eigen::VectorXd xi = x;
    xi.tail(matrix_params) *= (1.0 + h);
    if (strictly_feasible(xi)) return xi;
  }
  return std::nullopt;
}

/// Barrier problem over the ORIGINAL (non-linearized) objective and
/// compression constraints. Nonconvex, but every term is a signed log-det of
/// an affine Hermitian map, so the same evaluator applies; damped Newton
/// ascent on it sees the true constraint curvature that the tangent
/// surrogates miss, which is what makes it an effective polish between
/// linearization rounds.
inline BarrierProblem build_exact_mdc_problem(const ChannelContext& cc,
                                              const RateWeights& w,
                                              double rf) {
  const int n = cc.n;
  const int np = hermitian_params(n);
  MdcLayout lay{cc.num_ues, n};
  BarrierProblem p;
  p.dim = lay.dim();
  p.obj_lin.coeff = Eigen::VectorXd::Zero(p.dim);

  auto side_basis = [&](LogDetAtom& a, int blocks,
                        std::initializer_list<int> at) {
    for (int m = 0; m < np; ++m)
      a.add_embed(lay.side_offset() + m,
                  blocks == 1 ? hermitian_basis(n, m)
                              : embed_block(hermitian_basis(n, m), blocks, at));
  };
  auto central_basis = [&](LogDetAtom& a, int blocks,
                           std::initializer_list<int> at) {
    for (int m = 0; m < np; ++m)
      a.add_embed(lay.central_offset() + m,
                  blocks == 1 ? hermitian_basis(n, m)
                              : embed_block(hermitian_basis(n, m), blocks, at));
  };
  auto layer2_embed = [&](LogDetAtom& a) {
    for (int k = 0; k < cc.num_ues; ++k) a.add_embed(k, -cc.gram[k]);
  };

  if (w.layer1 > 0.0) {
    LogDetAtom a1;  // +w1 log2det(full + side)
    a1.weight = w.layer1;
    a1.base = cc.full;
    side_basis(a1, 1, {0});
    p.obj_atoms.push_back(std::move(a1));
    LogDetAtom a1b;  // -w1 log2det(D(p) + side)
    a1b.weight = -w.layer1;
    a1b.base = cc.full;
    layer2_embed(a1b);
    side_basis(a1b, 1, {0});
    p.obj_atoms.push_back(std::move(a1b));
  }
  if (w.layer2 > 0.0) {
    LogDetAtom a2;  // +w2 log2det(D(p) + central)
    a2.weight = w.layer2;
    a2.base = cc.full;
    layer2_embed(a2);
    central_basis(a2, 1, {0});
    p.obj_atoms.push_back(std::move(a2));
    LogDetAtom a2b;  // -w2 log2det(noise + central)
    a2b.weight = -w.layer2;
    a2b.base = cc.noise;
    central_basis(a2b, 1, {0});
    p.obj_atoms.push_back(std::move(a2b));
  }

  {
    ConvexConstraint c1;  // g_individual(side) - rf <= 0 (not convex; exact)
    c1.lin.coeff = Eigen::VectorXd::Zero(p.dim);
    c1.lin.constant = -rf;
    LogDetAtom top;
    top.weight = 1.0;
    top.base = cc.full;
    side_basis(top, 1, {0});
    c1.atoms.push_back(std::move(top));
    LogDetAtom bot;
    bot.weight = -1.0;
    bot.base = MatrixC::Zero(n, n);
    side_basis(bot, 1, {0});
    c1.atoms.push_back(std::move(bot));
    p.constraints.push_back(std::move(c1));
  }
  {
    ConvexConstraint c2;  // g_sum(side, central) - 2 rf <= 0 (exact)
    c2.lin.coeff = Eigen::VectorXd::Zero(p.dim);
    auto sy_logdet = try_log2_det(cc.full);
    c2.lin.constant = (sy_logdet ? *sy_logdet : 0.0) - 2.0 * rf;
    LogDetAtom s3;
    s3.weight = 1.0;
    s3.base = tile(cc.full, 3);
    central_basis(s3, 3, {0});
    side_basis(s3, 3, {1, 2});
    c2.atoms.push_back(std::move(s3));
    LogDetAtom s4;
    s4.weight = -1.0;
    s4.base = tile(cc.full, 4);
    central_basis(s4, 4, {1});
    side_basis(s4, 4, {2, 3});
    c2.atoms.push_back(std::move(s4));
    LogDetAtom s1;
    s1.weight = 2.0;
    s1.base = cc.full;
    side_basis(s1, 1, {0});
    c2.atoms.push_back(std::move(s1));
    LogDetAtom s2;
    s2.weight = -1.0;
    s2.base = tile(cc.full, 2);
    side_basis(s2, 2, {0, 1});
    c2.atoms.push_back(std::move(s2));
    p.constraints.push_back(std::move(c2));
  }

  for (int which = 0; which < 2; ++which) {
    LogDetAtom fl;
    fl.weight = 1.0;
    fl.base = -cc.floor_delta * MatrixC::Identity(n, n);
    if (which == 0)
      side_basis(fl, 1, {0});
    else
      central_basis(fl, 1, {0});
    p.floor_atoms.push_back(std::move(fl));
  }
  for (int k = 0; k < cc.num_ues; ++k) {
    p.box_idx.push_back(k);
    p.box_lo.push_back(0.0);
    p.box_hi.push_back(cc.power);
  }
  return p;
}

/// Exact-problem polish for the duplicate-packet design (single covariance).
inline BarrierProblem build_exact_pd_problem(const ChannelContext& cc,
                                             double w, double rf) {
  const int n = cc.n;
  const int np = hermitian_params(n);
  BarrierProblem p;
  p.dim = np;
  p.obj_lin.coeff = Eigen::VectorXd::Zero(p.dim);
  auto omega_basis = [&](LogDetAtom& a) {
    for (int m = 0; m < np; ++m) a.add_embed(m, hermitian_basis(n, m));
  };
  if (w > 0.0) {
    LogDetAtom top;
    top.weight = w;
    top.base = cc.full;
    omega_basis(top);
    p.obj_atoms.push_back(std::move(top));
    LogDetAtom bot;
    bot.weight = -w;
    bot.base = cc.noise;
    omega_basis(bot);
    p.obj_atoms.push_back(std::move(bot));
  }
  {
    ConvexConstraint c;
    c.lin.coeff = Eigen::VectorXd::Zero(p.dim);
    c.lin.constant = -rf;
    LogDetAtom top;
    top.weight = 1.0;
    top.base = cc.full;
    omega_basis(top);
    c.atoms.push_back(std::move(top));
    LogDetAtom bot;
    bot.weight = -1.0;
    bot.base = MatrixC::Zero(n, n);
    omega_basis(bot);
    c.atoms.push_back(std::move(bot));
    p.constraints.push_back(std::move(c));
  }
  LogDetAtom fl;
  fl.weight = 1.0;
  fl.base = -cc.floor_delta * MatrixC::Identity(n, n);
  omega_basis(fl);
  p.floor_atoms.push_back(std::move(fl));
  return p;
}

/// Runs a short exact-barrier ascent from x and returns the refined point if
/// it improves the exact objective; nullopt otherwise.
inline std::optional<Eigen::VectorXd> polish_exact(BarrierProblem& exact,
                                                   const Eigen::VectorXd& x,
                                                   int budget) {
  auto interior = make_strict_interior(exact, x, 1e-12);
  if (!interior) return std::nullopt;
  InnerAccuracy acc{1e-4, 1e-8, 1e-7};
  BarrierResult br = maximize_barrier(exact, *interior, acc, budget);
  if (!br.x.allFinite()) return std::nullopt;
  return br.x;
}

struct RayResult {
  Eigen::VectorXd x;
  double f = 0.0;
};

/// Expanding geometric probe along base + g*dir: returns the best strictly
/// improving point, or nothing. Validity and objective are supplied by the
/// caller, so the same helper serves extrapolation and secant acceleration.
template <typename ValidFn, typename ExactFn>
std::optional<RayResult> probe_ray(const Eigen::VectorXd& base,
                                   const Eigen::VectorXd& dir, double f_floor,
                                   ValidFn&& valid, ExactFn&& exact_of) {
  if (!(dir.norm() > 0.0)) return std::nullopt;
  std::optional<RayResult> best;
  double floor = f_floor;
  for (double g = 0.5; g <= 1e7; g *= 2.0) {
    Eigen::VectorXd xt = base + g * dir;
    if (!valid(xt)) break;
    double f = exact_of(xt);
    if (f > floor + 1e-12 * (1.0 + std::abs(floor))) {
      best = RayResult{std::move(xt), f};
      floor = f;
    } else if (best) {
      break;  // past the peak
    } else if (g > 8.0) {
      break;  // no gain near the step itself
    }
  }
  return best;
}

/// Validity test for an extrapolated iterate: powers inside the budget box,
/// covariances above the PSD floor, original compression constraints held.
inline bool valid_mdc_point(const ChannelContext& cc, double rf,
                            const Eigen::VectorXd& x, const MdcLayout& lay) {
  for (int k = 0; k < lay.num_ues; ++k)
    if (!(x[k] >= 0.0) || !(x[k] <= cc.power)) return false;
  MatrixC side = unpack_hermitian(x.data() + lay.side_offset(), lay.n);
  MatrixC central = unpack_hermitian(x.data() + lay.central_offset(), lay.n);
  const MatrixC floor_eye =
      (1.0 - 1e-9) * cc.floor_delta * MatrixC::Identity(lay.n, lay.n);
  if (Eigen::LLT<MatrixC>(side - floor_eye).info() != Eigen::Success)
    return false;
  if (Eigen::LLT<MatrixC>(central - floor_eye).info() != Eigen::Success)
    return false;
  MdcQuantizer q{HermitianMatrix(side), HermitianMatrix(central)};
  HermitianMatrix sy{cc.full};
  // Keep a hair of slack so follow-up solves start strictly interior.
  const double margin = 1e-9 * (1.0 + rf);
  return g_individual(sy, q) <= rf - margin &&
         g_sum(sy, q) <= 2.0 * rf - margin;
}

}  // namespace detail

/// One convex subproblem instance: everything the linearized solve needs.
struct InnerProblem {
  double rf = 0.0;
  RateWeights weights;
  UplinkChannel channel;
  LinearizationPoint at;
};

/// Result of one linearized subproblem solve.
struct InnerSolution {
  PowerSplit split;
  MdcQuantizer quantizer{HermitianMatrix::identity(1),
                         HermitianMatrix::identity(1)};
  double surrogate_value = 0.0;
  double kkt_residual = 0.0;
  int newton_iterations = 0;
  bool converged = false;
};

namespace detail {

inline InnerSolution solve_inner_impl(const ChannelContext& cc,
                                      const InnerProblem& prob,
                                      const InnerAccuracy& acc, int budget) {
  BarrierProblem bp = build_mdc_subproblem(
      cc, prob.weights, prob.rf, prob.at.split,
      prob.at.quantizer.side_cov.matrix(),
      prob.at.quantizer.central_cov.matrix());
  MdcLayout lay{cc.num_ues, cc.n};
  Eigen::VectorXd x0 =
      pack_mdc_point(lay, prob.at.split, prob.at.quantizer.side_cov.matrix(),
                     prob.at.quantizer.central_cov.matrix());
  auto interior =
      make_strict_interior(bp, x0, 1e-9 * (1.0 + std::abs(prob.rf)));
  if (!interior)
    throw std::runtime_error(
        "solve_inner_convex: feasibility restoration failed at the "
        "linearization point");
  BarrierResult br = maximize_barrier(bp, *interior, acc, budget);

  InnerSolution sol;
  sol.split.layer1.resize(cc.num_ues);
  sol.split.layer2.resize(cc.num_ues);
  for (int k = 0; k < cc.num_ues; ++k) {
    sol.split.layer1[k] = br.x[k];
    sol.split.layer2[k] = cc.power - br.x[k];
  }
  MatrixC side = unpack_hermitian(br.x.data() + lay.side_offset(), cc.n);
  MatrixC central = unpack_hermitian(br.x.data() + lay.central_offset(), cc.n);
  sol.quantizer = MdcQuantizer(HermitianMatrix(side), HermitianMatrix(central));
  sol.kkt_residual = br.kkt_residual;
  sol.newton_iterations = br.newton_iterations;
  sol.converged = br.converged;
  sol.surrogate_value = surrogate_objective(sol.split, sol.quantizer, prob.at,
                                            prob.weights, prob.channel);
  return sol;
}

}  // namespace detail

/// Solves one linearized (convex) subproblem to interior-point accuracy.
/// The returned point is feasible for the linearized constraints, hence for
/// the original ones; kkt_residual reports the norm of the gradient of the
/// barrier-augmented objective at the final barrier weight.
inline InnerSolution solve_inner_convex(const InnerProblem& prob,
                                        const SolverConfig& cfg = {}) {
  detail::ChannelContext cc(prob.channel);
  detail::InnerAccuracy acc{1.0, cfg.mu_final, cfg.kkt_tol};
  return detail::solve_inner_impl(cc, prob, acc, cfg.max_inner);
}

namespace detail {

/// Smallest power-of-two multiple of the identity above the PSD floor that
/// satisfies both compression constraints with margin. Exists for any
/// positive rate because both rate bounds vanish as the covariances blow up.
inline double feasible_isotropic_start(const ChannelContext& cc, double rf,
                                       double margin) {
  HermitianMatrix sy{cc.full};
  double c = std::pow(2.0, std::ceil(std::log2(cc.floor_delta)));
  while (c <= cc.floor_delta * (1.0 + 1e-9)) c *= 2.0;
  for (int guard = 0; guard < 4096; ++guard) {
    MdcQuantizer q(HermitianMatrix::identity(cc.n, c),
                   HermitianMatrix::identity(cc.n, c));
    if (g_individual(sy, q) <= rf - margin && g_sum(sy, q) <= 2.0 * rf - margin)
      return c;
    c *= 2.0;
  }
  throw std::runtime_error("feasible_isotropic_start: no feasible start found");
}

inline LinearizationPoint default_start(const ChannelContext& cc, double rf) {
  double c = feasible_isotropic_start(cc, rf, 1e-9 * (1.0 + rf));
  PowerSplit split;
  split.layer1.assign(cc.num_ues, cc.power / 2.0);
  split.layer2.assign(cc.num_ues, cc.power / 2.0);
  return LinearizationPoint{split,
                            MdcQuantizer(HermitianMatrix::identity(cc.n, c),
                                         HermitianMatrix::identity(cc.n, c))};
}

/// Start points for the multistart ladder. The landscape has distinct
/// stationary points whose power splits sit at different ends of the budget,
/// so the first three starts bias the split toward even, layer-1-heavy and
/// layer-2-heavy allocations; further indices jitter deterministically.
inline LinearizationPoint multistart_point(const ChannelContext& cc, double rf,
                                           std::uint64_t seed, int index) {
  LinearizationPoint base = default_start(cc, rf);
  if (index == 0) return base;
  double frac = 0.5;
  double scale = 1.0;
  if (index == 1) {
    frac = 0.98;
  } else if (index == 2) {
    frac = 0.02;
  } else {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(index)));
    frac = rng.next_uniform(0.05, 0.95);
    scale = std::pow(2.0, 1 + static_cast<int>(rng.next() % 4));
  }
  for (int k = 0; k < cc.num_ues; ++k) {
    base.split.layer1[k] = cc.power * frac;
    base.split.layer2[k] = cc.power * (1.0 - frac);
  }
  return LinearizationPoint{
      base.split,
      MdcQuantizer(base.quantizer.side_cov.scaled(scale),
                   base.quantizer.central_cov.scaled(scale))};
}

}  // namespace detail

/// Fixed-rate two-description design via repeated linearization. The exact
/// objective trace is nondecreasing; the returned point satisfies the
/// original compression constraints within feasibility_tol.
inline MdcSolution cccp_fixed_rf(
    double rf, const UplinkChannel& ch, const FronthaulConfig& cfg,
    std::optional<LinearizationPoint> init = std::nullopt,
    const SolverConfig& solver = {}) {
  if (!(rf > 0.0)) throw std::invalid_argument("cccp_fixed_rf: rate must be positive");
  detail::ChannelContext cc(ch);
  CongestionState st = mdc_congestion(rf, cfg);

  auto run_single = [&](const LinearizationPoint& start) {
    LinearizationPoint at = start;
    at.split.validate(ch.power);

    auto exact_objective = [&](const LinearizationPoint& pt) {
      return st.weights.layer1 * layer1_sum_rate(ch, pt.split, pt.quantizer.side_cov) +
             st.weights.layer2 * layer2_sum_rate(ch, pt.split, pt.quantizer.central_cov);
    };

    MdcSolution sol;
    sol.rf = rf;
    sol.pmf = st.pmf;
    double f_prev = exact_objective(at);
    sol.objective_trace.push_back(f_prev);

    detail::BarrierProblem exact =
        detail::build_exact_mdc_problem(cc, st.weights, rf);
    std::deque<Eigen::VectorXd> history;

    const detail::InnerAccuracy loose{1e-2, 1e-5, 1e-3};
    const detail::InnerAccuracy tight{1e-3, solver.mu_final, solver.kkt_tol};
    const detail::InnerAccuracy first{1.0, 1e-5, 1e-3};

    bool tightened = false;
    bool last_tight_converged = true;
    int outer = 0;
    while (outer < solver.max_outer) {
      ++outer;
      InnerProblem prob{rf, st.weights, ch, at};
      const detail::InnerAccuracy& acc =
          tightened ? tight : (outer == 1 ? first : loose);
      InnerSolution inner =
          detail::solve_inner_impl(cc, prob, acc, solver.max_inner);
      if (tightened) {
        sol.kkt_residual = inner.kkt_residual;
        last_tight_converged = inner.converged;
      }

      if (!(inner.surrogate_value >= f_prev)) {
        // No surrogate ascent left at this accuracy.
        if (tightened) {
          sol.converged = true;
          break;
        }
        tightened = true;
        continue;
      }

      detail::MdcLayout lay{cc.num_ues, cc.n};
      auto from_vec = [&](const Eigen::VectorXd& x) {
        PowerSplit sp;
        sp.layer1.resize(cc.num_ues);
        sp.layer2.resize(cc.num_ues);
        for (int k = 0; k < cc.num_ues; ++k) {
          sp.layer1[k] = x[k];
          sp.layer2[k] = cc.power - x[k];
        }
        return LinearizationPoint{
            sp, MdcQuantizer(HermitianMatrix(detail::unpack_hermitian(
                                 x.data() + lay.side_offset(), cc.n)),
                             HermitianMatrix(detail::unpack_hermitian(
                                 x.data() + lay.central_offset(), cc.n)))};
      };
      auto to_vec = [&](const LinearizationPoint& pt) {
        return detail::pack_mdc_point(lay, pt.split,
                                      pt.quantizer.side_cov.matrix(),
                                      pt.quantizer.central_cov.matrix());
      };
      auto valid = [&](const Eigen::VectorXd& x) {
        return detail::valid_mdc_point(cc, rf, x, lay);
      };
      auto exact_of_vec = [&](const Eigen::VectorXd& x) {
        return exact_objective(from_vec(x));
      };

      Eigen::VectorXd xv = to_vec(LinearizationPoint{inner.split, inner.quantizer});
      double f_new = exact_of_vec(xv);

      // Monotone extrapolation along the linearization step: the tangent
      // surrogates under-reach near curved constraint boundaries, so probing
      // multiples of the step against the exact objective and the original
      // constraints recovers fast outer convergence without giving up the
      // ascent guarantee.
      {
        Eigen::VectorXd xp = to_vec(at);
        if (auto r = detail::probe_ray(xp, xv - xp, f_new, valid, exact_of_vec)) {
          xv = std::move(r->x);
          f_new = r->f;
        }
      }

      const bool slow_round =
          f_new - f_prev < 0.01 * std::max(1.0, std::abs(f_new));

      // Exact-barrier polish: short Newton ascents on the original problem,
      // kept only while they gain exact objective. Gated on slow rounds so
      // the early linearization steps pick the basin before the greedier
      // exact ascent takes over.
      if (slow_round) {
        for (int rep = 0; rep < 5; ++rep) {
          auto polished = detail::polish_exact(exact, xv, 120);
          if (!polished || !valid(*polished)) break;
          double ft = exact_of_vec(*polished);
          if (!(ft > f_new + 1e-10 * (1.0 + std::abs(f_new)))) break;
          xv = std::move(*polished);
          f_new = ft;
        }
      }

      // Window secant: narrow curved valleys defeat both the linearization
      // step and local Newton ascent; the direction between iterates a few
      // rounds apart tracks the valley floor, so line-probe along it.
      if (slow_round && !history.empty()) {
        if (auto r = detail::probe_ray(xv, xv - history.front(), f_new, valid,
                                       exact_of_vec)) {
          xv = std::move(r->x);
          f_new = r->f;
        }
      }
      history.push_back(xv);
      if (history.size() > 8) history.pop_front();

      at = from_vec(xv);
      sol.objective_trace.push_back(f_new);
      // Windowed stop: single-round increments fluctuate while the iterate
      // rides a curved constraint boundary, so require the gain over the
      // last few rounds to fall below tolerance.
      const std::size_t len = sol.objective_trace.size();
      const std::size_t span = std::min<std::size_t>(5, len - 1);
      double window_gain = f_new - sol.objective_trace[len - 1 - span];
      bool small_change =
          window_gain <= solver.rel_tol * std::max(1.0, std::abs(f_new));
      f_prev = f_new;
      if (small_change) {
        if (tightened) {
          sol.converged = true;
          break;
        }
        tightened = true;
      }
    }
    if (sol.converged && !last_tight_converged) {
      sol.converged = false;
      sol.diagnostics.push_back(
          "final subproblem stopped above the target residual");
    }

    sol.iterations = outer;
    sol.split = at.split;
    sol.quantizer = at.quantizer;
    sol.rate_layer1 = layer1_sum_rate(ch, sol.split, sol.quantizer.side_cov);
    sol.rate_layer2 = layer2_sum_rate(ch, sol.split, sol.quantizer.central_cov);
    sol.expected_sum_rate = st.weights.layer1 * sol.rate_layer1 +
                            st.weights.layer2 * sol.rate_layer2;

    // Feasibility audit of the original constraints.
    HermitianMatrix sy{cc.full};
    double gi = g_individual(sy, sol.quantizer);
    double gs = g_sum(sy, sol.quantizer);
    if (gi > rf + solver.feasibility_tol || gs > 2.0 * rf + solver.feasibility_tol)
      sol.diagnostics.push_back("returned point violates a compression constraint");

    // Layer-1 decodability at the refined reconstruction: flag solutions
    // whose layer-1 rate exceeds the mutual information available when both
    // descriptions arrive.
    double layer1_central =
        layer1_sum_rate(ch, sol.split, sol.quantizer.central_cov);
    if (layer1_central < sol.rate_layer1 - 1e-9)
      sol.diagnostics.push_back(
          "layer-1 rate exceeds the central-reconstruction mutual information");
    return sol;
  };

  if (init) return run_single(*init);
  MdcSolution best =
      run_single(detail::multistart_point(cc, rf, solver.start_seed, 0));
  for (int s = 1; s < solver.n_starts; ++s) {
    MdcSolution cand =
        run_single(detail::multistart_point(cc, rf, solver.start_seed, s));
    if (cand.expected_sum_rate > best.expected_sum_rate) best = std::move(cand);
  }
  return best;
}

/// Fixed-rate duplicate-packet baseline via the same linearization scheme.
inline PdSolution pd_fixed_rf(double rf, const UplinkChannel& ch,
                              const FronthaulConfig& cfg,
                              const SolverConfig& solver = {}) {
  if (!(rf > 0.0)) throw std::invalid_argument("pd_fixed_rf: rate must be positive");
  detail::ChannelContext cc(ch);
  CongestionState st = pd_congestion(rf, cfg);
  const double w = st.weights.layer1;

  HermitianMatrix sy{cc.full};
  double c0 = detail::feasible_isotropic_start(cc, rf, 1e-9 * (1.0 + rf));
  MatrixC omega_t = c0 * MatrixC::Identity(cc.n, cc.n);

  auto exact_objective = [&](const MatrixC& omega) {
    return w * pd_sum_rate(ch, HermitianMatrix(omega));
  };
  auto g_of = [&](const MatrixC& omega) {
    return g_individual(sy, MdcQuantizer(HermitianMatrix(omega),
                                         HermitianMatrix(omega)));
  };

  PdSolution sol;
  sol.rf = rf;
  sol.pmf = st.pmf;
  sol.pr_delivery = w;
  double f_prev = exact_objective(omega_t);
  sol.objective_trace.push_back(f_prev);

  detail::BarrierProblem exact = detail::build_exact_pd_problem(cc, w, rf);

  const detail::InnerAccuracy loose{1e-2, 1e-5, 1e-3};
  const detail::InnerAccuracy tight{1e-3, solver.mu_final, solver.kkt_tol};
  const detail::InnerAccuracy first{1.0, 1e-5, 1e-3};

  bool tightened = false;
  bool last_tight_converged = true;
  int outer = 0;
  while (outer < solver.max_outer) {
    ++outer;
    detail::BarrierProblem bp = detail::build_pd_subproblem(cc, w, rf, omega_t);
    Eigen::VectorXd x0(bp.dim);
    detail::pack_hermitian(omega_t, x0.data());
    auto interior =
        detail::make_strict_interior(bp, x0, 1e-9 * (1.0 + rf));
    if (!interior)
      throw std::runtime_error(
          "pd_fixed_rf: feasibility restoration failed at the linearization point");
    const detail::InnerAccuracy& acc =
        tightened ? tight : (outer == 1 ? first : loose);
    detail::BarrierResult br =
        detail::maximize_barrier(bp, *interior, acc, solver.max_inner);
    if (tightened) {
      sol.kkt_residual = br.kkt_residual;
      last_tight_converged = br.converged;
    }

    MatrixC omega_new = detail::unpack_hermitian(br.x.data(), cc.n);
    // Surrogate ascent check: phi-linearized objective at the new point.
    double surr =
        w > 0.0
            ? w * (HermitianMatrix(cc.full + omega_new).log2_determinant() -
                   phi(HermitianMatrix(cc.noise + omega_new),
                       HermitianMatrix(cc.noise + omega_t)))
            : 0.0;
    if (!(surr >= f_prev)) {
      if (tightened) {
        sol.converged = true;
        break;
      }
      tightened = true;
      continue;
    }
    double f_new = exact_objective(omega_new);

    // Monotone extrapolation along the linearization step (see the
    // two-description solver for the rationale).
    const MatrixC floor_eye = (1.0 - 1e-9) * cc.floor_delta *
                              MatrixC::Identity(cc.n, cc.n);
    {
      MatrixC dir = omega_new - omega_t;
      for (double gamma : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        MatrixC cand = omega_t + gamma * dir;
        cand = 0.5 * (cand + cand.adjoint()).eval();
        if (Eigen::LLT<MatrixC>(cand - floor_eye).info() != Eigen::Success)
          break;
        if (g_of(cand) > rf - 1e-9 * (1.0 + rf)) break;
        double ft = exact_objective(cand);
        if (!(ft > f_new + 1e-12 * (1.0 + std::abs(f_new)))) break;
        omega_new = cand;
        f_new = ft;
      }
    }

    // Exact-barrier polish, kept only on exact-objective gain.
    {
      Eigen::VectorXd xa(detail::hermitian_params(cc.n));
      detail::pack_hermitian(omega_new, xa.data());
      auto polished = detail::polish_exact(exact, xa, 60);
      if (polished) {
        MatrixC cand = detail::unpack_hermitian(polished->data(), cc.n);
        if (Eigen::LLT<MatrixC>(cand - floor_eye).info() == Eigen::Success &&
            g_of(cand) <= rf - 1e-9 * (1.0 + rf)) {
          double ft = exact_objective(cand);
          if (ft > f_new) {
            omega_new = cand;
            f_new = ft;
          }
        }
      }
    }

    omega_t = omega_new;
    sol.objective_trace.push_back(f_new);
    const std::size_t len = sol.objective_trace.size();
    const std::size_t span = std::min<std::size_t>(5, len - 1);
    double window_gain = f_new - sol.objective_trace[len - 1 - span];
    bool small_change =
        window_gain <= solver.rel_tol * std::max(1.0, std::abs(f_new));
    f_prev = f_new;
    if (small_change) {
      if (tightened) {
        sol.converged = true;
        break;
      }
      tightened = true;
    }
  }
  if (sol.converged && !last_tight_converged) {
    sol.converged = false;
    sol.diagnostics.push_back(
        "final subproblem stopped above the target residual");
  }

  sol.iterations = outer;
  sol.omega = HermitianMatrix(omega_t);
  sol.sum_rate = pd_sum_rate(ch, sol.omega);
  sol.expected_sum_rate = w * sol.sum_rate;
  if (g_of(omega_t) > rf + solver.feasibility_tol)
    sol.diagnostics.push_back("returned point violates the compression constraint");
  return sol;
}

namespace detail {

/// Rate grid of the discrete search: multiples of one packet per frame, up
/// to one packet beyond the deadline. The top point cannot be delivered in
/// time on its own; it stays in the grid and loses on merit.
inline std::vector<double> rf_grid(const FronthaulConfig& cfg) {
  int deadline = deadline_slots(cfg);
  if (deadline < 1)
    throw std::invalid_argument("rf_grid: deadline shorter than one packet slot");
  double step = static_cast<double>(cfg.packet_bits) /
                static_cast<double>(cfg.frame_symbols);
  std::vector<double> grid;
  for (int j = 1; j <= deadline + 1; ++j) grid.push_back(j * step);
  return grid;
}

}  // namespace detail

/// Discrete search over the compression output rate for the two-description
/// scheme. Ties break toward the smaller rate; if no grid point earns a
/// positive expected rate the zero-rate fallback (send nothing) is returned.
inline MdcSolution search_rf_mdc(const UplinkChannel& ch,
                                 const FronthaulConfig& cfg,
                                 const SolverConfig& solver = {}) {
  std::vector<double> grid = detail::rf_grid(cfg);
  std::optional<MdcSolution> best;
  std::vector<RfSearchPoint> trace;
  for (double rf : grid) {
    MdcSolution cand = cccp_fixed_rf(rf, ch, cfg, std::nullopt, solver);
    trace.push_back({cand.rf, cand.expected_sum_rate, cand.iterations,
                     cand.converged});
    if (!best || cand.expected_sum_rate > best->expected_sum_rate)
      best = std::move(cand);
  }
  if (!best || !(best->expected_sum_rate > 0.0)) {
    MdcSolution fallback;
    fallback.rf = 0.0;
    fallback.split = PowerSplit::even(ch.num_ues(), ch.power);
    fallback.quantizer = MdcQuantizer(HermitianMatrix::identity(ch.n_rx),
                                      HermitianMatrix::identity(ch.n_rx));
    fallback.converged = true;
    fallback.diagnostics.push_back("zero-rate fallback: nothing transmitted");
    fallback.search_trace = std::move(trace);
    return fallback;
  }
  best->search_trace = std::move(trace);
  return *best;
}

/// Discrete rate search for the duplicate-packet baseline.
inline PdSolution optimize_pd(const UplinkChannel& ch,
                              const FronthaulConfig& cfg,
                              const SolverConfig& solver = {}) {
  std::vector<double> grid = detail::rf_grid(cfg);
  std::optional<PdSolution> best;
  std::vector<RfSearchPoint> trace;
  for (double rf : grid) {
    PdSolution cand = pd_fixed_rf(rf, ch, cfg, solver);
    trace.push_back({cand.rf, cand.expected_sum_rate, cand.iterations,
                     cand.converged});
    if (!best || cand.expected_sum_rate > best->expected_sum_rate)
      best = std::move(cand);
  }
  if (!best || !(best->expected_sum_rate > 0.0)) {
    PdSolution fallback;
    fallback.rf = 0.0;
    fallback.omega = HermitianMatrix::identity(ch.n_rx);
    fallback.converged = true;
    fallback.diagnostics.push_back("zero-rate fallback: nothing transmitted");
    fallback.search_trace = std::move(trace);
    return fallback;
  }
  best->search_trace = std::move(trace);
  return *best;
}

/// Monte Carlo validation of a solved design's expected rate.
inline SimOutcome simulate_expected_rate(const MdcSolution& sol,
                                         [[maybe_unused]] const UplinkChannel& ch,
                                         const FronthaulConfig& cfg,
                                         long long trials, std::uint64_t seed) {
  return simulate_layered_rate(sol.rf, sol.rate_layer1, sol.rate_layer2, cfg,
                               trials, seed);
}

inline SimOutcome simulate_expected_rate(const PdSolution& sol,
                                         [[maybe_unused]] const UplinkChannel& ch,
                                         const FronthaulConfig& cfg,
                                         long long trials, std::uint64_t seed) {
  return simulate_duplicate_rate(sol.rf, sol.sum_rate, cfg, trials, seed);
}

}  // namespace mdcran

#endif  // MDCRAN_OPTIMIZER_HPP
