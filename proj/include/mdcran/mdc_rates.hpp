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

/// \file mdc_rates.hpp
/// \brief Two-description quantizer rate region and the convexified
///        surrogates used by the alternating linearization solver.
///
/// A receiver-side quantizer emits two exchangeable side descriptions with
/// noise covariance side_cov and a central refinement with covariance
/// central_cov. g_individual bounds the rate each description needs on its
/// own; g_sum bounds twice the shared description rate and accounts for the
/// correlation between the descriptions and the refinement. The surrogate
/// functions replace each concave log-det by its tangent plane at a
/// linearization point, which makes the compression constraints convex and
/// the weighted rate objective concave while preserving tangency.

#ifndef MDCRAN_MDC_RATES_HPP
#define MDCRAN_MDC_RATES_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mdcran/channel.hpp"
#include "mdcran/hermitian.hpp"

namespace mdcran {

/// Quantization noise covariances of the two-description scheme.
struct MdcQuantizer {
  HermitianMatrix side_cov;     ///< each single description
  HermitianMatrix central_cov;  ///< refinement from both descriptions

  MdcQuantizer(const HermitianMatrix& side, const HermitianMatrix& central)
      : side_cov(side), central_cov(central) {
    if (side_cov.dim() != central_cov.dim())
      throw std::invalid_argument("MdcQuantizer: covariance dimensions differ");
    if (!side_cov.is_psd() || !central_cov.is_psd())
      throw std::invalid_argument("MdcQuantizer: covariances must be PSD");
  }
};

/// Point the surrogates are linearized at (one solver iterate).
struct LinearizationPoint {
  PowerSplit split;
  MdcQuantizer quantizer;
};

/// Weights applied to the two layer rates in the expected-rate objective:
/// layer1 weighs the probability that at least one description arrives,
/// layer2 the probability that both do.
struct RateWeights {
  double layer1 = 0.0;
  double layer2 = 0.0;
};

namespace detail {

/// m-fold stacked covariance: replication * sigma * replication^H.
inline MatrixC stacked_covariance(const MatrixC& sigma, int copies) {
  MatrixC a = replication_matrix(copies, static_cast<int>(sigma.rows()));
  return a * sigma * a.adjoint();
}

/// Joint covariance diag(central, side, side) of the quantization noises.
inline MatrixC joint_quant_cov(const MdcQuantizer& q) {
  return block_diag({q.central_cov.matrix(), q.side_cov.matrix(),
                     q.side_cov.matrix()});
}

}  // namespace detail

/// First-order expansion of log2 det around ref, evaluated at arg:
///   log2 det(ref) + tr(ref^{-1} (arg - ref)) / ln 2.
/// Dominates log2 det(arg) for every positive-definite pair, with equality
/// at arg == ref.
inline double phi(const HermitianMatrix& arg, const HermitianMatrix& ref) {
  if (arg.dim() != ref.dim())
    throw std::invalid_argument("phi: dimension mismatch");
  Eigen::LLT<MatrixC> llt(ref.matrix());
  if (llt.info() != Eigen::Success)
    throw std::domain_error("phi: reference matrix must be positive definite");
  double logdet = 0.0;
  for (int i = 0; i < ref.dim(); ++i) {
    double d = std::real(llt.matrixLLT()(i, i));
    if (!(d > 0.0)) throw std::domain_error("phi: reference matrix must be positive definite");
    logdet += 2.0 * std::log2(d);
  }
  MatrixC diff = arg.matrix() - ref.matrix();
  double lin = llt.solve(diff).trace().real();
  return logdet + lin / std::numbers::ln2;
}

/// Rate needed by one side description alone: the mutual information between
/// the received signal (covariance sigma_y) and its quantized copy.
/// Returns +infinity when side_cov is singular.
inline double g_individual(const HermitianMatrix& sigma_y,
                           const MdcQuantizer& q) {
  if (sigma_y.dim() != q.side_cov.dim())
    throw std::invalid_argument("g_individual: dimension mismatch");
  auto ld_omega = detail::try_log2_det(q.side_cov.matrix());
  if (!ld_omega) return std::numeric_limits<double>::infinity();
  auto ld_sum = detail::try_log2_det(sigma_y.matrix() + q.side_cov.matrix());
  if (!ld_sum)
    throw std::domain_error("g_individual: singular log-det argument");
  return *ld_sum - *ld_omega;
}

/// Rate bound on twice the per-description rate: covers the joint encoding
/// of both side descriptions plus the central refinement, including the
/// mutual information carried between the two side descriptions.
inline double g_sum(const HermitianMatrix& sigma_y, const MdcQuantizer& q) {
  const int n = sigma_y.dim();
  if (n != q.side_cov.dim())
    throw std::invalid_argument("g_sum: dimension mismatch");
  const MatrixC& sy = sigma_y.matrix();
  const MatrixC omega_bar = detail::joint_quant_cov(q);

  MatrixC s3 = detail::stacked_covariance(sy, 3) + omega_bar;
  MatrixC s4 = detail::stacked_covariance(sy, 4) +
               block_diag({MatrixC::Zero(n, n), omega_bar});
  MatrixC s2 = detail::stacked_covariance(sy, 2) +
               block_diag({q.side_cov.matrix(), q.side_cov.matrix()});

  auto term = [](const MatrixC& m) {
    auto v = detail::try_log2_det(m);
    if (!v) throw std::domain_error("g_sum: singular log-det argument");
    return *v;
  };
  return term(sy) + term(s3) - term(s4) + 2.0 * term(sy + q.side_cov.matrix()) -
         term(s2);
}

/// Convex surrogate of g_individual, linearized at `at`. Majorizes
/// g_individual with equality at the linearization point.
inline double surrogate_g1(const MdcQuantizer& q, const LinearizationPoint& at,
                           const HermitianMatrix& sigma_y) {
  auto ld_omega = detail::try_log2_det(q.side_cov.matrix());
  if (!ld_omega) return std::numeric_limits<double>::infinity();
  HermitianMatrix arg(sigma_y.matrix() + q.side_cov.matrix());
  HermitianMatrix ref(sigma_y.matrix() + at.quantizer.side_cov.matrix());
  return phi(arg, ref) - *ld_omega;
}

/// Convex surrogate of g_sum, linearized at `at`: the two concave log-dets
/// are replaced by their tangent planes, the convex (negated) ones kept.
inline double surrogate_gsum(const MdcQuantizer& q,
                             const LinearizationPoint& at,
                             const HermitianMatrix& sigma_y) {
  const int n = sigma_y.dim();
  const MatrixC& sy = sigma_y.matrix();
  const MatrixC tiled3 = detail::stacked_covariance(sy, 3);

  auto term = [](const MatrixC& m, const char* what) {
    auto v = detail::try_log2_det(m);
    if (!v) throw std::domain_error(what);
    return *v;
  };

  double t_sy = term(sy, "surrogate_gsum: singular received covariance");
  double t3 = phi(HermitianMatrix(tiled3 + detail::joint_quant_cov(q)),
                  HermitianMatrix(tiled3 + detail::joint_quant_cov(at.quantizer)));
  double t4 = term(detail::stacked_covariance(sy, 4) +
                       block_diag({MatrixC::Zero(n, n), detail::joint_quant_cov(q)}),
                   "surrogate_gsum: singular log-det argument");
  double t1 = phi(HermitianMatrix(sy + q.side_cov.matrix()),
                  HermitianMatrix(sy + at.quantizer.side_cov.matrix()));
  double t2 = term(detail::stacked_covariance(sy, 2) +
                       block_diag({q.side_cov.matrix(), q.side_cov.matrix()}),
                   "surrogate_gsum: singular log-det argument");
  return t_sy + t3 - t4 + 2.0 * t1 - t2;
}

/// Concave surrogate of the weighted two-layer rate objective, linearized at
/// `at`. Minorizes the exact objective with equality at the point.
inline double surrogate_objective(const PowerSplit& split,
                                  const MdcQuantizer& q,
                                  const LinearizationPoint& at,
                                  const RateWeights& weights,
                                  const UplinkChannel& ch) {
  split.validate(ch.power);
  at.split.validate(ch.power);
  const MatrixC noise = ch.noise_cov.matrix();
  const MatrixC full = ch.power * ch.full_gram() + noise;

  auto logdet = [](const MatrixC& m, const char* what) {
    auto v = detail::try_log2_det(m);
    if (!v) throw std::domain_error(what);
    return *v;
  };

  double layer1 =
      logdet(full + q.side_cov.matrix(), "surrogate_objective: singular log-det argument") -
      phi(HermitianMatrix(ch.layer2_gram(split) + noise + q.side_cov.matrix()),
          HermitianMatrix(ch.layer2_gram(at.split) + noise +
                          at.quantizer.side_cov.matrix()));
  double layer2 =
      logdet(ch.layer2_gram(split) + noise + q.central_cov.matrix(),
             "surrogate_objective: singular log-det argument") -
      phi(HermitianMatrix(noise + q.central_cov.matrix()),
          HermitianMatrix(noise + at.quantizer.central_cov.matrix()));
  return weights.layer1 * layer1 + weights.layer2 * layer2;
}

/// Lower bound kept on every quantization covariance during optimization,
/// relative to the received-signal scale. Keeps the individual-description
/// rate finite and the solver's domain open.
inline double quantizer_floor(const HermitianMatrix& sigma_y) {
  return 1e-8 * sigma_y.trace_real() / sigma_y.dim();
}

}  // namespace mdcran

#endif  // MDCRAN_MDC_RATES_HPP
