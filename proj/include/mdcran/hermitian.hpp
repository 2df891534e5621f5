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

/// \file hermitian.hpp
/// \brief Complex Hermitian matrix value type with PSD checks and the
///        Cholesky-based log2-determinant used by all rate expressions.

#ifndef MDCRAN_HERMITIAN_HPP
#define MDCRAN_HERMITIAN_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>

namespace mdcran {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

namespace detail {

/// log2 det of a Hermitian positive-definite matrix via Cholesky.
/// Returns nullopt when the factorization fails (matrix not numerically PD).
inline std::optional<double> try_log2_det(const MatrixC& m) {
  if (m.rows() == 0) return 0.0;  // det of the empty matrix is 1
  Eigen::LLT<MatrixC> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double d = std::real(l(i, i));
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    acc += std::log2(d);
  }
  return 2.0 * acc;
}

}  // namespace detail

/// Hermitian matrix with exact conjugate symmetry enforced at construction.
/// Immutable after construction; all members are const-safe and the type is
/// freely shareable across threads.
class HermitianMatrix {
 public:
  /// Builds the Hermitian part (m + m^H)/2 of a square complex matrix.
  /// The averaging makes entries[i][j] == conj(entries[j][i]) exact in IEEE
  /// arithmetic, not just up to rounding.
  explicit HermitianMatrix(const MatrixC& m) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("HermitianMatrix: matrix must be square");
    mat_ = 0.5 * (m + m.adjoint()).eval();
  }

  static HermitianMatrix identity(int dim, double scale = 1.0) {
    if (dim < 1) throw std::invalid_argument("HermitianMatrix: dim must be >= 1");
    return HermitianMatrix(scale * MatrixC::Identity(dim, dim));
  }

  static HermitianMatrix zero(int dim) {
    if (dim < 1) throw std::invalid_argument("HermitianMatrix: dim must be >= 1");
    return HermitianMatrix(MatrixC::Zero(dim, dim));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const MatrixC& matrix() const { return mat_; }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  double spectral_norm() const {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }

  /// Tolerance below zero allowed for the smallest eigenvalue of a matrix
  /// tagged positive semidefinite: 1e-9 times the spectral norm.
  double psd_tolerance() const { return 1e-9 * spectral_norm(); }

  bool is_psd() const { return min_eigenvalue() >= -psd_tolerance(); }

  bool is_positive_definite() const {
    return detail::try_log2_det(mat_).has_value();
  }

  /// log2 det, valid for positive-definite matrices.
  /// Throws std::domain_error when the Cholesky factorization fails.
  double log2_determinant() const {
    auto v = detail::try_log2_det(mat_);
    if (!v)
      throw std::domain_error(
          "log2_determinant: matrix is not positive definite");
    return *v;
  }

  double trace_real() const { return mat_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const {
    return HermitianMatrix(mat_ + o.mat_);
  }

  HermitianMatrix scaled(double s) const { return HermitianMatrix(s * mat_); }

 private:
  MatrixC mat_;
};

/// Replication operator: the all-ones m-vector Kronecker the n-dim identity.
/// Left-multiplying by it stacks m copies of a length-n signal.
inline MatrixC replication_matrix(int copies, int dim) {
  if (copies < 1 || dim < 1)
    throw std::invalid_argument("replication_matrix: sizes must be >= 1");
  MatrixC a = MatrixC::Zero(static_cast<Eigen::Index>(copies) * dim, dim);
  for (int c = 0; c < copies; ++c)
    a.block(static_cast<Eigen::Index>(c) * dim, 0, dim, dim) =
        MatrixC::Identity(dim, dim);
  return a;
}

/// Block-diagonal composition of square complex blocks.
inline MatrixC block_diag(const std::vector<MatrixC>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols())
      throw std::invalid_argument("block_diag: blocks must be square");
    total += b.rows();
  }
  MatrixC out = MatrixC::Zero(total, total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

}  // namespace mdcran

#endif  // MDCRAN_HERMITIAN_HPP
