// Copyright 2026 The paulikron Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "paulikron/cut.hpp"
#include "paulikron/errors.hpp"
#include "paulikron/pauli.hpp"
#include "paulikron/rng.hpp"

namespace paulikron {

/// Size limits for the dense reference paths. Defaults follow the main
/// benchmark protocol; tests shrink them to exercise the guard errors.
struct DenseGuards {
  Index max_side = 5500;
  double max_elements = 3.2e7;
  std::uint32_t max_qubits_operator = 12;
};

/// Materializes the coefficient matrix. Audit/baseline use only.
inline Eigen::MatrixXd dense_coeff_matrix(const SparseCoeffMatrix& C,
                                          const DenseGuards& guards = {}) {
  const double elements =
      static_cast<double>(C.rows()) * static_cast<double>(C.cols());
  if (elements > guards.max_elements) {
    throw GuardExceededError("max_elements",
                             std::to_string(elements) + " > " +
                                 std::to_string(guards.max_elements));
  }
  if (std::max(C.rows(), C.cols()) > guards.max_side) {
    throw GuardExceededError(
        "max_side", std::to_string(std::max(C.rows(), C.cols())) + " > " +
                        std::to_string(guards.max_side));
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(C.rows(), C.cols());
  for (const auto& t : C.triples()) M(t.a, t.b) = t.c;
  return M;
}

/// Full singular spectrum, nonincreasing. Jacobi below the size cutoff:
/// Eigen 3.4.0's BDCSVD drops mass on sparse inputs (deflation bug), and
/// the oracle's job is exactness. Above the cutoff Jacobi is prohibitive
/// and the divide-and-conquer routine serves as the timing baseline.
inline std::vector<double> dense_svd_spectrum(const Eigen::MatrixXd& M) {
  if (!M.allFinite()) throw NumericalFailureError("matrix has non-finite entries");
  constexpr Index kJacobiMaxSide = 512;
  Eigen::VectorXd s;
  if (std::max(M.rows(), M.cols()) <= kJacobiMaxSide) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailureError("dense SVD did not converge");
    }
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailureError("dense SVD did not converge");
    }
    s = svd.singularValues();
  }
  return std::vector<double>(s.data(), s.data() + s.size());
}

/// Builds the 2^n x 2^n operator sum c_p P_p. Each Pauli string is a
/// monomial matrix: column j maps to row j ^ flip_mask with amplitude
/// i^{#Y} * (-1)^{popcount(j & phase_mask)}, so the build is O(2^n) per
/// term. Qubit 0 occupies the most significant bit of the basis index.
inline Eigen::MatrixXcd dense_operator(const PauliSum& h,
                                       const DenseGuards& guards = {}) {
  const std::uint32_t n = h.qubits();
  if (n > guards.max_qubits_operator) {
    throw GuardExceededError("max_qubits_operator",
                             std::to_string(n) + " > " +
                                 std::to_string(guards.max_qubits_operator));
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Index>(dim),
                                              static_cast<Index>(dim));
  const std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& [code, c] : h.terms()) {
    std::uint64_t flip_mask = 0;   // X and Y flip the qubit's basis bit
    std::uint64_t phase_mask = 0;  // Y and Z contribute (-1)^{bit}
    int y_count = 0;
    for (std::uint32_t q = 0; q < n; ++q) {
      const std::uint32_t d =
          static_cast<std::uint32_t>((code >> (2 * (n - 1 - q))) & 3u);
      const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
      if (d == 1 || d == 2) flip_mask |= bit;
      if (d == 2 || d == 3) phase_mask |= bit;
      if (d == 2) ++y_count;
    }
    const std::complex<double> base = c * i_pow[y_count & 3];
    for (std::uint64_t j = 0; j < dim; ++j) {
      const int parity = std::popcount(j & phase_mask) & 1;
      M(static_cast<Index>(j ^ flip_mask), static_cast<Index>(j)) +=
          parity ? -base : base;
    }
  }
  return M;
}

namespace detail {
inline void require_hermitian(const Eigen::MatrixXcd& H, double tol) {
  const double dev = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw NotHermitianError("max |H - H^dag| = " + std::to_string(dev));
  }
}
}  // namespace detail

/// Smallest eigenvalue of a Hermitian matrix.
inline double ground_energy(const Eigen::MatrixXcd& H) {
  detail::require_hermitian(H, 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailureError("Hermitian eigensolve failed");
  }
  return solver.eigenvalues()(0);
}

/// Power-iteration estimate of the largest |eigenvalue| of a Hermitian
/// matrix. A lower bound up to convergence error; 40 steps by default.
inline double spectral_norm_power(const Eigen::MatrixXcd& H, int iters = 40) {
  if (iters < 1) throw DomainError("iters must be >= 1");
  const Index dim = H.rows();
  if (dim == 0) return 0.0;
  Rng rng(0);
  Eigen::VectorXcd x(dim);
  for (Index i = 0; i < dim; ++i) x(i) = {rng.gaussian(), rng.gaussian()};
  double nrm = x.norm();
  if (nrm == 0.0) return 0.0;
  x /= nrm;
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd y = H * x;
    estimate = y.norm();
    if (estimate == 0.0) return 0.0;
    x = y / estimate;
  }
  return estimate;
}

}  // namespace paulikron
