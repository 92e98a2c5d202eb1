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

#include "paulikron/dense_oracle.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <complex>

#include "paulikron/generators.hpp"
#include "paulikron/rng.hpp"
#include "test_support.hpp"

using namespace paulikron;
using paulikron::testing::sum_of;

TEST_CASE("dense_coeff_matrix scatters triples") {
  const auto cut = make_cut(2, 1);
  const auto M = dense_coeff_matrix(SparseCoeffMatrix(cut, {{1, 3, 0.7}}));
  REQUIRE(M.rows() == 4);
  REQUIRE(M.cols() == 4);
  CHECK(M(1, 3) == 0.7);
  CHECK(M.cwiseAbs().sum() == 0.7);

  const auto Z = dense_coeff_matrix(SparseCoeffMatrix(cut, {}));
  CHECK(Z.isZero(0.0));
}

TEST_CASE("dense_coeff_matrix guards") {
  const SparseCoeffMatrix big(make_cut(30), {});
  try {
    dense_coeff_matrix(big);
    FAIL("expected GuardExceededError");
  } catch (const GuardExceededError& e) {
    CHECK(e.limit == "max_elements");
  }

  // A long thin shape inside the element budget still trips the side guard.
  DenseGuards guards;
  guards.max_elements = 1e18;
  const SparseCoeffMatrix thin(make_cut(14, 2), {});
  try {
    dense_coeff_matrix(thin, guards);
    FAIL("expected GuardExceededError");
  } catch (const GuardExceededError& e) {
    CHECK(e.limit == "max_side");
  }
}

TEST_CASE("dense_svd_spectrum") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = 1.0;
  const auto s = dense_svd_spectrum(D);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Catch::Approx(3.0));
  CHECK(s[1] == Catch::Approx(1.0));

  Rng rng(31);
  Eigen::VectorXd u(4), v(6);
  for (Index i = 0; i < 4; ++i) u(i) = rng.gaussian();
  for (Index i = 0; i < 6; ++i) v(i) = rng.gaussian();
  u.normalize();
  v.normalize();
  const auto r1 = dense_svd_spectrum(5.0 * u * v.transpose());
  CHECK(r1[0] == Catch::Approx(5.0).epsilon(1e-12));
  for (std::size_t i = 1; i < r1.size(); ++i) CHECK(r1[i] < 1e-12);

  Eigen::MatrixXd R(20, 30);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 30; ++j) R(i, j) = rng.gaussian();
  }
  const auto spec = dense_svd_spectrum(R);
  double mass = 0.0;
  for (double x : spec) mass += x * x;
  CHECK(mass == Catch::Approx(R.squaredNorm()).epsilon(1e-10));
  for (std::size_t i = 1; i < spec.size(); ++i) CHECK(spec[i] <= spec[i - 1]);
}

TEST_CASE("dense_operator small cases") {
  const auto Z = dense_operator(sum_of(1, {{"Z", 1.0}}));
  CHECK(Z(0, 0) == std::complex<double>{1, 0});
  CHECK(Z(1, 1) == std::complex<double>{-1, 0});
  CHECK(Z(0, 1) == std::complex<double>{0, 0});

  const auto XX = dense_operator(sum_of(2, {{"XX", 1.0}}));
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      CHECK(XX(i, j) == std::complex<double>{i + j == 3 ? 1.0 : 0.0, 0.0});
    }
  }

  const auto Y = dense_operator(sum_of(1, {{"Y", 1.0}}));
  CHECK(Y(0, 1) == std::complex<double>{0, -1});
  CHECK(Y(1, 0) == std::complex<double>{0, 1});
}

TEST_CASE("dense_operator guard") {
  DenseGuards guards;
  guards.max_qubits_operator = 4;
  CHECK_THROWS_AS(dense_operator(PauliSum(5), guards), GuardExceededError);
}

TEST_CASE("operator norm identity on random sums") {
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(trial % 5);
    const int terms = std::min(10 + trial % 12, (1 << (2 * n)) / 2);
    auto rec = generate_random_sparse(n, terms, rng.next_u64());
    rec.sum.add_code(0, rng.uniform_pm1());
    const double dense = paulikron::testing::frobenius(dense_operator(rec.sum));
    const double coeffs =
        std::sqrt(std::ldexp(rec.sum.coeff_frob_sq(), static_cast<int>(n)));
    CHECK(dense == Catch::Approx(coeffs).epsilon(1e-10));
  }
}

TEST_CASE("ground_energy") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = -1.0;
  CHECK(ground_energy(D) == Catch::Approx(-1.0));

  CHECK(ground_energy(Eigen::MatrixXcd::Identity(8, 8) * 2.5) ==
        Catch::Approx(2.5));

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(ground_energy(bad), NotHermitianError);
}

namespace {

// Independent TFIM matrix build: diagonal ZZ couplings from bit parities,
// off-diagonal X flips, no shared code with dense_operator.
Eigen::MatrixXcd tfim_matrix_direct(int n, double g) {
  const int dim = 1 << n;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const int zi = ((s >> (n - 1 - i)) & 1) ? -1 : 1;
      const int zj = ((s >> (n - 2 - i)) & 1) ? -1 : 1;
      diag += zi * zj;
    }
    H(s, s) = diag;
    for (int i = 0; i < n; ++i) H(s ^ (1 << (n - 1 - i)), s) += g;
  }
  return H;
}

}  // namespace

TEST_CASE("ground_energy matches an independent TFIM enumeration") {
  const auto rec = generate_tfim(4, 1.0);
  const auto H = dense_operator(rec.sum);
  const auto H_direct = tfim_matrix_direct(4, 1.0);
  CHECK((H - H_direct).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(ground_energy(H) ==
        Catch::Approx(ground_energy(H_direct)).margin(1e-10));
}

TEST_CASE("spectral_norm_power") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = -3.0;
  CHECK(spectral_norm_power(D) == Catch::Approx(3.0).margin(1e-6));
  CHECK(spectral_norm_power(Eigen::MatrixXcd::Zero(4, 4)) == 0.0);
}

TEST_CASE("spectral_norm_power is a tight lower bound on gapped spectra") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    // Plant a spectrum with a distinct top: |lambda_1| = 2, rest in [-1, 1].
    const int dim = 64;
    Eigen::MatrixXcd G(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < dim; ++j) G(i, j) = {rng.gaussian(), rng.gaussian()};
    }
    const Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(G)
                                   .householderQ();
    Eigen::VectorXd evals(dim);
    evals(0) = 2.0;
    for (Index i = 1; i < dim; ++i) evals(i) = rng.uniform_pm1();
    const Eigen::MatrixXcd H = Q * evals.asDiagonal() * Q.adjoint();

    const double estimate = spectral_norm_power(H, 40);
    CHECK(estimate <= 2.0 + 1e-9);
    CHECK(estimate >= 0.999 * 2.0);
    // Norm ordering: spectral estimate never exceeds the Frobenius norm.
    CHECK(estimate <= H.norm() + 1e-9);
  }
}
