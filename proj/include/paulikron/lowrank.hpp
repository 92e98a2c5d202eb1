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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paulikron/cut.hpp"
#include "paulikron/errors.hpp"
#include "paulikron/pauli.hpp"
#include "paulikron/rng.hpp"

namespace paulikron {

/// Entries of decoded factors below this magnitude are not emitted.
inline constexpr double kEmissionTol = 1e-14;

struct PowerIterOptions {
  int max_iters = 300;
  double tol = 1e-10;
  std::uint64_t seed = 0;

  /// Rank-1 screening profile.
  static PowerIterOptions screening() { return {200, 1e-8, 0}; }
  /// Full rank-scan profile (the default).
  static PowerIterOptions rank_scan() { return {300, 1e-10, 0}; }
};

struct SingularTriplet {
  double sigma = 0.0;
  std::vector<double> u;  // unit, length rows
  std::vector<double> v;  // unit, length cols
  int iters_used = 0;
  bool converged = false;
};

/// base - sum_r sigma_r u_r v_r^T, applied implicitly. Matvec cost stays
/// O(nnz + r*(rows+cols)); the deflated matrix is never re-materialized.
class DeflatedMatrix {
 public:
  explicit DeflatedMatrix(const SparseCoeffMatrix& base) : base_(&base) {}

  Index rows() const { return base_->rows(); }
  Index cols() const { return base_->cols(); }
  const SparseCoeffMatrix& base() const { return *base_; }
  const std::vector<SingularTriplet>& removed() const { return removed_; }

  void deflate(SingularTriplet triplet) { removed_.push_back(std::move(triplet)); }

  void matvec(const std::vector<double>& x, std::vector<double>& y) const {
    base_->matvec(x, y);
    for (const auto& t : removed_) {
      double dot = 0.0;
      for (std::size_t j = 0; j < t.v.size(); ++j) dot += t.v[j] * x[j];
      const double scale = t.sigma * dot;
      for (std::size_t i = 0; i < t.u.size(); ++i) y[i] -= scale * t.u[i];
    }
  }

  void rmatvec(const std::vector<double>& z, std::vector<double>& y) const {
    base_->rmatvec(z, y);
    for (const auto& t : removed_) {
      double dot = 0.0;
      for (std::size_t i = 0; i < t.u.size(); ++i) dot += t.u[i] * z[i];
      const double scale = t.sigma * dot;
      for (std::size_t j = 0; j < t.v.size(); ++j) y[j] -= scale * t.v[j];
    }
  }

 private:
  const SparseCoeffMatrix* base_;
  std::vector<SingularTriplet> removed_;
};

template <typename Op>
concept CoeffOperator = requires(const Op& op, const std::vector<double>& x,
                                 std::vector<double>& y) {
  { op.rows() } -> std::convertible_to<Index>;
  { op.cols() } -> std::convertible_to<Index>;
  op.matvec(x, y);
  op.rmatvec(x, y);
};

namespace detail {

inline double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline void scale(std::vector<double>& x, double factor) {
  for (double& v : x) v *= factor;
}

/// Sign convention: the largest-magnitude entry of u is positive.
inline void fix_sign(std::vector<double>& u, std::vector<double>& v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double mag = std::abs(u[i]);
    if (mag > best) {
      best = mag;
      arg = i;
    }
  }
  if (!u.empty() && u[arg] < 0.0) {
    for (double& x : u) x = -x;
    for (double& x : v) x = -x;
  }
}

}  // namespace detail

/// Leading singular triplet by power iteration on C^T C. The start vector
/// is seeded random on the smaller dimension side and pushed through one
/// application of C / C^T so the iterate begins inside the row space.
/// Convergence: relative change of the sigma estimate between sweeps <= tol.
template <CoeffOperator Op>
SingularTriplet top_singular_triplet(const Op& M, const PowerIterOptions& opts) {
  const Index rows = M.rows();
  const Index cols = M.cols();
  Rng rng(opts.seed);

  std::vector<double> v(static_cast<std::size_t>(cols));
  std::vector<double> w(static_cast<std::size_t>(rows));
  bool started = false;
  for (int attempt = 0; attempt < 3 && !started; ++attempt) {
    if (rows <= cols) {
      std::vector<double> z(static_cast<std::size_t>(rows));
      for (double& x : z) x = rng.uniform_pm1();
      M.rmatvec(z, v);
    } else {
      std::vector<double> g(static_cast<std::size_t>(cols));
      for (double& x : g) x = rng.uniform_pm1();
      M.matvec(g, w);
      M.rmatvec(w, v);
    }
    const double nrm = detail::norm2(v);
    if (nrm > 0.0) {
      detail::scale(v, 1.0 / nrm);
      started = true;
    }
  }
  if (!started) throw ZeroMatrixError("operator is numerically zero");

  SingularTriplet out;
  double sigma_prev = -1.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    M.matvec(v, w);
    const double sigma = detail::norm2(w);
    if (sigma == 0.0) throw ZeroMatrixError("operator is numerically zero");
    out.sigma = sigma;
    out.iters_used = it;
    if (sigma_prev >= 0.0 &&
        std::abs(sigma - sigma_prev) <= opts.tol * sigma) {
      out.converged = true;
      break;
    }
    sigma_prev = sigma;
    detail::scale(w, 1.0 / sigma);
    M.rmatvec(w, v);
    const double vn = detail::norm2(v);
    if (vn == 0.0) throw ZeroMatrixError("operator is numerically zero");
    detail::scale(v, 1.0 / vn);
  }

  // Finalize u = Cv / sigma from the last accepted v.
  M.matvec(v, w);
  out.sigma = detail::norm2(w);
  if (out.sigma == 0.0) throw ZeroMatrixError("operator is numerically zero");
  detail::scale(w, 1.0 / out.sigma);
  out.u = std::move(w);
  out.v = std::move(v);
  detail::fix_sign(out.u, out.v);
  return out;
}

/// First-hit entry for one target tau: the smallest k with rho_k >= tau,
/// or censored at k_max when the scan budget ran out first.
struct FirstHit {
  int k = 0;
  bool censored = false;
};

struct RankProfile {
  Bipartition cut;
  std::vector<double> sigmas;     // sigma_1..sigma_k
  std::vector<double> rho;        // cumulative captured energy
  std::vector<double> delta_rho;  // rho_k - rho_{k-1}
  double frob_sq_total = 0.0;
  int k_max = 0;
  std::map<double, FirstHit> first_hits;
};

struct KroneckerFactor {
  double weight = 0.0;  // sigma_r
  PauliSum a;           // subsystem factor on n_a qubits
  PauliSum b;           // subsystem factor on n_b qubits
};

struct KroneckerFactorization {
  Bipartition cut;
  double identity_coeff = 0.0;
  std::vector<SingularTriplet> triplets;
  std::vector<KroneckerFactor> factors;

  int rank() const { return static_cast<int>(triplets.size()); }
};

namespace detail {

inline PauliSum decode_factor(const std::vector<double>& vec, std::uint32_t n) {
  PauliSum out(n);
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (std::abs(vec[i]) > kEmissionTol) {
      out.add_code(static_cast<std::uint64_t>(i), vec[i]);
    }
  }
  return out;
}

}  // namespace detail

/// Extracts up to k_max leading triplets with implicit deflation. Captured
/// mass is accounted exactly (||C^{(r)}||^2 = ||C^{(r-1)}||^2 - sigma_r^2),
/// so rho_k is nondecreasing by construction. The scan stops early when the
/// residual mass falls below 1e-24 * frob_sq_total and pads the remaining
/// ranks with rho = 1.
inline std::pair<RankProfile, KroneckerFactorization> rank_scan(
    const SparseCoeffMatrix& C, int k_max, const std::vector<double>& targets,
    const PowerIterOptions& opts = PowerIterOptions::rank_scan()) {
  const Index min_dim = std::min(C.rows(), C.cols());
  if (k_max < 1 || static_cast<Index>(k_max) > min_dim) {
    throw RankOutOfRangeError("k_max=" + std::to_string(k_max) +
                              " outside [1, " + std::to_string(min_dim) + "]");
  }
  for (double tau : targets) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw DomainError("targets must lie in (0,1)");
    }
  }

  if (C.nnz() == 0) {
    throw ZeroMatrixError("coefficient matrix of an empty traceless sum");
  }

  RankProfile profile;
  profile.cut = C.cut();
  profile.frob_sq_total = C.frob_sq();
  profile.k_max = k_max;

  KroneckerFactorization fact;
  fact.cut = C.cut();

  DeflatedMatrix deflated(C);
  double captured = 0.0;
  const double total = profile.frob_sq_total;
  bool exhausted = false;
  for (int k = 1; k <= k_max; ++k) {
    if (!exhausted && total - captured <= 1e-24 * total) exhausted = true;
    if (exhausted) {
      profile.sigmas.push_back(0.0);
      profile.rho.push_back(1.0);
      profile.delta_rho.push_back(k == 1 ? 1.0
                                         : 1.0 - profile.rho[k - 2]);
      continue;
    }
    PowerIterOptions step_opts = opts;
    step_opts.seed = opts.seed + static_cast<std::uint64_t>(k - 1);
    SingularTriplet t = top_singular_triplet(deflated, step_opts);
    captured = std::min(captured + t.sigma * t.sigma, total);
    const double rho_k = total > 0.0 ? captured / total : 1.0;
    profile.sigmas.push_back(t.sigma);
    profile.rho.push_back(std::min(rho_k, 1.0));
    profile.delta_rho.push_back(profile.rho.back() -
                                (k == 1 ? 0.0 : profile.rho[k - 2]));
    fact.factors.push_back({t.sigma, detail::decode_factor(t.u, C.cut().n_a),
                            detail::decode_factor(t.v, C.cut().n_b)});
    deflated.deflate(t);
    fact.triplets.push_back(deflated.removed().back());
  }

  for (double tau : targets) {
    FirstHit hit{k_max, true};
    for (int k = 1; k <= k_max; ++k) {
      if (profile.rho[k - 1] >= tau) {
        hit = {k, false};
        break;
      }
    }
    profile.first_hits[tau] = hit;
  }
  return {std::move(profile), std::move(fact)};
}

/// Rebuilds the rank-k operator c_0 I + sum_{r<=k} sigma_r sum_{a,b}
/// u_r[a] v_r[b] P_a (x) P_b, dropping entries with |sigma u v| <= 1e-14.
inline PauliSum factors_to_pauli(const KroneckerFactorization& fact, int k) {
  if (k < 0 || k > fact.rank()) {
    throw RankOutOfRangeError("k=" + std::to_string(k) + " outside [0, " +
                              std::to_string(fact.rank()) + "]");
  }
  PauliSum out(fact.cut.n);
  out.add_code(0, fact.identity_coeff);
  const std::uint32_t shift = 2 * fact.cut.n_b;
  for (int r = 0; r < k; ++r) {
    const auto& t = fact.triplets[static_cast<std::size_t>(r)];
    for (std::size_t a = 0; a < t.u.size(); ++a) {
      if (t.u[a] == 0.0) continue;
      const double ua = t.sigma * t.u[a];
      for (std::size_t b = 0; b < t.v.size(); ++b) {
        const double c = ua * t.v[b];
        if (std::abs(c) > kEmissionTol) {
          out.add_code((static_cast<std::uint64_t>(a) << shift) |
                           static_cast<std::uint64_t>(b),
                       c);
        }
      }
    }
  }
  return out;
}

/// ||C - C_k||_F via the exact residual identity ||C||_F sqrt(1 - rho_k).
inline double residual_norm(const RankProfile& profile, int k) {
  if (k < 0 || k > static_cast<int>(profile.rho.size())) {
    throw RankOutOfRangeError("k=" + std::to_string(k) + " outside [0, " +
                              std::to_string(profile.rho.size()) + "]");
  }
  const double rho_k = k == 0 ? 0.0 : profile.rho[static_cast<std::size_t>(k - 1)];
  if (rho_k >= 1.0 - 1e-15) return 0.0;
  return std::sqrt(profile.frob_sq_total * (1.0 - rho_k));
}

}  // namespace paulikron
