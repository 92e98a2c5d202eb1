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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "paulikron/cut.hpp"
#include "paulikron/dense_oracle.hpp"
#include "paulikron/errors.hpp"
#include "paulikron/pauli.hpp"
#include "paulikron/rng.hpp"

namespace paulikron {

// Full-space rank-escalation toward chemical accuracy. Unlike the sparse
// scan, factors live in the complete subsystem Pauli spaces, so the fit may
// introduce compensating pairs outside the input's sparse support. The
// residual workspace is dense and guard-limited.

struct AdamConfig {
  double lr0 = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  int plateau_patience = 25;        // steps without relative improvement
  double plateau_rel_improve = 1e-12;
  double decay_factor = 0.5;
  double min_lr = 1e-4;
};

struct ChemConfig {
  double lambda_f = 1.0;
  double lambda_spec = 0.05;
  double lambda_tr = 1e-4;
  int steps_per_rank = 300;
  int max_rank = 512;
  int spec_update_interval = 5;
  std::uint64_t seed = 0;
  double epsilon = 1.6e-3;
  AdamConfig adam;
};

/// One rank-1 factor pair; the weight alpha_r is absorbed into the factor
/// scales and reported as ||a_r|| * ||b_r||.
struct FactorPair {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

struct FactorParams {
  std::vector<FactorPair> factors;
  std::vector<FactorPair> reference;  // theta_0, snapshotted per stage

  double reported_weight(std::size_t r) const {
    return factors[r].a.norm() * factors[r].b.norm();
  }
};

/// Frozen top singular pair of the residual; held constant between
/// spectral refreshes so the surrogate loss stays smooth.
struct FrozenSpectral {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

struct LossTerms {
  double total = 0.0;
  double frob = 0.0;
  double spec = 0.0;
  double tr = 0.0;
};

struct StageRecord {
  int rank = 0;
  LossTerms final_loss;
  double bound_chem = 0.0;  // sqrt(2^n) ||D_R||_F, recomputed exactly
  double rho_tl = 0.0;      // 1 - ||D_R||_F^2 / ||C||_F^2
  double wall_ms = 0.0;
  int steps_used = 0;
};

struct ChemBoundaryTrace {
  std::vector<StageRecord> per_rank;
  std::optional<int> certified_rank;
  bool certified = false;
};

namespace detail {

inline Eigen::MatrixXd chem_residual(const Eigen::MatrixXd& C,
                                     const FactorParams& params) {
  Eigen::MatrixXd D = C;
  for (const auto& f : params.factors) {
    D.noalias() -= f.a * f.b.transpose();
  }
  return D;
}

/// Dense power iteration for the residual's top singular pair. Supports a
/// warm start so the per-refresh cost stays low once the direction has
/// settled.
inline void dense_top_singular(const Eigen::MatrixXd& D, double& sigma,
                               Eigen::VectorXd& u, Eigen::VectorXd& v,
                               Rng& rng, const Eigen::VectorXd* warm_v = nullptr,
                               double tol = 1e-9, int max_sweeps = 300) {
  const Index rows = D.rows();
  const Index cols = D.cols();
  if (warm_v != nullptr && warm_v->size() == cols && warm_v->norm() > 0.0) {
    v = warm_v->normalized();
  } else {
    v.resize(cols);
    for (Index i = 0; i < cols; ++i) v(i) = rng.uniform_pm1();
    const double nrm = v.norm();
    if (nrm == 0.0) {
      v.setZero();
      v(0) = 1.0;
    } else {
      v /= nrm;
    }
  }
  sigma = 0.0;
  u = Eigen::VectorXd::Zero(rows);
  double sigma_prev = -1.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Eigen::VectorXd w = D * v;
    sigma = w.norm();
    if (sigma == 0.0) {
      u.setZero();
      u(0) = 1.0;
      return;
    }
    u = w / sigma;
    if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= tol * sigma) break;
    sigma_prev = sigma;
    Eigen::VectorXd z = D.transpose() * u;
    const double zn = z.norm();
    if (zn == 0.0) break;
    v = z / zn;
  }
}

inline LossTerms loss_with_residual(const FactorParams& params,
                                    const Eigen::MatrixXd& D,
                                    const ChemConfig& cfg,
                                    const FrozenSpectral& frozen) {
  LossTerms out;
  out.frob = cfg.lambda_f * D.squaredNorm();
  const double sigma_hat = frozen.u.dot(D * frozen.v);
  out.spec = cfg.lambda_spec * 0.5 * sigma_hat * sigma_hat;
  double drift = 0.0;
  for (std::size_t r = 0; r < params.factors.size(); ++r) {
    drift += (params.factors[r].a - params.reference[r].a).squaredNorm();
    drift += (params.factors[r].b - params.reference[r].b).squaredNorm();
  }
  out.tr = cfg.lambda_tr * drift;
  out.total = out.frob + out.spec + out.tr;
  return out;
}

inline void gradient_with_residual(const FactorParams& params,
                                   const Eigen::MatrixXd& D,
                                   const ChemConfig& cfg,
                                   const FrozenSpectral& frozen,
                                   std::vector<FactorPair>& grad) {
  const double sigma_hat = frozen.u.dot(D * frozen.v);
  grad.resize(params.factors.size());
  for (std::size_t r = 0; r < params.factors.size(); ++r) {
    const auto& f = params.factors[r];
    const auto& f0 = params.reference[r];
    grad[r].a = -2.0 * cfg.lambda_f * (D * f.b) -
                cfg.lambda_spec * sigma_hat * frozen.v.dot(f.b) * frozen.u +
                2.0 * cfg.lambda_tr * (f.a - f0.a);
    grad[r].b = -2.0 * cfg.lambda_f * (D.transpose() * f.a) -
                cfg.lambda_spec * sigma_hat * frozen.u.dot(f.a) * frozen.v +
                2.0 * cfg.lambda_tr * (f.b - f0.b);
  }
}

}  // namespace detail

/// Mixed objective
///   lambda_f ||D_R||_F^2 + lambda_spec sigma_hat^2 / 2 + lambda_tr ||theta - theta_0||^2
/// with sigma_hat = u^T D_R v evaluated on the frozen pair.
inline LossTerms mixed_loss(const FactorParams& params, const Eigen::MatrixXd& C,
                            const ChemConfig& cfg,
                            const FrozenSpectral& frozen) {
  return detail::loss_with_residual(params, detail::chem_residual(C, params),
                                    cfg, frozen);
}

/// Analytic gradient of the surrogate objective; exact for the frozen
/// (u, v), which are treated as constants between refreshes.
inline std::vector<FactorPair> mixed_gradient(const FactorParams& params,
                                              const Eigen::MatrixXd& C,
                                              const ChemConfig& cfg,
                                              const FrozenSpectral& frozen) {
  std::vector<FactorPair> grad;
  detail::gradient_with_residual(params, detail::chem_residual(C, params), cfg,
                                 frozen, grad);
  return grad;
}

/// One rank stage: appends a residual-aligned factor, snapshots theta_0,
/// and runs Adam with plateau-triggered learning-rate decay. The stage
/// tracks the best exact bound seen at spectral-refresh instants and
/// restores that iterate on exit, and exits early as soon as the bound
/// certifies.
inline StageRecord optimize_rank_stage(FactorParams& params,
                                       const Eigen::MatrixXd& C,
                                       const ChemConfig& cfg, Rng& rng,
                                       double scale_sqrt_dim,
                                       double c_frob_sq) {
  if (static_cast<int>(params.factors.size()) >= cfg.max_rank) {
    throw BudgetExhaustedError("rank budget " + std::to_string(cfg.max_rank) +
                               " exhausted");
  }
  const auto t0 = std::chrono::steady_clock::now();

  Eigen::MatrixXd D = detail::chem_residual(C, params);
  double sigma;
  Eigen::VectorXd u, v;
  detail::dense_top_singular(D, sigma, u, v, rng);
  const double root = std::sqrt(sigma);
  params.factors.push_back({root * u, root * v});
  params.reference = params.factors;

  D.noalias() -= params.factors.back().a * params.factors.back().b.transpose();
  FrozenSpectral frozen;
  detail::dense_top_singular(D, sigma, frozen.u, frozen.v, rng, &v);

  StageRecord record;
  record.rank = static_cast<int>(params.factors.size());

  double best_bound = scale_sqrt_dim * D.norm();
  std::vector<FactorPair> best_factors = params.factors;
  bool certified = best_bound <= cfg.epsilon;

  // Adam state.
  std::vector<FactorPair> m(params.factors.size()), s(params.factors.size());
  for (std::size_t r = 0; r < params.factors.size(); ++r) {
    m[r].a = Eigen::VectorXd::Zero(params.factors[r].a.size());
    m[r].b = Eigen::VectorXd::Zero(params.factors[r].b.size());
    s[r] = m[r];
  }
  double lr = cfg.adam.lr0;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale_steps = 0;
  std::vector<FactorPair> grad;

  int step = 0;
  while (!certified && step < cfg.steps_per_rank) {
    ++step;
    detail::gradient_with_residual(params, D, cfg, frozen, grad);
    const double bc1 = 1.0 - std::pow(cfg.adam.beta1, step);
    const double bc2 = 1.0 - std::pow(cfg.adam.beta2, step);
    for (std::size_t r = 0; r < params.factors.size(); ++r) {
      m[r].a = cfg.adam.beta1 * m[r].a + (1.0 - cfg.adam.beta1) * grad[r].a;
      m[r].b = cfg.adam.beta1 * m[r].b + (1.0 - cfg.adam.beta1) * grad[r].b;
      s[r].a = cfg.adam.beta2 * s[r].a +
               (1.0 - cfg.adam.beta2) * grad[r].a.cwiseProduct(grad[r].a);
      s[r].b = cfg.adam.beta2 * s[r].b +
               (1.0 - cfg.adam.beta2) * grad[r].b.cwiseProduct(grad[r].b);
      params.factors[r].a.array() -=
          lr * (m[r].a.array() / bc1) /
          ((s[r].a.array() / bc2).sqrt() + cfg.adam.eps_hat);
      params.factors[r].b.array() -=
          lr * (m[r].b.array() / bc1) /
          ((s[r].b.array() / bc2).sqrt() + cfg.adam.eps_hat);
    }
    D = detail::chem_residual(C, params);

    const LossTerms loss = detail::loss_with_residual(params, D, cfg, frozen);
    if (!std::isfinite(best_loss) ||
        loss.total <
            best_loss - cfg.adam.plateau_rel_improve * std::abs(best_loss)) {
      best_loss = loss.total;
      stale_steps = 0;
    } else if (++stale_steps >= cfg.adam.plateau_patience) {
      lr = std::max(lr * cfg.adam.decay_factor, cfg.adam.min_lr);
      stale_steps = 0;
    }

    if (step % cfg.spec_update_interval == 0) {
      detail::dense_top_singular(D, sigma, frozen.u, frozen.v, rng, &frozen.v);
      const double bound = scale_sqrt_dim * D.norm();
      if (bound < best_bound) {
        best_bound = bound;
        best_factors = params.factors;
      }
      if (bound <= cfg.epsilon) certified = true;
    }
  }

  // Keep the best exact-bound iterate so stage-end bounds never regress.
  const double final_bound = scale_sqrt_dim * D.norm();
  if (final_bound < best_bound) {
    best_bound = final_bound;
  } else {
    params.factors = best_factors;
    D = detail::chem_residual(C, params);
  }

  record.steps_used = step;
  record.bound_chem = scale_sqrt_dim * D.norm();
  record.rho_tl =
      c_frob_sq > 0.0 ? 1.0 - D.squaredNorm() / c_frob_sq : 1.0;
  record.final_loss = detail::loss_with_residual(params, D, cfg, frozen);
  record.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return record;
}

/// Escalates rank until sqrt(2^n) ||C - C_hat_R||_F <= epsilon or the rank
/// budget runs out. The returned trace carries the full per-rank record
/// either way; `certified` reports which exit was taken.
inline ChemBoundaryTrace run_chem_boundary(const PauliSum& h,
                                           const Bipartition& cut,
                                           const ChemConfig& cfg = {},
                                           const DenseGuards& guards = {}) {
  const TracelessSplit split = split_identity(h);
  const Eigen::MatrixXd C =
      dense_coeff_matrix(reshape(split.traceless, cut), guards);
  const double scale_sqrt_dim = std::sqrt(std::ldexp(1.0, static_cast<int>(cut.n)));
  const double c_frob_sq = C.squaredNorm();

  ChemBoundaryTrace trace;
  FactorParams params;
  Rng rng(cfg.seed);
  for (int rank = 1; rank <= cfg.max_rank; ++rank) {
    trace.per_rank.push_back(
        optimize_rank_stage(params, C, cfg, rng, scale_sqrt_dim, c_frob_sq));
    if (trace.per_rank.back().bound_chem <= cfg.epsilon) {
      trace.certified = true;
      trace.certified_rank = rank;
      break;
    }
  }
  return trace;
}

}  // namespace paulikron
