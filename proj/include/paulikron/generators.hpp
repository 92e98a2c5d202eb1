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
#include <string>
#include <vector>

#include "paulikron/cut.hpp"
#include "paulikron/errors.hpp"
#include "paulikron/pauli.hpp"
#include "paulikron/rng.hpp"

namespace paulikron {

enum class SystemSource { file, generator };

struct SystemRecord {
  std::string system_id;
  std::uint32_t n = 0;
  SystemSource source = SystemSource::generator;
  PauliSum sum{1};
};

/// Open-chain transverse-field Ising model:
/// sum_{i<n-1} Z_i Z_{i+1} + g sum_i X_i.
inline SystemRecord generate_tfim(std::uint32_t n, double g) {
  if (n < 2) throw DomainError("tfim needs n >= 2");
  PauliSum sum(n);
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    std::string s(n, 'I');
    s[i] = 'Z';
    s[i + 1] = 'Z';
    sum.add(parse_pauli_string(s, n), 1.0);
  }
  if (g != 0.0) {
    for (std::uint32_t i = 0; i < n; ++i) {
      std::string s(n, 'I');
      s[i] = 'X';
      sum.add(parse_pauli_string(s, n), g);
    }
  }
  return {"tfim_n" + std::to_string(n) + "_g" + std::to_string(g), n,
          SystemSource::generator, std::move(sum)};
}

/// Random sparse Pauli sum: `terms` distinct non-identity strings with
/// log-uniform magnitudes in [0.01, 1] and random signs.
inline SystemRecord generate_random_sparse(std::uint32_t n, int terms,
                                           std::uint64_t seed) {
  if (terms < 1) throw DomainError("need at least one term");
  Rng rng(seed);
  PauliSum sum(n);
  const std::uint64_t space = std::uint64_t{1} << (2 * n);
  if (static_cast<std::uint64_t>(terms) > space - 1) {
    throw DomainError("only " + std::to_string(space - 1) +
                      " non-identity strings exist on " + std::to_string(n) +
                      " qubits");
  }
  while (sum.size() < static_cast<std::size_t>(terms)) {
    const std::uint64_t code = rng.next_u64() % space;
    if (code == 0 || sum.terms().count(code)) continue;
    const double magnitude = std::pow(10.0, -2.0 * rng.uniform01());
    sum.add_code(code, rng.uniform01() < 0.5 ? magnitude : -magnitude);
  }
  return {"random_n" + std::to_string(n) + "_m" + std::to_string(terms) +
              "_s" + std::to_string(seed),
          n, SystemSource::generator, std::move(sum)};
}

struct PlantedSystem {
  SystemRecord record;
  Bipartition cut;
  std::vector<double> sigmas;  // planted singular values, nonincreasing
};

/// Plants C = sum_r sigma_r u_r v_r^T with sigma_r = scale * decay^{r-1}
/// and seeded orthonormal u_r, v_r supported away from the identity
/// row/column, then decodes C into a traceless Pauli sum. The planted
/// sigmas are the exact singular values of the reshaped system.
inline PlantedSystem generate_planted(std::uint32_t n, std::uint32_t n_a,
                                      int rank, double decay,
                                      std::uint64_t seed, double scale = 1.0) {
  const Bipartition cut = make_cut(n, n_a);
  if (!(decay > 0.0 && decay <= 1.0)) throw DomainError("decay must be in (0,1]");
  const Index min_dim = std::min(cut.rows(), cut.cols());
  if (rank < 1 || static_cast<Index>(rank) > min_dim - 1) {
    throw InvalidCutError("planted rank must fit the non-identity subspace");
  }

  Rng rng(seed);
  // Orthonormal vectors with entry 0 pinned to zero, via modified
  // Gram-Schmidt on seeded Gaussian draws.
  const auto draw_basis = [&rng](Index dim, int count) {
    std::vector<std::vector<double>> basis;
    basis.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(basis.size()) < count) {
      std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
      for (Index i = 1; i < dim; ++i) {
        x[static_cast<std::size_t>(i)] = rng.gaussian();
      }
      for (const auto& prev : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * prev[i];
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot * prev[i];
      }
      double nrm = 0.0;
      for (double v : x) nrm += v * v;
      nrm = std::sqrt(nrm);
      if (nrm < 1e-8) continue;  // re-draw a degenerate direction
      for (double& v : x) v /= nrm;
      basis.push_back(std::move(x));
    }
    return basis;
  };

  const auto us = draw_basis(cut.rows(), rank);
  const auto vs = draw_basis(cut.cols(), rank);

  PlantedSystem out;
  out.cut = cut;
  PauliSum sum(n);
  const std::uint32_t shift = 2 * cut.n_b;
  for (int r = 0; r < rank; ++r) {
    const double sigma = scale * std::pow(decay, r);
    out.sigmas.push_back(sigma);
    const auto& u = us[static_cast<std::size_t>(r)];
    const auto& v = vs[static_cast<std::size_t>(r)];
    for (std::size_t a = 0; a < u.size(); ++a) {
      if (u[a] == 0.0) continue;
      const double ua = sigma * u[a];
      for (std::size_t b = 0; b < v.size(); ++b) {
        if (v[b] == 0.0) continue;
        sum.add_code((static_cast<std::uint64_t>(a) << shift) |
                         static_cast<std::uint64_t>(b),
                     ua * v[b]);
      }
    }
  }
  out.record = {"planted_n" + std::to_string(n) + "_na" + std::to_string(n_a) +
                    "_r" + std::to_string(rank) + "_s" + std::to_string(seed),
                n, SystemSource::generator, std::move(sum)};
  return out;
}

}  // namespace paulikron
