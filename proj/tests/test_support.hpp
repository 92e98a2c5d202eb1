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
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "paulikron/cut.hpp"
#include "paulikron/dense_oracle.hpp"
#include "paulikron/generators.hpp"
#include "paulikron/pauli.hpp"

namespace paulikron::testing {

inline PauliSum sum_of(std::uint32_t n,
                       std::initializer_list<std::pair<const char*, double>>
                           terms) {
  PauliSum out(n);
  for (const auto& [text, c] : terms) out.add(parse_pauli_string(text, n), c);
  return out;
}

/// Independent reshape oracle: splits each term's string textually and
/// re-encodes the halves, bypassing the code arithmetic of cut.hpp.
inline Eigen::MatrixXd dense_reshape_by_strings(const PauliSum& traceless,
                                                const Bipartition& cut) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(cut.rows(), cut.cols());
  for (const auto& [code, c] : traceless.terms()) {
    const std::string s = PauliString(cut.n, code).str();
    const std::uint64_t a =
        parse_pauli_string(s.substr(0, cut.n_a), cut.n_a).code();
    const std::uint64_t b = parse_pauli_string(s.substr(cut.n_a), cut.n_b).code();
    M(static_cast<Index>(a), static_cast<Index>(b)) += c;
  }
  return M;
}

/// Random sparse system whose reshaped spectrum has no unresolved
/// near-degenerate adjacent pair (ratio in (0.97, 1 - 1e-9)). Power
/// iteration with the 300-sweep budget cannot split such clusters to the
/// 1e-8 oracle-equivalence tolerance; exact ties are harmless and kept.
inline SystemRecord separated_random_system(std::uint32_t n, int terms,
                                            std::uint64_t seed,
                                            const Bipartition& cut) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    SystemRecord rec = generate_random_sparse(n, terms, seed + 1000 * attempt);
    const auto C = reshape(split_identity(rec.sum).traceless, cut);
    const auto spectrum = dense_svd_spectrum(dense_coeff_matrix(C));
    bool ok = true;
    for (std::size_t i = 0; i + 1 < spectrum.size(); ++i) {
      if (spectrum[i + 1] <= 1e-12 * spectrum[0]) break;
      const double ratio = spectrum[i + 1] / spectrum[i];
      if (ratio > 0.97 && ratio < 1.0 - 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return rec;
  }
}

inline double frobenius(const Eigen::MatrixXcd& M) { return M.norm(); }

}  // namespace paulikron::testing
