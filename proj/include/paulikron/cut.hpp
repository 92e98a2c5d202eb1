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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paulikron/errors.hpp"
#include "paulikron/pauli.hpp"

namespace paulikron {

using Index = std::int64_t;

/// Contiguous prefix bipartition A|B: part A is the first n_a string
/// positions. The reshaped coefficient matrix has 4^{n_a} rows and
/// 4^{n_b} columns; n_a, n_b <= 15 keeps both inside 32-bit index range.
struct Bipartition {
  std::uint32_t n = 0;
  std::uint32_t n_a = 0;
  std::uint32_t n_b = 0;

  Index rows() const { return Index{1} << (2 * n_a); }
  Index cols() const { return Index{1} << (2 * n_b); }
};

inline Bipartition make_cut(std::uint32_t n,
                            std::optional<std::uint32_t> n_a = std::nullopt) {
  if (n < 2) throw InvalidCutError("bipartition needs at least 2 qubits");
  const std::uint32_t a = n_a.value_or(n / 2);
  if (a < 1 || a >= n) {
    throw InvalidCutError("n_a=" + std::to_string(a) +
                          " outside [1, " + std::to_string(n - 1) + "]");
  }
  const std::uint32_t b = n - a;
  if (a > 15 || b > 15) {
    throw InvalidCutError("part sizes n_a=" + std::to_string(a) + ", n_b=" +
                          std::to_string(b) + " exceed the 15-qubit limit");
  }
  return Bipartition{n, a, b};
}

/// The cut-dependent coefficient matrix, stored as (row, col, value)
/// triples sorted by (row, col). Never densified here; dense_oracle owns
/// materialization.
class SparseCoeffMatrix {
 public:
  struct Triple {
    Index a;
    Index b;
    double c;
  };

  SparseCoeffMatrix(Bipartition cut, std::vector<Triple> triples)
      : cut_(cut) {
    std::sort(triples.begin(), triples.end(),
              [](const Triple& x, const Triple& y) {
                return x.a != y.a ? x.a < y.a : x.b < y.b;
              });
    // Merge duplicate (a,b) pairs and drop exact zeros.
    triples_.reserve(triples.size());
    for (const auto& t : triples) {
      if (t.a < 0 || t.a >= cut_.rows() || t.b < 0 || t.b >= cut_.cols()) {
        throw DimensionMismatchError("triple index outside cut dims");
      }
      if (!triples_.empty() && triples_.back().a == t.a &&
          triples_.back().b == t.b) {
        triples_.back().c += t.c;
      } else {
        triples_.push_back(t);
      }
    }
    std::erase_if(triples_, [](const Triple& t) { return t.c == 0.0; });
    frob_sq_ = 0.0;
    for (const auto& t : triples_) frob_sq_ += t.c * t.c;
  }

  const Bipartition& cut() const { return cut_; }
  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t nnz() const { return triples_.size(); }
  double frob_sq() const { return frob_sq_; }
  Index rows() const { return cut_.rows(); }
  Index cols() const { return cut_.cols(); }

  /// y = C x, cost linear in the number of triples.
  void matvec(const std::vector<double>& x, std::vector<double>& y) const {
    if (static_cast<Index>(x.size()) != cols()) {
      throw DimensionMismatchError("matvec input length " +
                                   std::to_string(x.size()) + ", expected " +
                                   std::to_string(cols()));
    }
    y.assign(static_cast<std::size_t>(rows()), 0.0);
    for (const auto& t : triples_) {
      y[static_cast<std::size_t>(t.a)] += t.c * x[static_cast<std::size_t>(t.b)];
    }
  }

  /// y = C^T z.
  void rmatvec(const std::vector<double>& z, std::vector<double>& y) const {
    if (static_cast<Index>(z.size()) != rows()) {
      throw DimensionMismatchError("rmatvec input length " +
                                   std::to_string(z.size()) + ", expected " +
                                   std::to_string(rows()));
    }
    y.assign(static_cast<std::size_t>(cols()), 0.0);
    for (const auto& t : triples_) {
      y[static_cast<std::size_t>(t.b)] += t.c * z[static_cast<std::size_t>(t.a)];
    }
  }

 private:
  Bipartition cut_;
  std::vector<Triple> triples_;
  double frob_sq_ = 0.0;
};

/// Reshapes a traceless Pauli sum into the cut-dependent coefficient
/// matrix: the term P_a (x) P_b with coefficient c becomes the triple
/// (encode(P_a), encode(P_b), c).
inline SparseCoeffMatrix reshape(const PauliSum& traceless,
                                 const Bipartition& cut) {
  if (traceless.qubits() != cut.n) {
    throw QubitCountMismatchError("sum has " +
                                  std::to_string(traceless.qubits()) +
                                  " qubits, cut expects " +
                                  std::to_string(cut.n));
  }
  std::vector<SparseCoeffMatrix::Triple> triples;
  triples.reserve(traceless.size());
  const std::uint32_t shift = 2 * cut.n_b;
  const std::uint64_t mask_b = (std::uint64_t{1} << shift) - 1;
  for (const auto& [code, c] : traceless.terms()) {
    triples.push_back({static_cast<Index>(code >> shift),
                       static_cast<Index>(code & mask_b), c});
  }
  return SparseCoeffMatrix(cut, std::move(triples));
}

/// Inverse of reshape: rebuilds the traceless sum from triples.
inline PauliSum unshape(const SparseCoeffMatrix& C) {
  PauliSum out(C.cut().n);
  const std::uint32_t shift = 2 * C.cut().n_b;
  for (const auto& t : C.triples()) {
    out.add_code((static_cast<std::uint64_t>(t.a) << shift) |
                     static_cast<std::uint64_t>(t.b),
                 t.c);
  }
  return out;
}

}  // namespace paulikron
