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
#include <string>
#include <string_view>

#include "paulikron/errors.hpp"

namespace paulikron {

/// An n-qubit Pauli string, stored as a base-4 integer with digit map
/// I=0, X=1, Y=2, Z=3 and qubit 0 (the leftmost character) as the most
/// significant digit.
class PauliString {
 public:
  static constexpr std::uint32_t kMaxQubits = 31;  // keeps 4^n inside 64 bits

  PauliString(std::uint32_t n, std::uint64_t code) : n_(n), code_(code) {
    if (n == 0 || n > kMaxQubits) {
      throw DomainError("qubit count must be in [1, " +
                        std::to_string(kMaxQubits) + "], got " +
                        std::to_string(n));
    }
    if (n < kMaxQubits && code >= (std::uint64_t{1} << (2 * n))) {
      throw DomainError("Pauli code out of range for " + std::to_string(n) +
                        " qubits");
    }
  }

  static PauliString identity(std::uint32_t n) { return PauliString(n, 0); }

  std::uint32_t qubits() const { return n_; }
  std::uint64_t code() const { return code_; }
  bool is_identity() const { return code_ == 0; }

  /// Base-4 digit for qubit q (0=I, 1=X, 2=Y, 3=Z).
  std::uint32_t digit(std::uint32_t q) const {
    return static_cast<std::uint32_t>((code_ >> (2 * (n_ - 1 - q))) & 3u);
  }

  char letter(std::uint32_t q) const { return "IXYZ"[digit(q)]; }

  std::string str() const {
    std::string out(n_, 'I');
    for (std::uint32_t q = 0; q < n_; ++q) out[q] = letter(q);
    return out;
  }

  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::uint32_t n_;
  std::uint64_t code_;
};

/// Parses a Pauli string of exactly n letters from {I,X,Y,Z}.
inline PauliString parse_pauli_string(std::string_view text, std::uint32_t n) {
  if (text.size() != n) {
    throw LengthMismatchError("expected " + std::to_string(n) +
                              " letters, got " + std::to_string(text.size()));
  }
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::uint64_t d;
    switch (text[i]) {
      case 'I': d = 0; break;
      case 'X': d = 1; break;
      case 'Y': d = 2; break;
      case 'Z': d = 3; break;
      default: throw InvalidLetterError(text[i], i);
    }
    code = (code << 2) | d;
  }
  return PauliString(n, code);
}

/// A real-weighted sum of n-qubit Pauli strings. Terms are keyed by the
/// canonical base-4 encoding; duplicate insertions accumulate and exact
/// zeros are erased, so the map never stores an explicit zero.
class PauliSum {
 public:
  using TermMap = std::map<std::uint64_t, double>;

  explicit PauliSum(std::uint32_t n) : n_(n) {
    if (n == 0 || n > PauliString::kMaxQubits) {
      throw DomainError("qubit count must be in [1, " +
                        std::to_string(PauliString::kMaxQubits) + "]");
    }
  }

  std::uint32_t qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  void add(const PauliString& p, double c) {
    if (p.qubits() != n_) {
      throw QubitCountMismatchError("term has " + std::to_string(p.qubits()) +
                                    " qubits, sum has " + std::to_string(n_));
    }
    add_code(p.code(), c);
  }

  void add_code(std::uint64_t code, double c) {
    const auto [it, inserted] = terms_.try_emplace(code, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    } else if (c == 0.0) {
      terms_.erase(it);
    }
  }

  double coeff(const PauliString& p) const {
    const auto it = terms_.find(p.code());
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Sum of squared coefficients over all stored terms.
  double coeff_frob_sq() const {
    double s = 0.0;
    for (const auto& [code, c] : terms_) s += c * c;
    return s;
  }

  friend bool operator==(const PauliSum& a, const PauliSum& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  std::uint32_t n_;
  TermMap terms_;
};

/// The identity offset c_0 together with the traceless remainder.
struct TracelessSplit {
  double identity_coeff = 0.0;
  PauliSum traceless;
};

/// Removes the all-identity term: h == identity_coeff * I + traceless.
inline TracelessSplit split_identity(const PauliSum& h) {
  TracelessSplit out{0.0, h};
  const auto it = out.traceless.terms().find(0);
  if (it != out.traceless.terms().end()) {
    out.identity_coeff = it->second;
    out.traceless.add_code(0, -it->second);
  }
  return out;
}

/// Keeps exactly the terms with |c| > tol (default 1e-12).
inline PauliSum filter_coefficients(const PauliSum& h, double tol = 1e-12) {
  if (tol < 0.0) throw DomainError("tolerance must be nonnegative");
  PauliSum out(h.qubits());
  for (const auto& [code, c] : h.terms()) {
    if (std::abs(c) > tol) out.add_code(code, c);
  }
  return out;
}

/// Frobenius norm of the traceless operator: sqrt(2^n * sum c_p^2).
inline double traceless_frobenius_norm(const TracelessSplit& split) {
  const double dim = std::ldexp(1.0, static_cast<int>(split.traceless.qubits()));
  return std::sqrt(dim * split.traceless.coeff_frob_sq());
}

/// Termwise a - b with exact-zero cleanup.
inline PauliSum subtract(const PauliSum& a, const PauliSum& b) {
  if (a.qubits() != b.qubits()) {
    throw QubitCountMismatchError("cannot subtract sums on " +
                                  std::to_string(a.qubits()) + " and " +
                                  std::to_string(b.qubits()) + " qubits");
  }
  PauliSum out = a;
  for (const auto& [code, c] : b.terms()) out.add_code(code, -c);
  return out;
}

}  // namespace paulikron
