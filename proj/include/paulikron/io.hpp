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

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "paulikron/errors.hpp"
#include "paulikron/generators.hpp"
#include "paulikron/pauli.hpp"

namespace paulikron {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Text Hamiltonian format:
///   # qubits: <n>
///   <PAULI_STRING> <coefficient>
/// '#' lines are comments, whitespace-delimited, decimal or scientific
/// coefficients. Duplicate strings accumulate; the configured tolerance
/// filter is applied after parsing.
inline SystemRecord read_hamiltonian(const std::filesystem::path& path,
                                     double tol = 1e-12) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::uint32_t n = 0;
  bool have_n = false;
  bool have_terms = false;
  PauliSum sum(1);

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      std::string_view rest = detail::trim(s.substr(1));
      if (rest.rfind("qubits:", 0) == 0) {
        if (have_n) throw ParseError(line_no, "duplicate qubits header");
        rest = detail::trim(rest.substr(7));
        unsigned long parsed = 0;
        const auto [ptr, ec] =
            std::from_chars(rest.data(), rest.data() + rest.size(), parsed);
        if (ec != std::errc{} || ptr != rest.data() + rest.size() ||
            parsed == 0 || parsed > PauliString::kMaxQubits) {
          throw ParseError(line_no, "invalid qubit count");
        }
        n = static_cast<std::uint32_t>(parsed);
        have_n = true;
        sum = PauliSum(n);
      }
      continue;
    }
    if (!have_n) throw ParseError(line_no, "term before '# qubits:' header");

    std::istringstream fields{std::string(s)};
    std::string pauli_text, coeff_text, extra;
    if (!(fields >> pauli_text >> coeff_text)) {
      throw ParseError(line_no, "expected '<PAULI_STRING> <coefficient>'");
    }
    if (fields >> extra) throw ParseError(line_no, "trailing field: " + extra);

    PauliString p = PauliString::identity(n);
    try {
      p = parse_pauli_string(pauli_text, n);
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    double c = 0.0;
    const auto [ptr, ec] = std::from_chars(
        coeff_text.data(), coeff_text.data() + coeff_text.size(), c);
    if (ec != std::errc{} || ptr != coeff_text.data() + coeff_text.size()) {
      throw ParseError(line_no, "invalid coefficient '" + coeff_text + "'");
    }
    sum.add(p, c);
    have_terms = true;
  }
  if (!have_n) throw ParseError(line_no + 1, "missing '# qubits:' header");
  if (!have_terms) throw EmptySystemError("no terms in " + path.string());

  return {path.stem().string(), n, SystemSource::file,
          filter_coefficients(sum, tol)};
}

/// Writes the text format with full double precision, terms in canonical
/// code order.
inline void write_hamiltonian(const PauliSum& sum,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# qubits: " << sum.qubits() << "\n";
  char buf[64];
  for (const auto& [code, c] : sum.terms()) {
    std::snprintf(buf, sizeof(buf), "%.17g", c);
    out << PauliString(sum.qubits(), code).str() << " " << buf << "\n";
  }
}

}  // namespace paulikron
