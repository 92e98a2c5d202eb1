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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paulikron {

/// Base class for all paulikron exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct InvalidLetterError : Error {
  InvalidLetterError(char letter, std::size_t position)
      : Error("invalid Pauli letter '" + std::string(1, letter) +
              "' at position " + std::to_string(position)),
        position(position) {}
  std::size_t position;
};

struct QubitCountMismatchError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct InvalidCutError : Error {
  using Error::Error;
};

struct ZeroMatrixError : Error {
  using Error::Error;
};

struct RankOutOfRangeError : Error {
  using Error::Error;
};

/// Thrown when a dense-workspace request exceeds one of the configured
/// guard limits; `limit` names the violated guard ("max_elements",
/// "max_side" or "max_qubits_operator").
struct GuardExceededError : Error {
  GuardExceededError(std::string limit_name, const std::string& detail)
      : Error("guard exceeded (" + limit_name + "): " + detail),
        limit(std::move(limit_name)) {}
  std::string limit;
};

struct NotHermitianError : Error {
  using Error::Error;
};

struct NumericalFailureError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct ZeroBoundError : Error {
  using Error::Error;
};

struct UnnormalizedStateError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::size_t line_number, const std::string& reason)
      : Error("parse error at line " + std::to_string(line_number) + ": " +
              reason),
        line(line_number) {}
  std::size_t line;
};

struct EmptySystemError : Error {
  using Error::Error;
};

struct OverflowError : Error {
  using Error::Error;
};

struct DivisionByZeroError : Error {
  using Error::Error;
};

struct BudgetExhaustedError : Error {
  using Error::Error;
};

}  // namespace paulikron
