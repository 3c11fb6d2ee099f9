// Copyright 2026 The fermigrad authors
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

#include <complex>
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fermigrad/error.hpp"

namespace fermigrad {

using Complex = std::complex<double>;

/** Coefficients with magnitude below this are dropped on canonicalization. */
inline constexpr double kCoeffEpsilon = 1e-12;

/** Single-qubit Pauli axes. Identity is represented by absence. */
enum class Axis : unsigned char { X = 0, Y = 1, Z = 2 };

char axis_char(Axis a);

/**
 * A tensor product of single-qubit Pauli operators.
 *
 * Factors are stored sorted by qubit index; qubits not listed carry the
 * identity. The empty product is the identity string.
 */
class PauliString {
 public:
  using Factor = std::pair<unsigned, Axis>;

  PauliString() = default;

  /** Builds from (qubit, axis) pairs; sorts and rejects duplicate qubits. */
  explicit PauliString(std::vector<Factor> factors);

  static PauliString single(unsigned qubit, Axis axis);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }
  std::size_t weight() const { return factors_.size(); }

  /** Number of qubits needed to host this string (max index + 1). */
  unsigned min_qubits() const;

  /** True iff the two strings commute as operators. */
  bool commutes_with(const PauliString& other) const;

  /**
   * Operator product a*b up to a phase: returns (phase, string) with
   * phase in {1, i, -1, -i}.
   */
  static std::pair<Complex, PauliString> compose(const PauliString& a,
                                                 const PauliString& b);

  /** Space separated axis tokens, e.g. "X0 Z3"; empty for the identity. */
  std::string to_string() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<Factor> factors_;
};

/** Whether two Pauli strings commute (even number of anticommuting sites). */
bool commutes(const PauliString& a, const PauliString& b);

/**
 * A complex-weighted sum of Pauli strings in canonical form: no duplicate
 * strings, no coefficients below kCoeffEpsilon, terms ordered
 * lexicographically by (qubit index, axis with X < Y < Z).
 */
class PauliSum {
 public:
  PauliSum() = default;  // the zero operator
  PauliSum(const PauliString& s, Complex coeff);

  static PauliSum identity(Complex coeff = 1.0);

  const std::map<PauliString, Complex>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /** Number of qubits needed to host every term. */
  unsigned min_qubits() const;

  void add_term(const PauliString& s, Complex coeff);

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex factor);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, Complex c) { return a *= c; }
  friend PauliSum operator*(Complex c, PauliSum a) { return a *= c; }

  PauliSum adjoint() const;

  /** True iff the sum equals its own conjugate transpose. */
  bool is_hermitian(double tol = 1e-10) const;

  /** True iff all pairs of strings in the sum commute. */
  bool strings_commute() const;

  bool operator==(const PauliSum&) const = default;

  /**
   * One term per line: `<real> <imag> <axis><index> ...`; the identity term
   * is written with no axis tokens. Terms appear in canonical order.
   */
  std::string to_text() const;

  /** Inverse of to_text. Throws ParseError naming the offending line/token. */
  static PauliSum from_text(const std::string& text);

  /** Parses a single term line; `line_no` is used for error reporting. */
  static std::pair<PauliString, Complex> parse_term_line(
      const std::string& line, std::size_t line_no = 0);

 private:
  void prune(const PauliString& s);

  std::map<PauliString, Complex> terms_;
};

/** Canonical-form product, tracking the i/-1/-i phases of Pauli composition. */
PauliSum multiply(const PauliSum& a, const PauliSum& b);

inline PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  return multiply(a, b);
}

/** Projector onto |0...0>, expanded as a 2^n-term diagonal Pauli sum. */
PauliSum all_zero_projector(unsigned n_qubits);

}  // namespace fermigrad
