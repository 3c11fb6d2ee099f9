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

#include "fermigrad/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fermigrad {

char axis_char(Axis a) {
  switch (a) {
    case Axis::X:
      return 'X';
    case Axis::Y:
      return 'Y';
    case Axis::Z:
      return 'Z';
  }
  return '?';
}

PauliString::PauliString(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end());
  for (std::size_t i = 1; i < factors_.size(); ++i) {
    if (factors_[i].first == factors_[i - 1].first) {
      throw Error("duplicate qubit index " +
                  std::to_string(factors_[i].first) + " in Pauli string");
    }
  }
}

PauliString PauliString::single(unsigned qubit, Axis axis) {
  return PauliString({{qubit, axis}});
}

unsigned PauliString::min_qubits() const {
  return factors_.empty() ? 0 : factors_.back().first + 1;
}

bool PauliString::commutes_with(const PauliString& other) const {
  // Strings commute iff they anticommute on an even number of qubits.
  std::size_t anti = 0;
  auto it_a = factors_.begin();
  auto it_b = other.factors_.begin();
  while (it_a != factors_.end() && it_b != other.factors_.end()) {
    if (it_a->first < it_b->first) {
      ++it_a;
    } else if (it_b->first < it_a->first) {
      ++it_b;
    } else {
      if (it_a->second != it_b->second) ++anti;
      ++it_a;
      ++it_b;
    }
  }
  return anti % 2 == 0;
}

bool commutes(const PauliString& a, const PauliString& b) {
  return a.commutes_with(b);
}

namespace {

// sigma_a * sigma_b = phase * sigma_c for distinct non-identity a, b.
std::pair<Complex, Axis> axis_product(Axis a, Axis b) {
  // XY=iZ, YZ=iX, ZX=iY; reversed order flips the sign.
  static constexpr Complex kI{0.0, 1.0};
  int ia = static_cast<int>(a);
  int ib = static_cast<int>(b);
  Axis c = static_cast<Axis>(3 - ia - ib);
  bool cyclic = (ib - ia + 3) % 3 == 1;  // X->Y->Z->X
  return {cyclic ? kI : -kI, c};
}

}  // namespace

std::pair<Complex, PauliString> PauliString::compose(const PauliString& a,
                                                     const PauliString& b) {
  std::vector<Factor> out;
  out.reserve(a.factors_.size() + b.factors_.size());
  Complex phase = 1.0;
  auto it_a = a.factors_.begin();
  auto it_b = b.factors_.begin();
  while (it_a != a.factors_.end() || it_b != b.factors_.end()) {
    if (it_b == b.factors_.end() ||
        (it_a != a.factors_.end() && it_a->first < it_b->first)) {
      out.push_back(*it_a++);
    } else if (it_a == a.factors_.end() || it_b->first < it_a->first) {
      out.push_back(*it_b++);
    } else {
      if (it_a->second != it_b->second) {
        auto [ph, c] = axis_product(it_a->second, it_b->second);
        phase *= ph;
        out.emplace_back(it_a->first, c);
      }
      // equal axes cancel to the identity
      ++it_a;
      ++it_b;
    }
  }
  PauliString s;
  s.factors_ = std::move(out);  // already sorted and duplicate-free
  return {phase, std::move(s)};
}

std::string PauliString::to_string() const {
  std::string out;
  for (const auto& [q, ax] : factors_) {
    if (!out.empty()) out += ' ';
    out += axis_char(ax);
    out += std::to_string(q);
  }
  return out;
}

PauliSum::PauliSum(const PauliString& s, Complex coeff) {
  add_term(s, coeff);
}

PauliSum PauliSum::identity(Complex coeff) {
  return PauliSum(PauliString{}, coeff);
}

unsigned PauliSum::min_qubits() const {
  unsigned n = 0;
  for (const auto& [s, c] : terms_) n = std::max(n, s.min_qubits());
  return n;
}

void PauliSum::add_term(const PauliString& s, Complex coeff) {
  auto [it, inserted] = terms_.try_emplace(s, coeff);
  if (!inserted) it->second += coeff;
  prune(s);
}

void PauliSum::prune(const PauliString& s) {
  auto it = terms_.find(s);
  if (it != terms_.end() && std::abs(it->second) < kCoeffEpsilon) {
    terms_.erase(it);
  }
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex factor) {
  if (std::abs(factor) < kCoeffEpsilon) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, c] : terms_) c *= factor;
  return *this;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out;
  for (const auto& [s, c] : terms_) out.add_term(s, std::conj(c));
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  // Pauli strings are hermitian, so hermiticity means real coefficients.
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

bool PauliSum::strings_commute() const {
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    for (auto jt = std::next(it); jt != terms_.end(); ++jt) {
      if (!it->first.commutes_with(jt->first)) return false;
    }
  }
  return true;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      auto [phase, s] = PauliString::compose(sa, sb);
      out.add_term(s, phase * ca * cb);
    }
  }
  return out;
}

PauliSum all_zero_projector(unsigned n_qubits) {
  // prod_k (1 + Z_k)/2 expanded over all Z subsets
  if (n_qubits > 24) throw Error("all_zero_projector: too many qubits");
  PauliSum out;
  const double w = std::pow(0.5, static_cast<double>(n_qubits));
  const std::size_t subsets = std::size_t{1} << n_qubits;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<PauliString::Factor> factors;
    for (unsigned q = 0; q < n_qubits; ++q) {
      if (mask & (std::size_t{1} << q)) factors.emplace_back(q, Axis::Z);
    }
    out.add_term(PauliString(std::move(factors)), w);
  }
  return out;
}

namespace {

// shortest representation that round-trips to the same double
std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

std::string PauliSum::to_text() const {
  std::string out;
  for (const auto& [s, c] : terms_) {
    out += format_double(c.real());
    out += ' ';
    out += format_double(c.imag());
    std::string toks = s.to_string();
    if (!toks.empty()) {
      out += ' ';
      out += toks;
    }
    out += '\n';
  }
  return out;
}

std::pair<PauliString, Complex> PauliSum::parse_term_line(
    const std::string& line, std::size_t line_no) {
  std::istringstream is(line);
  std::string tok_re, tok_im;
  if (!(is >> tok_re >> tok_im)) {
    throw ParseError("expected `<real> <imag> [axis tokens...]`", line_no);
  }
  auto parse_num = [&](const std::string& t) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) {
      throw ParseError("bad coefficient `" + t + "`", line_no);
    }
    return v;
  };
  Complex coeff{parse_num(tok_re), parse_num(tok_im)};
  std::vector<PauliString::Factor> factors;
  std::string tok;
  while (is >> tok) {
    char a = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    Axis axis;
    if (a == 'X') {
      axis = Axis::X;
    } else if (a == 'Y') {
      axis = Axis::Y;
    } else if (a == 'Z') {
      axis = Axis::Z;
    } else {
      throw ParseError("bad Pauli token `" + tok + "`", line_no);
    }
    unsigned q = 0;
    auto [p, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      throw ParseError("bad Pauli token `" + tok + "`", line_no);
    }
    factors.emplace_back(q, axis);
  }
  try {
    return {PauliString(std::move(factors)), coeff};
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }
}

PauliSum PauliSum::from_text(const std::string& text) {
  PauliSum out;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto [s, c] = parse_term_line(line, line_no);
    out.add_term(s, c);
  }
  return out;
}

}  // namespace fermigrad
