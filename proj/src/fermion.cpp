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

#include "fermigrad/fermion.hpp"

#include <algorithm>
#include <set>

namespace fermigrad {

FermionOperator FermionOperator::identity(Complex coeff) {
  FermionOperator out;
  out.terms_.push_back({coeff, {}});
  return out;
}

FermionOperator FermionOperator::ladder(unsigned index, bool dagger) {
  FermionOperator out;
  out.terms_.push_back({1.0, {LadderOp{index, dagger}}});
  return out;
}

FermionOperator FermionOperator::number(unsigned k) {
  FermionOperator out;
  out.terms_.push_back({1.0, {LadderOp{k, true}, LadderOp{k, false}}});
  return out;
}

FermionOperator FermionOperator::hole(unsigned k) {
  FermionOperator out;
  out.terms_.push_back({1.0, {LadderOp{k, false}, LadderOp{k, true}}});
  return out;
}

unsigned FermionOperator::min_orbitals() const {
  unsigned n = 0;
  for (const auto& t : terms_) {
    for (const auto& op : t.ops) n = std::max(n, op.index + 1);
  }
  return n;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FermionOperator& FermionOperator::operator-=(const FermionOperator& other) {
  for (const auto& t : other.terms_) terms_.push_back({-t.coeff, t.ops});
  return *this;
}

FermionOperator& FermionOperator::operator*=(Complex factor) {
  for (auto& t : terms_) t.coeff *= factor;
  return *this;
}

FermionOperator FermionOperator::operator*(const FermionOperator& other) const {
  FermionOperator out;
  for (const auto& ta : terms_) {
    for (const auto& tb : other.terms_) {
      Term t;
      t.coeff = ta.coeff * tb.coeff;
      t.ops = ta.ops;
      t.ops.insert(t.ops.end(), tb.ops.begin(), tb.ops.end());
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator out;
  for (const auto& t : terms_) {
    Term a;
    a.coeff = std::conj(t.coeff);
    a.ops.assign(t.ops.rbegin(), t.ops.rend());
    for (auto& op : a.ops) op.dagger = !op.dagger;
    out.terms_.push_back(std::move(a));
  }
  return out;
}

Excitation::Excitation(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error("excitation needs at least one index pair");
  std::set<unsigned> seen;
  for (const auto& [p, q] : pairs_) {
    if (!seen.insert(p).second || !seen.insert(q).second) {
      throw Error("excitation indices must be mutually distinct");
    }
  }
}

unsigned Excitation::max_index() const {
  unsigned m = 0;
  for (const auto& [p, q] : pairs_) m = std::max({m, p, q});
  return m;
}

std::vector<unsigned> Excitation::indices() const {
  std::vector<unsigned> out;
  out.reserve(2 * pairs_.size());
  for (const auto& [p, q] : pairs_) {
    out.push_back(p);
    out.push_back(q);
  }
  return out;
}

FermionOperator excitation_generator(const Excitation& e) {
  FermionOperator prod = FermionOperator::identity();
  for (const auto& [p, q] : e.pairs()) {
    prod = prod * FermionOperator::ladder(p, true) *
           FermionOperator::ladder(q, false);
  }
  const Complex i{0.0, 1.0};
  return i * (prod - prod.adjoint());
}

FermionOperator nullspace_projector(const Excitation& e) {
  FermionOperator fwd = FermionOperator::identity();
  FermionOperator bwd = FermionOperator::identity();
  for (const auto& [p, q] : e.pairs()) {
    fwd = fwd * FermionOperator::number(p) * FermionOperator::hole(q);
    bwd = bwd * FermionOperator::number(q) * FermionOperator::hole(p);
  }
  return FermionOperator::identity() - fwd - bwd;
}

std::pair<FermionOperator, FermionOperator> g_plus_minus(const Excitation& e) {
  FermionOperator g = excitation_generator(e);
  FermionOperator p0 = nullspace_projector(e);
  return {g + p0, g - p0};
}

std::pair<FermionOperator, FermionOperator> eigen_projectors(
    const Excitation& e) {
  // From G = P+ - P- and P0 = 1 - P+ - P-:  G- = 2P+ - 1, G+ = 1 - 2P-.
  auto [gp, gm] = g_plus_minus(e);
  FermionOperator one = FermionOperator::identity();
  return {0.5 * (gm + one), 0.5 * (one - gp)};
}

PauliSum JordanWigner::encode(const FermionOperator& f,
                              unsigned n_orbitals) const {
  if (f.min_orbitals() > n_orbitals) {
    throw Error("jordan_wigner: orbital index out of range for " +
                std::to_string(n_orbitals) + " orbitals");
  }
  const Complex half_i{0.0, 0.5};
  PauliSum out;
  for (const auto& term : f.terms()) {
    PauliSum acc = PauliSum::identity(term.coeff);
    for (const auto& op : term.ops) {
      // sigma+- on the target qubit, Z string on all higher qubits
      std::vector<PauliString::Factor> zs;
      for (unsigned q = op.index + 1; q < n_orbitals; ++q) {
        zs.emplace_back(q, Axis::Z);
      }
      PauliSum enc;
      {
        auto fx = zs;
        fx.emplace_back(op.index, Axis::X);
        enc.add_term(PauliString(std::move(fx)), 0.5);
      }
      {
        auto fy = zs;
        fy.emplace_back(op.index, Axis::Y);
        enc.add_term(PauliString(std::move(fy)),
                     op.dagger ? -half_i : half_i);
      }
      acc = multiply(acc, enc);
    }
    out += acc;
  }
  return out;
}

const Encoding& default_encoding() {
  static const JordanWigner jw;
  return jw;
}

PauliSum jordan_wigner(const FermionOperator& f, unsigned n_orbitals) {
  return default_encoding().encode(f, n_orbitals);
}

}  // namespace fermigrad
