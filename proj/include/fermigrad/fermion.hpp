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

#include <utility>
#include <vector>

#include "fermigrad/pauli.hpp"

namespace fermigrad {

/** A single creation (dagger) or annihilation operator on a spin orbital. */
struct LadderOp {
  unsigned index;
  bool dagger;
  bool operator==(const LadderOp&) const = default;
};

/**
 * A linear combination of products of fermionic ladder operators.
 *
 * Products are kept exactly as written; no normal ordering is applied, since
 * operator order is semantically significant for the generator and projector
 * constructions built on top of this type.
 */
class FermionOperator {
 public:
  struct Term {
    Complex coeff;
    std::vector<LadderOp> ops;
  };

  FermionOperator() = default;  // the zero operator

  static FermionOperator identity(Complex coeff = 1.0);
  static FermionOperator ladder(unsigned index, bool dagger);
  /** Particle number operator a+_k a_k. */
  static FermionOperator number(unsigned k);
  /** Hole number operator a_k a+_k = 1 - a+_k a_k. */
  static FermionOperator hole(unsigned k);

  const std::vector<Term>& terms() const { return terms_; }
  unsigned min_orbitals() const;

  FermionOperator& operator+=(const FermionOperator& other);
  FermionOperator& operator-=(const FermionOperator& other);
  FermionOperator& operator*=(Complex factor);

  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) {
    return a += b;
  }
  friend FermionOperator operator-(FermionOperator a, const FermionOperator& b) {
    return a -= b;
  }
  friend FermionOperator operator*(FermionOperator a, Complex c) {
    return a *= c;
  }
  friend FermionOperator operator*(Complex c, FermionOperator a) {
    return a *= c;
  }

  /** Product by concatenation of ladder sequences, bilinear in coefficients. */
  FermionOperator operator*(const FermionOperator& other) const;

  /** Hermitian conjugate: reverses each product, flips daggers, conjugates. */
  FermionOperator adjoint() const;

 private:
  std::vector<Term> terms_;
};

/**
 * An ordered list of (p_i, q_i) spin-orbital pairs defining an n-fold
 * fermionic excitation. All 2n indices must be mutually distinct. The pair
 * order is preserved: reordering pairs may flip the generator's sign.
 */
class Excitation {
 public:
  using Pair = std::pair<unsigned, unsigned>;

  explicit Excitation(std::vector<Pair> pairs);

  const std::vector<Pair>& pairs() const { return pairs_; }
  unsigned rank() const { return static_cast<unsigned>(pairs_.size()); }
  unsigned max_index() const;
  /** The 2n indices in pair order: p0, q0, p1, q1, ... */
  std::vector<unsigned> indices() const;

  bool operator==(const Excitation&) const = default;
  auto operator<=>(const Excitation&) const = default;

 private:
  std::vector<Pair> pairs_;
};

/** The hermitian generator i(prod_i a+_{p_i} a_{q_i} - h.c.). */
FermionOperator excitation_generator(const Excitation& e);

/**
 * Projector onto the nullspace of the excitation generator,
 * 1 - prod_i N_{p_i} Nh_{q_i} - prod_i N_{q_i} Nh_{p_i}, built from the
 * diagonal particle/hole number operators.
 */
FermionOperator nullspace_projector(const Excitation& e);

/** The self-inverse pair (G + P0, G - P0). */
std::pair<FermionOperator, FermionOperator> g_plus_minus(const Excitation& e);

/** Eigenspace projectors (P+, P-) = (G_pm +- 1)/2. */
std::pair<FermionOperator, FermionOperator> eigen_projectors(
    const Excitation& e);

/**
 * A fermion-to-qubit encoding. Implementations must be linear and preserve
 * the canonical anticommutation relations.
 */
class Encoding {
 public:
  virtual ~Encoding() = default;
  virtual std::string name() const = 0;
  virtual PauliSum encode(const FermionOperator& f,
                          unsigned n_orbitals) const = 0;
};

/**
 * Jordan-Wigner encoding with the Z string on higher-indexed qubits:
 * a_k -> sigma+_k Z_{k+1} ... Z_{N-1}, a+_k -> sigma-_k Z_{k+1} ... Z_{N-1},
 * with sigma+- = (X +- iY)/2. Qubit |1> means occupied.
 */
class JordanWigner final : public Encoding {
 public:
  std::string name() const override { return "jordan-wigner"; }
  PauliSum encode(const FermionOperator& f, unsigned n_orbitals) const override;
};

/** The encoding used throughout unless a caller supplies another. */
const Encoding& default_encoding();

PauliSum jordan_wigner(const FermionOperator& f, unsigned n_orbitals);

}  // namespace fermigrad
