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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fermigrad/fermion.hpp"
#include "fermigrad/pauli.hpp"

namespace fermigrad {

inline constexpr unsigned kMaxSimQubits = 24;

using ParameterMap = std::map<std::string, double>;

/**
 * Dense complex amplitudes over the 2^N computational basis states.
 * Qubit 0 is the most significant bit of the basis-state label, so the
 * 4-qubit state |1100> has index 0b1100 and reads left-to-right as
 * orbitals 0 through 3.
 */
class Statevector {
 public:
  explicit Statevector(unsigned n_qubits);
  static Statevector basis_state(unsigned n_qubits, std::uint64_t index);

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex amplitude(std::uint64_t index) const { return amps_.at(index); }

  double norm() const;
  /** <this|other> */
  Complex inner(const Statevector& other) const;
  /** Largest |a_this - a_other| over all amplitudes. */
  double max_amplitude_distance(const Statevector& other) const;
  bool is_real(double tol = 1e-10) const;

 private:
  unsigned n_qubits_;
  std::vector<Complex> amps_;
};

/** y = A x for a Pauli sum A. Not restricted to unitary or hermitian A. */
Statevector apply_pauli_sum(const PauliSum& a, const Statevector& x);

/**
 * Reference to a gate angle: scale * value(name) + offset, or just the
 * fixed offset when no name is set. Shifted and adjoint circuits reuse the
 * same named parameter with adjusted scale/offset.
 */
struct ParamRef {
  std::string name;  // empty means fixed
  double scale = 1.0;
  double offset = 0.0;

  static ParamRef fixed(double angle) { return {"", 1.0, angle}; }
  static ParamRef named(std::string n) { return {std::move(n), 1.0, 0.0}; }

  bool is_fixed() const { return name.empty(); }
  double resolve(const ParameterMap& values) const;
  ParamRef shifted(double delta) const { return {name, scale, offset + delta}; }
  ParamRef negated() const { return {name, -scale, -offset}; }
  bool operator==(const ParamRef&) const = default;
};

/** sigma_x on one qubit. */
struct BasisFlip {
  unsigned qubit;
};

/**
 * exp(-i theta/2 sum_k c_k sigma_k) for a hermitian generator whose strings
 * mutually commute. Applied as the product of the per-string rotations.
 */
struct PauliRotation {
  PauliRotation(PauliSum gen, ParamRef angle);
  PauliSum generator;
  ParamRef angle;
};

/** exp(-i theta/2 G) for an n-fold fermionic excitation generator G. */
struct FermionicExcitation {
  Excitation excitation;
  ParamRef angle;
};

/** exp(-i phi P0) for the nullspace projector of an excitation. */
struct NullspacePhase {
  Excitation excitation;
  ParamRef angle;
};

using Gate = std::variant<BasisFlip, PauliRotation, FermionicExcitation,
                          NullspacePhase>;

Gate adjoint_gate(const Gate& g);
const ParamRef* gate_param(const Gate& g);

/** Ordered gate list over a fixed qubit count with named parameters. */
class Circuit {
 public:
  explicit Circuit(unsigned n_qubits);

  unsigned n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& append(Gate g);
  Circuit& append(const Circuit& other);

  Circuit adjoint() const;

  /** Sorted unique parameter names referenced by any gate. */
  std::vector<std::string> parameter_names() const;

 private:
  unsigned n_qubits_;
  std::vector<Gate> gates_;
};

/** Jordan-Wigner encoded generator and nullspace projector, memoized. */
struct EncodedExcitation {
  PauliSum generator;
  PauliSum nullspace;
};
const EncodedExcitation& encoded_excitation(const Excitation& e,
                                            unsigned n_qubits);

/** U(theta)|psi> via the closed form cos + sin G + (1-cos) P0. */
Statevector apply_excitation(Statevector state, const Excitation& e,
                             double theta);

/** prod_k exp(-i theta c_k sigma_k / 2); order-free by commutation. */
Statevector apply_pauli_rotation(Statevector state, const PauliSum& generator,
                                 double theta);

/** exp(-i phi P0)|psi> = |psi> + (e^{-i phi} - 1) P0|psi>. */
Statevector apply_nullspace_phase(Statevector state, const Excitation& e,
                                  double phi);

void apply_gate(Statevector& state, const Gate& g, const ParameterMap& values);

Statevector simulate(const Circuit& c, const ParameterMap& values = {});
Statevector simulate(const Circuit& c, const ParameterMap& values,
                     Statevector initial);

/** <psi|H|psi>; an imaginary residue above 1e-10 raises NumericalError. */
double expectation(const Statevector& psi, const PauliSum& h);
double expectation(const Circuit& c, const ParameterMap& values,
                   const PauliSum& h);

/** |<psi_b|psi_a>|^2, computed as the all-zero amplitude of adjoint(b)*a. */
double overlap_squared(const Circuit& a, const Circuit& b,
                       const ParameterMap& values);

/**
 * Copy of `c` where the fermionic gate at `gate_position` becomes the
 * shifted gate U(theta + sign*pi/2) preceded (in application order) by the
 * phase gate exp(-i alpha*sign*pi/4 P0). sign and alpha are +1 or -1.
 */
Circuit fermionic_shift_circuit(const Circuit& c, std::size_t gate_position,
                                int sign, int alpha);

/** Line-oriented text format: X / ROT / FERM / NULLPHASE, one gate per line. */
std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text, unsigned n_qubits);

}  // namespace fermigrad
