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

#include <memory>
#include <string>
#include <vector>

#include "fermigrad/simulator.hpp"

namespace fermigrad {

/**
 * How gradients of fermionic excitation gates are assembled.
 *
 *   QubitShift       per-Pauli-term shift rule on the compiled rotations;
 *                    2^{2n} expectation values for a rank-n excitation.
 *   FermionicExact4  four shifted expectations (shift pi, prefactor 1/4)
 *                    using the nullspace phase gate; exact for arbitrary
 *                    wavefunctions.
 *   FermionicReal2   two shifted expectations (shift pi/2, prefactor 1/2)
 *                    at a fixed alpha; exact for real wavefunctions.
 *   GeneratorApprox  treats the gate generator as G+alpha*P0, which is
 *                    self-inverse and directly shift-differentiable; two
 *                    expectations.
 */
enum class SchemeKind { QubitShift, FermionicExact4, FermionicReal2, GeneratorApprox };

struct GradientScheme {
  SchemeKind kind = SchemeKind::FermionicReal2;
  int alpha = +1;

  static GradientScheme qubit_shift() { return {SchemeKind::QubitShift, +1}; }
  static GradientScheme exact4() { return {SchemeKind::FermionicExact4, +1}; }
  static GradientScheme real2(int alpha = +1) {
    return {SchemeKind::FermionicReal2, alpha};
  }
  static GradientScheme generator_approx(int alpha) {
    return {SchemeKind::GeneratorApprox, alpha};
  }

  std::string to_string() const;
};

/**
 * A differentiable scalar: a DAG whose leaves are expectation values of
 * circuits (or constants) and whose interior nodes are sums, scalings,
 * products and squares. Objectives are immutable and cheap to share;
 * grad() returns another Objective, so arbitrary higher derivatives exist.
 */
class Objective {
 public:
  struct Node;

  Objective();  // the zero constant

  static Objective constant(double value);
  static Objective expectation(Circuit circuit, PauliSum op);

  Objective operator+(const Objective& other) const;
  Objective operator-(const Objective& other) const;
  Objective operator*(const Objective& other) const;
  Objective operator*(double factor) const;
  friend Objective operator*(double f, const Objective& o) { return o * f; }
  Objective squared() const;

  double evaluate(const ParameterMap& values, int threads = 1) const;

  /** Sorted unique parameter names over all leaf circuits. */
  std::vector<std::string> parameter_names() const;

  /** Number of distinct expectation leaves in the DAG. */
  std::size_t expectation_leaf_count() const;

  bool is_constant_zero() const;

  const std::shared_ptr<const Node>& root() const { return root_; }
  static Objective from_node(std::shared_ptr<const Node> node);

 private:
  explicit Objective(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

/**
 * Derivative of `obj` with respect to the named parameter, as an Objective.
 * Contributions from every gate occurrence of the parameter are summed
 * (product rule), and interior transforms are differentiated by their chain
 * rules, so the result is itself differentiable.
 */
Objective grad(const Objective& obj, const std::string& param,
               const GradientScheme& scheme = {});

/** Central difference (E(x+h) - E(x-h)) / 2h at the given values. */
double finite_difference(const Objective& obj, const std::string& param,
                         const ParameterMap& values, double h = 1e-5);

// Per-gate gradient rules. Each expects `obj` to be a single expectation
// leaf and returns the derivative with respect to the gate's own angle
// (the caller applies the chain-rule factor for scaled parameters).

/**
 * Two-eigenvalue shift rule r*(E(theta+s) - E(theta-s)) with s = pi/(4r).
 * Valid for gates whose generator has exactly the two eigenvalues +-r:
 * single Pauli strings and generator-approximated fermionic gates.
 */
Objective shift_rule_gradient(const Objective& obj, std::size_t gate_position,
                              double r);

/** Compiles the fermionic gate to Pauli rotations and applies the shift
 * rule per rotation term; 2^{2n} leaves for a rank-n excitation. */
Objective qubit_level_gradient(const Objective& obj, std::size_t gate_position);

/** Four-term fermionic shift rule; exact for complex wavefunctions. */
Objective fermionic_gradient_exact(const Objective& obj,
                                   std::size_t gate_position);

/** Two-term fermionic shift rule at fixed alpha; exact for real ones. */
Objective fermionic_gradient_real(const Objective& obj,
                                  std::size_t gate_position, int alpha);

/** Shift rule applied to the gate reinterpreted with generator G+alpha*P0. */
Objective generator_approx_gradient(const Objective& obj,
                                    std::size_t gate_position, int alpha);

}  // namespace fermigrad
