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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "fermigrad/dense.hpp"
#include "fermigrad/simulator.hpp"
#include "test_helpers.hpp"

using namespace fermigrad;
using namespace fermigrad::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("basis flips prepare configuration strings") {
  Circuit c(4);
  c.append(BasisFlip{0}).append(BasisFlip{1});
  Statevector s = simulate(c);
  CHECK(std::abs(s.amplitude(0b1100) - 1.0) < 1e-15);
  CHECK(simulate(Circuit(3)).amplitude(0) == Complex{1.0, 0.0});
}

TEST_CASE("apply_excitation identity and nullspace cases") {
  Excitation e({{0, 2}, {1, 3}});
  Statevector hf = Statevector::basis_state(4, 0b1100);
  CHECK(apply_excitation(hf, e, 0.0).max_amplitude_distance(hf) < 1e-15);

  // |0000> is annihilated by G, so U acts as identity for any theta
  Statevector vac = Statevector::basis_state(4, 0);
  for (double theta : {0.3, 1.7, kPi}) {
    CHECK(apply_excitation(vac, e, theta).max_amplitude_distance(vac) < 1e-14);
  }
}

TEST_CASE("theta = pi maps |1100> onto |0011> with the oracle's sign") {
  Excitation e({{0, 2}, {1, 3}});
  Statevector hf = Statevector::basis_state(4, 0b1100);
  Statevector rotated = apply_excitation(hf, e, kPi);
  Statevector oracle = dense_excitation_oracle(hf, e, kPi);
  CHECK(rotated.max_amplitude_distance(oracle) < 1e-12);
  CHECK(std::abs(std::abs(rotated.amplitude(0b0011)) - 1.0) < 1e-12);
}

TEST_CASE("apply_excitation matches the dense exponential on random states") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
  for (int trial = 0; trial < 30; ++trial) {
    const unsigned rank = 1 + trial % 3;
    const unsigned n = 2 * rank + trial % 3;
    Excitation e = random_excitation(rng, rank, n);
    Statevector psi = random_state(rng, n);
    const double theta = angle(rng);
    Statevector fast = apply_excitation(psi, e, theta);
    Statevector oracle = dense_excitation_oracle(psi, e, theta);
    CHECK(fast.max_amplitude_distance(oracle) < 1e-12);
    CHECK(std::abs(fast.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("theta sweep against the dense exponential") {
  std::mt19937_64 rng(6);
  for (const Excitation& e :
       {Excitation({{0, 1}}), Excitation({{0, 2}, {1, 3}}),
        Excitation({{0, 3}, {1, 4}, {2, 5}})}) {
    const unsigned n = e.max_index() + 1;
    Statevector psi = random_state(rng, n);
    for (int k = 0; k <= 20; ++k) {
      const double theta = 0.1 * k * kPi;
      CHECK(apply_excitation(psi, e, theta)
                .max_amplitude_distance(dense_excitation_oracle(psi, e, theta)) <
            1e-10);
    }
  }
}

TEST_CASE("12-qubit spot check against the dense exponential") {
  std::mt19937_64 rng(7);
  Excitation e({{0, 5}, {11, 3}});
  Statevector psi = random_state(rng, 12);
  CHECK(apply_excitation(psi, e, 0.9)
            .max_amplitude_distance(dense_excitation_oracle(psi, e, 0.9)) <
        1e-10);
}

TEST_CASE("pauli rotations: diagonal action and cross-check") {
  // Rz on |0>: e^{-i theta/2}|0>
  Statevector zero(1);
  Statevector rot = apply_pauli_rotation(
      zero, PauliSum(PauliString::single(0, Axis::Z), 1.0), 0.7);
  CHECK(std::abs(rot.amplitude(0) - std::exp(Complex{0.0, -0.35})) < 1e-14);

  // rotation by the encoded generator equals apply_excitation
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const unsigned rank = 1 + trial % 2;
    const unsigned n = 2 * rank + trial % 2;
    Excitation e = random_excitation(rng, rank, n);
    Statevector psi = random_state(rng, n);
    const double theta = 0.3 + 0.2 * trial;
    const auto& enc = encoded_excitation(e, n);
    Statevector a = apply_pauli_rotation(psi, enc.generator, theta);
    Statevector b = apply_excitation(psi, e, theta);
    CHECK(a.max_amplitude_distance(b) < 1e-12);
  }
}

TEST_CASE("splitting check: G+ then G- rotations reproduce the gate") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 8; ++trial) {
    const unsigned rank = 1 + trial % 2;
    const unsigned n = 2 * rank + trial % 2;
    Excitation e = random_excitation(rng, rank, n);
    auto [gp, gm] = g_plus_minus(e);
    PauliSum gp_enc = jordan_wigner(gp, n);
    PauliSum gm_enc = jordan_wigner(gm, n);
    Statevector psi = random_state(rng, n);
    const double theta = 0.4 + 0.3 * trial;
    // e^{-i theta/2 G} = e^{-i theta/4 G+} e^{-i theta/4 G-}
    Statevector split =
        apply_pauli_rotation(apply_pauli_rotation(psi, gm_enc, theta / 2.0),
                             gp_enc, theta / 2.0);
    CHECK(split.max_amplitude_distance(apply_excitation(psi, e, theta)) <
          1e-10);
  }
}

TEST_CASE("nullspace phase acts as a pure phase on nullspace states") {
  Excitation e({{0, 2}, {1, 3}});
  // |0100> is annihilated by G, so P0 keeps it fixed
  Statevector s = Statevector::basis_state(4, 0b0100);
  Statevector phased = apply_nullspace_phase(s, e, 0.9);
  CHECK(std::abs(phased.amplitude(0b0100) -
                 std::exp(Complex{0.0, -0.9})) < 1e-14);
  // while |1100> has no nullspace component at all
  Statevector hf = Statevector::basis_state(4, 0b1100);
  CHECK(apply_nullspace_phase(hf, e, 0.9).max_amplitude_distance(hf) < 1e-14);
}

TEST_CASE("rotation gate validation") {
  PauliSum bad(PauliString::single(0, Axis::X), Complex{0.0, 1.0});
  CHECK_THROWS_AS(PauliRotation(bad, ParamRef::fixed(0.1)), Error);
  PauliSum noncommuting(PauliString::single(0, Axis::X), 1.0);
  noncommuting.add_term(PauliString::single(0, Axis::Z), 1.0);
  CHECK_THROWS_AS(PauliRotation(noncommuting, ParamRef::fixed(0.1)), Error);
}

TEST_CASE("expectation basics") {
  Circuit c(2);
  c.append(BasisFlip{0});
  CHECK(expectation(c, {}, PauliSum::identity()) == doctest::Approx(1.0));
  CHECK(expectation(c, {}, PauliSum(PauliString::single(0, Axis::Z), 1.0)) ==
        doctest::Approx(-1.0));
  PauliSum nonherm(PauliString::single(0, Axis::X), Complex{0.0, 1.0});
  CHECK_THROWS_AS(expectation(c, {}, nonherm), Error);
}

TEST_CASE("named parameters resolve through scale and offset") {
  Circuit c(2);
  c.append(FermionicExcitation{Excitation({{0, 1}}), ParamRef::named("a")});
  CHECK_THROWS_AS(simulate(c, {}), Error);  // unassigned
  Statevector direct = simulate(c, {{"a", 0.8}});
  Circuit shifted(2);
  shifted.append(FermionicExcitation{Excitation({{0, 1}}),
                                     ParamRef{"a", 1.0, 0.3}});
  CHECK(simulate(shifted, {{"a", 0.5}}).max_amplitude_distance(direct) < 1e-14);
}

TEST_CASE("adjoint circuit undoes the original") {
  Circuit c(4);
  c.append(BasisFlip{0});
  c.append(FermionicExcitation{Excitation({{0, 2}}), ParamRef::named("a")});
  c.append(PauliRotation(PauliSum(PauliString({{1, Axis::Z}, {2, Axis::Z}}), 1.0),
                         ParamRef::fixed(0.4)));
  c.append(FermionicExcitation{Excitation({{1, 3}}), ParamRef::fixed(0.9)});
  c.append(NullspacePhase{Excitation({{0, 2}}), ParamRef::fixed(0.2)});
  Circuit round_trip(4);
  round_trip.append(c).append(c.adjoint());
  Statevector s = simulate(round_trip, {{"a", -0.6}});
  CHECK(std::abs(s.amplitude(0) - 1.0) < 1e-12);
}

TEST_CASE("overlap_squared equals direct inner products") {
  CHECK(overlap_squared(Circuit(3), Circuit(3), {}) == doctest::Approx(1.0));
  Circuit a(2), b(2);
  a.append(BasisFlip{0});
  b.append(BasisFlip{1});
  CHECK(overlap_squared(a, b, {}) == doctest::Approx(0.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 25; ++trial) {
    const unsigned n = 4 + trial % 3;
    auto random_circuit = [&](void) {
      Circuit c(n);
      c.append(BasisFlip{static_cast<unsigned>(trial % n)});
      for (int g = 0; g < 3; ++g) {
        c.append(FermionicExcitation{random_excitation(rng, 1 + g % 2, n),
                                     ParamRef::fixed(angle(rng))});
      }
      return c;
    };
    Circuit ca = random_circuit();
    Circuit cb = random_circuit();
    const double direct = std::norm(simulate(ca).inner(simulate(cb)));
    CHECK(std::abs(overlap_squared(cb, ca, {}) - direct) < 1e-12);
  }
  CHECK_THROWS_AS(overlap_squared(Circuit(2), Circuit(3), {}), Error);
}

TEST_CASE("fermionic shift circuit structure and behavior") {
  Circuit c(4);
  c.append(BasisFlip{0});
  c.append(BasisFlip{1});
  c.append(FermionicExcitation{Excitation({{0, 2}, {1, 3}}),
                               ParamRef::named("t")});
  CHECK_THROWS_AS(fermionic_shift_circuit(c, 0, +1, +1), Error);
  CHECK_THROWS_AS(fermionic_shift_circuit(c, 2, +2, +1), Error);

  Circuit shifted = fermionic_shift_circuit(c, 2, +1, -1);
  REQUIRE(shifted.gates().size() == 4);
  const auto* phase = std::get_if<NullspacePhase>(&shifted.gates()[2]);
  REQUIRE(phase != nullptr);
  CHECK(phase->angle.offset == doctest::Approx(-kPi / 4.0));
  const auto* ferm = std::get_if<FermionicExcitation>(&shifted.gates()[3]);
  REQUIRE(ferm != nullptr);
  CHECK(ferm->angle.offset == doctest::Approx(kPi / 2.0));

  // on a state with no nullspace support the alpha phase is inert
  ParameterMap values{{"t", 0.7}};
  Statevector plus = simulate(fermionic_shift_circuit(c, 2, +1, +1), values);
  Statevector minus = simulate(fermionic_shift_circuit(c, 2, +1, -1), values);
  PauliSum z0(PauliString::single(0, Axis::Z), 1.0);
  CHECK(expectation(plus, z0) ==
        doctest::Approx(expectation(minus, z0)).epsilon(1e-12));

  // at theta = 0 the sign=+ and sign=- variants are mutual adjoints, so
  // applying both shifted gate pairs in sequence is the identity
  Excitation e({{0, 2}, {1, 3}});
  Circuit cancel(4);
  cancel.append(BasisFlip{0}).append(BasisFlip{1});
  for (int sign : {+1, -1}) {
    cancel.append(NullspacePhase{e, ParamRef::fixed(sign * kPi / 4.0)});
    cancel.append(FermionicExcitation{e, ParamRef{"t", 1.0, sign * kPi / 2.0}});
  }
  Statevector s = simulate(cancel, {{"t", 0.0}});
  CHECK(std::abs(s.amplitude(0b1100) - 1.0) < 1e-12);
}

TEST_CASE("real superposition property of flip + excitation circuits") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned n = 4 + trial % 4;
    Circuit c(n);
    for (unsigned q = 0; q < n; ++q) {
      if (rng() % 2) c.append(BasisFlip{q});
    }
    for (int g = 0; g < 4; ++g) {
      c.append(FermionicExcitation{random_excitation(rng, 1 + g % 2, n),
                                   ParamRef::fixed(angle(rng))});
    }
    CHECK(simulate(c).is_real(1e-10));
  }
}

TEST_CASE("illustrative example: three-configuration superposition") {
  // X0 X1, then U(1) for G_(0,2),(1,3), U(1) for G_(4,0),(5,1), U(1) for A=G
  Circuit c(8);
  c.append(BasisFlip{0}).append(BasisFlip{1});
  c.append(FermionicExcitation{Excitation({{0, 2}, {1, 3}}), ParamRef::fixed(1.0)});
  c.append(FermionicExcitation{Excitation({{4, 0}, {5, 1}}), ParamRef::fixed(1.0)});
  c.append(FermionicExcitation{Excitation({{0, 2}, {1, 3}}), ParamRef::fixed(1.0)});
  Statevector s = simulate(c);
  CHECK(s.is_real(1e-12));
  double weight = 0.0;
  for (std::uint64_t idx : {0b11000000ull, 0b00110000ull, 0b00001100ull}) {
    weight += std::norm(s.amplitude(idx));
    CHECK(std::abs(s.amplitude(idx)) > 1e-3);
  }
  CHECK(weight == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circuit text round trip") {
  Circuit c(4);
  c.append(BasisFlip{0});
  c.append(PauliRotation(PauliSum(PauliString({{0, Axis::Z}, {1, Axis::Z}}), 1.0),
                         ParamRef::named("theta")));
  c.append(FermionicExcitation{Excitation({{0, 2}, {1, 3}}), ParamRef::named("a")});
  c.append(NullspacePhase{Excitation({{0, 2}}), ParamRef::fixed(0.25)});
  const std::string text = circuit_to_text(c);
  Circuit back = circuit_from_text(text, 4);
  CHECK(circuit_to_text(back) == text);
  REQUIRE(back.gates().size() == 4);
  CHECK(back.parameter_names() == std::vector<std::string>{"a", "theta"});

  CHECK_THROWS_AS(circuit_from_text("WOBBLE 1\n", 4), ParseError);
  CHECK_THROWS_AS(circuit_from_text("FERM a 0\n", 4), ParseError);
  CHECK_THROWS_AS(circuit_from_text("NULLPHASE t 0 1\n", 4), ParseError);
  CHECK_THROWS_AS(circuit_from_text("X 9\n", 4), ParseError);
}

TEST_CASE("norm is preserved after every gate") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const unsigned n = 6;
  Statevector s = random_state(rng, n);
  for (int g = 0; g < 12; ++g) {
    Gate gate = g % 3 == 0
                    ? Gate{BasisFlip{static_cast<unsigned>(g % n)}}
                    : Gate{FermionicExcitation{random_excitation(rng, 1 + g % 2, n),
                                               ParamRef::fixed(angle(rng))}};
    apply_gate(s, gate, {});
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
  }
}
