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

#include "fermigrad/simulator.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

namespace fermigrad {

Statevector::Statevector(unsigned n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > kMaxSimQubits) {
    throw Error("statevector of " + std::to_string(n_qubits) +
                " qubits exceeds the cap of " + std::to_string(kMaxSimQubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, 0.0);
  amps_[0] = 1.0;
}

Statevector Statevector::basis_state(unsigned n_qubits, std::uint64_t index) {
  Statevector s(n_qubits);
  if (index >= s.dim()) throw Error("basis state index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double Statevector::norm() const {
  double n2 = 0.0;
  for (const auto& a : amps_) n2 += std::norm(a);
  return std::sqrt(n2);
}

Complex Statevector::inner(const Statevector& other) const {
  if (other.n_qubits_ != n_qubits_) {
    throw Error("inner product between different qubit counts");
  }
  Complex acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    acc += std::conj(amps_[i]) * other.amps_[i];
  }
  return acc;
}

double Statevector::max_amplitude_distance(const Statevector& other) const {
  if (other.n_qubits_ != n_qubits_) {
    throw Error("comparing states with different qubit counts");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    m = std::max(m, std::abs(amps_[i] - other.amps_[i]));
  }
  return m;
}

bool Statevector::is_real(double tol) const {
  for (const auto& a : amps_) {
    if (std::abs(a.imag()) > tol) return false;
  }
  return true;
}

namespace {

struct TermMasks {
  std::uint64_t flip = 0;  // X and Y sites
  std::uint64_t yz = 0;    // Y and Z sites contribute (-1)^bit
  Complex prefactor = 1.0; // coeff * i^{#Y}
};

TermMasks make_masks(const PauliString& s, Complex coeff, unsigned n_qubits) {
  static constexpr Complex kI{0.0, 1.0};
  TermMasks m;
  m.prefactor = coeff;
  for (const auto& [q, ax] : s.factors()) {
    if (q >= n_qubits) throw Error("Pauli qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
    switch (ax) {
      case Axis::X:
        m.flip |= bit;
        break;
      case Axis::Y:
        m.flip |= bit;
        m.yz |= bit;
        m.prefactor *= kI;
        break;
      case Axis::Z:
        m.yz |= bit;
        break;
    }
  }
  return m;
}

void accumulate_term(const TermMasks& m, std::span<const Complex> in,
                     std::span<Complex> out) {
  const std::size_t dim = in.size();
  for (std::size_t i = 0; i < dim; ++i) {
    const Complex v =
        (std::popcount(i & m.yz) & 1) ? -m.prefactor * in[i] : m.prefactor * in[i];
    out[i ^ m.flip] += v;
  }
}

void check_norm(const Statevector& s) {
  const double n = s.norm();
  if (std::abs(n - 1.0) > 1e-9) {
    throw NumericalError("statevector norm drifted to " + std::to_string(n));
  }
}

}  // namespace

Statevector apply_pauli_sum(const PauliSum& a, const Statevector& x) {
  if (a.min_qubits() > x.n_qubits()) {
    throw Error("operator acts on more qubits than the state has");
  }
  Statevector y = Statevector::basis_state(x.n_qubits(), 0);
  y.amplitudes()[0] = 0.0;
  for (const auto& [s, c] : a.terms()) {
    accumulate_term(make_masks(s, c, x.n_qubits()), x.amplitudes(),
                    y.amplitudes());
  }
  return y;
}

double ParamRef::resolve(const ParameterMap& values) const {
  if (is_fixed()) return offset;
  auto it = values.find(name);
  if (it == values.end()) {
    throw Error("unassigned parameter `" + name + "`");
  }
  return scale * it->second + offset;
}

PauliRotation::PauliRotation(PauliSum gen, ParamRef a)
    : generator(std::move(gen)), angle(std::move(a)) {
  if (!generator.is_hermitian()) {
    throw Error("pauli rotation generator is not hermitian");
  }
  if (!generator.strings_commute()) {
    throw Error("pauli rotation generator strings do not commute");
  }
}

Gate adjoint_gate(const Gate& g) {
  return std::visit(
      [](const auto& gate) -> Gate {
        using T = std::decay_t<decltype(gate)>;
        if constexpr (std::is_same_v<T, BasisFlip>) {
          return gate;
        } else if constexpr (std::is_same_v<T, PauliRotation>) {
          return PauliRotation(gate.generator, gate.angle.negated());
        } else if constexpr (std::is_same_v<T, FermionicExcitation>) {
          return FermionicExcitation{gate.excitation, gate.angle.negated()};
        } else {
          return NullspacePhase{gate.excitation, gate.angle.negated()};
        }
      },
      g);
}

const ParamRef* gate_param(const Gate& g) {
  return std::visit(
      [](const auto& gate) -> const ParamRef* {
        using T = std::decay_t<decltype(gate)>;
        if constexpr (std::is_same_v<T, BasisFlip>) {
          return nullptr;
        } else {
          return &gate.angle;
        }
      },
      g);
}

Circuit::Circuit(unsigned n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxSimQubits) {
    throw Error("circuit qubit count out of range");
  }
}

namespace {

unsigned gate_min_qubits(const Gate& g) {
  return std::visit(
      [](const auto& gate) -> unsigned {
        using T = std::decay_t<decltype(gate)>;
        if constexpr (std::is_same_v<T, BasisFlip>) {
          return gate.qubit + 1;
        } else if constexpr (std::is_same_v<T, PauliRotation>) {
          return gate.generator.min_qubits();
        } else {
          return gate.excitation.max_index() + 1;
        }
      },
      g);
}

}  // namespace

Circuit& Circuit::append(Gate g) {
  if (gate_min_qubits(g) > n_qubits_) {
    throw Error("gate index out of range for " + std::to_string(n_qubits_) +
                " qubits");
  }
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw Error("appending circuit with mismatched qubit count");
  }
  for (const auto& g : other.gates_) gates_.push_back(g);
  return *this;
}

Circuit Circuit::adjoint() const {
  Circuit out(n_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    out.append(adjoint_gate(*it));
  }
  return out;
}

std::vector<std::string> Circuit::parameter_names() const {
  std::set<std::string> names;
  for (const auto& g : gates_) {
    const ParamRef* p = gate_param(g);
    if (p && !p->is_fixed()) names.insert(p->name);
  }
  return {names.begin(), names.end()};
}

const EncodedExcitation& encoded_excitation(const Excitation& e,
                                            unsigned n_qubits) {
  static std::map<std::pair<std::vector<Excitation::Pair>, unsigned>,
                  EncodedExcitation>
      cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(e.pairs(), n_qubits);
  auto it = cache.find(key);
  if (it == cache.end()) {
    EncodedExcitation enc{jordan_wigner(excitation_generator(e), n_qubits),
                          jordan_wigner(nullspace_projector(e), n_qubits)};
    it = cache.emplace(std::move(key), std::move(enc)).first;
  }
  return it->second;
}

Statevector apply_excitation(Statevector state, const Excitation& e,
                             double theta) {
  if (e.max_index() >= state.n_qubits()) {
    throw Error("excitation index out of range");
  }
  const auto& enc = encoded_excitation(e, state.n_qubits());
  Statevector gx = apply_pauli_sum(enc.generator, state);
  Statevector px = apply_pauli_sum(enc.nullspace, state);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex mis{0.0, -s};
  auto amps = state.amplitudes();
  auto g = gx.amplitudes();
  auto p = px.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] = c * amps[i] + mis * g[i] + (1.0 - c) * p[i];
  }
  return state;
}

Statevector apply_pauli_rotation(Statevector state, const PauliSum& generator,
                                 double theta) {
  if (!generator.is_hermitian()) {
    throw Error("pauli rotation generator is not hermitian");
  }
  if (!generator.strings_commute()) {
    throw Error("pauli rotation generator strings do not commute");
  }
  for (const auto& [s, coeff] : generator.terms()) {
    const double phi = theta * coeff.real();
    const double c = std::cos(0.5 * phi);
    const Complex mis{0.0, -std::sin(0.5 * phi)};
    if (s.is_identity()) {
      // pure global phase factor e^{-i phi/2}
      const Complex f = c + mis;
      for (auto& a : state.amplitudes()) a *= f;
      continue;
    }
    const TermMasks m = make_masks(s, 1.0, state.n_qubits());
    auto amps = state.amplitudes();
    // strings are self-inverse: exp = cos - i sin * sigma; pair update
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const std::size_t j = i ^ m.flip;
      if (j < i) continue;
      const Complex ai = amps[i];
      const Complex aj = amps[j];
      const Complex pi_ = (std::popcount(i & m.yz) & 1) ? -m.prefactor : m.prefactor;
      const Complex pj_ = (std::popcount(j & m.yz) & 1) ? -m.prefactor : m.prefactor;
      if (i == j) {
        amps[i] = c * ai + mis * (pi_ * ai);
      } else {
        amps[i] = c * ai + mis * (pj_ * aj);  // sigma maps j -> i with phase pj_
        amps[j] = c * aj + mis * (pi_ * ai);
      }
    }
  }
  return state;
}

Statevector apply_nullspace_phase(Statevector state, const Excitation& e,
                                  double phi) {
  if (e.max_index() >= state.n_qubits()) {
    throw Error("excitation index out of range");
  }
  const auto& enc = encoded_excitation(e, state.n_qubits());
  Statevector px = apply_pauli_sum(enc.nullspace, state);
  const Complex f = std::exp(Complex{0.0, -phi}) - 1.0;
  auto amps = state.amplitudes();
  auto p = px.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += f * p[i];
  return state;
}

void apply_gate(Statevector& state, const Gate& g, const ParameterMap& values) {
  std::visit(
      [&](const auto& gate) {
        using T = std::decay_t<decltype(gate)>;
        if constexpr (std::is_same_v<T, BasisFlip>) {
          if (gate.qubit >= state.n_qubits()) {
            throw Error("basis flip qubit out of range");
          }
          auto amps = state.amplitudes();
          const std::size_t bit = std::size_t{1}
                                  << (state.n_qubits() - 1 - gate.qubit);
          for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & bit) std::swap(amps[i], amps[i ^ bit]);
          }
        } else if constexpr (std::is_same_v<T, PauliRotation>) {
          state = apply_pauli_rotation(std::move(state), gate.generator,
                                       gate.angle.resolve(values));
        } else if constexpr (std::is_same_v<T, FermionicExcitation>) {
          state = apply_excitation(std::move(state), gate.excitation,
                                   gate.angle.resolve(values));
        } else {
          state = apply_nullspace_phase(std::move(state), gate.excitation,
                                        gate.angle.resolve(values));
        }
      },
      g);
  check_norm(state);
}

Statevector simulate(const Circuit& c, const ParameterMap& values) {
  return simulate(c, values, Statevector(c.n_qubits()));
}

Statevector simulate(const Circuit& c, const ParameterMap& values,
                     Statevector initial) {
  if (initial.n_qubits() != c.n_qubits()) {
    throw Error("initial state qubit count does not match circuit");
  }
  for (const auto& g : c.gates()) apply_gate(initial, g, values);
  return initial;
}

double expectation(const Statevector& psi, const PauliSum& h) {
  if (!h.is_hermitian()) {
    throw Error("expectation of a non-hermitian operator");
  }
  Statevector hpsi = apply_pauli_sum(h, psi);
  const Complex v = psi.inner(hpsi);
  if (std::abs(v.imag()) > 1e-10) {
    throw NumericalError("expectation value has imaginary residue " +
                         std::to_string(v.imag()));
  }
  return v.real();
}

double expectation(const Circuit& c, const ParameterMap& values,
                   const PauliSum& h) {
  return expectation(simulate(c, values), h);
}

double overlap_squared(const Circuit& a, const Circuit& b,
                       const ParameterMap& values) {
  if (a.n_qubits() != b.n_qubits()) {
    throw Error("overlap between circuits with different qubit counts");
  }
  Circuit combined(a.n_qubits());
  combined.append(a).append(b.adjoint());
  Statevector s = simulate(combined, values);
  return std::norm(s.amplitude(0));
}

Circuit fermionic_shift_circuit(const Circuit& c, std::size_t gate_position,
                                int sign, int alpha) {
  if (gate_position >= c.gates().size()) {
    throw Error("gate position out of range");
  }
  if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  if (alpha != 1 && alpha != -1) throw Error("alpha must be +1 or -1");
  const auto* ferm = std::get_if<FermionicExcitation>(&c.gates()[gate_position]);
  if (!ferm) {
    throw Error("gate at position " + std::to_string(gate_position) +
                " is not a fermionic excitation");
  }
  Circuit out(c.n_qubits());
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    if (i == gate_position) {
      // U(theta +- pi/2) * U0^alpha, with U0 applied first
      const double phi = alpha * sign * (std::numbers::pi / 4.0);
      out.append(NullspacePhase{ferm->excitation, ParamRef::fixed(phi)});
      out.append(FermionicExcitation{ferm->excitation,
                                     ferm->angle.shifted(sign * (std::numbers::pi / 2.0))});
    } else {
      out.append(c.gates()[i]);
    }
  }
  return out;
}

namespace {

std::string param_token(const ParamRef& p) {
  if (p.is_fixed()) {
    char buf[32];
    auto [q, ec] = std::to_chars(buf, buf + sizeof(buf), p.offset);
    return std::string(buf, q);
  }
  if (p.scale == 1.0 && p.offset == 0.0) return p.name;
  throw Error("cannot serialize affine parameter reference to text");
}

ParamRef parse_param_token(const std::string& tok, std::size_t line_no) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc{} && p == tok.data() + tok.size()) {
    return ParamRef::fixed(v);
  }
  if (tok.empty()) throw ParseError("empty parameter token", line_no);
  return ParamRef::named(tok);
}

std::vector<Excitation::Pair> parse_index_pairs(std::istringstream& is,
                                                std::size_t line_no) {
  std::vector<Excitation::Pair> pairs;
  unsigned p = 0;
  while (is >> p) {
    unsigned q = 0;
    if (!(is >> q)) {
      throw ParseError("odd number of excitation indices", line_no);
    }
    pairs.emplace_back(p, q);
  }
  if (pairs.empty()) throw ParseError("missing excitation indices", line_no);
  return pairs;
}

}  // namespace

std::string circuit_to_text(const Circuit& c) {
  std::string out;
  for (const auto& g : c.gates()) {
    std::visit(
        [&](const auto& gate) {
          using T = std::decay_t<decltype(gate)>;
          if constexpr (std::is_same_v<T, BasisFlip>) {
            out += "X " + std::to_string(gate.qubit);
          } else if constexpr (std::is_same_v<T, PauliRotation>) {
            if (gate.generator.size() != 1) {
              throw Error("only single-string rotations are serializable");
            }
            const auto& [s, coeff] = *gate.generator.terms().begin();
            if (std::abs(coeff - Complex{1.0, 0.0}) > 1e-12) {
              throw Error("only unit-coefficient rotations are serializable");
            }
            out += "ROT " + param_token(gate.angle) + " " + s.to_string();
          } else if constexpr (std::is_same_v<T, FermionicExcitation>) {
            out += "FERM " + param_token(gate.angle);
            for (const auto& [p, q] : gate.excitation.pairs()) {
              out += " " + std::to_string(p) + " " + std::to_string(q);
            }
          } else {
            if (!gate.angle.is_fixed()) {
              throw Error("NULLPHASE requires a fixed angle");
            }
            out += "NULLPHASE " + param_token(gate.angle);
            for (const auto& [p, q] : gate.excitation.pairs()) {
              out += " " + std::to_string(p) + " " + std::to_string(q);
            }
          }
          out += '\n';
        },
        g);
  }
  return out;
}

Circuit circuit_from_text(const std::string& text, unsigned n_qubits) {
  Circuit out(n_qubits);
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    try {
      if (kind == "X") {
        unsigned q = 0;
        if (!(ls >> q)) throw ParseError("X expects a qubit index", line_no);
        out.append(BasisFlip{q});
      } else if (kind == "ROT") {
        std::string ptok;
        if (!(ls >> ptok)) throw ParseError("ROT expects a parameter", line_no);
        std::string rest;
        std::getline(ls, rest);
        auto [s, coeff] = PauliSum::parse_term_line("1 0 " + rest, line_no);
        out.append(PauliRotation(PauliSum(s, coeff),
                                 parse_param_token(ptok, line_no)));
      } else if (kind == "FERM") {
        std::string ptok;
        if (!(ls >> ptok)) throw ParseError("FERM expects a parameter", line_no);
        out.append(FermionicExcitation{Excitation(parse_index_pairs(ls, line_no)),
                                       parse_param_token(ptok, line_no)});
      } else if (kind == "NULLPHASE") {
        std::string ptok;
        if (!(ls >> ptok)) {
          throw ParseError("NULLPHASE expects an angle", line_no);
        }
        ParamRef p = parse_param_token(ptok, line_no);
        if (!p.is_fixed()) {
          throw ParseError("NULLPHASE angle must be a number", line_no);
        }
        out.append(NullspacePhase{Excitation(parse_index_pairs(ls, line_no)), p});
      } else {
        throw ParseError("unknown gate `" + kind + "`", line_no);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

}  // namespace fermigrad
