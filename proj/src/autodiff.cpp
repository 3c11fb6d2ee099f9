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

#include "fermigrad/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <set>
#include <unordered_map>

namespace fermigrad {

std::string GradientScheme::to_string() const {
  switch (kind) {
    case SchemeKind::QubitShift:
      return "qubit";
    case SchemeKind::FermionicExact4:
      return "exact4";
    case SchemeKind::FermionicReal2:
      return alpha > 0 ? "real2+" : "real2-";
    case SchemeKind::GeneratorApprox:
      return alpha > 0 ? "approx+" : "approx-";
  }
  return "?";
}

struct Objective::Node {
  enum class Kind { Constant, Expectation, Sum, Scale, Product, Square };

  Kind kind = Kind::Constant;
  double value = 0.0;   // Constant
  double factor = 1.0;  // Scale
  Circuit circuit{1};   // Expectation
  PauliSum op;          // Expectation
  std::vector<std::shared_ptr<const Node>> children;
};

using Node = Objective::Node;
using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make_expectation(Circuit c, PauliSum op) {
  if (!op.is_hermitian()) {
    throw Error("expectation leaf requires a hermitian operator");
  }
  if (op.min_qubits() > c.n_qubits()) {
    throw Error("operator qubit count exceeds the circuit's");
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Expectation;
  n->circuit = std::move(c);
  n->op = std::move(op);
  return n;
}

bool is_zero_node(const NodePtr& n) {
  return n->kind == Node::Kind::Constant && n->value == 0.0;
}

NodePtr make_sum(std::vector<NodePtr> children) {
  std::erase_if(children, is_zero_node);
  if (children.empty()) return make_constant(0.0);
  if (children.size() == 1) return children.front();
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Sum;
  n->children = std::move(children);
  return n;
}

NodePtr make_scale(double factor, NodePtr child) {
  if (factor == 0.0 || is_zero_node(child)) return make_constant(0.0);
  if (factor == 1.0) return child;
  if (child->kind == Node::Kind::Constant) {
    return make_constant(factor * child->value);
  }
  if (child->kind == Node::Kind::Scale) {
    return make_scale(factor * child->factor, child->children.front());
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Scale;
  n->factor = factor;
  n->children = {std::move(child)};
  return n;
}

NodePtr make_product(std::vector<NodePtr> children) {
  for (const auto& c : children) {
    if (is_zero_node(c)) return make_constant(0.0);
  }
  if (children.size() == 1) return children.front();
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Product;
  n->children = std::move(children);
  return n;
}

NodePtr make_square(NodePtr child) {
  if (is_zero_node(child)) return make_constant(0.0);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Square;
  n->children = {std::move(child)};
  return n;
}

void collect_leaves(const NodePtr& node, std::vector<const Node*>& order,
                    std::set<const Node*>& seen) {
  if (!seen.insert(node.get()).second) return;
  if (node->kind == Node::Kind::Expectation) {
    order.push_back(node.get());
    return;
  }
  for (const auto& c : node->children) collect_leaves(c, order, seen);
}

double eval_node(const Node* node, const ParameterMap& values,
                 std::unordered_map<const Node*, double>& memo) {
  auto it = memo.find(node);
  if (it != memo.end()) return it->second;
  double v = 0.0;
  switch (node->kind) {
    case Node::Kind::Constant:
      v = node->value;
      break;
    case Node::Kind::Expectation:
      v = expectation(node->circuit, values, node->op);
      break;
    case Node::Kind::Sum:
      for (const auto& c : node->children) v += eval_node(c.get(), values, memo);
      break;
    case Node::Kind::Scale:
      v = node->factor * eval_node(node->children.front().get(), values, memo);
      break;
    case Node::Kind::Product: {
      v = 1.0;
      for (const auto& c : node->children) v *= eval_node(c.get(), values, memo);
      break;
    }
    case Node::Kind::Square: {
      const double c = eval_node(node->children.front().get(), values, memo);
      v = c * c;
      break;
    }
  }
  memo.emplace(node, v);
  return v;
}

}  // namespace

Objective::Objective() : root_(make_constant(0.0)) {}
Objective::Objective(NodePtr root) : root_(std::move(root)) {}

Objective Objective::from_node(NodePtr node) { return Objective(std::move(node)); }

Objective Objective::constant(double value) {
  return Objective(make_constant(value));
}

Objective Objective::expectation(Circuit circuit, PauliSum op) {
  return Objective(make_expectation(std::move(circuit), std::move(op)));
}

Objective Objective::operator+(const Objective& other) const {
  return Objective(make_sum({root_, other.root_}));
}

Objective Objective::operator-(const Objective& other) const {
  return Objective(make_sum({root_, make_scale(-1.0, other.root_)}));
}

Objective Objective::operator*(const Objective& other) const {
  return Objective(make_product({root_, other.root_}));
}

Objective Objective::operator*(double factor) const {
  return Objective(make_scale(factor, root_));
}

Objective Objective::squared() const { return Objective(make_square(root_)); }

bool Objective::is_constant_zero() const { return is_zero_node(root_); }

double Objective::evaluate(const ParameterMap& values, int threads) const {
  std::unordered_map<const Node*, double> memo;
  if (threads > 1) {
    // Evaluate the expectation leaves concurrently; the DAG fold below
    // then runs over memoized values in a fixed order.
    std::vector<const Node*> leaves;
    std::set<const Node*> seen;
    collect_leaves(root_, leaves, seen);
    std::vector<std::future<double>> futures;
    futures.reserve(leaves.size());
    for (const Node* leaf : leaves) {
      futures.push_back(std::async(std::launch::async, [leaf, &values] {
        return fermigrad::expectation(leaf->circuit, values, leaf->op);
      }));
    }
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      memo.emplace(leaves[i], futures[i].get());
    }
  }
  const double v = eval_node(root_.get(), values, memo);
  if (!std::isfinite(v)) throw NumericalError("objective value is not finite");
  return v;
}

std::vector<std::string> Objective::parameter_names() const {
  std::vector<const Node*> leaves;
  std::set<const Node*> seen;
  collect_leaves(root_, leaves, seen);
  std::set<std::string> names;
  for (const Node* leaf : leaves) {
    for (auto& n : leaf->circuit.parameter_names()) names.insert(std::move(n));
  }
  return {names.begin(), names.end()};
}

std::size_t Objective::expectation_leaf_count() const {
  std::vector<const Node*> leaves;
  std::set<const Node*> seen;
  collect_leaves(root_, leaves, seen);
  return leaves.size();
}

double finite_difference(const Objective& obj, const std::string& param,
                         const ParameterMap& values, double h) {
  if (h <= 0.0) throw Error("finite-difference step must be positive");
  ParameterMap shifted = values;
  auto it = shifted.find(param);
  if (it == shifted.end()) throw Error("unknown parameter `" + param + "`");
  const double x = it->second;
  it->second = x + h;
  const double up = obj.evaluate(shifted);
  it->second = x - h;
  const double down = obj.evaluate(shifted);
  return (up - down) / (2.0 * h);
}

namespace {

const Node* require_expectation(const Objective& obj) {
  const Node* n = obj.root().get();
  if (n->kind != Node::Kind::Expectation) {
    throw Error("gate-level gradient rules require an expectation objective");
  }
  return n;
}

Circuit with_gate_replaced(const Circuit& c, std::size_t position,
                           const std::vector<Gate>& replacement) {
  Circuit out(c.n_qubits());
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    if (i == position) {
      for (const auto& g : replacement) out.append(g);
    } else {
      out.append(c.gates()[i]);
    }
  }
  return out;
}

// r * (E(theta+s) - E(theta-s)) for a circuit-level angle shift applied to
// the gates listed in `replacement_fn(shift)`.
NodePtr two_point_rule(const Circuit& circuit, const PauliSum& op,
                       std::size_t position, double r, double s,
                       const std::function<std::vector<Gate>(double)>& shifted_gates) {
  Circuit plus = with_gate_replaced(circuit, position, shifted_gates(+s));
  Circuit minus = with_gate_replaced(circuit, position, shifted_gates(-s));
  return make_sum({make_scale(r, make_expectation(std::move(plus), op)),
                   make_scale(-r, make_expectation(std::move(minus), op))});
}

NodePtr shift_rule_node(const Circuit& circuit, const PauliSum& op,
                        std::size_t position, double r) {
  if (position >= circuit.gates().size()) {
    throw Error("gate position out of range");
  }
  if (r <= 0.0) throw Error("shift-rule prefactor must be positive");
  const Gate& gate = circuit.gates()[position];
  const double s = std::numbers::pi / (4.0 * r);

  if (const auto* rot = std::get_if<PauliRotation>(&gate)) {
    if (rot->generator.size() != 1 ||
        rot->generator.terms().begin()->first.is_identity()) {
      throw Error("shift rule requires a generator with two eigenvalues +-r");
    }
    return two_point_rule(circuit, op, position, r, s, [&](double ds) {
      return std::vector<Gate>{
          PauliRotation(rot->generator, rot->angle.shifted(ds))};
    });
  }
  if (const auto* np = std::get_if<NullspacePhase>(&gate)) {
    // exp(-i phi P0) = phase * exp(-i phi (2P0-1)/2): self-inverse generator
    return two_point_rule(circuit, op, position, r, s, [&](double ds) {
      return std::vector<Gate>{
          NullspacePhase{np->excitation, np->angle.shifted(ds)}};
    });
  }
  throw Error("shift rule requires a generator with two eigenvalues +-r");
}

NodePtr qubit_level_node(const Circuit& circuit, const PauliSum& op,
                         std::size_t position) {
  const auto* ferm =
      std::get_if<FermionicExcitation>(&circuit.gates()[position]);
  if (!ferm) throw Error("not a fermionic excitation gate");
  const auto& enc = encoded_excitation(ferm->excitation, circuit.n_qubits());

  // Compile e^{-i theta/2 G} into one rotation per Pauli term, all sharing
  // the gate parameter, then differentiate each factor with the shift rule.
  std::vector<Gate> compiled;
  for (const auto& [s, c] : enc.generator.terms()) {
    compiled.push_back(PauliRotation(PauliSum(s, c.real()), ferm->angle));
  }
  Circuit base = with_gate_replaced(circuit, position, compiled);

  std::vector<NodePtr> contributions;
  std::size_t k = 0;
  for (const auto& [s, c] : enc.generator.terms()) {
    const double r = std::abs(c.real()) / 2.0;
    contributions.push_back(shift_rule_node(base, op, position + k, r));
    ++k;
  }
  return make_sum(std::move(contributions));
}

NodePtr fermionic_exact_node(const Circuit& circuit, const PauliSum& op,
                             std::size_t position) {
  std::vector<NodePtr> parts;
  for (int alpha : {+1, -1}) {
    for (int sign : {+1, -1}) {
      Circuit shifted = fermionic_shift_circuit(circuit, position, sign, alpha);
      parts.push_back(
          make_scale(0.25 * sign, make_expectation(std::move(shifted), op)));
    }
  }
  return make_sum(std::move(parts));
}

NodePtr fermionic_real_node(const Circuit& circuit, const PauliSum& op,
                            std::size_t position, int alpha) {
  if (alpha != 1 && alpha != -1) throw Error("alpha must be +1 or -1");
  std::vector<NodePtr> parts;
  for (int sign : {+1, -1}) {
    Circuit shifted = fermionic_shift_circuit(circuit, position, sign, alpha);
    parts.push_back(
        make_scale(0.5 * sign, make_expectation(std::move(shifted), op)));
  }
  return make_sum(std::move(parts));
}

NodePtr generator_approx_node(const Circuit& circuit, const PauliSum& op,
                              std::size_t position, int alpha) {
  if (alpha != 1 && alpha != -1) throw Error("alpha must be +1 or -1");
  const auto* ferm =
      std::get_if<FermionicExcitation>(&circuit.gates()[position]);
  if (!ferm) throw Error("not a fermionic excitation gate");
  // e^{-i theta/2 (G + alpha P0)} = e^{-i theta/2 G} e^{-i alpha theta/2 P0};
  // the combined generator is self-inverse, so r = 1/2 and s = pi/2.
  const ParamRef& p = ferm->angle;
  const Excitation& e = ferm->excitation;
  auto gate_pair = [&](double ds) {
    ParamRef shifted = p.shifted(ds);
    ParamRef phase{shifted.name, 0.5 * alpha * shifted.scale,
                   0.5 * alpha * shifted.offset};
    return std::vector<Gate>{NullspacePhase{e, phase},
                             FermionicExcitation{e, shifted}};
  };
  return two_point_rule(circuit, op, position, 0.5, std::numbers::pi / 2.0,
                        gate_pair);
}

NodePtr gate_gradient(const Circuit& circuit, const PauliSum& op,
                      std::size_t position, const GradientScheme& scheme) {
  const Gate& gate = circuit.gates()[position];
  if (std::holds_alternative<PauliRotation>(gate)) {
    const auto& rot = std::get<PauliRotation>(gate);
    // product rule across the commuting factors; identity strings only
    // shift the global phase and drop out of expectation values
    std::vector<Gate> compiled;
    std::vector<double> rs;
    for (const auto& [s, c] : rot.generator.terms()) {
      compiled.push_back(PauliRotation(PauliSum(s, c.real()), rot.angle));
      rs.push_back(s.is_identity() ? 0.0 : std::abs(c.real()) / 2.0);
    }
    if (compiled.size() == 1 && rs[0] > 0.0) {
      return shift_rule_node(circuit, op, position, rs[0]);
    }
    Circuit base = with_gate_replaced(circuit, position, compiled);
    std::vector<NodePtr> parts;
    for (std::size_t k = 0; k < compiled.size(); ++k) {
      if (rs[k] == 0.0) continue;
      parts.push_back(shift_rule_node(base, op, position + k, rs[k]));
    }
    return make_sum(std::move(parts));
  }
  if (std::holds_alternative<NullspacePhase>(gate)) {
    return shift_rule_node(circuit, op, position, 0.5);
  }
  if (std::holds_alternative<FermionicExcitation>(gate)) {
    switch (scheme.kind) {
      case SchemeKind::QubitShift:
        return qubit_level_node(circuit, op, position);
      case SchemeKind::FermionicExact4:
        return fermionic_exact_node(circuit, op, position);
      case SchemeKind::FermionicReal2:
        return fermionic_real_node(circuit, op, position, scheme.alpha);
      case SchemeKind::GeneratorApprox:
        return generator_approx_node(circuit, op, position, scheme.alpha);
    }
  }
  throw Error("gate has no differentiable parameter");
}

NodePtr expectation_gradient(const Node* leaf, const std::string& param,
                             const GradientScheme& scheme) {
  std::vector<NodePtr> parts;
  const Circuit& circuit = leaf->circuit;
  for (std::size_t i = 0; i < circuit.gates().size(); ++i) {
    const ParamRef* p = gate_param(circuit.gates()[i]);
    if (!p || p->is_fixed() || p->name != param) continue;
    // d(angle)/d(param) = scale
    parts.push_back(
        make_scale(p->scale, gate_gradient(circuit, leaf->op, i, scheme)));
  }
  return make_sum(std::move(parts));
}

NodePtr grad_node(const NodePtr& node, const std::string& param,
                  const GradientScheme& scheme,
                  std::unordered_map<const Node*, NodePtr>& memo) {
  auto it = memo.find(node.get());
  if (it != memo.end()) return it->second;
  NodePtr out;
  switch (node->kind) {
    case Node::Kind::Constant:
      out = make_constant(0.0);
      break;
    case Node::Kind::Expectation:
      out = expectation_gradient(node.get(), param, scheme);
      break;
    case Node::Kind::Sum: {
      std::vector<NodePtr> parts;
      for (const auto& c : node->children) {
        parts.push_back(grad_node(c, param, scheme, memo));
      }
      out = make_sum(std::move(parts));
      break;
    }
    case Node::Kind::Scale:
      out = make_scale(node->factor,
                       grad_node(node->children.front(), param, scheme, memo));
      break;
    case Node::Kind::Product: {
      std::vector<NodePtr> parts;
      for (std::size_t i = 0; i < node->children.size(); ++i) {
        std::vector<NodePtr> factors = node->children;
        factors[i] = grad_node(node->children[i], param, scheme, memo);
        parts.push_back(make_product(std::move(factors)));
      }
      out = make_sum(std::move(parts));
      break;
    }
    case Node::Kind::Square: {
      const auto& child = node->children.front();
      out = make_scale(
          2.0, make_product({child, grad_node(child, param, scheme, memo)}));
      break;
    }
  }
  memo.emplace(node.get(), out);
  return out;
}

}  // namespace

Objective grad(const Objective& obj, const std::string& param,
               const GradientScheme& scheme) {
  auto names = obj.parameter_names();
  if (std::find(names.begin(), names.end(), param) == names.end()) {
    throw Error("unknown parameter `" + param + "`");
  }
  std::unordered_map<const Node*, NodePtr> memo;
  return Objective::from_node(grad_node(obj.root(), param, scheme, memo));
}

Objective shift_rule_gradient(const Objective& obj, std::size_t gate_position,
                              double r) {
  const Node* leaf = require_expectation(obj);
  return Objective::from_node(
      shift_rule_node(leaf->circuit, leaf->op, gate_position, r));
}

Objective qubit_level_gradient(const Objective& obj,
                               std::size_t gate_position) {
  const Node* leaf = require_expectation(obj);
  return Objective::from_node(
      qubit_level_node(leaf->circuit, leaf->op, gate_position));
}

Objective fermionic_gradient_exact(const Objective& obj,
                                   std::size_t gate_position) {
  const Node* leaf = require_expectation(obj);
  return Objective::from_node(
      fermionic_exact_node(leaf->circuit, leaf->op, gate_position));
}

Objective fermionic_gradient_real(const Objective& obj,
                                  std::size_t gate_position, int alpha) {
  const Node* leaf = require_expectation(obj);
  return Objective::from_node(
      fermionic_real_node(leaf->circuit, leaf->op, gate_position, alpha));
}

Objective generator_approx_gradient(const Objective& obj,
                                    std::size_t gate_position, int alpha) {
  const Node* leaf = require_expectation(obj);
  return Objective::from_node(
      generator_approx_node(leaf->circuit, leaf->op, gate_position, alpha));
}

}  // namespace fermigrad
