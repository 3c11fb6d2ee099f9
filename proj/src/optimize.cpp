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

#include "fermigrad/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace fermigrad {

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class ObjectiveFunction {
 public:
  ObjectiveFunction(const Objective& obj, const ParameterMap& initial,
                    const MinimizeOptions& opts)
      : obj_(obj), base_(initial), opts_(opts) {
    names_ = obj.parameter_names();
    for (const auto& n : names_) {
      if (!base_.contains(n)) {
        throw Error("objective parameter `" + n + "` missing from initial values");
      }
      grads_.push_back(grad(obj, n, opts.scheme));
    }
  }

  const std::vector<std::string>& names() const { return names_; }

  std::vector<double> pack(const ParameterMap& values) const {
    std::vector<double> x;
    x.reserve(names_.size());
    for (const auto& n : names_) x.push_back(values.at(n));
    return x;
  }

  ParameterMap unpack(const std::vector<double>& x) const {
    ParameterMap values = base_;
    for (std::size_t i = 0; i < names_.size(); ++i) values[names_[i]] = x[i];
    return values;
  }

  double value(const std::vector<double>& x) const {
    return obj_.evaluate(unpack(x), opts_.threads);
  }

  std::vector<double> gradient(const std::vector<double>& x) const {
    ParameterMap values = unpack(x);
    std::vector<double> g;
    g.reserve(grads_.size());
    for (const auto& go : grads_) g.push_back(go.evaluate(values, opts_.threads));
    return g;
  }

 private:
  const Objective& obj_;
  ParameterMap base_;
  MinimizeOptions opts_;
  std::vector<std::string> names_;
  std::vector<Objective> grads_;
};

// Backtracking Armijo search along d from x. Returns the accepted step or
// 0 when no decrease was found.
double line_search(const ObjectiveFunction& f, const std::vector<double>& x,
                   double fx, const std::vector<double>& g,
                   const std::vector<double>& d, std::vector<double>& x_new,
                   double& f_new) {
  const double slope = dot(g, d);
  if (slope >= 0.0) return 0.0;  // not a descent direction
  double step = 1.0;
  for (int k = 0; k < 60; ++k) {
    x_new.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = x[i] + step * d[i];
    f_new = f.value(x_new);
    if (f_new <= fx + 1e-4 * step * slope) return step;
    step *= 0.5;
  }
  return 0.0;
}

}  // namespace

MinimizeResult minimize(const Objective& obj, const ParameterMap& initial,
                        const MinimizeOptions& opts) {
  ObjectiveFunction f(obj, initial, opts);
  MinimizeResult result;

  std::vector<double> x = f.pack(initial);
  if (x.empty()) {
    result.values = initial;
    result.value = obj.evaluate(initial, opts.threads);
    result.converged = true;
    result.stop_reason = "no free parameters";
    result.trace.push_back({0, result.value, 0.0});
    return result;
  }

  double fx = f.value(x);
  std::vector<double> g = f.gradient(x);
  if (!std::isfinite(fx)) throw NumericalError("objective is not finite");
  result.trace.push_back({0, fx, inf_norm(g)});

  // limited-memory curvature pairs for the QN path
  const std::size_t memory = 10;
  std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;

  std::string reason = "max iterations reached";
  bool converged = false;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    if (inf_norm(g) < opts.tol) {
      converged = true;
      reason = "gradient tolerance reached";
      break;
    }

    std::vector<double> d(x.size());
    if (opts.method == MinimizeOptions::Method::GD || pairs.empty()) {
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = -g[i];
    } else {
      // two-loop recursion
      std::vector<double> q = g;
      std::vector<double> alphas(pairs.size());
      for (std::size_t k = pairs.size(); k-- > 0;) {
        const auto& [s, y] = pairs[k];
        const double rho = 1.0 / dot(y, s);
        alphas[k] = rho * dot(s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alphas[k] * y[i];
      }
      const auto& [s_last, y_last] = pairs.back();
      const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
      for (auto& qi : q) qi *= gamma;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [s, y] = pairs[k];
        const double rho = 1.0 / dot(y, s);
        const double beta = rho * dot(y, q);
        for (std::size_t i = 0; i < q.size(); ++i) {
          q[i] += (alphas[k] - beta) * s[i];
        }
      }
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = -q[i];
    }

    std::vector<double> x_new;
    double f_new = 0.0;
    double step = line_search(f, x, fx, g, d, x_new, f_new);
    if (step == 0.0 && opts.method == MinimizeOptions::Method::QN &&
        !pairs.empty()) {
      // retry along steepest descent
      pairs.clear();
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = -g[i];
      step = line_search(f, x, fx, g, d, x_new, f_new);
    }
    if (step == 0.0) {
      reason = "line search failed to decrease the objective";
      break;
    }
    if (!std::isfinite(f_new)) throw NumericalError("objective is not finite");

    std::vector<double> g_new = f.gradient(x_new);
    if (opts.method == MinimizeOptions::Method::QN) {
      std::vector<double> s(x.size()), y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        s[i] = x_new[i] - x[i];
        y[i] = g_new[i] - g[i];
      }
      const double sy = dot(s, y);
      if (sy > 1e-12) {
        pairs.emplace_back(std::move(s), std::move(y));
        if (pairs.size() > memory) pairs.pop_front();
      }
    }
    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
    result.trace.push_back({iter, fx, inf_norm(g)});
  }
  if (!converged && inf_norm(g) < opts.tol) {
    converged = true;
    reason = "gradient tolerance reached";
  }

  result.values = f.unpack(x);
  result.value = fx;
  result.converged = converged;
  result.stop_reason = reason;
  return result;
}

OperatorPool make_upccgsd_pool(unsigned n_spatial, const PoolOptions& opts) {
  OperatorPool pool;
  pool.spin_filter = true;
  std::set<unsigned> frozen(opts.freeze.begin(), opts.freeze.end());
  auto active = [&](unsigned p) { return !frozen.contains(p); };

  for (unsigned p = 0; p < n_spatial; ++p) {
    if (!active(p)) continue;
    for (unsigned q = p + 1; q < n_spatial; ++q) {
      if (!active(q)) continue;
      pool.candidates.push_back(Excitation({{2 * p, 2 * q}}));          // up
      pool.candidates.push_back(Excitation({{2 * p + 1, 2 * q + 1}}));  // down
    }
  }
  for (unsigned p = 0; p < n_spatial; ++p) {
    if (!active(p)) continue;
    for (unsigned q = p + 1; q < n_spatial; ++q) {
      if (!active(q)) continue;
      pool.candidates.push_back(
          Excitation({{2 * p, 2 * q}, {2 * p + 1, 2 * q + 1}}));  // pair double
    }
  }
  if (opts.generalized_doubles) {
    std::vector<Excitation::Pair> ups, downs;
    for (unsigned p = 0; p < n_spatial; ++p) {
      if (!active(p)) continue;
      for (unsigned q = p + 1; q < n_spatial; ++q) {
        if (!active(q)) continue;
        ups.emplace_back(2 * p, 2 * q);
        downs.emplace_back(2 * p + 1, 2 * q + 1);
      }
    }
    for (const auto& u : ups) {
      for (const auto& d : downs) {
        if (u.first + 1 == d.first && u.second + 1 == d.second) continue;
        pool.candidates.push_back(Excitation({u, d}));
      }
    }
  }
  return pool;
}

void validate_pool(const OperatorPool& pool, unsigned n_qubits) {
  if (pool.candidates.empty()) throw Error("operator pool is empty");
  for (const auto& e : pool.candidates) {
    if (e.max_index() >= n_qubits) {
      throw Error("pool excitation index out of range");
    }
    if (!pool.spin_filter) continue;
    bool same_spin = true;
    for (const auto& [p, q] : e.pairs()) same_spin &= (p % 2 == q % 2);
    bool pair_double =
        e.rank() == 2 && e.pairs()[0].first % 2 == 0 &&
        e.pairs()[1].first == e.pairs()[0].first + 1 &&
        e.pairs()[1].second == e.pairs()[0].second + 1;
    if (!same_spin && !pair_double) {
      throw Error("spin filter rejects a pool candidate");
    }
  }
}

AnsatzLayout AnsatzLayout::reference_plus_adaptive(const Circuit& reference) {
  AnsatzLayout layout;
  layout.blocks.push_back({false, reference.gates()});
  layout.blocks.push_back({true, {}});
  return layout;
}

Circuit AnsatzLayout::build(unsigned n_qubits) const {
  Circuit c(n_qubits);
  for (const auto& b : blocks) {
    for (const auto& g : b.gates) c.append(g);
  }
  return c;
}

std::vector<std::size_t> AnsatzLayout::adaptive_block_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].adaptive) out.push_back(i);
  }
  return out;
}

namespace {

AdaptResult adapt_loop(
    const std::function<Objective(const Circuit&)>& make_objective,
    unsigned n_qubits, const AnsatzLayout& initial_layout,
    const OperatorPool& pool, const AdaptOptions& opts) {
  validate_pool(pool, n_qubits);
  AnsatzLayout layout = initial_layout;
  const auto adaptive = layout.adaptive_block_indices();
  if (adaptive.empty()) throw Error("layout has no adaptive block");

  AdaptResult result;
  ParameterMap values;
  double energy =
      make_objective(layout.build(n_qubits)).evaluate(values, opts.minimize.threads);
  std::size_t next_param = 0;
  std::string reason = "max operator count reached";

  for (int round = 0; round < opts.max_ops; ++round) {
    // screen every (candidate, insertion point) at angle zero
    double best_grad = 0.0;
    std::size_t best_candidate = 0, best_block = 0;
    const std::string pname = "t" + std::to_string(next_param);
    for (std::size_t ci = 0; ci < pool.candidates.size(); ++ci) {
      for (std::size_t bi : adaptive) {
        AnsatzLayout trial = layout;
        trial.blocks[bi].gates.push_back(FermionicExcitation{
            pool.candidates[ci], ParamRef::named(pname)});
        Objective obj = make_objective(trial.build(n_qubits));
        ParameterMap trial_values = values;
        trial_values[pname] = 0.0;
        const double g =
            grad(obj, pname, opts.scheme).evaluate(trial_values, opts.minimize.threads);
        if (std::abs(g) > best_grad) {
          best_grad = std::abs(g);
          best_candidate = ci;
          best_block = bi;
        }
      }
    }
    if (best_grad < opts.screen_tol) {
      reason = "screened gradients below tolerance";
      break;
    }

    layout.blocks[best_block].gates.push_back(FermionicExcitation{
        pool.candidates[best_candidate], ParamRef::named(pname)});
    values[pname] = 0.0;
    ++next_param;

    MinimizeOptions mopts = opts.minimize;
    mopts.scheme = opts.scheme;
    MinimizeResult mres =
        minimize(make_objective(layout.build(n_qubits)), values, mopts);
    values = mres.values;
    const double new_energy = mres.value;
    result.rounds.push_back(
        {best_candidate, best_block, best_grad, new_energy, pname});
    const double improvement = energy - new_energy;
    energy = new_energy;
    if (improvement < opts.energy_tol) {
      reason = "energy improvement below tolerance";
      break;
    }
  }

  result.layout = layout;
  result.circuit = layout.build(n_qubits);
  result.values = values;
  result.energy = energy;
  result.stop_reason = reason;
  return result;
}

}  // namespace

AdaptResult adapt_vqe(const PauliSum& hamiltonian, const AnsatzLayout& layout,
                      const OperatorPool& pool, const AdaptOptions& opts) {
  if (!hamiltonian.is_hermitian()) throw Error("hamiltonian must be hermitian");
  const unsigned n_qubits = std::max(1u, hamiltonian.min_qubits());
  auto make_objective = [&hamiltonian](const Circuit& c) {
    return Objective::expectation(c, hamiltonian);
  };
  return adapt_loop(make_objective, n_qubits, layout, pool, opts);
}

VqeResult vqe(const PauliSum& hamiltonian, const Circuit& ansatz,
              const Circuit& reference, const MinimizeOptions& opts) {
  if (!hamiltonian.is_hermitian()) throw Error("hamiltonian must be hermitian");
  if (ansatz.n_qubits() != reference.n_qubits()) {
    throw Error("ansatz and reference qubit counts differ");
  }
  Circuit full(reference.n_qubits());
  full.append(reference).append(ansatz);
  Objective obj = Objective::expectation(full, hamiltonian);
  ParameterMap initial;
  for (const auto& n : full.parameter_names()) initial[n] = 0.0;
  MinimizeResult mres = minimize(obj, initial, opts);
  return {mres, mres.value, std::move(full)};
}

Objective excited_objective(const ExcitedStateTask& task,
                            const Circuit& ansatz) {
  if (!task.hamiltonian.is_hermitian()) {
    throw Error("hamiltonian must be hermitian");
  }
  Objective obj = Objective::expectation(ansatz, task.hamiltonian);
  if (task.solved.empty()) return obj;
  const PauliSum q_plus = all_zero_projector(ansatz.n_qubits());
  for (const auto& s : task.solved) {
    double weight = 0.0;
    if (s.penalty) {
      if (*s.penalty <= 0.0) throw Error("penalty factor must be positive");
      weight = *s.penalty;
    } else {
      if (s.energy >= 0.0) {
        throw Error("default penalty requires a negative solved energy; "
                    "supply a positive penalty factor instead");
      }
      weight = -s.energy;
    }
    if (s.circuit.n_qubits() != ansatz.n_qubits()) {
      throw Error("solved circuit qubit count differs from the ansatz");
    }
    // bind the solved circuit's parameters to their converged values
    Circuit bound(s.circuit.n_qubits());
    for (const auto& g : s.circuit.gates()) {
      const ParamRef* p = gate_param(g);
      if (!p || p->is_fixed()) {
        bound.append(g);
        continue;
      }
      Gate fixed = g;
      std::visit(
          [&](auto& gate) {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (!std::is_same_v<T, BasisFlip>) {
              gate.angle = ParamRef::fixed(gate.angle.resolve(s.values));
            }
          },
          fixed);
      bound.append(std::move(fixed));
    }
    Circuit overlap(ansatz.n_qubits());
    overlap.append(ansatz).append(bound.adjoint());
    obj = obj + weight * Objective::expectation(std::move(overlap), q_plus);
  }
  return obj;
}

AdaptResult excited_adapt(const ExcitedStateTask& task,
                          const AnsatzLayout& layout, const OperatorPool& pool,
                          const AdaptOptions& opts) {
  const unsigned n_qubits = std::max(1u, task.hamiltonian.min_qubits());
  auto make_objective = [&task](const Circuit& c) {
    return excited_objective(task, c);
  };
  return adapt_loop(make_objective, n_qubits, layout, pool, opts);
}

Circuit prepare_reference(unsigned n_qubits, std::vector<unsigned> occupied,
                          std::optional<std::pair<unsigned, unsigned>> cis_pair) {
  std::set<unsigned> occ(occupied.begin(), occupied.end());
  if (occ.size() != occupied.size()) {
    throw Error("occupied orbital indices must be distinct");
  }
  for (unsigned k : occupied) {
    if (k >= n_qubits) throw Error("occupied orbital index out of range");
  }
  Circuit c(n_qubits);
  if (!cis_pair) {
    for (unsigned k : occ) c.append(BasisFlip{k});
    return c;
  }

  const auto [i, A] = *cis_pair;
  const unsigned i_up = 2 * i, i_dn = 2 * i + 1;
  const unsigned a_up = 2 * A, a_dn = 2 * A + 1;
  if (a_dn >= n_qubits || i_dn >= n_qubits) {
    throw Error("cis pair orbital index out of range");
  }
  if (!occ.contains(i_up) || !occ.contains(i_dn)) {
    throw Error("cis pair source orbital must be doubly occupied");
  }
  if (occ.contains(a_up) || occ.contains(a_dn)) {
    throw Error("cis pair target orbital must be empty");
  }
  // flip into the i_up -> a_up excited determinant, then rotate by pi/2 into
  // the equal superposition with the i_dn -> a_dn determinant; this pair
  // order lands on the singlet combination
  occ.erase(i_up);
  occ.insert(a_up);
  for (unsigned k : occ) c.append(BasisFlip{k});
  c.append(FermionicExcitation{Excitation({{i_up, a_up}, {a_dn, i_dn}}),
                               ParamRef::fixed(std::numbers::pi / 2.0)});
  return c;
}

}  // namespace fermigrad
