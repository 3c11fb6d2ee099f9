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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fermigrad/autodiff.hpp"

namespace fermigrad {

struct MinimizeOptions {
  enum class Method { GD, QN };
  Method method = Method::QN;
  GradientScheme scheme{};
  double tol = 1e-6;  // infinity norm of the gradient
  int max_iters = 500;
  int threads = 1;
};

struct IterationRecord {
  int iteration;
  double value;
  double grad_norm;
};

struct MinimizeResult {
  ParameterMap values;
  double value = 0.0;
  std::vector<IterationRecord> trace;
  bool converged = false;
  std::string stop_reason;
};

/**
 * Gradient-based minimization of an Objective over its named parameters.
 * GD is steepest descent, QN a limited-memory quasi-Newton method; both use
 * a backtracking line search, so iterates never increase the value.
 */
MinimizeResult minimize(const Objective& obj, const ParameterMap& initial,
                        const MinimizeOptions& opts = {});

/** Pool of candidate excitations for adaptive ansatz growth. */
struct OperatorPool {
  std::vector<Excitation> candidates;
  bool spin_filter = true;
};

struct PoolOptions {
  std::vector<unsigned> freeze;       // spatial orbitals excluded entirely
  bool generalized_doubles = false;   // add non-paired same-spin doubles
};

/**
 * Sz-preserving generalized singles plus paired doubles over `n_spatial`
 * spatial orbitals (spin orbital 2j is the up and 2j+1 the down channel of
 * spatial orbital j). With `generalized_doubles`, doubles combining any
 * same-spin up pair with any same-spin down pair are added as well.
 */
OperatorPool make_upccgsd_pool(unsigned n_spatial, const PoolOptions& = {});

/** Checks index range and, when spin_filter is set, the spin structure. */
void validate_pool(const OperatorPool& pool, unsigned n_qubits);

/**
 * An ansatz as an ordered list of static gate blocks and adaptive insertion
 * points. Adaptive growth appends gates at an insertion point without
 * disturbing the surrounding static blocks.
 */
struct AnsatzLayout {
  struct Block {
    bool adaptive = false;
    std::vector<Gate> gates;  // static contents, or gates grown so far
  };
  std::vector<Block> blocks;

  /** reference gates, then one trailing adaptive block */
  static AnsatzLayout reference_plus_adaptive(const Circuit& reference);

  Circuit build(unsigned n_qubits) const;
  std::vector<std::size_t> adaptive_block_indices() const;
};

struct AdaptOptions {
  double screen_tol = 1e-3;
  double energy_tol = 1e-6;
  int max_ops = 20;
  GradientScheme scheme{};
  MinimizeOptions minimize{};
};

struct AdaptRound {
  std::size_t candidate;      // index into the pool
  std::size_t block;          // adaptive block the gate was inserted into
  double screened_gradient;   // |dE/dtheta| at theta = 0
  double energy;              // objective value after re-optimization
  std::string parameter;
};

struct AdaptResult {
  AnsatzLayout layout;
  Circuit circuit{1};
  ParameterMap values;
  double energy = 0.0;
  std::vector<AdaptRound> rounds;
  std::string stop_reason;
};

/** Adapt-VQE: gradient-screened pool growth minimizing <H>. */
AdaptResult adapt_vqe(const PauliSum& hamiltonian, const AnsatzLayout& layout,
                      const OperatorPool& pool, const AdaptOptions& = {});

struct VqeResult {
  MinimizeResult minimize;
  double energy = 0.0;
  Circuit circuit{1};
};

/** Plain VQE over reference + ansatz. */
VqeResult vqe(const PauliSum& hamiltonian, const Circuit& ansatz,
              const Circuit& reference, const MinimizeOptions& = {});

/** Sequential excited-state bookkeeping: previously solved circuits and the
 * penalty weights that keep new states orthogonal to them. */
struct ExcitedStateTask {
  struct Solved {
    Circuit circuit{1};
    ParameterMap values;
    double energy;
    std::optional<double> penalty;  // positive override for unbound states
  };
  PauliSum hamiltonian;
  std::vector<Solved> solved;
};

/**
 * <H>_{U(theta)} - sum_i E_i <Q+>_{Ui^dag U(theta)} with Q+ the all-zero
 * projector. Defaulted penalties require E_i < 0; explicit penalties must
 * be positive and replace -E_i.
 */
Objective excited_objective(const ExcitedStateTask& task,
                            const Circuit& ansatz);

/** Adapt-VQE driven by the penalized excited-state objective. */
AdaptResult excited_adapt(const ExcitedStateTask& task,
                          const AnsatzLayout& layout, const OperatorPool& pool,
                          const AdaptOptions& = {});

/**
 * Basis flips preparing the given occupation; with `cis_pair` = (i, a) in
 * spatial-orbital indices, prepares the equal-weight two-determinant singlet
 * combination of the i->a spin-up and spin-down single excitations via one
 * fermionic gate at theta = pi/2.
 */
Circuit prepare_reference(unsigned n_qubits, std::vector<unsigned> occupied,
                          std::optional<std::pair<unsigned, unsigned>> cis_pair =
                              std::nullopt);

}  // namespace fermigrad
