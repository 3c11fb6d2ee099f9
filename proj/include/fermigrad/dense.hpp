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

#include <Eigen/Dense>

#include "fermigrad/pauli.hpp"

namespace fermigrad {

/** Dense expansions above this qubit count are refused. */
inline constexpr unsigned kDenseOracleMaxQubits = 12;

/**
 * Exact Kronecker-product expansion of a Pauli sum.
 *
 * Qubit 0 is the most significant bit of the basis-state label, i.e. the
 * leftmost factor of the Kronecker product. This is a deliberately plain
 * reference implementation, independent of the statevector simulator, used
 * as the correctness oracle throughout the test suites.
 */
Eigen::MatrixXcd to_dense(const PauliSum& a, unsigned n_qubits);

/** Lowest k eigenvalues of a hermitian Pauli sum, ascending. */
std::vector<double> dense_spectrum(const PauliSum& a, unsigned n_qubits,
                                   std::size_t k);

}  // namespace fermigrad
