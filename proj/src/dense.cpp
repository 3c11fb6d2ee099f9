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

#include "fermigrad/dense.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace fermigrad {

namespace {

Eigen::Matrix2cd axis_matrix(Axis a) {
  Eigen::Matrix2cd m;
  const Complex i{0.0, 1.0};
  switch (a) {
    case Axis::X:
      m << 0, 1, 1, 0;
      break;
    case Axis::Y:
      m << 0, -i, i, 0;
      break;
    case Axis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

}  // namespace

Eigen::MatrixXcd to_dense(const PauliSum& a, unsigned n_qubits) {
  if (n_qubits > kDenseOracleMaxQubits) {
    throw Error("to_dense: " + std::to_string(n_qubits) +
                " qubits exceeds the dense oracle cap of " +
                std::to_string(kDenseOracleMaxQubits));
  }
  if (a.min_qubits() > n_qubits) {
    throw Error("to_dense: qubit index out of range for " +
                std::to_string(n_qubits) + " qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, coeff] : a.terms()) {
    // Kronecker product evaluated entrywise: entry (r,c) is the product of
    // the per-qubit factor entries M_q[r_q][c_q]; identity factors force
    // r_q == c_q, so each column holds exactly one nonzero.
    std::vector<Eigen::Matrix2cd> mats(n_qubits, Eigen::Matrix2cd::Identity());
    for (const auto& [q, ax] : s.factors()) mats[q] = axis_matrix(ax);
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index row = 0;
      Complex val = coeff;
      for (unsigned q = 0; q < n_qubits; ++q) {
        const int cbit = static_cast<int>((col >> (n_qubits - 1 - q)) & 1);
        // pick the row bit with a nonzero entry in this 2x2 factor
        int rbit = std::abs(mats[q](0, cbit)) != 0.0 ? 0 : 1;
        val *= mats[q](rbit, cbit);
        row |= Eigen::Index{rbit} << (n_qubits - 1 - q);
      }
      out(row, col) += val;
    }
  }
  return out;
}

std::vector<double> dense_spectrum(const PauliSum& a, unsigned n_qubits,
                                   std::size_t k) {
  if (!a.is_hermitian()) {
    throw Error("dense_spectrum: operator is not hermitian");
  }
  Eigen::MatrixXcd m = to_dense(a, n_qubits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense_spectrum: eigensolver failed");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> out;
  const std::size_t n = std::min<std::size_t>(k, ev.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(ev(static_cast<Eigen::Index>(i)));
  return out;
}

}  // namespace fermigrad
