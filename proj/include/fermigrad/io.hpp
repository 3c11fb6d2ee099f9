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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fermigrad/optimize.hpp"

namespace fermigrad {

/**
 * A qubit Hamiltonian with free-form metadata.
 *
 * File format: `#`-prefixed `key: value` metadata lines followed by one
 * Pauli term per line, `<real> <imag> <axis><index> ...`. The identity term
 * carries no axis tokens.
 */
struct ProblemFile {
  unsigned n_qubits = 0;
  PauliSum hamiltonian;
  std::vector<std::pair<std::string, std::string>> metadata;

  static ProblemFile load(const std::string& path);
  static ProblemFile parse(const std::string& text);
  std::string serialize() const;
  void save(const std::string& path) const;

  std::optional<std::string> metadata_value(const std::string& key) const;
  std::optional<double> metadata_number(const std::string& key) const;
};

Circuit load_circuit(const std::string& path, unsigned n_qubits);
void save_circuit(const Circuit& c, const std::string& path);

/** Exit codes used by the CLI. */
enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 2,
  kExitNumericalError = 3,
  kExitNotConverged = 4,
};

struct CommandOptions {
  std::string command;  // energy | grad | vqe | adapt | excited | spectrum
  std::string problem_path;
  std::optional<std::string> circuit_path;
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> scheme;  // qubit | exact4 | real2 | approx
  char alpha = '+';
  int threads = 1;
  std::optional<unsigned long> seed;
  std::optional<int> k;  // spectrum: number of eigenvalues
};

/**
 * Runs one CLI command; writes human-readable output to `out` and error
 * text to `err`, plus the JSON/CSV record when an output path is set.
 * Returns an ExitCode and never throws.
 */
int run_command(const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace fermigrad
