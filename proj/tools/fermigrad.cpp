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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fermigrad/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fermigrad: encoding-aware unitary coupled-cluster simulation "
               "with analytic fermionic gradients"};
  app.require_subcommand(1);

  fermigrad::CommandOptions options;
  std::string scheme;
  std::string alpha = "+";
  unsigned long seed = 0;
  int k = 1;

  for (const std::string name :
       {"energy", "grad", "vqe", "adapt", "excited", "spectrum"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("problem", options.problem_path, "Hamiltonian file")
        ->required();
    sub->add_option("--circuit", [&options](const std::vector<std::string>& v) {
      options.circuit_path = v.front();
      return true;
    }, "circuit file");
    sub->add_option("--config", [&options](const std::vector<std::string>& v) {
      options.config_path = v.front();
      return true;
    }, "JSON run configuration");
    sub->add_option("--out", [&options](const std::vector<std::string>& v) {
      options.out_path = v.front();
      return true;
    }, "output record path (JSON, or CSV for grad)");
    sub->add_option("--scheme", scheme,
                    "gradient scheme: qubit|exact4|real2|approx");
    sub->add_option("--alpha", alpha, "alpha sign for real2/approx: + or -");
    sub->add_option("--threads", options.threads, "parallel leaf evaluation");
    sub->add_option("--seed", [&options, &seed](const std::vector<std::string>& v) {
      seed = std::stoul(v.front());
      options.seed = seed;
      return true;
    }, "seed for random parameter initialization");
    if (name == "spectrum") {
      sub->add_option("--k", [&options, &k](const std::vector<std::string>& v) {
        k = std::stoi(v.front());
        options.k = k;
        return true;
      }, "number of eigenvalues");
    }
  }

  CLI11_PARSE(app, argc, argv);

  options.command = app.get_subcommands().front()->get_name();
  if (!scheme.empty()) options.scheme = scheme;
  options.alpha = alpha.empty() ? '+' : alpha.front();

  return fermigrad::run_command(options, std::cout, std::cerr);
}
