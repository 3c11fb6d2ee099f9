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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fermigrad/dense.hpp"
#include "fermigrad/io.hpp"
#include "json.hpp"

using namespace fermigrad;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = FERMIGRAD_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fermigrad_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
};

int run(const CommandOptions& options, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_command(options, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

/** Ground energy by power iteration on (sigma - H), independent of Eigen. */
double power_iteration_ground(const PauliSum& h, unsigned n_qubits) {
  Eigen::MatrixXcd m = to_dense(h, n_qubits);
  double sigma = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    sigma = std::max(sigma, m.row(r).cwiseAbs().sum());
  }
  Eigen::MatrixXcd shifted =
      sigma * Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - m;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.rows());
  v.normalize();
  double eig = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXcd w = shifted * v;
    const double next = w.norm();
    w /= next;
    if (std::abs(next - eig) < 1e-13) {
      v = w;
      eig = next;
      break;
    }
    v = w;
    eig = next;
  }
  return sigma - eig;
}

}  // namespace

TEST_CASE("problem file parsing, metadata, and validation") {
  ProblemFile pf = ProblemFile::load(kData + "/h2_sto3g_0.7414.ham");
  CHECK(pf.n_qubits == 4);
  CHECK(pf.hamiltonian.size() == 15);
  CHECK(pf.metadata_value("basis") == std::string("STO-3G"));
  REQUIRE(pf.metadata_number("hf_energy"));

  // the HF determinant diagonal element reproduces the recorded HF energy
  Statevector hf = Statevector::basis_state(4, 0b1100);
  CHECK(expectation(hf, pf.hamiltonian) ==
        doctest::Approx(*pf.metadata_number("hf_energy")).epsilon(1e-12));
  Eigen::MatrixXcd dense = to_dense(pf.hamiltonian, 4);
  CHECK(dense(0b1100, 0b1100).real() ==
        doctest::Approx(*pf.metadata_number("hf_energy")).epsilon(1e-12));

  CHECK_THROWS_AS(ProblemFile::parse("# n_qubits: 1\n1 0 Z4\n"), ParseError);
  CHECK_THROWS_AS(ProblemFile::parse("0.1 0.3 Z0\n"), ParseError);  // non-herm
  CHECK_THROWS_AS(ProblemFile::parse("0.1 0.0 W3\n"), ParseError);
  ProblemFile inferred = ProblemFile::parse("1 0 Z2\n");
  CHECK(inferred.n_qubits == 3);
}

TEST_CASE("bundled files are in canonical serialized form") {
  for (const auto& name :
       {"h2_sto3g_0.7414.ham", "h2_sto3g_1.0000.ham", "h2_sto3g_1.5000.ham",
        "h2_631g_0.7414.ham"}) {
    const std::string raw = slurp(kData + "/" + name);
    ProblemFile pf = ProblemFile::parse(raw);
    CHECK(pf.serialize() == raw);
  }
}

TEST_CASE("circuit file io") {
  TempDir tmp;
  Circuit c(4);
  c.append(BasisFlip{0}).append(BasisFlip{1});
  c.append(FermionicExcitation{Excitation({{0, 2}, {1, 3}}),
                               ParamRef::named("a")});
  const fs::path p = tmp.path / "hf.circ";
  save_circuit(c, p.string());
  Circuit back = load_circuit(p.string(), 4);
  CHECK(circuit_to_text(back) == circuit_to_text(c));
  CHECK_THROWS_AS(load_circuit((tmp.path / "missing.circ").string(), 4),
                  ParseError);
}

TEST_CASE("cmd energy") {
  TempDir tmp;
  const fs::path circ = tmp.file("hf.circ", "X 0\nX 1\n");
  CommandOptions opt;
  opt.command = "energy";
  opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
  opt.circuit_path = circ.string();
  opt.out_path = (tmp.path / "record.json").string();
  std::string text;
  CHECK(run(opt, &text) == kExitOk);

  ProblemFile pf = ProblemFile::load(opt.problem_path);
  json rec = json::parse(slurp(tmp.path / "record.json"));
  CHECK(rec.at("results").at("energy").get<double>() ==
        doctest::Approx(*pf.metadata_number("hf_energy")).epsilon(1e-12));
  CHECK(text.find("energy") == 0);

  // identity hamiltonian: energy 1
  const fs::path ident = tmp.file("ident.ham", "# n_qubits: 2\n1 0\n");
  CommandOptions id_opt = opt;
  id_opt.problem_path = ident.string();
  id_opt.circuit_path = tmp.file("flip.circ", "X 0\n").string();
  id_opt.out_path = (tmp.path / "ident.json").string();
  CHECK(run(id_opt) == kExitOk);
  CHECK(json::parse(slurp(tmp.path / "ident.json"))
            .at("results")
            .at("energy")
            .get<double>() == doctest::Approx(1.0));
}

TEST_CASE("cmd energy error paths and exit codes") {
  TempDir tmp;
  CommandOptions opt;
  opt.command = "energy";
  opt.problem_path = (tmp.path / "nope.ham").string();
  std::string err;
  CHECK(run(opt, nullptr, &err) == kExitParseError);

  const fs::path bad = tmp.file("bad.ham", "# n_qubits: 2\n0.1 0.0 W3\n");
  opt.problem_path = bad.string();
  opt.circuit_path = tmp.file("c.circ", "X 0\n").string();
  CHECK(run(opt, nullptr, &err) == kExitParseError);
  CHECK(err.find("W3") != std::string::npos);
  CHECK(err.find("line 2") != std::string::npos);

  // dimension mismatch: circuit qubit beyond problem size
  const fs::path ham = tmp.file("ok.ham", "# n_qubits: 2\n1 0 Z0\n");
  opt.problem_path = ham.string();
  opt.circuit_path = tmp.file("big.circ", "X 3\n").string();
  CHECK(run(opt, nullptr, &err) == kExitParseError);

  CommandOptions unknown;
  unknown.command = "frobnicate";
  unknown.problem_path = ham.string();
  CHECK(run(unknown) == kExitParseError);
}

TEST_CASE("cmd spectrum with independent power-iteration check") {
  TempDir tmp;
  const fs::path ident = tmp.file("ident.ham", "# n_qubits: 1\n1 0\n");
  CommandOptions opt;
  opt.command = "spectrum";
  opt.problem_path = ident.string();
  opt.k = 1;
  std::string text;
  CHECK(run(opt, &text) == kExitOk);
  CHECK(std::stod(text) == doctest::Approx(1.0));

  const fs::path z = tmp.file("z.ham", "# n_qubits: 1\n1 0 Z0\n");
  opt.problem_path = z.string();
  opt.k = 2;
  CHECK(run(opt, &text) == kExitOk);
  std::istringstream is(text);
  double e0 = 0.0, e1 = 0.0;
  is >> e0 >> e1;
  CHECK(e0 == doctest::Approx(-1.0));
  CHECK(e1 == doctest::Approx(1.0));

  ProblemFile pf = ProblemFile::load(kData + "/h2_sto3g_0.7414.ham");
  opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
  opt.k = 1;
  opt.out_path = (tmp.path / "spec.json").string();
  CHECK(run(opt, &text) == kExitOk);
  const double ground = json::parse(slurp(tmp.path / "spec.json"))
                            .at("results")
                            .at("eigenvalues")[0]
                            .get<double>();
  CHECK(ground ==
        doctest::Approx(*pf.metadata_number("fci_energy")).epsilon(1e-9));
  CHECK(ground == doctest::Approx(power_iteration_ground(pf.hamiltonian, 4))
                      .epsilon(1e-8));
}

TEST_CASE("cmd vqe matches the spectrum oracle") {
  TempDir tmp;
  const fs::path cfg = tmp.file("vqe.json", R"({
    "reference": [0, 1],
    "ansatz": ["FERM a 0 2 1 3"],
    "tol": 1e-8
  })");
  CommandOptions opt;
  opt.command = "vqe";
  opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
  opt.config_path = cfg.string();
  opt.out_path = (tmp.path / "vqe.json").string();
  std::string text;
  CHECK(run(opt, &text) == kExitOk);
  json rec = json::parse(slurp(tmp.path / "vqe.json"));
  ProblemFile pf = ProblemFile::load(opt.problem_path);
  CHECK(rec.at("results").at("energy").get<double>() ==
        doctest::Approx(*pf.metadata_number("fci_energy")).epsilon(1e-6));
  CHECK(rec.at("results").at("converged").get<bool>());
  CHECK(fs::exists(tmp.path / "vqe.json.trace.csv"));
}

TEST_CASE("cmd adapt with max_ops=0 returns the reference energy") {
  TempDir tmp;
  const fs::path cfg = tmp.file("adapt.json", R"({
    "reference": [0, 1],
    "max_ops": 0
  })");
  CommandOptions opt;
  opt.command = "adapt";
  opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
  opt.config_path = cfg.string();
  opt.out_path = (tmp.path / "adapt.json").string();
  CHECK(run(opt) == kExitOk);
  json rec = json::parse(slurp(tmp.path / "adapt.json"));
  ProblemFile pf = ProblemFile::load(opt.problem_path);
  CHECK(rec.at("results").at("rounds").empty());
  CHECK(rec.at("results").at("energy").get<double>() ==
        doctest::Approx(*pf.metadata_number("hf_energy")).epsilon(1e-10));
}

TEST_CASE("cmd excited solves two singlet states") {
  TempDir tmp;
  const fs::path cfg = tmp.file("excited.json", R"({
    "states": [
      {"reference": [0, 1]},
      {"reference": [0, 1], "cis_pair": [0, 1]}
    ],
    "ansatz": ["FERM a 0 2 1 3"],
    "tol": 1e-8
  })");
  CommandOptions opt;
  opt.command = "excited";
  opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
  opt.config_path = cfg.string();
  opt.out_path = (tmp.path / "excited.json").string();
  CHECK(run(opt) == kExitOk);
  json rec = json::parse(slurp(tmp.path / "excited.json"));
  const auto& states = rec.at("results").at("states");
  REQUIRE(states.size() == 2);
  ProblemFile pf = ProblemFile::load(opt.problem_path);
  CHECK(states[0].at("energy").get<double>() ==
        doctest::Approx(*pf.metadata_number("fci_energy")).epsilon(1e-6));
  // the second singlet of this system sits at -0.1699...; pinned loosely
  // here and exactly against dense diagonalization in the acceptance suite
  CHECK(states[1].at("energy").get<double>() > -0.2);
  CHECK(states[1].at("energy").get<double>() < 0.0);
  CHECK(states[1].at("overlap_squared")[0].get<double>() < 1e-3);
}

TEST_CASE("cmd grad emits a self-describing csv") {
  TempDir tmp;
  const fs::path circ = tmp.file("scan.circ", "X 0\nX 1\nFERM a 0 2 1 3\n");
  const fs::path cfg = tmp.file("grad.json", R"({
    "scan": {"points": 21},
    "schemes": ["exact4", "real2+", "real2-", "qubit", "fd"]
  })");
  CommandOptions opt;
  opt.command = "grad";
  opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
  opt.circuit_path = circ.string();
  opt.config_path = cfg.string();
  opt.out_path = (tmp.path / "scan.csv").string();
  CHECK(run(opt) == kExitOk);
  const std::string csv = slurp(tmp.path / "scan.csv");
  CHECK(csv.find("theta,energy,grad_exact4,grad_real2+,grad_real2-,grad_qubit,"
                 "grad_fd") != std::string::npos);
  CHECK(csv.find("r=0.25") != std::string::npos);  // shift constants in header

  // parse rows: real-reference circuit, so all schemes agree closely
  std::istringstream is(csv);
  std::string line;
  int rows = 0;
  int sign_changes = 0;
  double prev_d = 0.0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double theta, energy, exact4, r2p, r2m, qubit, fd;
    ls >> theta >> energy >> exact4 >> r2p >> r2m >> qubit >> fd;
    CHECK(std::abs(exact4 - r2p) < 1e-9);
    CHECK(std::abs(exact4 - r2m) < 1e-9);
    CHECK(std::abs(exact4 - qubit) < 1e-10);
    CHECK(std::abs(exact4 - fd) < 1e-6);
    if (rows > 0 && exact4 * prev_d < 0.0) ++sign_changes;
    prev_d = exact4;
    ++rows;
  }
  CHECK(rows == 21);
  // one minimum and one maximum over a full period
  CHECK(sign_changes == 2);
}

TEST_CASE("identical seeds produce byte-identical result records") {
  TempDir tmp;
  const fs::path cfg = tmp.file("vqe.json", R"({
    "reference": [0, 1],
    "ansatz": ["FERM a 0 2 1 3"],
    "init": "random",
    "tol": 1e-8
  })");
  auto run_once = [&](const std::string& out_name) {
    CommandOptions opt;
    opt.command = "vqe";
    opt.problem_path = kData + "/h2_sto3g_0.7414.ham";
    opt.config_path = cfg.string();
    opt.out_path = (tmp.path / out_name).string();
    opt.seed = 1234;
    CHECK(run(opt) == kExitOk);
    return json::parse(slurp(tmp.path / out_name)).at("results").dump();
  };
  CHECK(run_once("a.json") == run_once("b.json"));
}
