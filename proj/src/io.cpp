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

#include "fermigrad/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <charconv>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "fermigrad/dense.hpp"
#include "json.hpp"

namespace fermigrad {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open `" + path + "`");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write `" + path + "`");
  out << content;
}

std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ProblemFile ProblemFile::parse(const std::string& text) {
  ProblemFile pf;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos) {
        pf.metadata.emplace_back(trim(body.substr(0, colon)),
                                 trim(body.substr(colon + 1)));
      }
      continue;
    }
    auto [s, c] = PauliSum::parse_term_line(t, line_no);
    pf.hamiltonian.add_term(s, c);
  }
  if (auto n = pf.metadata_number("n_qubits")) {
    pf.n_qubits = static_cast<unsigned>(*n);
  } else {
    pf.n_qubits = pf.hamiltonian.min_qubits();
  }
  if (pf.hamiltonian.min_qubits() > pf.n_qubits) {
    throw ParseError("hamiltonian uses qubit indices beyond n_qubits");
  }
  if (!pf.hamiltonian.is_hermitian()) {
    throw ParseError("hamiltonian is not hermitian");
  }
  return pf;
}

ProblemFile ProblemFile::load(const std::string& path) {
  try {
    return parse(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()) + " [" + path + "]");
  }
}

std::string ProblemFile::serialize() const {
  std::string out;
  for (const auto& [k, v] : metadata) {
    out += "# " + k + ": " + v + "\n";
  }
  out += hamiltonian.to_text();
  return out;
}

void ProblemFile::save(const std::string& path) const {
  write_file(path, serialize());
}

std::optional<std::string> ProblemFile::metadata_value(
    const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::optional<double> ProblemFile::metadata_number(
    const std::string& key) const {
  auto v = metadata_value(key);
  if (!v) return std::nullopt;
  try {
    return std::stod(*v);
  } catch (...) {
    return std::nullopt;
  }
}

Circuit load_circuit(const std::string& path, unsigned n_qubits) {
  try {
    return circuit_from_text(read_file(path), n_qubits);
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()) + " [" + path + "]");
  }
}

void save_circuit(const Circuit& c, const std::string& path) {
  write_file(path, circuit_to_text(c));
}

namespace {

GradientScheme parse_scheme(const std::string& name, char default_alpha) {
  std::string base = name;
  int alpha = default_alpha == '-' ? -1 : +1;
  if (!base.empty() && (base.back() == '+' || base.back() == '-')) {
    alpha = base.back() == '+' ? +1 : -1;
    base.pop_back();
  }
  if (base == "qubit") return GradientScheme::qubit_shift();
  if (base == "exact4") return GradientScheme::exact4();
  if (base == "real2") return GradientScheme::real2(alpha);
  if (base == "approx") return GradientScheme::generator_approx(alpha);
  throw ConfigError("unknown gradient scheme `" + name + "`");
}

json load_config(const CommandOptions& options) {
  if (!options.config_path) return json::object();
  json cfg;
  try {
    cfg = json::parse(read_file(*options.config_path));
  } catch (const json::exception& e) {
    throw ConfigError("config `" + *options.config_path + "`: " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  return cfg;
}

GradientScheme scheme_from(const CommandOptions& options, const json& cfg) {
  if (options.scheme) return parse_scheme(*options.scheme, options.alpha);
  if (cfg.contains("scheme")) {
    return parse_scheme(cfg.at("scheme").get<std::string>(), options.alpha);
  }
  return GradientScheme::real2(+1);
}

ParameterMap parameters_from(const json& cfg) {
  ParameterMap values;
  if (cfg.contains("parameters")) {
    for (const auto& [k, v] : cfg.at("parameters").items()) {
      values[k] = v.get<double>();
    }
  }
  return values;
}

MinimizeOptions minimize_options_from(const json& cfg,
                                      const GradientScheme& scheme,
                                      int threads) {
  MinimizeOptions opts;
  opts.scheme = scheme;
  opts.threads = threads;
  if (cfg.contains("method")) {
    const std::string m = cfg.at("method").get<std::string>();
    if (m == "gd") {
      opts.method = MinimizeOptions::Method::GD;
    } else if (m == "qn") {
      opts.method = MinimizeOptions::Method::QN;
    } else {
      throw ConfigError("unknown method `" + m + "`");
    }
  }
  opts.tol = cfg.value("tol", opts.tol);
  opts.max_iters = cfg.value("max_iters", opts.max_iters);
  return opts;
}

Circuit reference_from(const json& spec, unsigned n_qubits) {
  std::vector<unsigned> occupied;
  if (spec.contains("reference")) {
    occupied = spec.at("reference").get<std::vector<unsigned>>();
  }
  std::optional<std::pair<unsigned, unsigned>> cis;
  if (spec.contains("cis_pair")) {
    auto v = spec.at("cis_pair").get<std::vector<unsigned>>();
    if (v.size() != 2) throw ConfigError("cis_pair expects [i, a]");
    cis = std::make_pair(v[0], v[1]);
  }
  return prepare_reference(n_qubits, occupied, cis);
}

Circuit ansatz_from(const json& cfg, unsigned n_qubits) {
  if (!cfg.contains("ansatz")) throw ConfigError("config lacks `ansatz`");
  std::string text;
  for (const auto& line : cfg.at("ansatz")) {
    text += line.get<std::string>() + "\n";
  }
  return circuit_from_text(text, n_qubits);
}

OperatorPool pool_from(const json& cfg, unsigned n_qubits) {
  PoolOptions popts;
  if (cfg.contains("pool")) {
    const json& p = cfg.at("pool");
    if (p.contains("freeze")) {
      popts.freeze = p.at("freeze").get<std::vector<unsigned>>();
    }
    popts.generalized_doubles = p.value("generalized_doubles", false);
  }
  if (n_qubits % 2 != 0) {
    throw ConfigError("pool construction expects an even qubit count");
  }
  OperatorPool pool = make_upccgsd_pool(n_qubits / 2, popts);
  if (cfg.contains("pool") && cfg.at("pool").contains("spin_filter")) {
    pool.spin_filter = cfg.at("pool").at("spin_filter").get<bool>();
  }
  return pool;
}

AdaptOptions adapt_options_from(const json& cfg, const GradientScheme& scheme,
                                int threads) {
  AdaptOptions opts;
  opts.scheme = scheme;
  opts.minimize = minimize_options_from(cfg, scheme, threads);
  opts.screen_tol = cfg.value("screen_tol", opts.screen_tol);
  opts.energy_tol = cfg.value("energy_tol", opts.energy_tol);
  opts.max_ops = cfg.value("max_ops", opts.max_ops);
  return opts;
}

ParameterMap initial_values(const Circuit& circuit, const json& cfg,
                            const CommandOptions& options) {
  ParameterMap values;
  const auto names = circuit.parameter_names();
  const std::string init = cfg.value("init", std::string("zeros"));
  if (init == "zeros") {
    for (const auto& n : names) values[n] = 0.0;
  } else if (init == "random") {
    std::mt19937_64 rng(options.seed.value_or(0));
    std::uniform_real_distribution<double> dist(-std::numbers::pi,
                                                std::numbers::pi);
    for (const auto& n : names) values[n] = dist(rng);
  } else {
    throw ConfigError("unknown init `" + init + "`");
  }
  for (auto& [k, v] : parameters_from(cfg)) values[k] = v;
  return values;
}

json trace_to_json(const std::vector<IterationRecord>& trace) {
  json out = json::array();
  for (const auto& r : trace) {
    out.push_back({{"iteration", r.iteration},
                   {"value", r.value},
                   {"grad_norm", r.grad_norm}});
  }
  return out;
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace) {
  std::string out = "iteration,value,grad_norm\n";
  for (const auto& r : trace) {
    out += std::to_string(r.iteration) + "," + format_number(r.value) + "," +
           format_number(r.grad_norm) + "\n";
  }
  return out;
}

json values_to_json(const ParameterMap& values) {
  json out = json::object();
  for (const auto& [k, v] : values) out[k] = v;
  return out;
}

struct RecordWriter {
  json record;
  std::chrono::steady_clock::time_point start;

  explicit RecordWriter(const CommandOptions& options)
      : start(std::chrono::steady_clock::now()) {
    record["command"] = options.command;
    record["inputs"]["problem"] = options.problem_path;
    if (options.circuit_path) record["inputs"]["circuit"] = *options.circuit_path;
    if (options.config_path) record["inputs"]["config"] = *options.config_path;
    if (options.seed) record["seed"] = *options.seed;
    record["threads"] = options.threads;
  }

  void finish(const CommandOptions& options, const json& results) {
    record["results"] = results;
    const auto elapsed = std::chrono::steady_clock::now() - start;
    record["wall_time_s"] =
        std::chrono::duration<double>(elapsed).count();
    if (options.out_path) {
      write_file(*options.out_path, record.dump(2) + "\n");
    }
  }
};

int cmd_energy(const CommandOptions& options, const json& cfg,
               const ProblemFile& problem, std::ostream& out) {
  if (!options.circuit_path) throw ConfigError("energy requires --circuit");
  Circuit circuit = load_circuit(*options.circuit_path, problem.n_qubits);
  ParameterMap values = parameters_from(cfg);
  for (const auto& n : circuit.parameter_names()) {
    values.try_emplace(n, 0.0);
  }
  RecordWriter rec(options);
  const double e = expectation(circuit, values, problem.hamiltonian);
  out << "energy " << format_number(e) << "\n";
  rec.finish(options, {{"energy", e}, {"parameters", values_to_json(values)}});
  return kExitOk;
}

int cmd_grad(const CommandOptions& options, const json& cfg,
             const ProblemFile& problem, std::ostream& out) {
  if (!options.circuit_path) throw ConfigError("grad requires --circuit");
  Circuit circuit = load_circuit(*options.circuit_path, problem.n_qubits);

  const auto names = circuit.parameter_names();
  std::string scan_param;
  double from = 0.0, to = 2.0 * std::numbers::pi;
  int points = 101;
  if (cfg.contains("scan")) {
    const json& sc = cfg.at("scan");
    scan_param = sc.value("parameter", std::string());
    from = sc.value("from", from);
    to = sc.value("to", to);
    points = sc.value("points", points);
  }
  if (scan_param.empty()) {
    if (names.size() != 1) {
      throw ConfigError("scan.parameter required when the circuit has " +
                        std::to_string(names.size()) + " parameters");
    }
    scan_param = names.front();
  }
  if (points < 2) throw ConfigError("scan.points must be at least 2");

  std::vector<std::string> scheme_names;
  if (cfg.contains("schemes")) {
    for (const auto& s : cfg.at("schemes")) {
      scheme_names.push_back(s.get<std::string>());
    }
  } else {
    scheme_names = {scheme_from(options, cfg).to_string(), "fd"};
  }

  ParameterMap values = parameters_from(cfg);
  for (const auto& n : names) values.try_emplace(n, 0.0);

  Objective energy = Objective::expectation(circuit, problem.hamiltonian);
  std::vector<std::pair<std::string, std::optional<Objective>>> columns;
  std::string header = "# fermigrad grad scan over `" + scan_param + "`\n";
  for (const auto& sn : scheme_names) {
    if (sn == "fd") {
      header += "# scheme fd: central difference, h=1e-5\n";
      columns.emplace_back(sn, std::nullopt);
      continue;
    }
    GradientScheme scheme = parse_scheme(sn, options.alpha);
    switch (scheme.kind) {
      case SchemeKind::QubitShift:
        header += "# scheme " + sn + ": per-term shift rule, r=|c_k|/2, s=pi/(4r)\n";
        break;
      case SchemeKind::FermionicExact4:
        header += "# scheme " + sn + ": fermionic 4-term, r=0.25, s=pi\n";
        break;
      case SchemeKind::FermionicReal2:
        header += "# scheme " + sn + ": fermionic 2-term, r=0.5, s=pi/2, alpha=" +
                  std::string(scheme.alpha > 0 ? "+" : "-") + "\n";
        break;
      case SchemeKind::GeneratorApprox:
        header += "# scheme " + sn + ": shift rule on G" +
                  std::string(scheme.alpha > 0 ? "+" : "-") + ", r=0.5, s=pi/2\n";
        break;
    }
    columns.emplace_back(sn, grad(energy, scan_param, scheme));
  }

  std::string csv = header + "theta,energy";
  for (const auto& [sn, _] : columns) csv += ",grad_" + sn;
  csv += "\n";
  for (int i = 0; i < points; ++i) {
    const double theta = from + (to - from) * i / (points - 1);
    values[scan_param] = theta;
    csv += format_number(theta) + "," +
           format_number(energy.evaluate(values, options.threads));
    for (const auto& [sn, go] : columns) {
      const double g = go ? go->evaluate(values, options.threads)
                          : finite_difference(energy, scan_param, values);
      csv += "," + format_number(g);
    }
    csv += "\n";
  }
  if (options.out_path) {
    write_file(*options.out_path, csv);
    out << "wrote " << *options.out_path << "\n";
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_vqe(const CommandOptions& options, const json& cfg,
            const ProblemFile& problem, std::ostream& out) {
  GradientScheme scheme = scheme_from(options, cfg);
  Circuit reference = reference_from(cfg, problem.n_qubits);
  Circuit ansatz = ansatz_from(cfg, problem.n_qubits);
  Circuit full(problem.n_qubits);
  full.append(reference).append(ansatz);

  RecordWriter rec(options);
  Objective obj = Objective::expectation(full, problem.hamiltonian);
  MinimizeOptions mopts =
      minimize_options_from(cfg, scheme, options.threads);
  MinimizeResult res = minimize(obj, initial_values(full, cfg, options), mopts);

  out << "vqe energy " << format_number(res.value) << " after "
      << res.trace.size() - 1 << " iterations ("
      << (res.converged ? "converged" : res.stop_reason) << ")\n";
  json results{{"energy", res.value},
               {"parameters", values_to_json(res.values)},
               {"converged", res.converged},
               {"scheme", scheme.to_string()},
               {"trace", trace_to_json(res.trace)}};
  rec.finish(options, results);
  if (options.out_path) {
    write_file(*options.out_path + ".trace.csv", trace_to_csv(res.trace));
  }
  return res.converged ? kExitOk : kExitNotConverged;
}

json adapt_rounds_to_json(const AdaptResult& res, const OperatorPool& pool) {
  json rounds = json::array();
  for (const auto& r : res.rounds) {
    std::string pairs;
    for (const auto& [p, q] : pool.candidates[r.candidate].pairs()) {
      if (!pairs.empty()) pairs += " ";
      pairs += std::to_string(p) + ">" + std::to_string(q);
    }
    rounds.push_back({{"candidate", r.candidate},
                      {"excitation", pairs},
                      {"block", r.block},
                      {"screened_gradient", r.screened_gradient},
                      {"energy", r.energy},
                      {"parameter", r.parameter}});
  }
  return rounds;
}

int cmd_adapt(const CommandOptions& options, const json& cfg,
              const ProblemFile& problem, std::ostream& out) {
  GradientScheme scheme = scheme_from(options, cfg);
  Circuit reference = reference_from(cfg, problem.n_qubits);
  AnsatzLayout layout = AnsatzLayout::reference_plus_adaptive(reference);
  OperatorPool pool = pool_from(cfg, problem.n_qubits);
  AdaptOptions aopts = adapt_options_from(cfg, scheme, options.threads);

  RecordWriter rec(options);
  AdaptResult res = adapt_vqe(problem.hamiltonian, layout, pool, aopts);
  for (const auto& r : res.rounds) {
    out << "round " << (&r - res.rounds.data()) << ": candidate " << r.candidate
        << " |grad| " << format_number(r.screened_gradient) << " energy "
        << format_number(r.energy) << "\n";
  }
  out << "adapt energy " << format_number(res.energy) << " after "
      << res.rounds.size() << " rounds (" << res.stop_reason << ")\n";
  rec.finish(options, {{"energy", res.energy},
                       {"rounds", adapt_rounds_to_json(res, pool)},
                       {"parameters", values_to_json(res.values)},
                       {"scheme", scheme.to_string()},
                       {"stop_reason", res.stop_reason}});
  return kExitOk;
}

int cmd_excited(const CommandOptions& options, const json& cfg,
                const ProblemFile& problem, std::ostream& out) {
  GradientScheme scheme = scheme_from(options, cfg);
  if (!cfg.contains("states") || !cfg.at("states").is_array() ||
      cfg.at("states").empty()) {
    throw ConfigError("excited requires a non-empty `states` array");
  }
  const bool fixed_ansatz = cfg.contains("ansatz");

  RecordWriter rec(options);
  ExcitedStateTask task;
  task.hamiltonian = problem.hamiltonian;
  json state_results = json::array();

  for (const auto& spec : cfg.at("states")) {
    Circuit reference = reference_from(spec, problem.n_qubits);
    Circuit circuit(problem.n_qubits);
    ParameterMap values;
    if (fixed_ansatz) {
      circuit.append(reference).append(ansatz_from(cfg, problem.n_qubits));
      Objective obj = excited_objective(task, circuit);
      MinimizeOptions mopts =
          minimize_options_from(cfg, scheme, options.threads);
      MinimizeResult res =
          minimize(obj, initial_values(circuit, cfg, options), mopts);
      values = res.values;
    } else {
      AnsatzLayout layout = AnsatzLayout::reference_plus_adaptive(reference);
      OperatorPool pool = pool_from(cfg, problem.n_qubits);
      AdaptOptions aopts = adapt_options_from(cfg, scheme, options.threads);
      AdaptResult res = excited_adapt(task, layout, pool, aopts);
      circuit = res.circuit;
      values = res.values;
    }
    const double energy = expectation(circuit, values, problem.hamiltonian);
    json one{{"energy", energy}, {"parameters", values_to_json(values)}};
    // overlaps with previously solved states
    json overlaps = json::array();
    for (const auto& s : task.solved) {
      Circuit bound = circuit;  // parameters bound via the values map
      ParameterMap merged = values;
      for (const auto& [k, v] : s.values) merged.try_emplace(k, v);
      overlaps.push_back(overlap_squared(bound, s.circuit, merged));
    }
    one["overlap_squared"] = overlaps;
    state_results.push_back(one);
    out << "state " << task.solved.size() << " energy "
        << format_number(energy) << "\n";
    task.solved.push_back({circuit, values, energy, std::nullopt});
  }
  rec.finish(options,
             {{"states", state_results}, {"scheme", scheme.to_string()}});
  return kExitOk;
}

int cmd_spectrum(const CommandOptions& options, const json& cfg,
                 const ProblemFile& problem, std::ostream& out) {
  int k = options.k.value_or(cfg.value("k", 1));
  if (k < 1) throw ConfigError("k must be positive");
  RecordWriter rec(options);
  const auto evals = dense_spectrum(problem.hamiltonian, problem.n_qubits,
                                    static_cast<std::size_t>(k));
  json list = json::array();
  for (double e : evals) {
    out << format_number(e) << "\n";
    list.push_back(e);
  }
  rec.finish(options, {{"eigenvalues", list}});
  return kExitOk;
}

}  // namespace

int run_command(const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    const json cfg = load_config(options);
    const ProblemFile problem = ProblemFile::load(options.problem_path);
    if (options.command == "energy") return cmd_energy(options, cfg, problem, out);
    if (options.command == "grad") return cmd_grad(options, cfg, problem, out);
    if (options.command == "vqe") return cmd_vqe(options, cfg, problem, out);
    if (options.command == "adapt") return cmd_adapt(options, cfg, problem, out);
    if (options.command == "excited") {
      return cmd_excited(options, cfg, problem, out);
    }
    if (options.command == "spectrum") {
      return cmd_spectrum(options, cfg, problem, out);
    }
    throw ConfigError("unknown command `" + options.command + "`");
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParseError;
  }
}

}  // namespace fermigrad
