// SPDX-License-Identifier: Apache-2.0
//
// qatp: command-line front end. Reports go to stdout as JSON unless --json
// names a file, in which case stdout gets a one-line summary.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qatp/cli.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolution, Wu's method and polynomial identity testing on classical and simulated quantum backends"};
  app.require_subcommand(1);
  app.fallthrough();

  qatp::CliOptions opt;
  std::string json_path;
  bool timing = false;
  app.add_option("--backend", opt.backend, "classical or quantum-sim")
      ->check(CLI::IsMember({"classical", "quantum-sim"}));
  app.add_option("--seed", opt.seed, "Seed for every randomized step");
  app.add_option("--delta", opt.delta, "Search failure parameter")->check(CLI::Range(1e-9, 0.999));
  app.add_option("--shots", opt.shots, "Searches per resolution round; samples for classical PIT");
  app.add_option("--max-rounds", opt.max_rounds, "Resolution round cap");
  app.add_option("--herbrand-depth", opt.herbrand_depth, "Term depth cap for first-order proofs");
  app.add_option("--word-bits", opt.word_bits, "Register width for polynomial circuits")->check(CLI::Range(4, 62));
  app.add_option("--grid", opt.grid, "Values per variable (power of two for quantum-sim)");
  app.add_option("--json", json_path, "Write the report here ('-' for stdout)");
  app.add_flag("--timing", timing, "Include wall time in the report");

  std::string file;
  auto* prop = app.add_subcommand("prove-prop", "Propositional refutation (DIMACS .cnf or s-expressions)");
  prop->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto* fol = app.add_subcommand("prove-fol", "First-order refutation of axioms plus negated goal");
  fol->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto* geo = app.add_subcommand("prove-geo", "Wu's method on a geometry statement");
  geo->add_option("file", file)->required()->check(CLI::ExistingFile);
  geo->add_option("--chain-limit", opt.chain_limit, "Pseudo-steps run as circuits (quantum-sim)");
  auto* pit = app.add_subcommand("pit", "Polynomial identity test");
  pit->add_option("--poly", file, "Polynomial file")->required()->check(CLI::ExistingFile);
  auto* emit = app.add_subcommand("emit-circuit", "Evaluation or coefficient circuit as JSON");
  emit->add_option("--poly", file, "Polynomial file")->required()->check(CLI::ExistingFile);
  emit->add_option("--var", opt.var, "Variable for a coefficient circuit");
  emit->add_option("--degree", opt.degree, "Degree bound for the coefficient circuit");
  bool no_gates = false;
  emit->add_flag("--no-gates", no_gates, "Leave out the gate list");
  auto* bench = app.add_subcommand("bench-queries", "Query scaling of quantum vs classical search, h = 1");
  bench->add_option("--sizes", opt.sizes, "log2 of the grid sizes");
  bench->add_option("--trials", opt.trials, "Classical trials per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }
  opt.gates = !no_gates;

  try {
    const auto t0 = std::chrono::steady_clock::now();
    qatp::RunReport r;
    if (*prop) r = qatp::cmd_prove_prop(slurp(file), file, opt);
    else if (*fol) r = qatp::cmd_prove_fol(slurp(file), opt);
    else if (*geo) r = qatp::cmd_prove_geo(slurp(file), opt);
    else if (*pit) r = qatp::cmd_pit(slurp(file), opt);
    else if (*emit) r = qatp::cmd_emit_circuit(slurp(file), opt);
    else r = qatp::cmd_bench_queries(opt);
    r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const std::string text = qatp::to_json(r, timing).dump(2) + "\n";
    if (json_path.empty() || json_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(json_path, std::ios::binary);
      if (!out) throw std::ios_base::failure("cannot write " + json_path);
      out << text;
      std::cout << r.command << ": " << r.verdict;
      if (r.details.contains("message")) std::cout << " (" << r.details["message"].get<std::string>() << ")";
      std::cout << "\n";
    }
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qatp::exit_code_for(e);
  }
}
