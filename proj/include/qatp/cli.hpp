// SPDX-License-Identifier: Apache-2.0
//
// Command implementations behind the `qatp` tool. Each takes the input text
// and the parsed flags and returns a run report; errors propagate as
// exceptions and exit_code_for maps them to process exit codes.
#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "qatp/pit.hpp"
#include "qatp/poly.hpp"
#include "qatp/report.hpp"

namespace qatp {

struct CliOptions {
  std::string backend = "classical";  // classical | quantum-sim
  std::uint64_t seed = 1;
  double delta = 0.1;
  std::size_t shots = 16;
  std::size_t max_rounds = 64;
  std::size_t herbrand_depth = 2;
  std::size_t word_bits = 16;
  std::uint64_t grid = 0;          // values per variable; 0 picks the command default
  std::size_t chain_limit = 1;     // prove-geo: pseudo-steps simulated as circuits
  // emit-circuit
  std::string var;                 // empty: plain evaluation circuit
  std::size_t degree = 0;
  bool gates = true;
  // bench-queries
  std::vector<std::size_t> sizes{4, 6, 8, 10};  // log2 |G|
  std::size_t trials = 200;
};

/// Stream `stream` of a 64-bit seed, through std::seed_seq.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// 2 budget, 3 parse or I/O, 4 capacity, 5 precondition or degenerate input,
/// 6 anything else.
int exit_code_for(const std::exception& e);

/// DIMACS when `filename` ends in .cnf, s-expressions otherwise. A `(goal f)`
/// entry is negated and added (refutation framing).
RunReport cmd_prove_prop(const std::string& text, const std::string& filename, const CliOptions& opt);
/// Axioms and the negated goal, Skolemized. Classical: unification-based
/// resolution with terms capped at herbrand_depth. quantum-sim: the grounded,
/// unit-reduced instance through quantum resolution.
RunReport cmd_prove_fol(const std::string& text, const CliOptions& opt);
RunReport cmd_prove_geo(const std::string& text, const CliOptions& opt);
RunReport cmd_pit(const std::string& text, const CliOptions& opt);
RunReport cmd_emit_circuit(const std::string& text, const CliOptions& opt);
RunReport cmd_bench_queries(const CliOptions& opt);

// ---------------------------------------------------------------------------
// Hybrid Wu prover: the classical chain fixes the degrees; the last
// `chain_limit` pseudo-steps run as remainder circuits, each checked against
// the classical coefficients, and the final remainder circuit goes through
// quantum PIT.

struct HybridOptions {
  std::size_t word_bits = 16;
  std::size_t chain_limit = 1;
  std::uint64_t grid = 4;
  double delta = 0.1;
  std::uint64_t seed = 1;
  std::size_t sample_points = 4;   // points checked per simulated step
};

struct StepCheck {
  std::size_t step = 0;
  std::string var;
  std::size_t Ds = 0, Dt = 0;
  std::size_t qubits = 0;
  std::size_t gates = 0;
  std::size_t word_bits = 0;       // output width of the remainder circuit
  std::size_t points_checked = 0;
  bool agrees = true;
  std::map<std::string, std::uint64_t> calls;
};

struct HybridWuResult {
  WuProof classical;
  std::vector<StepCheck> checks;
  PITVerdict pit;
  std::vector<std::string> pit_inputs;  // grid variables of the final check
  WuVerdict verdict = WuVerdict::NotReduced;
  bool agrees = true;              // every check matched and the verdicts coincide
};

HybridWuResult hybrid_wu(const GeoProblem& g, std::size_t concl_index, const HybridOptions& opt);

}  // namespace qatp
