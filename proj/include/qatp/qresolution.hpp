// SPDX-License-Identifier: Apache-2.0
//
// Quantum resolution: clauses as ququart words, the KB loader, the parallel
// resolution unitary, the validity counter and the saturation driver.
#pragma once

#include <cstdint>
#include <vector>

#include "qatp/amplify.hpp"
#include "qatp/qsim.hpp"
#include "qatp/resolution.hpp"

namespace qatp {

/// One ququart per variable: 0 absent, 1 positive, 2 negative, 3 resolved.
/// Ququart v occupies qubits 2v (low bit) and 2v+1 (high bit) of a register.
using QuquartWord = std::vector<std::uint8_t>;

QuquartWord encode_clause(const Clause& c);
/// The single 3-entry becomes absent. Throws PreconditionError unless exactly
/// one entry is 3.
Clause decode_resolvent(const QuquartWord& w);
std::string to_string(const QuquartWord& w);

/// Index register width for M clauses (at least one qubit).
std::size_t index_width(std::size_t m);
/// Counter width ceil(log2(N+1)).
std::size_t counter_width(std::size_t n);

/// Qubits (index k, then word 2N). |m>|0> -> |m>|encode(c_m)>; indices past
/// the end load the all-zero sentinel word.
Circuit build_ukb(const ClauseSet& kb);
/// Qubits (p1 2N, p2 2N, result 2N); result ^= p1 OR p2 per ququart.
Circuit build_ur(std::size_t n);
/// Qubits (result 2N, counter, flag); flag ^= [exactly one ququart is 3].
/// The counter is restored to zero.
Circuit build_uj(std::size_t n);

/// The full register layout of one round.
struct ResolutionCircuits {
  Circuit prep;      // H on both indices, two U_KB loads, U_R
  Circuit oracle;    // U_J
  Register idx1, idx2, p1, p2, res, cnt, flag;
  std::size_t num_qubits() const { return prep.num_qubits(); }
};
ResolutionCircuits build_resolution_circuits(const ClauseSet& kb);

struct QResolutionParams {
  double delta = 0.1;
  std::size_t shots = 16;         // searches per round before the exact check
  std::size_t max_extra_shots = 4096;
  std::size_t max_rounds = 64;
  std::size_t max_clauses = 4096;
  std::uint64_t seed = 1;
  BackendKind backend = BackendKind::Sparse;
  SimMode mode = SimMode::Subspace;
};

struct SampledResolvent {
  Clause clause;
  std::size_t premise1 = 0;
  std::size_t premise2 = 0;
  std::size_t resolved_var = 0;
};

struct RoundReport {
  std::vector<SampledResolvent> valid_resolvents;  // distinct, in order of first sight
  std::uint64_t s_observed = 0;    // exact flag mass times the padded M^2
  double flag_mass = 0;
  double new_mass = 0;             // flag mass on resolvents not yet in the KB
  std::uint64_t ukb_queries = 0;
  std::uint64_t uj_queries = 0;
  std::uint64_t searches = 0;
  std::size_t m = 0;
  std::size_t qubits = 0;
  double min_success = 1.0;        // lowest amplified flag mass among searches
};

/// One sampling round against `kb`. Stops early once ⊥ is sampled; keeps
/// sampling past `shots` while the exact new-resolvent mass is nonzero and
/// nothing new has been seen.
RoundReport quantum_round(const ClauseSet& kb, const QResolutionParams& params, std::mt19937_64& rng);

/// Repeats rounds, inserting new resolvents, until ⊥ or saturation.
ProofResult quantum_prove(const ClauseSet& kb, const QResolutionParams& params = {});

/// Propositional instance for a first-order problem. When unification-based
/// resolution refutes, the ground instances its proof used are collected;
/// otherwise the clauses are grounded over the Herbrand universe up to
/// `herbrand_depth`. Unit propagation then shrinks the result.
struct GroundedInstance {
  FolProofResult refutation;
  std::vector<FolClause> core;   // ground clauses (empty unless refuted)
  GroundResult ground;
  ClauseSet reduced;
  std::size_t max_term_depth = 0;
};
GroundedInstance ground_instance(const std::vector<FolClause>& cs, const FolBudget& budget,
                                 std::size_t herbrand_depth = 2);

}  // namespace qatp
