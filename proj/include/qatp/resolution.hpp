// SPDX-License-Identifier: Apache-2.0
//
// Classical resolution engines: propositional saturation and first-order
// binary resolution with unification and factoring.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qatp/formula.hpp"

namespace qatp {

struct ResolventOutcome {
  enum class Kind { Valid, Invalid, Tautology };
  Kind kind = Kind::Invalid;
  Clause clause;                          // Valid only
  std::optional<std::size_t> resolved_var;
};

/// Resolves on the unique complementary variable, if exactly one exists.
/// Tautology cannot arise with positional clauses and is never returned.
ResolventOutcome resolve_pair(const Clause& c1, const Clause& c2);

enum class Verdict { Refuted, Saturated, BudgetExceeded };
std::string to_string(Verdict v);

struct ProofStep {
  std::size_t step = 0;
  std::size_t premise1 = 0;  // ids into the growing clause list
  std::size_t premise2 = 0;
  std::size_t resolvent_id = 0;
  Clause resolvent;
  std::size_t resolved_var = 0;
  std::size_t round = 0;
};

struct ProofStats {
  std::uint64_t pair_queries = 0;     // ordered pairs examined
  std::uint64_t clauses_final = 0;
  std::uint64_t ukb_queries = 0;      // quantum backend only
  std::uint64_t uj_queries = 0;
  std::uint64_t shots = 0;
  std::vector<std::size_t> resolvents_per_round;
  std::vector<std::size_t> s_per_round;
};

struct ProofResult {
  Verdict verdict = Verdict::Saturated;
  std::vector<ProofStep> trace;
  std::size_t rounds = 0;
  ProofStats stats;
  ClauseSet clauses;  // premises followed by every inserted resolvent

  /// Steps that are ancestors of the final empty clause, in trace order.
  std::vector<ProofStep> refutation() const;
};

struct SaturateBudget {
  std::size_t max_rounds = 64;
  std::size_t max_clauses = 200000;
};

/// Level saturation: each round resolves every ordered pair of the current
/// clause list, then inserts the new resolvents in (i, j) order.
ProofResult saturate(const ClauseSet& kb, const SaturateBudget& budget = {});

/// True if every trace step re-derives from its premises.
bool replay_trace(const ProofResult& r, std::size_t num_premises);

/// Unit propagation plus pure-literal elimination; preserves satisfiability.
/// Returns the reduced clause set over the surviving atoms. A derived empty
/// clause is kept as the single clause of the result.
ClauseSet simplify_units(const ClauseSet& cs);

// ---------------------------------------------------------------------------
// First-order

using Substitution = std::map<std::string, Term>;

Term apply_subst(const Term& t, const Substitution& s);
Atom apply_subst(const Atom& a, const Substitution& s);
FolClause apply_subst(const FolClause& c, const Substitution& s);
std::string to_string(const Substitution& s);

/// Most general unifier with occurs check; nullopt on clash.
std::optional<Substitution> unify(const Atom& a, const Atom& b);
std::optional<Substitution> unify_terms(const Term& a, const Term& b, Substitution s = {});

/// Binary resolvents over every unifiable complementary pair, followed by
/// every factor of each input. Duplicates removed.
std::vector<FolClause> resolve_fol(const FolClause& c1, const FolClause& c2);

/// All one-step factors of a clause.
std::vector<FolClause> factors(const FolClause& c);

struct FolBudget {
  std::size_t max_given = 20000;
  std::size_t max_clauses = 200000;
  std::size_t max_term_depth = 3;  // generated clauses deeper than this are dropped
};

struct FolDerivation {
  FolClause clause;
  std::vector<std::size_t> parents;        // empty for input clauses
  std::vector<Substitution> parent_inst;   // parent vars -> terms over this clause's vars
  std::string rule;                        // "input", "resolve", "factor"
};

struct FolProofResult {
  Verdict verdict = Verdict::Saturated;
  std::vector<FolDerivation> clauses;
  std::optional<std::size_t> empty_id;
  std::size_t given_processed = 0;

  /// Ancestors of the empty clause, in id order.
  std::vector<std::size_t> proof_ids() const;
};

/// Given-clause loop with weight-then-age selection. Generated clauses are
/// renamed to canonical variables and deduplicated syntactically.
FolProofResult fol_refute(const std::vector<FolClause>& cs, const FolBudget& budget = {});

/// Ground instances of input clauses used by the refutation. Variables left
/// free by the proof are mapped to `filler`.
std::vector<FolClause> herbrand_core(const FolProofResult& r, const Term& filler);

}  // namespace qatp
