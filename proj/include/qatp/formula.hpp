// SPDX-License-Identifier: Apache-2.0
//
// Propositional and first-order formulas, clause forms and Herbrand grounding.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "qatp/sexpr.hpp"

namespace qatp {

// ---------------------------------------------------------------------------
// Propositional layer
// ---------------------------------------------------------------------------

struct PropFormula {
  enum class Kind { Var, Not, And, Or, Implies };
  Kind kind = Kind::And;
  std::string name;                   // Var only
  std::vector<PropFormula> children;  // Implies: {lhs, rhs}
  SourceSpan span;

  static PropFormula var(std::string name);
  static PropFormula negate(PropFormula f);
  static PropFormula conj(std::vector<PropFormula> cs);
  static PropFormula disj(std::vector<PropFormula> cs);
  static PropFormula implies(PropFormula lhs, PropFormula rhs);

  bool operator==(const PropFormula& o) const {
    return kind == o.kind && name == o.name && children == o.children;
  }
};

std::string to_string(const PropFormula& f);

PropFormula parse_prop(std::string_view text);
PropFormula prop_from_sexpr(const SExpr& e);

/// Truth value of `f` under `assignment` (missing names are false).
bool eval_prop(const PropFormula& f, const std::map<std::string, bool>& assignment);

enum class Polarity : std::uint8_t { Absent = 0, Pos = 1, Neg = 2 };

/// Positional literal map over a fixed vocabulary of N variables.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::size_t num_vars);

  std::size_t num_vars() const { return n_; }
  Polarity at(std::size_t var) const;
  void set(std::size_t var, Polarity p);

  bool is_empty() const;    // the empty clause
  std::size_t size() const;  // literal count

  const std::vector<std::uint64_t>& pos_words() const { return pos_; }
  const std::vector<std::uint64_t>& neg_words() const { return neg_; }
  std::vector<std::uint64_t>& pos_words() { return pos_; }
  std::vector<std::uint64_t>& neg_words() { return neg_; }

  bool operator==(const Clause& o) const { return n_ == o.n_ && pos_ == o.pos_ && neg_ == o.neg_; }
  bool operator!=(const Clause& o) const { return !(*this == o); }
  bool operator<(const Clause& o) const;
  std::size_t hash() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> pos_;
  std::vector<std::uint64_t> neg_;
};

struct ClauseHash {
  std::size_t operator()(const Clause& c) const { return c.hash(); }
};

/// Ordered duplicate-free clause list over a frozen vocabulary.
class ClauseSet {
 public:
  ClauseSet() = default;
  explicit ClauseSet(std::vector<std::string> names);

  std::size_t num_vars() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  const Clause& operator[](std::size_t i) const { return clauses_[i]; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }

  /// Appends `c` unless an equal clause is present. Returns true if inserted.
  bool add(const Clause& c);
  bool contains(const Clause& c) const { return seen_.count(c) != 0; }

  /// Builds a clause from signed variable names, e.g. {"A", "-C"}.
  Clause make(const std::vector<std::string>& literals) const;

  std::string to_string(const Clause& c) const;
  std::string to_string() const;

 private:
  std::vector<std::string> names_;
  std::vector<Clause> clauses_;
  std::unordered_set<Clause, ClauseHash> seen_;
};

/// Clause form of `f`. Without a vocabulary, variables are indexed in order of
/// first appearance. Tautological clauses are dropped.
ClauseSet to_cnf(const PropFormula& f,
                 const std::optional<std::map<std::string, std::size_t>>& vocab = std::nullopt);

/// Conjunction of several formulas over one shared vocabulary.
ClauseSet to_cnf(const std::vector<PropFormula>& fs);

/// Reads DIMACS CNF. Variables are named x1..xN.
ClauseSet parse_dimacs(std::string_view text);

/// Brute-force satisfiability check; only meant for small N.
bool truth_table_satisfiable(const ClauseSet& cs);
bool clause_true(const Clause& c, std::uint64_t assignment);

// ---------------------------------------------------------------------------
// First-order layer
// ---------------------------------------------------------------------------

struct Term {
  enum class Kind { Variable, Constant, Function };
  Kind kind = Kind::Constant;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string n) { return {Kind::Variable, std::move(n), {}}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
  static Term function(std::string n, std::vector<Term> a) {
    return {Kind::Function, std::move(n), std::move(a)};
  }

  bool is_var() const { return kind == Kind::Variable; }
  bool is_ground() const;
  /// Function nesting depth; constants and variables are 0.
  std::size_t depth() const;

  bool operator==(const Term& o) const {
    return kind == o.kind && name == o.name && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;
};

std::string to_string(const Term& t);

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const;
  bool operator==(const Atom& o) const { return predicate == o.predicate && args == o.args; }
  bool operator<(const Atom& o) const;
};

std::string to_string(const Atom& a);

struct FolLiteral {
  bool positive = true;
  Atom atom;

  bool operator==(const FolLiteral& o) const { return positive == o.positive && atom == o.atom; }
  bool operator<(const FolLiteral& o) const;
};

std::string to_string(const FolLiteral& l);

/// Disjunction of literals; variables are implicitly universal.
struct FolClause {
  std::vector<FolLiteral> literals;

  bool is_empty() const { return literals.empty(); }
  bool operator==(const FolClause& o) const { return literals == o.literals; }
};

std::string to_string(const FolClause& c);
/// Variable names in order of first occurrence.
std::vector<std::string> variables_of(const FolClause& c);

struct FolFormula {
  enum class Kind { Atom, Not, And, Or, Implies, Forall, Exists };
  Kind kind = Kind::And;
  qatp::Atom atom;                   // Atom
  std::string var;                   // Forall / Exists
  std::vector<FolFormula> children;  // Implies: {lhs, rhs}; quantifiers: {body}
  SourceSpan span;

  static FolFormula make_atom(qatp::Atom a);
  static FolFormula negate(FolFormula f);
  static FolFormula conj(std::vector<FolFormula> cs);
  static FolFormula disj(std::vector<FolFormula> cs);
  static FolFormula implies(FolFormula lhs, FolFormula rhs);
  static FolFormula forall(std::string v, FolFormula body);
  static FolFormula exists(std::string v, FolFormula body);
};

std::string to_string(const FolFormula& f);

/// A parsed FOL problem file: axioms, an optional goal and declared constants.
struct FolProblem {
  std::vector<FolFormula> axioms;
  std::optional<FolFormula> goal;
  std::vector<std::string> constants;
};

/// Parses a single FOL formula. Bare names bound by a quantifier are variables;
/// other bare names are constants if listed in `constants` or capitalized.
FolFormula parse_fol(std::string_view text, const std::vector<std::string>& constants = {});

/// File grammar: `(constants c ...)`, `(axiom f)` or bare `f`, `(goal f)`.
FolProblem parse_fol_problem(std::string_view text);

/// Standardize apart, push negations inward, Skolemize, drop universals and
/// distribute. Fresh symbols avoid every name in `reserved` and in `f`.
std::vector<FolClause> skolemize(const FolFormula& f,
                                 std::vector<std::string>* reserved = nullptr);

/// Skolemizes each formula in turn, keeping fresh symbols distinct across them.
std::vector<FolClause> skolemize_all(const std::vector<FolFormula>& fs);

/// Renames bound variables so that none is bound twice.
FolFormula standardize_apart(const FolFormula& f);

struct HerbrandOptions {
  std::size_t max_terms = 10000;
};

/// Ground terms of nesting depth <= depth, ordered by depth, then function
/// symbol, then argument order.
std::vector<Term> herbrand_universe(const std::vector<FolClause>& cs, std::size_t depth,
                                   const HerbrandOptions& opts = {});

struct GroundOptions {
  std::size_t max_clauses = 10000;
};

struct GroundResult {
  ClauseSet clauses;         // names are the printed ground atoms
  std::vector<Atom> atoms;   // index -> ground atom
};

GroundResult ground(const std::vector<FolClause>& cs, const std::vector<Term>& universe,
                    const GroundOptions& opts = {});

/// Interns already-ground clauses as a propositional ClauseSet.
GroundResult ground_clauses_to_prop(const std::vector<FolClause>& cs);

}  // namespace qatp
