// SPDX-License-Identifier: Apache-2.0
#include "qatp/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>
#include <sstream>

#include "qatp/errors.hpp"

namespace qatp {

// ---------------------------------------------------------------------------
// PropFormula

PropFormula PropFormula::var(std::string name) {
  PropFormula f;
  f.kind = Kind::Var;
  f.name = std::move(name);
  return f;
}

PropFormula PropFormula::negate(PropFormula c) {
  PropFormula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(c));
  return f;
}

PropFormula PropFormula::conj(std::vector<PropFormula> cs) {
  PropFormula f;
  f.kind = Kind::And;
  f.children = std::move(cs);
  return f;
}

PropFormula PropFormula::disj(std::vector<PropFormula> cs) {
  PropFormula f;
  f.kind = Kind::Or;
  f.children = std::move(cs);
  return f;
}

PropFormula PropFormula::implies(PropFormula lhs, PropFormula rhs) {
  PropFormula f;
  f.kind = Kind::Implies;
  f.children.push_back(std::move(lhs));
  f.children.push_back(std::move(rhs));
  return f;
}

std::string to_string(const PropFormula& f) {
  using K = PropFormula::Kind;
  if (f.kind == K::Var) return f.name;
  std::string head = f.kind == K::Not ? "not" : f.kind == K::And ? "and" : f.kind == K::Or ? "or" : "implies";
  std::string s = "(" + head;
  for (const auto& c : f.children) s += " " + to_string(c);
  return s + ")";
}

PropFormula prop_from_sexpr(const SExpr& e) {
  if (e.is_atom) {
    PropFormula v = PropFormula::var(e.atom);
    v.span = e.span;
    return v;
  }
  if (e.items.empty() || !e.items[0].is_atom)
    throw ParseError("expected operator", e.span.line, e.span.col);
  const std::string& op = e.items[0].atom;
  std::vector<PropFormula> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(prop_from_sexpr(e.items[i]));
  PropFormula f;
  if (op == "and") {
    f = PropFormula::conj(std::move(args));
  } else if (op == "or") {
    f = PropFormula::disj(std::move(args));
  } else if (op == "not") {
    if (args.size() != 1) throw ParseError("'not' takes one argument", e.span.line, e.span.col);
    f = PropFormula::negate(std::move(args[0]));
  } else if (op == "implies") {
    if (args.size() != 2) throw ParseError("'implies' takes two arguments", e.span.line, e.span.col);
    f = PropFormula::implies(std::move(args[0]), std::move(args[1]));
  } else {
    throw ParseError("unknown operator '" + op + "'", e.span.line, e.span.col);
  }
  f.span = e.span;
  return f;
}

PropFormula parse_prop(std::string_view text) { return prop_from_sexpr(parse_sexpr(text)); }

bool eval_prop(const PropFormula& f, const std::map<std::string, bool>& a) {
  using K = PropFormula::Kind;
  switch (f.kind) {
    case K::Var: {
      auto it = a.find(f.name);
      return it != a.end() && it->second;
    }
    case K::Not:
      return !eval_prop(f.children[0], a);
    case K::And:
      return std::all_of(f.children.begin(), f.children.end(), [&](const auto& c) { return eval_prop(c, a); });
    case K::Or:
      return std::any_of(f.children.begin(), f.children.end(), [&](const auto& c) { return eval_prop(c, a); });
    case K::Implies:
      return !eval_prop(f.children[0], a) || eval_prop(f.children[1], a);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Clause

Clause::Clause(std::size_t num_vars)
    : n_(num_vars), pos_((num_vars + 63) / 64, 0), neg_((num_vars + 63) / 64, 0) {}

Polarity Clause::at(std::size_t v) const {
  if (v >= n_) throw PreconditionError("variable index out of range");
  std::uint64_t bit = std::uint64_t{1} << (v % 64);
  if (pos_[v / 64] & bit) return Polarity::Pos;
  if (neg_[v / 64] & bit) return Polarity::Neg;
  return Polarity::Absent;
}

void Clause::set(std::size_t v, Polarity p) {
  if (v >= n_) throw PreconditionError("variable index out of range");
  std::uint64_t bit = std::uint64_t{1} << (v % 64);
  pos_[v / 64] &= ~bit;
  neg_[v / 64] &= ~bit;
  if (p == Polarity::Pos) pos_[v / 64] |= bit;
  if (p == Polarity::Neg) neg_[v / 64] |= bit;
}

bool Clause::is_empty() const {
  for (std::size_t i = 0; i < pos_.size(); ++i)
    if (pos_[i] | neg_[i]) return false;
  return true;
}

std::size_t Clause::size() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < pos_.size(); ++i) s += std::popcount(pos_[i]) + std::popcount(neg_[i]);
  return s;
}

bool Clause::operator<(const Clause& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  if (pos_ != o.pos_) return pos_ < o.pos_;
  return neg_ < o.neg_;
}

std::size_t Clause::hash() const {
  std::uint64_t h = 1469598103934665603ull ^ n_;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    h = (h ^ pos_[i]) * 1099511628211ull;
    h = (h ^ (neg_[i] + 0x9e3779b97f4a7c15ull)) * 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// ClauseSet

ClauseSet::ClauseSet(std::vector<std::string> names) : names_(std::move(names)) {}

std::optional<std::size_t> ClauseSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

bool ClauseSet::add(const Clause& c) {
  if (c.num_vars() != num_vars()) throw PreconditionError("clause vocabulary size mismatch");
  if (!seen_.insert(c).second) return false;
  clauses_.push_back(c);
  return true;
}

Clause ClauseSet::make(const std::vector<std::string>& lits) const {
  Clause c(num_vars());
  for (const auto& l : lits) {
    bool neg = !l.empty() && (l[0] == '-' || l[0] == '~');
    std::string name = neg ? l.substr(1) : l;
    auto idx = index_of(name);
    if (!idx) throw PreconditionError("unknown variable '" + name + "'");
    if (c.at(*idx) != Polarity::Absent && c.at(*idx) != (neg ? Polarity::Neg : Polarity::Pos))
      throw PreconditionError("tautological clause");
    c.set(*idx, neg ? Polarity::Neg : Polarity::Pos);
  }
  return c;
}

std::string ClauseSet::to_string(const Clause& c) const {
  if (c.is_empty()) return "⊥";
  std::string s;
  for (std::size_t v = 0; v < c.num_vars(); ++v) {
    Polarity p = c.at(v);
    if (p == Polarity::Absent) continue;
    if (!s.empty()) s += " | ";
    if (p == Polarity::Neg) s += "~";
    s += v < names_.size() ? names_[v] : "v" + std::to_string(v);
  }
  return s;
}

std::string ClauseSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (i) s += ", ";
    s += to_string(clauses_[i]);
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// CNF conversion

namespace {

using Lit = std::pair<std::string, bool>;  // name, positive
using LitClause = std::set<Lit>;
using LitCnf = std::vector<LitClause>;

bool tautological(const LitClause& c) {
  for (const auto& [n, pos] : c)
    if (pos && c.count({n, false})) return true;
  return false;
}

LitCnf cnf_of(const PropFormula& f, bool negated) {
  using K = PropFormula::Kind;
  switch (f.kind) {
    case K::Var:
      return {LitClause{{f.name, !negated}}};
    case K::Not:
      return cnf_of(f.children[0], !negated);
    case K::Implies: {
      // a -> b == (not a) or b
      PropFormula d = PropFormula::disj({PropFormula::negate(f.children[0]), f.children[1]});
      return cnf_of(d, negated);
    }
    case K::And:
    case K::Or: {
      bool conjunctive = (f.kind == K::And) != negated;
      if (conjunctive) {
        LitCnf out;
        for (const auto& c : f.children) {
          LitCnf sub = cnf_of(c, negated);
          out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
      }
      LitCnf acc{LitClause{}};  // the empty disjunction
      for (const auto& c : f.children) {
        LitCnf sub = cnf_of(c, negated);
        LitCnf next;
        for (const auto& a : acc)
          for (const auto& b : sub) {
            LitClause m = a;
            m.insert(b.begin(), b.end());
            if (!tautological(m)) next.push_back(std::move(m));
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

void collect_names(const PropFormula& f, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (f.kind == PropFormula::Kind::Var) {
    if (seen.insert(f.name).second) out.push_back(f.name);
    return;
  }
  for (const auto& c : f.children) collect_names(c, out, seen);
}

ClauseSet build(const std::vector<LitCnf>& parts, std::vector<std::string> names) {
  ClauseSet cs(names);
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i) idx[names[i]] = i;
  for (const auto& cnf : parts)
    for (const auto& lc : cnf) {
      if (tautological(lc)) continue;
      Clause c(names.size());
      for (const auto& [n, pos] : lc) c.set(idx.at(n), pos ? Polarity::Pos : Polarity::Neg);
      cs.add(c);
    }
  return cs;
}

}  // namespace

ClauseSet to_cnf(const PropFormula& f, const std::optional<std::map<std::string, std::size_t>>& vocab) {
  std::vector<std::string> names;
  if (vocab) {
    names.resize(vocab->size());
    for (const auto& [n, i] : *vocab) {
      if (i >= names.size()) throw PreconditionError("vocabulary indices must be 0..N-1");
      names[i] = n;
    }
    std::vector<std::string> used;
    std::set<std::string> seen;
    collect_names(f, used, seen);
    for (const auto& n : used)
      if (!vocab->count(n)) throw PreconditionError("variable '" + n + "' missing from vocabulary");
  } else {
    std::set<std::string> seen;
    collect_names(f, names, seen);
  }
  return build({cnf_of(f, false)}, std::move(names));
}

ClauseSet to_cnf(const std::vector<PropFormula>& fs) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  std::vector<LitCnf> parts;
  for (const auto& f : fs) {
    collect_names(f, names, seen);
    parts.push_back(cnf_of(f, false));
  }
  return build(parts, std::move(names));
}

ClauseSet parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  long nvars = -1, nclauses = -1;
  std::vector<std::vector<long>> raw;
  std::vector<long> cur;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    char c = line[first];
    if (c == 'c' || c == '%') continue;
    std::istringstream ls(line);
    if (c == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> nvars >> nclauses;
      if (fmt != "cnf" || !ls || nvars < 0 || nclauses < 0)
        throw ParseError("bad DIMACS header", lineno, first + 1);
      continue;
    }
    if (nvars < 0) throw ParseError("clause before 'p cnf' header", lineno, first + 1);
    std::string tok;
    while (ls >> tok) {
      long v;
      try {
        std::size_t used = 0;
        v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("bad literal '" + tok + "'", lineno, first + 1);
      }
      if (v == 0) {
        raw.push_back(cur);
        cur.clear();
      } else {
        if (std::labs(v) > nvars) throw ParseError("literal exceeds declared variable count", lineno, first + 1);
        cur.push_back(v);
      }
    }
  }
  if (nvars < 0) throw ParseError("missing 'p cnf' header");
  if (!cur.empty()) raw.push_back(cur);
  std::vector<std::string> names;
  for (long i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
  ClauseSet cs(names);
  for (const auto& r : raw) {
    Clause c(static_cast<std::size_t>(nvars));
    bool taut = false;
    for (long v : r) {
      std::size_t idx = static_cast<std::size_t>(std::labs(v) - 1);
      Polarity want = v > 0 ? Polarity::Pos : Polarity::Neg;
      Polarity have = c.at(idx);
      if (have != Polarity::Absent && have != want) taut = true;
      c.set(idx, want);
    }
    if (!taut) cs.add(c);
  }
  return cs;
}

bool clause_true(const Clause& c, std::uint64_t a) {
  for (std::size_t v = 0; v < c.num_vars(); ++v) {
    Polarity p = c.at(v);
    bool val = (a >> v) & 1;
    if ((p == Polarity::Pos && val) || (p == Polarity::Neg && !val)) return true;
  }
  return false;
}

bool truth_table_satisfiable(const ClauseSet& cs) {
  if (cs.num_vars() > 24) throw PreconditionError("truth table limited to 24 variables");
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << cs.num_vars()); ++a) {
    bool ok = true;
    for (const auto& c : cs)
      if (!clause_true(c, a)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

}  // namespace qatp
