// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "qatp/errors.hpp"
#include "qatp/formula.hpp"

namespace qatp {

// ---------------------------------------------------------------------------
// Terms, atoms, literals

bool Term::is_ground() const {
  if (kind == Kind::Variable) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return kind == Kind::Function ? d + 1 : 0;
}

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (name != o.name) return name < o.name;
  return args < o.args;
}

std::string to_string(const Term& t) {
  if (t.kind != Term::Kind::Function) return t.name;
  std::string s = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    s += to_string(t.args[i]);
  }
  return s + ")";
}

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

bool Atom::operator<(const Atom& o) const {
  if (predicate != o.predicate) return predicate < o.predicate;
  return args < o.args;
}

std::string to_string(const Atom& a) {
  if (a.args.empty()) return a.predicate;
  std::string s = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += to_string(a.args[i]);
  }
  return s + ")";
}

bool FolLiteral::operator<(const FolLiteral& o) const {
  if (!(atom == o.atom)) return atom < o.atom;
  return positive > o.positive;
}

std::string to_string(const FolLiteral& l) { return (l.positive ? "" : "~") + to_string(l.atom); }

std::string to_string(const FolClause& c) {
  if (c.literals.empty()) return "⊥";
  std::string s;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) s += " | ";
    s += to_string(c.literals[i]);
  }
  return s;
}

namespace {

void term_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) term_vars(a, out);
}

}  // namespace

std::vector<std::string> variables_of(const FolClause& c) {
  std::vector<std::string> out;
  for (const auto& l : c.literals)
    for (const auto& a : l.atom.args) term_vars(a, out);
  return out;
}

// ---------------------------------------------------------------------------
// FolFormula

FolFormula FolFormula::make_atom(qatp::Atom a) {
  FolFormula f;
  f.kind = Kind::Atom;
  f.atom = std::move(a);
  return f;
}

FolFormula FolFormula::negate(FolFormula c) {
  FolFormula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(c));
  return f;
}

FolFormula FolFormula::conj(std::vector<FolFormula> cs) {
  FolFormula f;
  f.kind = Kind::And;
  f.children = std::move(cs);
  return f;
}

FolFormula FolFormula::disj(std::vector<FolFormula> cs) {
  FolFormula f;
  f.kind = Kind::Or;
  f.children = std::move(cs);
  return f;
}

FolFormula FolFormula::implies(FolFormula lhs, FolFormula rhs) {
  FolFormula f;
  f.kind = Kind::Implies;
  f.children = {std::move(lhs), std::move(rhs)};
  return f;
}

FolFormula FolFormula::forall(std::string v, FolFormula body) {
  FolFormula f;
  f.kind = Kind::Forall;
  f.var = std::move(v);
  f.children.push_back(std::move(body));
  return f;
}

FolFormula FolFormula::exists(std::string v, FolFormula body) {
  FolFormula f;
  f.kind = Kind::Exists;
  f.var = std::move(v);
  f.children.push_back(std::move(body));
  return f;
}

std::string to_string(const FolFormula& f) {
  using K = FolFormula::Kind;
  switch (f.kind) {
    case K::Atom:
      return to_string(f.atom);
    case K::Forall:
      return "(forall " + f.var + " " + to_string(f.children[0]) + ")";
    case K::Exists:
      return "(exists " + f.var + " " + to_string(f.children[0]) + ")";
    default:
      break;
  }
  std::string head = f.kind == K::Not ? "not" : f.kind == K::And ? "and" : f.kind == K::Or ? "or" : "implies";
  std::string s = "(" + head;
  for (const auto& c : f.children) s += " " + to_string(c);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const std::set<std::string> kConnectives = {"and", "or", "not", "implies", "forall", "exists"};

struct FolReader {
  std::set<std::string> constants;
  std::vector<std::string> bound;

  Term term(const SExpr& e) {
    if (e.is_atom) {
      const std::string& n = e.atom;
      if (std::find(bound.begin(), bound.end(), n) != bound.end()) return Term::variable(n);
      if (constants.count(n)) return Term::constant(n);
      if (std::islower(static_cast<unsigned char>(n[0]))) return Term::variable(n);
      return Term::constant(n);
    }
    if (e.items.size() < 2 || !e.items[0].is_atom)
      throw ParseError("malformed term", e.span.line, e.span.col);
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
    return Term::function(e.items[0].atom, std::move(args));
  }

  FolFormula formula(const SExpr& e) {
    FolFormula f;
    if (e.is_atom) {
      if (kConnectives.count(e.atom)) throw ParseError("connective used as atom", e.span.line, e.span.col);
      f = FolFormula::make_atom(Atom{e.atom, {}});
      f.span = e.span;
      return f;
    }
    if (e.items.empty() || !e.items[0].is_atom)
      throw ParseError("expected operator or predicate", e.span.line, e.span.col);
    const std::string& op = e.items[0].atom;
    auto need = [&](std::size_t n) {
      if (e.items.size() != n + 1)
        throw ParseError("'" + op + "' takes " + std::to_string(n) + " argument(s)", e.span.line, e.span.col);
    };
    if (op == "forall" || op == "exists") {
      need(2);
      std::vector<std::string> vars;
      const SExpr& vs = e.items[1];
      if (vs.is_atom) {
        vars.push_back(vs.atom);
      } else {
        for (const auto& v : vs.items) {
          if (!v.is_atom) throw ParseError("quantified variable must be a name", v.span.line, v.span.col);
          vars.push_back(v.atom);
        }
      }
      if (vars.empty()) throw ParseError("quantifier binds nothing", e.span.line, e.span.col);
      for (const auto& v : vars) bound.push_back(v);
      FolFormula body = formula(e.items[2]);
      bound.resize(bound.size() - vars.size());
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = op == "forall" ? FolFormula::forall(*it, std::move(body)) : FolFormula::exists(*it, std::move(body));
      f = std::move(body);
    } else if (op == "not") {
      need(1);
      f = FolFormula::negate(formula(e.items[1]));
    } else if (op == "implies") {
      need(2);
      f = FolFormula::implies(formula(e.items[1]), formula(e.items[2]));
    } else if (op == "and" || op == "or") {
      std::vector<FolFormula> cs;
      for (std::size_t i = 1; i < e.items.size(); ++i) cs.push_back(formula(e.items[i]));
      f = op == "and" ? FolFormula::conj(std::move(cs)) : FolFormula::disj(std::move(cs));
    } else {
      Atom a{op, {}};
      for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(term(e.items[i]));
      f = FolFormula::make_atom(std::move(a));
    }
    f.span = e.span;
    return f;
  }
};

}  // namespace

FolFormula parse_fol(std::string_view text, const std::vector<std::string>& constants) {
  FolReader r;
  r.constants.insert(constants.begin(), constants.end());
  return r.formula(parse_sexpr(text));
}

FolProblem parse_fol_problem(std::string_view text) {
  FolProblem p;
  std::vector<SExpr> forms = parse_sexprs(text);
  for (const auto& e : forms)
    if (e.head_is("constants"))
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        if (!e.items[i].is_atom) throw ParseError("constant must be a name", e.span.line, e.span.col);
        p.constants.push_back(e.items[i].atom);
      }
  FolReader r;
  r.constants.insert(p.constants.begin(), p.constants.end());
  for (const auto& e : forms) {
    if (e.head_is("constants")) continue;
    if (e.head_is("axiom") || e.head_is("goal")) {
      if (e.items.size() != 2) throw ParseError("expected one formula", e.span.line, e.span.col);
      FolFormula f = r.formula(e.items[1]);
      if (e.head_is("goal")) {
        if (p.goal) throw ParseError("more than one goal", e.span.line, e.span.col);
        p.goal = std::move(f);
      } else {
        p.axioms.push_back(std::move(f));
      }
      continue;
    }
    p.axioms.push_back(r.formula(e));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Clause form

namespace {

using Subst = std::map<std::string, Term>;

Term subst(const Term& t, const Subst& s) {
  if (t.is_var()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term r = t;
  for (auto& a : r.args) a = subst(a, s);
  return r;
}

Atom subst(const Atom& a, const Subst& s) {
  Atom r = a;
  for (auto& t : r.args) t = subst(t, s);
  return r;
}

void symbols_of(const Term& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const auto& a : t.args) symbols_of(a, out);
}

void symbols_of(const FolFormula& f, std::set<std::string>& out) {
  if (f.kind == FolFormula::Kind::Atom) {
    out.insert(f.atom.predicate);
    for (const auto& a : f.atom.args) symbols_of(a, out);
  }
  if (!f.var.empty()) out.insert(f.var);
  for (const auto& c : f.children) symbols_of(c, out);
}

void free_vars(const FolFormula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  using K = FolFormula::Kind;
  if (f.kind == K::Atom) {
    std::vector<std::string> vs;
    for (const auto& a : f.atom.args) term_vars(a, vs);
    for (const auto& v : vs)
      if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
          std::find(out.begin(), out.end(), v) == out.end())
        out.push_back(v);
    return;
  }
  if (f.kind == K::Forall || f.kind == K::Exists) {
    bound.push_back(f.var);
    free_vars(f.children[0], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f.children) free_vars(c, bound, out);
}

struct Renamer {
  std::set<std::string> taken;

  std::string fresh(const std::string& base) {
    if (taken.insert(base).second) return base;
    for (int k = 1;; ++k) {
      std::string n = base + "_" + std::to_string(k);
      if (taken.insert(n).second) return n;
    }
  }

  FolFormula run(const FolFormula& f, Subst& scope) {
    using K = FolFormula::Kind;
    if (f.kind == K::Atom) {
      FolFormula r = f;
      r.atom = subst(f.atom, scope);
      return r;
    }
    if (f.kind == K::Forall || f.kind == K::Exists) {
      std::string nv = fresh(f.var);
      auto prev = scope.find(f.var);
      std::optional<Term> saved;
      if (prev != scope.end()) saved = prev->second;
      scope[f.var] = Term::variable(nv);
      FolFormula body = run(f.children[0], scope);
      if (saved) scope[f.var] = *saved; else scope.erase(f.var);
      return f.kind == K::Forall ? FolFormula::forall(nv, std::move(body)) : FolFormula::exists(nv, std::move(body));
    }
    FolFormula r = f;
    for (auto& c : r.children) c = run(c, scope);
    return r;
  }
};

// Negation normal form with implications removed.
FolFormula nnf(const FolFormula& f, bool neg) {
  using K = FolFormula::Kind;
  switch (f.kind) {
    case K::Atom:
      return neg ? FolFormula::negate(f) : f;
    case K::Not:
      return nnf(f.children[0], !neg);
    case K::Implies:
      return nnf(FolFormula::disj({FolFormula::negate(f.children[0]), f.children[1]}), neg);
    case K::And:
    case K::Or: {
      std::vector<FolFormula> cs;
      for (const auto& c : f.children) cs.push_back(nnf(c, neg));
      return (f.kind == K::And) != neg ? FolFormula::conj(std::move(cs)) : FolFormula::disj(std::move(cs));
    }
    case K::Forall:
    case K::Exists: {
      bool universal = (f.kind == K::Forall) != neg;
      FolFormula body = nnf(f.children[0], neg);
      return universal ? FolFormula::forall(f.var, std::move(body)) : FolFormula::exists(f.var, std::move(body));
    }
  }
  return f;
}

struct Skolemizer {
  std::set<std::string>* reserved;
  std::size_t const_counter = 0;
  std::size_t func_counter = 0;

  std::string next(bool function) {
    static const std::string kConst = "ABCDEGHIJKLMNOPQRSTUVWXYZ";
    static const std::string kFunc = "FGHKLMNPQRSTUVWZ";
    const std::string& pool = function ? kFunc : kConst;
    std::size_t& ctr = function ? func_counter : const_counter;
    for (;;) {
      std::size_t k = ctr++;
      std::string n(1, pool[k % pool.size()]);
      if (k >= pool.size()) n += std::to_string(k / pool.size());
      if (reserved->insert(n).second) return n;
    }
  }

  // Returns the quantifier-free matrix in NNF.
  FolFormula run(const FolFormula& f, std::vector<std::string>& universals, Subst& sk) {
    using K = FolFormula::Kind;
    switch (f.kind) {
      case K::Atom: {
        FolFormula r = f;
        r.atom = subst(f.atom, sk);
        return r;
      }
      case K::Not: {
        FolFormula r = f;
        r.children[0] = run(f.children[0], universals, sk);
        return r;
      }
      case K::Forall: {
        universals.push_back(f.var);
        FolFormula body = run(f.children[0], universals, sk);
        universals.pop_back();
        return body;
      }
      case K::Exists: {
        Term t;
        if (universals.empty()) {
          t = Term::constant(next(false));
        } else {
          std::vector<Term> args;
          for (const auto& u : universals) args.push_back(Term::variable(u));
          t = Term::function(next(true), std::move(args));
        }
        sk[f.var] = t;
        FolFormula body = run(f.children[0], universals, sk);
        sk.erase(f.var);
        return body;
      }
      default: {
        FolFormula r = f;
        for (auto& c : r.children) c = run(c, universals, sk);
        return r;
      }
    }
  }
};

using LitSet = std::vector<FolLiteral>;

bool add_literal(LitSet& c, const FolLiteral& l) {
  for (const auto& x : c) {
    if (x.atom == l.atom) return x.positive == l.positive;  // false: tautology
  }
  c.push_back(l);
  return true;
}

std::vector<LitSet> matrix_cnf(const FolFormula& f) {
  using K = FolFormula::Kind;
  if (f.kind == K::Atom) return {LitSet{FolLiteral{true, f.atom}}};
  if (f.kind == K::Not) return {LitSet{FolLiteral{false, f.children[0].atom}}};
  if (f.kind == K::And) {
    std::vector<LitSet> out;
    for (const auto& c : f.children) {
      auto sub = matrix_cnf(c);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  std::vector<LitSet> acc{LitSet{}};
  for (const auto& c : f.children) {
    auto sub = matrix_cnf(c);
    std::vector<LitSet> next;
    for (const auto& a : acc)
      for (const auto& b : sub) {
        LitSet m = a;
        bool ok = true;
        for (const auto& l : b) ok = ok && add_literal(m, l);
        if (ok) next.push_back(std::move(m));
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

FolFormula standardize_apart(const FolFormula& f) {
  Renamer r;
  std::vector<std::string> bound, fv;
  free_vars(f, bound, fv);
  r.taken.insert(fv.begin(), fv.end());
  Subst scope;
  return r.run(f, scope);
}

std::vector<FolClause> skolemize(const FolFormula& f, std::vector<std::string>* reserved_out) {
  std::set<std::string> reserved;
  if (reserved_out) reserved.insert(reserved_out->begin(), reserved_out->end());
  symbols_of(f, reserved);

  // Free variables are read as universally quantified at the outermost level.
  std::vector<std::string> bound, fv;
  free_vars(f, bound, fv);
  FolFormula closed = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) closed = FolFormula::forall(*it, std::move(closed));

  FolFormula g = nnf(standardize_apart(closed), false);
  Skolemizer sk{&reserved};
  std::vector<std::string> universals;
  Subst s;
  FolFormula matrix = sk.run(g, universals, s);

  std::vector<FolClause> out;
  for (auto& lits : matrix_cnf(matrix)) {
    FolClause c{std::move(lits)};
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  if (reserved_out) reserved_out->assign(reserved.begin(), reserved.end());
  return out;
}

std::vector<FolClause> skolemize_all(const std::vector<FolFormula>& fs) {
  std::vector<std::string> reserved;
  std::set<std::string> all;
  for (const auto& f : fs) symbols_of(f, all);
  reserved.assign(all.begin(), all.end());
  std::vector<FolClause> out;
  for (const auto& f : fs) {
    auto cs = skolemize(f, &reserved);
    for (auto& c : cs)
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Herbrand universe and grounding

namespace {

void collect_signature(const Term& t, std::set<std::string>& consts, std::map<std::string, std::size_t>& funcs) {
  if (t.kind == Term::Kind::Constant) consts.insert(t.name);
  if (t.kind == Term::Kind::Function) {
    auto [it, fresh] = funcs.emplace(t.name, t.args.size());
    if (!fresh && it->second != t.args.size())
      throw PreconditionError("function '" + t.name + "' used with two arities");
  }
  for (const auto& a : t.args) collect_signature(a, consts, funcs);
}

}  // namespace

std::vector<Term> herbrand_universe(const std::vector<FolClause>& cs, std::size_t depth,
                                    const HerbrandOptions& opts) {
  if (cs.empty()) throw PreconditionError("herbrand_universe needs a nonempty clause set");
  std::set<std::string> consts;
  std::map<std::string, std::size_t> funcs;
  for (const auto& c : cs)
    for (const auto& l : c.literals)
      for (const auto& a : l.atom.args) collect_signature(a, consts, funcs);
  if (consts.empty()) consts.insert("c0");

  std::vector<Term> u;
  std::set<Term> seen;
  for (const auto& c : consts) {
    u.push_back(Term::constant(c));
    seen.insert(u.back());
  }
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Term> prev = u;
    std::size_t before = u.size();
    for (const auto& [f, arity] : funcs) {
      double combos = 1;
      for (std::size_t i = 0; i < arity; ++i) combos *= static_cast<double>(prev.size());
      if (combos + static_cast<double>(u.size()) > static_cast<double>(opts.max_terms) * 4 + 1e6)
        throw BudgetError("Herbrand universe exceeds term cap");
      std::vector<std::size_t> idx(arity, 0);
      for (;;) {
        std::vector<Term> args;
        for (std::size_t i : idx) args.push_back(prev[i]);
        Term t = Term::function(f, std::move(args));
        if (seen.insert(t).second) {
          u.push_back(std::move(t));
          if (u.size() > opts.max_terms) throw BudgetError("Herbrand universe exceeds term cap");
        }
        std::size_t k = arity;
        while (k > 0) {
          if (++idx[k - 1] < prev.size()) break;
          idx[k - 1] = 0;
          --k;
        }
        if (k == 0) break;
      }
    }
    if (u.size() == before) break;  // no function symbols
  }
  return u;
}

namespace {

struct Interner {
  std::vector<Atom> atoms;
  std::map<std::string, std::size_t> index;

  std::size_t id(const Atom& a) {
    auto [it, fresh] = index.emplace(to_string(a), atoms.size());
    if (fresh) atoms.push_back(a);
    return it->second;
  }
};

GroundResult finish(const std::vector<std::vector<std::pair<std::size_t, bool>>>& raw, const Interner& in) {
  std::vector<std::string> names;
  for (const auto& a : in.atoms) names.push_back(to_string(a));
  GroundResult r{ClauseSet(names), in.atoms};
  for (const auto& lits : raw) {
    Clause c(names.size());
    for (auto [i, pos] : lits) c.set(i, pos ? Polarity::Pos : Polarity::Neg);
    r.clauses.add(c);
  }
  return r;
}

}  // namespace

GroundResult ground(const std::vector<FolClause>& cs, const std::vector<Term>& universe, const GroundOptions& opts) {
  if (universe.empty()) throw PreconditionError("ground needs a nonempty universe");
  Interner in;
  std::vector<std::vector<std::pair<std::size_t, bool>>> raw;
  std::size_t produced = 0;
  for (const auto& c : cs) {
    std::vector<std::string> vars = variables_of(c);
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
      Subst s;
      for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = universe[idx[i]];
      LitSet lits;
      bool ok = true;
      for (const auto& l : c.literals) ok = ok && add_literal(lits, FolLiteral{l.positive, subst(l.atom, s)});
      if (ok) {
        if (++produced > opts.max_clauses) throw BudgetError("ground instance count exceeds cap");
        std::vector<std::pair<std::size_t, bool>> r;
        for (const auto& l : lits) r.emplace_back(in.id(l.atom), l.positive);
        raw.push_back(std::move(r));
      }
      std::size_t k = vars.size();
      while (k > 0) {
        if (++idx[k - 1] < universe.size()) break;
        idx[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  return finish(raw, in);
}

GroundResult ground_clauses_to_prop(const std::vector<FolClause>& cs) {
  Interner in;
  std::vector<std::vector<std::pair<std::size_t, bool>>> raw;
  for (const auto& c : cs) {
    LitSet lits;
    bool ok = true;
    for (const auto& l : c.literals) {
      if (!l.atom.is_ground()) throw PreconditionError("clause is not ground: " + to_string(c));
      ok = ok && add_literal(lits, l);
    }
    if (!ok) continue;
    std::vector<std::pair<std::size_t, bool>> r;
    for (const auto& l : lits) r.emplace_back(in.id(l.atom), l.positive);
    raw.push_back(std::move(r));
  }
  return finish(raw, in);
}

}  // namespace qatp
