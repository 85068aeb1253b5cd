// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <random>

#include "qatp/errors.hpp"
#include "qatp/formula.hpp"

using namespace qatp;

namespace {

PropFormula random_prop(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"A", "B", "C", "D"};
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 0);
  switch (pick(rng)) {
    case 0:
      return PropFormula::var(names[rng() % 4]);
    case 1:
      return PropFormula::negate(random_prop(rng, depth - 1));
    case 2:
      return PropFormula::conj({random_prop(rng, depth - 1), random_prop(rng, depth - 1)});
    case 3:
    case 4:
      return PropFormula::disj({random_prop(rng, depth - 1), random_prop(rng, depth - 1)});
    default:
      return PropFormula::implies(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
  }
}

bool cnf_true(const ClauseSet& cs, const std::map<std::string, bool>& a) {
  std::uint64_t bits = 0;
  for (std::size_t v = 0; v < cs.num_vars(); ++v)
    if (a.at(cs.names()[v])) bits |= std::uint64_t{1} << v;
  for (const auto& c : cs)
    if (!clause_true(c, bits)) return false;
  return true;
}

}  // namespace

TEST(Parse, DisjunctionWithNegation) {
  PropFormula f = parse_prop("(or A (not C))");
  ASSERT_EQ(f.kind, PropFormula::Kind::Or);
  ASSERT_EQ(f.children.size(), 2u);
  EXPECT_EQ(f.children[0], PropFormula::var("A"));
  EXPECT_EQ(f.children[1], PropFormula::negate(PropFormula::var("C")));
}

TEST(Parse, EmptyConjunctionIsTruth) {
  PropFormula f = parse_prop("(and)");
  EXPECT_EQ(f.kind, PropFormula::Kind::And);
  EXPECT_TRUE(f.children.empty());
  EXPECT_EQ(to_cnf(f).size(), 0u);
}

TEST(Parse, UnbalancedParenReportsPosition) {
  try {
    parse_prop("(or A");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_THROW(parse_prop("(xor A B)"), ParseError);
  EXPECT_THROW(parse_prop("A)"), ParseError);
}

TEST(Cnf, DeMorgan) {
  ClauseSet cs = to_cnf(parse_prop("(not (and A B))"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs.to_string(cs[0]), "~A | ~B");
}

TEST(Cnf, DoubleNegation) {
  ClauseSet cs = to_cnf(parse_prop("(not (not A))"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs.to_string(cs[0]), "A");
}

TEST(Cnf, Distribution) {
  ClauseSet cs = to_cnf(parse_prop("(or (and A B) C)"));
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.to_string(cs[0]), "A | C");
  EXPECT_EQ(cs.to_string(cs[1]), "B | C");
}

TEST(Cnf, TautologiesDropped) {
  EXPECT_EQ(to_cnf(parse_prop("(or A (not A))")).size(), 0u);
  ClauseSet empty = to_cnf(parse_prop("(or)"));
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty[0].is_empty());
}

TEST(Cnf, VocabularyIsHonoured) {
  std::map<std::string, std::size_t> vocab{{"A", 0}, {"B", 1}, {"C", 2}, {"D", 3}};
  ClauseSet cs = to_cnf(parse_prop("(or A (not C))"), vocab);
  ASSERT_EQ(cs.num_vars(), 4u);
  EXPECT_EQ(cs[0].at(0), Polarity::Pos);
  EXPECT_EQ(cs[0].at(2), Polarity::Neg);
  EXPECT_THROW(to_cnf(parse_prop("E"), vocab), PreconditionError);
}

TEST(Cnf, PreservesModelsExhaustively) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    PropFormula f = random_prop(rng, 4);
    std::map<std::string, std::size_t> vocab{{"A", 0}, {"B", 1}, {"C", 2}, {"D", 3}};
    ClauseSet cs = to_cnf(f, vocab);
    for (int a = 0; a < 16; ++a) {
      std::map<std::string, bool> asg{{"A", a & 1}, {"B", a & 2}, {"C", a & 4}, {"D", a & 8}};
      ASSERT_EQ(eval_prop(f, asg), cnf_true(cs, asg)) << to_string(f);
    }
  }
}

TEST(Dimacs, ParsesAndDeduplicates) {
  ClauseSet cs = parse_dimacs("c comment\np cnf 3 4\n1 -3 0\n2 3 0\n-2 0\n3 -1 0\n");
  ASSERT_EQ(cs.num_vars(), 3u);
  EXPECT_EQ(cs.size(), 4u);
  EXPECT_EQ(cs.to_string(cs[0]), "x1 | ~x3");
  ClauseSet dup = parse_dimacs("p cnf 2 3\n1 2 0\n2 1 0\n1 -1 0\n");
  EXPECT_EQ(dup.size(), 1u);
  EXPECT_THROW(parse_dimacs("1 2 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 x 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
}

// ---------------------------------------------------------------------------

TEST(Skolemize, ExistentialsUnderUniversalBecomeFunctions) {
  FolFormula f = parse_fol(
      "(forall x (or (exists y (and (Sport y) (Likes x y))) (exists z (Doctor x z))))");
  auto cs = skolemize(f);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(to_string(cs[0]), "Sport(F(x)) | Doctor(x,G(x))");
  EXPECT_EQ(to_string(cs[1]), "Likes(x,F(x)) | Doctor(x,G(x))");
}

TEST(Skolemize, TopLevelExistentialBecomesConstant) {
  auto cs = skolemize(parse_fol("(exists x (P x))"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(to_string(cs[0]), "P(A)");
  // A is taken, so the fresh constant must differ.
  auto cs2 = skolemize(parse_fol("(and (Q A) (exists x (P x)))"));
  ASSERT_EQ(cs2.size(), 2u);
  EXPECT_EQ(to_string(cs2[1]), "P(B)");
}

TEST(Skolemize, UniversalDropped) {
  auto cs = skolemize(parse_fol("(forall x (P x))"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(to_string(cs[0]), "P(x)");
}

TEST(Skolemize, StandardizeApartRenamesRebinding) {
  FolFormula f = standardize_apart(parse_fol("(and (forall x (P x)) (exists x (Q x)))"));
  EXPECT_EQ(to_string(f), "(and (forall x P(x)) (exists x_1 Q(x_1)))");
}

TEST(Skolemize, NegatedUniversalIsExistential) {
  auto cs = skolemize(parse_fol("(not (forall x (P x)))"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(to_string(cs[0]), "~P(A)");
}

namespace {

// Finite-model checking over domains {0..n-1} with unary predicates only.
struct Interp {
  int n;
  std::map<std::string, std::vector<int>> preds;  // unary truth tables
  std::map<std::string, std::vector<int>> funcs;  // arity 0, 1 or 2 tables

  int term(const Term& t, const std::map<std::string, int>& env) const {
    if (t.is_var()) return env.at(t.name);
    const auto& tab = funcs.at(t.name);
    int idx = 0;
    for (const auto& a : t.args) idx = idx * n + term(a, env);
    return tab[idx];
  }

  bool eval(const FolFormula& f, std::map<std::string, int>& env) const {
    using K = FolFormula::Kind;
    switch (f.kind) {
      case K::Atom:
        return preds.at(f.atom.predicate)[term(f.atom.args[0], env)];
      case K::Not:
        return !eval(f.children[0], env);
      case K::And:
        for (const auto& c : f.children)
          if (!eval(c, env)) return false;
        return true;
      case K::Or:
        for (const auto& c : f.children)
          if (eval(c, env)) return true;
        return false;
      case K::Implies:
        return !eval(f.children[0], env) || eval(f.children[1], env);
      case K::Forall:
      case K::Exists: {
        bool all = f.kind == K::Forall;
        auto saved = env.count(f.var) ? std::optional<int>(env[f.var]) : std::nullopt;
        bool res = all;
        for (int d = 0; d < n; ++d) {
          env[f.var] = d;
          bool v = eval(f.children[0], env);
          if (all && !v) { res = false; break; }
          if (!all && v) { res = true; break; }
        }
        if (saved) env[f.var] = *saved; else env.erase(f.var);
        return res;
      }
    }
    return false;
  }

  bool clauses(const std::vector<FolClause>& cs) const {
    for (const auto& c : cs) {
      auto vars = variables_of(c);
      std::vector<int> idx(vars.size(), 0);
      for (;;) {
        std::map<std::string, int> env;
        for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = idx[i];
        bool sat = false;
        for (const auto& l : c.literals)
          if ((preds.at(l.atom.predicate)[term(l.atom.args[0], env)] != 0) == l.positive) sat = true;
        if (!sat) return false;
        std::size_t k = vars.size();
        while (k > 0 && ++idx[k - 1] == n) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    return true;
  }
};

void collect_funcs(const Term& t, std::map<std::string, std::size_t>& out) {
  if (!t.is_var()) out[t.name] = t.args.size();
  for (const auto& a : t.args) collect_funcs(a, out);
}

// Calls `body` for every interpretation of the given symbols over size n.
bool any_model(int n, const std::map<std::string, std::size_t>& funcs,
               const std::function<bool(const Interp&)>& body) {
  std::vector<std::pair<std::string, std::size_t>> syms(funcs.begin(), funcs.end());
  Interp it{n, {}, {}};
  std::function<bool(std::size_t)> rec_f = [&](std::size_t k) -> bool {
    if (k == syms.size()) return body(it);
    std::size_t cells = 1;
    for (std::size_t i = 0; i < syms[k].second; ++i) cells *= n;
    std::vector<int> tab(cells, 0);
    for (;;) {
      it.funcs[syms[k].first] = tab;
      if (rec_f(k + 1)) return true;
      std::size_t i = 0;
      while (i < cells && ++tab[i] == n) tab[i++] = 0;
      if (i == cells) return false;
    }
  };
  for (int p = 0; p < (1 << n); ++p)
    for (int q = 0; q < (1 << n); ++q) {
      it.preds["P"].assign(n, 0);
      it.preds["Q"].assign(n, 0);
      for (int d = 0; d < n; ++d) {
        it.preds["P"][d] = (p >> d) & 1;
        it.preds["Q"][d] = (q >> d) & 1;
      }
      if (rec_f(0)) return true;
    }
  return false;
}

FolFormula random_fol(std::mt19937_64& rng, int depth, std::vector<std::string>& scope, int& fresh) {
  int choice = depth > 0 ? static_cast<int>(rng() % 6) : 0;
  if (choice == 0 && !scope.empty()) {
    std::string p = rng() % 2 ? "P" : "Q";
    FolFormula a = FolFormula::make_atom(Atom{p, {Term::variable(scope[rng() % scope.size()])}});
    return rng() % 3 == 0 ? FolFormula::negate(a) : a;
  }
  if (choice <= 1 || scope.empty()) {
    std::string v = "v" + std::to_string(fresh++);
    scope.push_back(v);
    FolFormula body = random_fol(rng, depth - 1, scope, fresh);
    scope.pop_back();
    return rng() % 2 ? FolFormula::forall(v, body) : FolFormula::exists(v, body);
  }
  if (choice == 2) return FolFormula::negate(random_fol(rng, depth - 1, scope, fresh));
  FolFormula a = random_fol(rng, depth - 1, scope, fresh);
  FolFormula b = random_fol(rng, depth - 1, scope, fresh);
  if (choice == 3) return FolFormula::conj({a, b});
  if (choice == 4) return FolFormula::disj({a, b});
  return FolFormula::implies(a, b);
}

}  // namespace

TEST(Skolemize, PreservesSatisfiabilityOnSmallDomains) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::string> scope;
    int fresh = 0;
    FolFormula f = random_fol(rng, 4, scope, fresh);
    auto cs = skolemize(f);
    std::map<std::string, std::size_t> funcs;
    for (const auto& c : cs)
      for (const auto& l : c.literals)
        for (const auto& a : l.atom.args) collect_funcs(a, funcs);
    for (int n = 1; n <= 3; ++n) {
      bool in_sat = any_model(n, {}, [&](const Interp& it) {
        std::map<std::string, int> env;
        return it.eval(f, env);
      });
      bool out_sat = any_model(n, funcs, [&](const Interp& it) { return it.clauses(cs); });
      ASSERT_EQ(in_sat, out_sat) << to_string(f) << " n=" << n;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 180);
}

TEST(Herbrand, PaperUniverseAtDepthOne) {
  auto cs = skolemize(parse_fol("(or (not (P x (F x A))) (not (Q x A)) (R x B))"));
  auto u = herbrand_universe(cs, 1);
  std::vector<std::string> got;
  for (const auto& t : u) got.push_back(to_string(t));
  EXPECT_EQ(got, (std::vector<std::string>{"A", "B", "F(A,A)", "F(A,B)", "F(B,A)", "F(B,B)"}));
  auto u0 = herbrand_universe(cs, 0);
  ASSERT_EQ(u0.size(), 2u);
  // Monotone in depth.
  auto u2 = herbrand_universe(cs, 2);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(u2[i], u[i]);
  EXPECT_GT(u2.size(), u.size());
}

TEST(Herbrand, NoFunctionsMeansConstantsOnly) {
  auto cs = skolemize(parse_fol("(P A)"));
  EXPECT_EQ(herbrand_universe(cs, 5).size(), 1u);
  auto free_cs = skolemize(parse_fol("(forall x (P x))"));
  auto u = herbrand_universe(free_cs, 2);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(to_string(u[0]), "c0");
}

TEST(Herbrand, TermCapRaisesBudgetError) {
  auto cs = skolemize(parse_fol("(P (F A B))"));
  HerbrandOptions o;
  o.max_terms = 50;
  EXPECT_THROW(herbrand_universe(cs, 3, o), BudgetError);
}

TEST(Ground, ExhaustiveSubstitution) {
  auto cs = skolemize(parse_fol("(forall x (P x))"));
  std::vector<Term> u{Term::constant("A"), Term::constant("B")};
  GroundResult g = ground(cs, u);
  EXPECT_EQ(g.clauses.size(), 2u);
  EXPECT_EQ(g.atoms.size(), 2u);
  GroundResult q = ground(skolemize(parse_fol("(Q A)")), u);
  ASSERT_EQ(q.clauses.size(), 1u);
  EXPECT_EQ(q.clauses.to_string(q.clauses[0]), "Q(A)");
}

TEST(Ground, PaperHerbrandBaseInstance) {
  auto cs = skolemize(parse_fol("(or (not (P x (F x A))) (not (Q x A)) (R x B))"));
  std::vector<Term> u{Term::constant("A"), Term::constant("B")};
  GroundResult g = ground(cs, u);
  ASSERT_EQ(g.clauses.size(), 2u);
  EXPECT_EQ(g.clauses.to_string(g.clauses[0]), "~P(A,F(A,A)) | ~Q(A,A) | R(A,B)");
  for (const auto& a : g.atoms) EXPECT_TRUE(a.is_ground());
}

TEST(Ground, CapRaisesBudgetError) {
  auto cs = skolemize(parse_fol("(forall (x y z) (P x y z))"));
  auto u = herbrand_universe(skolemize(parse_fol("(P (F A) B C)")), 2);
  GroundOptions o;
  o.max_clauses = 100;
  EXPECT_THROW(ground(cs, u, o), BudgetError);
}

TEST(FolProblem, BadmintonFixtureParses) {
  std::ifstream in(std::string(QATP_FIXTURES) + "/badminton.fol");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  FolProblem p = parse_fol_problem(text);
  EXPECT_EQ(p.axioms.size(), 11u);
  ASSERT_TRUE(p.goal.has_value());
  std::vector<FolFormula> all = p.axioms;
  all.push_back(FolFormula::negate(*p.goal));
  auto cs = skolemize_all(all);
  EXPECT_EQ(cs.size(), 16u);
  for (const auto& c : cs) {
    for (const auto& l : c.literals)
      for (const auto& a : l.atom.args)
        if (a.kind == Term::Kind::Constant) EXPECT_NE(a.name, "x");
  }
}
