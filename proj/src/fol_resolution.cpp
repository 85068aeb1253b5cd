// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qatp/errors.hpp"
#include "qatp/resolution.hpp"

namespace qatp {

Term apply_subst(const Term& t, const Substitution& s) {
  if (t.is_var()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  if (t.args.empty()) return t;
  Term r = t;
  for (auto& a : r.args) a = apply_subst(a, s);
  return r;
}

Atom apply_subst(const Atom& a, const Substitution& s) {
  Atom r = a;
  for (auto& t : r.args) t = apply_subst(t, s);
  return r;
}

FolClause apply_subst(const FolClause& c, const Substitution& s) {
  FolClause r;
  for (const auto& l : c.literals) {
    FolLiteral m{l.positive, apply_subst(l.atom, s)};
    if (std::find(r.literals.begin(), r.literals.end(), m) == r.literals.end()) r.literals.push_back(std::move(m));
  }
  return r;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += v + "/" + to_string(t);
  }
  return out + "}";
}

namespace {

const Term& walk(const Term& t, const Substitution& s) {
  const Term* cur = &t;
  while (cur->is_var()) {
    auto it = s.find(cur->name);
    if (it == s.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs(const std::string& v, const Term& t, const Substitution& s) {
  const Term& w = walk(t, s);
  if (w.is_var()) return w.name == v;
  for (const auto& a : w.args)
    if (occurs(v, a, s)) return true;
  return false;
}

Term resolve_fully(const Term& t, const Substitution& s) {
  const Term& w = walk(t, s);
  if (w.is_var() || w.args.empty()) return w;
  Term r = w;
  for (auto& a : r.args) a = resolve_fully(a, s);
  return r;
}

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  const Term& x = walk(a, s);
  const Term& y = walk(b, s);
  if (x.is_var() && y.is_var() && x.name == y.name) return true;
  // Prefer binding the right-hand variable so left-hand names survive.
  if (y.is_var()) {
    if (occurs(y.name, x, s)) return false;
    s[y.name] = x;
    return true;
  }
  if (x.is_var()) {
    if (occurs(x.name, y, s)) return false;
    s[x.name] = y;
    return true;
  }
  if (x.kind != y.kind || x.name != y.name || x.args.size() != y.args.size()) return false;
  // Copy: `s` may rehash while recursing and invalidate references.
  Term xc = x, yc = y;
  for (std::size_t i = 0; i < xc.args.size(); ++i)
    if (!unify_into(xc.args[i], yc.args[i], s)) return false;
  return true;
}

Substitution normalize(const Substitution& s) {
  Substitution out;
  for (const auto& [v, t] : s) out[v] = resolve_fully(t, s);
  return out;
}

bool tautology(const FolClause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i)
    for (std::size_t j = i + 1; j < c.literals.size(); ++j)
      if (c.literals[i].positive != c.literals[j].positive && c.literals[i].atom == c.literals[j].atom) return true;
  return false;
}

std::set<std::string> var_set(const FolClause& c) {
  auto v = variables_of(c);
  return {v.begin(), v.end()};
}

// Renames every variable of `c` to a name outside `avoid`.
Substitution rename_apart(const FolClause& c, const std::set<std::string>& avoid) {
  Substitution rho;
  std::set<std::string> taken = avoid;
  for (const auto& v : variables_of(c)) {
    if (!avoid.count(v)) {
      taken.insert(v);
      continue;
    }
    for (int k = 1;; ++k) {
      std::string n = v + "_" + std::to_string(k);
      if (!taken.count(n) && !var_set(c).count(n)) {
        taken.insert(n);
        rho[v] = Term::variable(n);
        break;
      }
    }
  }
  return rho;
}

}  // namespace

std::optional<Substitution> unify_terms(const Term& a, const Term& b, Substitution s) {
  if (!unify_into(a, b, s)) return std::nullopt;
  return normalize(s);
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], s)) return std::nullopt;
  return normalize(s);
}

std::vector<FolClause> factors(const FolClause& c) {
  std::vector<FolClause> out;
  for (std::size_t i = 0; i < c.literals.size(); ++i)
    for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
      if (c.literals[i].positive != c.literals[j].positive) continue;
      auto th = unify(c.literals[i].atom, c.literals[j].atom);
      if (!th || th->empty()) continue;
      FolClause f = apply_subst(c, *th);
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
    }
  return out;
}

std::vector<FolClause> resolve_fol(const FolClause& c1, const FolClause& c2in) {
  Substitution rho = rename_apart(c2in, var_set(c1));
  FolClause c2 = apply_subst(c2in, rho);
  std::vector<FolClause> out;
  auto push = [&](FolClause c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  };
  for (std::size_t i = 0; i < c1.literals.size(); ++i)
    for (std::size_t j = 0; j < c2.literals.size(); ++j) {
      if (c1.literals[i].positive == c2.literals[j].positive) continue;
      auto th = unify(c1.literals[i].atom, c2.literals[j].atom);
      if (!th) continue;
      FolClause r;
      for (std::size_t k = 0; k < c1.literals.size(); ++k)
        if (k != i) r.literals.push_back(c1.literals[k]);
      for (std::size_t k = 0; k < c2.literals.size(); ++k)
        if (k != j) r.literals.push_back(c2.literals[k]);
      push(apply_subst(r, *th));
    }
  for (auto& f : factors(c1)) push(std::move(f));
  for (auto& f : factors(c2in)) push(std::move(f));
  return out;
}

// ---------------------------------------------------------------------------
// Given-clause refutation with derivation tracking

namespace {

std::size_t weight(const Term& t) {
  std::size_t w = 1;
  for (const auto& a : t.args) w += weight(a);
  return w;
}

std::size_t weight(const FolClause& c) {
  std::size_t w = 0;
  for (const auto& l : c.literals) {
    w += 1;
    for (const auto& a : l.atom.args) w += weight(a);
  }
  return w;
}

std::size_t max_depth(const FolClause& c) {
  std::size_t d = 0;
  for (const auto& l : c.literals)
    for (const auto& a : l.atom.args) d = std::max(d, a.depth());
  return d;
}

// One-way matching of `pattern` onto `target`; target variables act as constants.
bool match_term(const Term& pattern, const Term& target, Substitution& m) {
  if (pattern.is_var()) {
    auto it = m.find(pattern.name);
    if (it != m.end()) return it->second == target;
    m.emplace(pattern.name, target);
    return true;
  }
  if (pattern.kind != target.kind || pattern.name != target.name || pattern.args.size() != target.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], target.args[i], m)) return false;
  return true;
}

bool subsumes_from(const FolClause& d, std::size_t k, const FolClause& c, Substitution& m) {
  if (k == d.literals.size()) return true;
  const FolLiteral& l = d.literals[k];
  for (const auto& t : c.literals) {
    if (t.positive != l.positive || t.atom.predicate != l.atom.predicate || t.atom.args.size() != l.atom.args.size())
      continue;
    Substitution m2 = m;
    bool ok = true;
    for (std::size_t i = 0; i < l.atom.args.size() && ok; ++i) ok = match_term(l.atom.args[i], t.atom.args[i], m2);
    if (ok && subsumes_from(d, k + 1, c, m2)) return true;
  }
  return false;
}

// True if some instance of `d` is a sub-multiset of `c`'s literals.
bool subsumes(const FolClause& d, const FolClause& c) {
  if (d.literals.size() > c.literals.size()) return false;
  Substitution m;
  return subsumes_from(d, 0, c, m);
}

// Canonical renaming: variables become v0, v1, ... in first-occurrence order.
Substitution canonical(const FolClause& c) {
  Substitution k;
  std::size_t n = 0;
  for (const auto& v : variables_of(c)) k[v] = Term::variable("v" + std::to_string(n++));
  return k;
}

// Extends `kappa` so variables that vanished from the result get step-local names.
Term close_over(const Term& t, const Substitution& kappa, Substitution& extra, std::size_t step) {
  if (t.is_var()) {
    auto it = kappa.find(t.name);
    if (it != kappa.end()) return it->second;
    auto jt = extra.find(t.name);
    if (jt != extra.end()) return jt->second;
    Term f = Term::variable("_s" + std::to_string(step) + "_" + std::to_string(extra.size()));
    extra[t.name] = f;
    return f;
  }
  Term r = t;
  for (auto& a : r.args) a = close_over(a, kappa, extra, step);
  return r;
}

}  // namespace

std::vector<std::size_t> FolProofResult::proof_ids() const {
  if (!empty_id) return {};
  std::set<std::size_t> need;
  std::vector<std::size_t> stack{*empty_id};
  while (!stack.empty()) {
    std::size_t id = stack.back();
    stack.pop_back();
    if (!need.insert(id).second) continue;
    for (auto p : clauses[id].parents) stack.push_back(p);
  }
  return {need.begin(), need.end()};
}

FolProofResult fol_refute(const std::vector<FolClause>& input, const FolBudget& budget) {
  FolProofResult r;
  std::unordered_set<std::string> seen;
  std::set<std::pair<std::size_t, std::size_t>> passive;  // (weight, id)
  std::set<std::size_t> passive_age;
  std::vector<std::size_t> active;

  auto admit = [&](FolDerivation d) -> bool {
    FolClause key = apply_subst(d.clause, canonical(d.clause));
    if (!seen.insert(to_string(key)).second) return false;
    for (const auto& k : r.clauses)
      if (subsumes(k.clause, d.clause)) return false;
    std::size_t id = r.clauses.size();
    bool empty = d.clause.is_empty();
    passive.emplace(weight(d.clause), id);
    passive_age.insert(id);
    r.clauses.push_back(std::move(d));
    if (empty) r.empty_id = id;
    return empty;
  };

  for (const auto& c : input) {
    if (tautology(c)) continue;
    FolDerivation d;
    d.clause = c;
    d.rule = "input";
    if (admit(std::move(d))) {
      r.verdict = Verdict::Refuted;
      return r;
    }
  }

  // Builds a derived clause from `raw` (over the parents' variables after the
  // unifier) and records per-parent instantiations.
  auto derive = [&](const FolClause& raw, const std::vector<std::size_t>& parents,
                    const std::vector<Substitution>& to_raw, const char* rule) -> bool {
    if (tautology(raw) || max_depth(raw) > budget.max_term_depth) return false;
    Substitution kappa = canonical(raw);
    FolDerivation d;
    d.clause = apply_subst(raw, kappa);
    d.parents = parents;
    d.rule = rule;
    Substitution extra;
    for (const auto& m : to_raw) {
      Substitution inst;
      for (const auto& [v, t] : m) inst[v] = close_over(t, kappa, extra, r.clauses.size());
      d.parent_inst.push_back(std::move(inst));
    }
    return admit(std::move(d));
  };

  while (!passive.empty()) {
    if (r.given_processed >= budget.max_given || r.clauses.size() >= budget.max_clauses) {
      r.verdict = Verdict::BudgetExceeded;
      return r;
    }
    // Mostly lightest-first, with every fifth pick the oldest for fairness.
    std::size_t g;
    if (r.given_processed % 5 == 4) {
      g = *passive_age.begin();
      passive.erase({weight(r.clauses[g].clause), g});
    } else {
      g = passive.begin()->second;
      passive.erase(passive.begin());
    }
    passive_age.erase(g);
    ++r.given_processed;
    active.push_back(g);
    const FolClause given = r.clauses[g].clause;

    // Factors of the given clause.
    auto gvars = variables_of(given);
    for (std::size_t i = 0; i < given.literals.size(); ++i)
      for (std::size_t j = i + 1; j < given.literals.size(); ++j) {
        if (given.literals[i].positive != given.literals[j].positive) continue;
        auto th = unify(given.literals[i].atom, given.literals[j].atom);
        if (!th || th->empty()) continue;
        Substitution m;
        for (const auto& v : gvars) m[v] = apply_subst(Term::variable(v), *th);
        if (derive(apply_subst(given, *th), {g}, {m}, "factor")) {
          r.verdict = Verdict::Refuted;
          return r;
        }
      }

    // Binary resolvents with every active clause, the given one included.
    for (std::size_t a : std::vector<std::size_t>(active)) {
      const FolClause other = r.clauses[a].clause;
      Substitution rho = rename_apart(other, var_set(given));
      FolClause o2 = apply_subst(other, rho);
      auto ovars = variables_of(other);
      for (std::size_t i = 0; i < given.literals.size(); ++i)
        for (std::size_t j = 0; j < o2.literals.size(); ++j) {
          if (given.literals[i].positive == o2.literals[j].positive) continue;
          auto th = unify(given.literals[i].atom, o2.literals[j].atom);
          if (!th) continue;
          FolClause raw;
          for (std::size_t k = 0; k < given.literals.size(); ++k)
            if (k != i) raw.literals.push_back(given.literals[k]);
          for (std::size_t k = 0; k < o2.literals.size(); ++k)
            if (k != j) raw.literals.push_back(o2.literals[k]);
          raw = apply_subst(raw, *th);
          Substitution m1, m2;
          for (const auto& v : gvars) m1[v] = apply_subst(Term::variable(v), *th);
          for (const auto& v : ovars) m2[v] = apply_subst(apply_subst(Term::variable(v), rho), *th);
          if (derive(raw, {g, a}, {m1, m2}, "resolve")) {
            r.verdict = Verdict::Refuted;
            return r;
          }
        }
    }
  }
  r.verdict = Verdict::Saturated;
  return r;
}

namespace {

Term fill(const Term& t, const Term& filler) {
  if (t.is_var()) return filler;
  if (t.args.empty()) return t;
  Term r = t;
  for (auto& a : r.args) a = fill(a, filler);
  return r;
}

}  // namespace

std::vector<FolClause> herbrand_core(const FolProofResult& r, const Term& filler) {
  if (!r.empty_id) return {};
  std::vector<FolClause> out;
  std::set<std::string> out_keys;
  std::set<std::pair<std::size_t, std::string>> visited;
  std::vector<std::pair<std::size_t, Substitution>> stack{{*r.empty_id, {}}};
  while (!stack.empty()) {
    auto [id, sigma] = std::move(stack.back());
    stack.pop_back();
    if (!visited.emplace(id, to_string(sigma)).second) continue;
    const FolDerivation& d = r.clauses[id];
    if (d.parents.empty()) {
      FolClause inst = apply_subst(d.clause, sigma);
      for (auto& l : inst.literals)
        for (auto& a : l.atom.args) a = fill(a, filler);
      inst = apply_subst(inst, {});  // merge literals made equal by filling
      if (out_keys.insert(to_string(inst)).second) out.push_back(std::move(inst));
      continue;
    }
    for (std::size_t p = 0; p < d.parents.size(); ++p) {
      Substitution sp;
      for (const auto& [v, t] : d.parent_inst[p]) sp[v] = fill(apply_subst(t, sigma), filler);
      stack.emplace_back(d.parents[p], std::move(sp));
    }
  }
  return out;
}

}  // namespace qatp
