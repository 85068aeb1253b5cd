// SPDX-License-Identifier: Apache-2.0
#include "qatp/resolution.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

#include "qatp/errors.hpp"

namespace qatp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Refuted:
      return "Refuted";
    case Verdict::Saturated:
      return "Saturated";
    case Verdict::BudgetExceeded:
      return "BudgetExceeded";
  }
  return "?";
}

ResolventOutcome resolve_pair(const Clause& c1, const Clause& c2) {
  if (c1.num_vars() != c2.num_vars()) throw PreconditionError("resolve_pair: vocabulary size mismatch");
  const auto& p1 = c1.pos_words();
  const auto& n1 = c1.neg_words();
  const auto& p2 = c2.pos_words();
  const auto& n2 = c2.neg_words();
  std::size_t count = 0, word = 0;
  std::uint64_t bit = 0;
  for (std::size_t w = 0; w < p1.size(); ++w) {
    std::uint64_t comp = (p1[w] & n2[w]) | (n1[w] & p2[w]);
    if (!comp) continue;
    count += std::popcount(comp);
    if (count > 1) return {};
    word = w;
    bit = comp;
  }
  if (count != 1) return {};
  ResolventOutcome out;
  out.kind = ResolventOutcome::Kind::Valid;
  out.resolved_var = word * 64 + std::countr_zero(bit);
  out.clause = Clause(c1.num_vars());
  for (std::size_t w = 0; w < p1.size(); ++w) {
    out.clause.pos_words()[w] = (p1[w] | p2[w]) & ~(w == word ? bit : 0);
    out.clause.neg_words()[w] = (n1[w] | n2[w]) & ~(w == word ? bit : 0);
  }
  return out;
}

std::vector<ProofStep> ProofResult::refutation() const {
  if (verdict != Verdict::Refuted || trace.empty()) return {};
  std::map<std::size_t, const ProofStep*> by_id;
  for (const auto& s : trace) by_id[s.resolvent_id] = &s;
  std::set<std::size_t> need;
  std::vector<std::size_t> stack{trace.back().resolvent_id};
  while (!stack.empty()) {
    std::size_t id = stack.back();
    stack.pop_back();
    auto it = by_id.find(id);
    if (it == by_id.end() || !need.insert(id).second) continue;
    stack.push_back(it->second->premise1);
    stack.push_back(it->second->premise2);
  }
  std::vector<ProofStep> out;
  for (const auto& s : trace)
    if (need.count(s.resolvent_id)) out.push_back(s);
  return out;
}

ProofResult saturate(const ClauseSet& kb, const SaturateBudget& budget) {
  ProofResult r;
  r.clauses = kb;
  for (const auto& c : kb)
    if (c.is_empty()) {
      r.verdict = Verdict::Refuted;
      r.stats.clauses_final = kb.size();
      return r;
    }
  std::size_t prev = 0;  // clauses [0, prev) were already paired with each other
  for (;;) {
    if (r.rounds >= budget.max_rounds) {
      r.verdict = Verdict::BudgetExceeded;
      break;
    }
    ++r.rounds;
    const std::size_t m = r.clauses.size();
    r.stats.pair_queries += static_cast<std::uint64_t>(m) * m;
    std::vector<ProofStep> fresh;
    std::unordered_set<Clause, ClauseHash> fresh_set;
    bool refuted = false;
    for (std::size_t i = 0; i < m && !refuted; ++i) {
      for (std::size_t j = (i < prev ? prev : 0); j < m; ++j) {
        // Pairs of two old clauses only reproduce clauses already present.
        ResolventOutcome o = resolve_pair(r.clauses[i], r.clauses[j]);
        if (o.kind != ResolventOutcome::Kind::Valid) continue;
        if (r.clauses.contains(o.clause) || fresh_set.count(o.clause)) continue;
        ProofStep s;
        s.premise1 = i;
        s.premise2 = j;
        s.resolvent = o.clause;
        s.resolved_var = *o.resolved_var;
        s.round = r.rounds;
        fresh_set.insert(o.clause);
        fresh.push_back(std::move(s));
        if (o.clause.is_empty()) {
          refuted = true;
          break;
        }
      }
    }
    r.stats.resolvents_per_round.push_back(fresh.size());
    for (auto& s : fresh) {
      s.step = r.trace.size();
      s.resolvent_id = r.clauses.size();
      r.clauses.add(s.resolvent);
      r.trace.push_back(std::move(s));
    }
    if (refuted) {
      r.verdict = Verdict::Refuted;
      break;
    }
    if (fresh.empty()) {
      r.verdict = Verdict::Saturated;
      break;
    }
    if (r.clauses.size() > budget.max_clauses) {
      r.verdict = Verdict::BudgetExceeded;
      break;
    }
    prev = m;
  }
  r.stats.clauses_final = r.clauses.size();
  return r;
}

bool replay_trace(const ProofResult& r, std::size_t num_premises) {
  for (const auto& s : r.trace) {
    if (s.premise1 >= s.resolvent_id || s.premise2 >= s.resolvent_id) return false;
    if (s.resolvent_id >= r.clauses.size() || s.resolvent_id < num_premises) return false;
    ResolventOutcome o = resolve_pair(r.clauses[s.premise1], r.clauses[s.premise2]);
    if (o.kind != ResolventOutcome::Kind::Valid || o.clause != s.resolvent ||
        r.clauses[s.resolvent_id] != s.resolvent || *o.resolved_var != s.resolved_var)
      return false;
  }
  return true;
}

ClauseSet simplify_units(const ClauseSet& cs) {
  const std::size_t n = cs.num_vars();
  std::vector<std::vector<std::pair<std::size_t, bool>>> live;
  for (const auto& c : cs) {
    std::vector<std::pair<std::size_t, bool>> lits;
    for (std::size_t v = 0; v < n; ++v)
      if (c.at(v) != Polarity::Absent) lits.emplace_back(v, c.at(v) == Polarity::Pos);
    live.push_back(std::move(lits));
  }
  std::vector<int> value(n, -1);
  bool contradiction = false;
  for (bool changed = true; changed && !contradiction;) {
    changed = false;
    // Unit propagation.
    for (const auto& c : live)
      if (c.size() == 1 && value[c[0].first] < 0) {
        value[c[0].first] = c[0].second ? 1 : 0;
        changed = true;
      }
    // Pure literals.
    if (!changed) {
      std::vector<int> seen(n, 0);  // bit0 pos, bit1 neg
      for (const auto& c : live)
        for (auto [v, pos] : c) seen[v] |= pos ? 1 : 2;
      for (std::size_t v = 0; v < n; ++v)
        if (value[v] < 0 && (seen[v] == 1 || seen[v] == 2)) {
          value[v] = seen[v] == 1 ? 1 : 0;
          changed = true;
        }
    }
    std::vector<std::vector<std::pair<std::size_t, bool>>> next;
    for (const auto& c : live) {
      bool sat = false;
      std::vector<std::pair<std::size_t, bool>> rest;
      for (auto [v, pos] : c) {
        if (value[v] < 0) rest.emplace_back(v, pos);
        else if ((value[v] == 1) == pos) sat = true;
      }
      if (sat) continue;
      if (rest.empty()) contradiction = true;
      next.push_back(std::move(rest));
    }
    live = std::move(next);
  }
  if (contradiction) {
    ClauseSet out(std::vector<std::string>{});
    out.add(Clause(0));
    return out;
  }
  std::vector<bool> used(n, false);
  for (const auto& c : live)
    for (auto [v, pos] : c) used[v] = true;
  std::vector<std::size_t> remap(n, SIZE_MAX);
  std::vector<std::string> names;
  for (std::size_t v = 0; v < n; ++v)
    if (used[v]) {
      remap[v] = names.size();
      names.push_back(cs.names()[v]);
    }
  ClauseSet out(names);
  for (const auto& c : live) {
    Clause k(names.size());
    for (auto [v, pos] : c) k.set(remap[v], pos ? Polarity::Pos : Polarity::Neg);
    out.add(k);
  }
  return out;
}

}  // namespace qatp
