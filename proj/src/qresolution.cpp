// SPDX-License-Identifier: Apache-2.0
#include "qatp/qresolution.hpp"

#include <cmath>
#include <set>

#include "qatp/errors.hpp"

namespace qatp {

namespace {

std::vector<Control> index_pattern(const Register& idx, std::uint64_t m) {
  std::vector<Control> c;
  for (std::size_t b = 0; b < idx.width; ++b) c.push_back({idx[b], ((m >> b) & 1) != 0});
  return c;
}

std::vector<Qubit> concat(std::initializer_list<Register> regs) {
  std::vector<Qubit> q;
  for (const auto& r : regs)
    for (Qubit x : r.qubits()) q.push_back(x);
  return q;
}

}  // namespace

QuquartWord encode_clause(const Clause& c) {
  QuquartWord w(c.num_vars(), 0);
  for (std::size_t v = 0; v < c.num_vars(); ++v)
    w[v] = c.at(v) == Polarity::Pos ? 1 : c.at(v) == Polarity::Neg ? 2 : 0;
  return w;
}

Clause decode_resolvent(const QuquartWord& w) {
  std::size_t threes = 0;
  Clause c(w.size());
  for (std::size_t v = 0; v < w.size(); ++v) {
    switch (w[v]) {
      case 0: break;
      case 1: c.set(v, Polarity::Pos); break;
      case 2: c.set(v, Polarity::Neg); break;
      case 3: ++threes; break;
      default: throw PreconditionError("ququart value out of range");
    }
  }
  if (threes != 1) throw PreconditionError("malformed resolvent word " + to_string(w));
  return c;
}

std::string to_string(const QuquartWord& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s + ")";
}

std::size_t index_width(std::size_t m) {
  std::size_t k = 1;
  while ((std::size_t{1} << k) < m) ++k;
  return k;
}

std::size_t counter_width(std::size_t n) {
  std::size_t w = 1;
  while ((std::size_t{1} << w) < n + 1) ++w;
  return w;
}

Circuit build_ukb(const ClauseSet& kb) {
  if (kb.empty()) throw PreconditionError("empty knowledge base");
  const std::size_t n = kb.num_vars();
  Circuit c;
  Register idx = c.add_register("index", index_width(kb.size()));
  Register word = c.add_register("word", 2 * n);
  for (std::size_t m = 0; m < kb.size(); ++m) {
    QuquartWord w = encode_clause(kb[m]);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t b = 0; b < 2; ++b)
        if ((w[v] >> b) & 1) c.add(make_x(word[2 * v + b], index_pattern(idx, m)));
  }
  c.count_call("U_KB");
  return c;
}

Circuit build_ur(std::size_t n) {
  Circuit c;
  Register p = c.add_register("p1", 2 * n);
  Register q = c.add_register("p2", 2 * n);
  Register r = c.add_register("result", 2 * n);
  // a OR b = a XOR b XOR ab, per bit.
  for (std::size_t i = 0; i < 2 * n; ++i) {
    c.add(make_x(r[i], {{p[i], true}}));
    c.add(make_x(r[i], {{q[i], true}}));
    c.add(make_x(r[i], {{p[i], true}, {q[i], true}}));
  }
  c.count_call("U_R");
  return c;
}

Circuit build_uj(std::size_t n) {
  Circuit c;
  Register r = c.add_register("result", 2 * n);
  Register cnt = c.add_register("counter", counter_width(n));
  Register flag = c.add_register("flag", 1);
  auto count = [&](std::int64_t step) {
    c.add(make_qft(cnt.qubits()));
    for (std::size_t v = 0; v < n; ++v)
      c.add(make_phase_add(cnt.qubits(), step, {{r[2 * v], true}, {r[2 * v + 1], true}}));
    c.add(make_iqft(cnt.qubits()));
  };
  count(1);
  c.add(make_x(flag[0], index_pattern(cnt, 1)));
  count(-1);
  c.count_call("U_J");
  return c;
}

ResolutionCircuits build_resolution_circuits(const ClauseSet& kb) {
  const std::size_t n = kb.num_vars();
  if (n == 0) throw PreconditionError("knowledge base has no variables");
  const std::size_t k = index_width(kb.size());
  Circuit ukb = build_ukb(kb), ur = build_ur(n), uj = build_uj(n);

  ResolutionCircuits rc;
  Circuit& a = rc.prep;
  rc.idx1 = a.add_register("idx1", k);
  rc.idx2 = a.add_register("idx2", k);
  rc.p1 = a.add_register("p1", 2 * n);
  rc.p2 = a.add_register("p2", 2 * n);
  rc.res = a.add_register("result", 2 * n);
  rc.cnt = a.add_register("counter", counter_width(n));
  rc.flag = a.add_register("flag", 1);
  for (Qubit q : concat({rc.idx1, rc.idx2})) a.add(make_h(q));
  a.append(ukb, concat({rc.idx1, rc.p1}));
  a.append(ukb, concat({rc.idx2, rc.p2}));
  a.append(ur, concat({rc.p1, rc.p2, rc.res}));

  rc.oracle = Circuit(a.num_qubits());
  rc.oracle.append(uj, concat({rc.res, rc.cnt, rc.flag}));
  return rc;
}

RoundReport quantum_round(const ClauseSet& kb, const QResolutionParams& params, std::mt19937_64& rng) {
  ResolutionCircuits rc = build_resolution_circuits(kb);
  const std::size_t n = kb.num_vars();
  const std::size_t k = rc.idx1.width;

  SearchSpec spec;
  spec.state_prep = rc.prep;
  spec.oracle = rc.oracle;
  spec.flag = rc.flag[0];
  spec.output = concat({rc.idx1, rc.idx2, rc.res});
  spec.delta = params.delta;
  spec.backend = params.backend;
  spec.mode = params.mode;
  Searcher search(std::move(spec));

  RoundReport rep;
  rep.m = kb.size();
  rep.qubits = rc.num_qubits();
  rep.flag_mass = search.initial_mass();
  rep.s_observed = static_cast<std::uint64_t>(std::llround(rep.flag_mass * std::ldexp(1.0, static_cast<int>(2 * k))));

  auto decode = [&](const std::vector<bool>& bits) {
    SampledResolvent s;
    for (std::size_t b = 0; b < k; ++b) {
      if (bits[b]) s.premise1 |= std::size_t{1} << b;
      if (bits[k + b]) s.premise2 |= std::size_t{1} << b;
    }
    QuquartWord w(n);
    for (std::size_t v = 0; v < n; ++v)
      w[v] = static_cast<std::uint8_t>(bits[2 * k + 2 * v] + 2 * bits[2 * k + 2 * v + 1]);
    s.clause = decode_resolvent(w);
    for (std::size_t v = 0; v < n; ++v)
      if (w[v] == 3) s.resolved_var = v;
    return s;
  };

  for (const auto& [key, p] : search.marked_outputs()) {
    std::vector<bool> bits(key.size());
    for (std::size_t b = 0; b < bits.size(); ++b) bits[b] = key[key.size() - 1 - b] == '1';
    if (!kb.contains(decode(bits).clause)) rep.new_mass += p * rep.flag_mass;
  }

  std::set<Clause> seen;
  bool fresh = false;
  for (std::size_t shot = 0;; ++shot) {
    if (shot >= params.shots && (fresh || rep.new_mass < 1e-12 || shot >= params.shots + params.max_extra_shots))
      break;
    SearchResult r = search.run(rng);
    rep.searches += 1;
    rep.ukb_queries += r.counter.get("U_KB");
    rep.uj_queries += r.counter.get("U_J");
    rep.min_success = std::min(rep.min_success, r.success_prob_estimate);
    if (r.status == SearchStatus::NotFound) break;
    if (r.status != SearchStatus::Found) continue;
    SampledResolvent s = decode(r.outcome.bits);
    if (!seen.insert(s.clause).second) continue;
    fresh = fresh || !kb.contains(s.clause);
    rep.valid_resolvents.push_back(s);
    if (s.clause.is_empty()) break;
  }
  return rep;
}

ProofResult quantum_prove(const ClauseSet& kb, const QResolutionParams& params) {
  ProofResult res;
  res.clauses = ClauseSet(kb.names());
  for (const auto& c : kb) res.clauses.add(c);
  for (const auto& c : res.clauses)
    if (c.is_empty()) {
      res.verdict = Verdict::Refuted;
      return res;
    }
  if (res.clauses.empty() || res.clauses.num_vars() == 0) {
    res.verdict = Verdict::Saturated;
    return res;
  }

  std::mt19937_64 rng(params.seed);
  for (std::size_t round = 1; round <= params.max_rounds; ++round) {
    RoundReport rep = quantum_round(res.clauses, params, rng);
    res.rounds = round;
    res.stats.ukb_queries += rep.ukb_queries;
    res.stats.uj_queries += rep.uj_queries;
    res.stats.shots += rep.searches;
    res.stats.s_per_round.push_back(rep.s_observed);

    std::size_t inserted = 0;
    bool bottom = false;
    const std::size_t before = res.clauses.size();
    for (const auto& s : rep.valid_resolvents) {
      if (s.premise1 >= before || s.premise2 >= before) throw std::logic_error("sampled a padding index");
      if (!res.clauses.add(s.clause)) continue;
      ++inserted;
      ProofStep step;
      step.step = res.trace.size();
      step.premise1 = s.premise1;
      step.premise2 = s.premise2;
      step.resolvent_id = res.clauses.size() - 1;
      step.resolvent = s.clause;
      step.resolved_var = s.resolved_var;
      step.round = round;
      res.trace.push_back(std::move(step));
      if (s.clause.is_empty()) {
        bottom = true;
        break;
      }
    }
    res.stats.resolvents_per_round.push_back(inserted);
    res.stats.clauses_final = res.clauses.size();
    if (bottom) {
      res.verdict = Verdict::Refuted;
      return res;
    }
    if (inserted == 0) {
      // Nothing new sampled; trust it only if the exact check agrees.
      res.verdict = rep.new_mass < 1e-12 ? Verdict::Saturated : Verdict::BudgetExceeded;
      return res;
    }
    if (res.clauses.size() > params.max_clauses) {
      res.verdict = Verdict::BudgetExceeded;
      return res;
    }
  }
  res.verdict = Verdict::BudgetExceeded;
  return res;
}

GroundedInstance ground_instance(const std::vector<FolClause>& cs, const FolBudget& budget,
                                 std::size_t herbrand_depth) {
  GroundedInstance g;
  g.refutation = fol_refute(cs, budget);
  if (g.refutation.verdict == Verdict::Refuted) {
    g.core = herbrand_core(g.refutation, herbrand_universe(cs, 0).front());
    g.ground = ground_clauses_to_prop(g.core);
  } else {
    g.ground = ground(cs, herbrand_universe(cs, herbrand_depth));
  }
  for (const auto& a : g.ground.atoms)
    for (const auto& t : a.args) g.max_term_depth = std::max(g.max_term_depth, t.depth());
  g.reduced = simplify_units(g.ground.clauses);
  return g;
}

}  // namespace qatp
