// SPDX-License-Identifier: Apache-2.0
#include "qatp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "qatp/amplify.hpp"
#include "qatp/errors.hpp"
#include "qatp/formula.hpp"
#include "qatp/qresolution.hpp"
#include "qatp/resolution.hpp"
#include "qatp/sexpr.hpp"

namespace qatp {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return 2;
  if (dynamic_cast<const ParseError*>(&e)) return 3;
  if (dynamic_cast<const std::ios_base::failure*>(&e)) return 3;
  if (dynamic_cast<const CapacityError*>(&e)) return 4;
  if (dynamic_cast<const PreconditionError*>(&e)) return 5;
  if (dynamic_cast<const DegenerateSystemError*>(&e)) return 5;
  return 6;
}

namespace {

bool is_quantum(const CliOptions& opt) {
  if (opt.backend == "quantum-sim") return true;
  if (opt.backend == "classical") return false;
  throw PreconditionError("unknown backend " + opt.backend + " (classical or quantum-sim)");
}

// Smallest k with n < 2^k, at least 1.
std::size_t bits_for(std::uint64_t n) {
  std::size_t k = 1;
  while (k < 64 && (n >> k)) ++k;
  return k;
}

std::size_t grid_bits(std::uint64_t g) {
  if (g < 2 || (g & (g - 1))) throw PreconditionError("grid size must be a power of two >= 2");
  return bits_for(g - 1);
}

std::vector<std::string> support_names(const Polynomial& p) {
  std::vector<std::string> out;
  for (std::size_t v : p.support()) out.push_back(p.vars()[v]);
  return out;
}

unsigned degree_in(const Polynomial& p, const std::string& v) {
  if (!p.has_var(v)) return 0;
  return static_cast<unsigned>(std::max(p.degree(v), 0));
}

ClauseSet read_prop(const std::string& text) {
  std::vector<PropFormula> fs;
  bool goal = false;
  for (const SExpr& e : parse_sexprs(text)) {
    if (e.head_is("goal")) {
      if (goal) throw ParseError("more than one goal", e.span.line, e.span.col);
      if (e.items.size() != 2) throw ParseError("expected one formula", e.span.line, e.span.col);
      goal = true;
      fs.push_back(PropFormula::negate(prop_from_sexpr(e.items[1])));
    } else {
      fs.push_back(prop_from_sexpr(e));
    }
  }
  if (fs.empty()) throw ParseError("no formulas");
  return to_cnf(fs);
}

}  // namespace

RunReport cmd_prove_prop(const std::string& text, const std::string& filename, const CliOptions& opt) {
  const bool q = is_quantum(opt);
  const bool dimacs = filename.size() >= 4 && filename.substr(filename.size() - 4) == ".cnf";
  ClauseSet kb = dimacs ? parse_dimacs(text) : read_prop(text);

  RunReport r;
  r.command = "prove-prop";
  r.input_digest = digest(text);
  r.backend = opt.backend;
  r.seed = opt.seed;
  ProofResult res;
  if (q) {
    QResolutionParams p;
    p.delta = opt.delta;
    p.shots = opt.shots;
    p.max_rounds = opt.max_rounds;
    p.seed = derive_seed(opt.seed, 1);
    res = quantum_prove(kb, p);
    r.queries = {{"U_KB", res.stats.ukb_queries}, {"U_J", res.stats.uj_queries}};
  } else {
    SaturateBudget b;
    b.max_rounds = opt.max_rounds;
    res = saturate(kb, b);
    r.queries = {{"pair_queries", res.stats.pair_queries}};
  }
  r.verdict = to_string(res.verdict);
  r.exit_code = res.verdict == Verdict::Refuted ? 0 : res.verdict == Verdict::Saturated ? 1 : 2;
  r.details = {{"format", dimacs ? "dimacs" : "sexpr"}, {"clauses", kb.to_string()}, {"proof", to_json(res)}};
  return r;
}

RunReport cmd_prove_fol(const std::string& text, const CliOptions& opt) {
  const bool q = is_quantum(opt);
  FolProblem prob = parse_fol_problem(text);
  std::vector<FolFormula> all = prob.axioms;
  if (prob.goal) all.push_back(FolFormula::negate(*prob.goal));
  const std::vector<FolClause> cs = skolemize_all(all);

  RunReport r;
  r.command = "prove-fol";
  r.input_digest = digest(text);
  r.backend = opt.backend;
  r.seed = opt.seed;
  Json clauses = Json::array();
  for (const auto& c : cs) clauses.push_back(to_string(c));
  r.details["clauses"] = clauses;
  r.details["herbrand_depth"] = opt.herbrand_depth;

  FolBudget b;
  b.max_term_depth = opt.herbrand_depth;
  bool refuted = false;
  if (q) {
    GroundedInstance g = ground_instance(cs, b, opt.herbrand_depth);
    QResolutionParams p;
    p.delta = opt.delta;
    p.shots = opt.shots;
    p.max_rounds = opt.max_rounds;
    p.seed = derive_seed(opt.seed, 2);
    ProofResult res = quantum_prove(g.reduced, p);
    refuted = res.verdict == Verdict::Refuted && g.max_term_depth <= opt.herbrand_depth;
    r.queries = {{"U_KB", res.stats.ukb_queries}, {"U_J", res.stats.uj_queries}};
    r.details["ground_atoms"] = g.ground.atoms.size();
    r.details["ground_clauses"] = g.ground.clauses.size();
    r.details["reduced"] = g.reduced.to_string();
    r.details["max_term_depth"] = g.max_term_depth;
    r.details["proof"] = to_json(res);
  } else {
    FolProofResult res = fol_refute(cs, b);
    refuted = res.verdict == Verdict::Refuted;
    r.queries = {{"given_clauses", res.given_processed}};
    Json proof = Json::array();
    if (refuted)
      for (std::size_t id : res.proof_ids()) {
        const FolDerivation& d = res.clauses[id];
        proof.push_back({{"id", id}, {"clause", to_string(d.clause)}, {"rule", d.rule}, {"parents", d.parents}});
      }
    r.details["proof"] = proof;
    r.details["generated"] = res.clauses.size();
  }
  r.verdict = refuted ? "Refuted" : "Undecided";
  if (!refuted) r.details["message"] = "undecided at depth " + std::to_string(opt.herbrand_depth);
  r.exit_code = refuted ? 0 : 1;
  return r;
}

// ---------------------------------------------------------------------------

HybridWuResult hybrid_wu(const GeoProblem& g, std::size_t concl_index, const HybridOptions& opt) {
  HybridWuResult res;
  res.classical = wu_prove(g, concl_index);
  const auto& steps = res.classical.steps;
  std::mt19937_64 rng(opt.seed);
  const std::size_t gbits = grid_bits(opt.grid);

  if (steps.empty()) {
    const Polynomial& r = res.classical.final_remainder;
    res.pit_inputs = support_names(r);
    res.pit = pit_polynomial(r, EvalGrid::consecutive(res.pit_inputs, opt.grid), opt.delta, opt.word_bits, rng);
  } else {
    const std::size_t k = std::min(std::max<std::size_t>(opt.chain_limit, 1), steps.size());
    const std::size_t first = steps.size() - k;
    auto s_of = [&](std::size_t j) -> const Polynomial& {
      return j == 0 ? g.concls.at(concl_index).second : steps[j - 1].remainder;
    };
    auto t_of = [&](std::size_t j) -> const Polynomial& { return res.classical.system.chain[steps[j].chain_index].poly; };

    RegisterSpec base;
    base.word_bits = opt.word_bits;
    base.input_bits = gbits;
    std::size_t max_shift = 0;
    for (std::size_t j = first; j < steps.size(); ++j) {
      const unsigned ds = degree_in(s_of(j), steps[j].var), dt = degree_in(t_of(j), steps[j].var);
      base.input_bits = std::max(base.input_bits, bits_for(ds));
      max_shift = std::max<std::size_t>(max_shift, ds + dt);
    }
    base.index_bits = std::max<std::size_t>(3, bits_for(max_shift));
    auto spec_for = [&](const Polynomial& p, const std::string& y, std::size_t w) {
      RegisterSpec s = base;
      s.word_bits = w;
      s.inputs.clear();
      for (const auto& v : g.vars())
        if (v == y || (p.has_var(v) && p.degree(v) > 0)) s.inputs.push_back(v);
      return s;
    };

    CoeffCircuit cur;
    for (std::size_t j = first; j < steps.size(); ++j) {
      const std::string& y = steps[j].var;
      const Polynomial& S = s_of(j);
      const Polynomial& T = t_of(j);
      const std::size_t Ds = degree_in(S, y), Dt = degree_in(T, y);
      CoeffCircuit s_cc;
      if (j == first) s_cc = build_poly_coeff_circuit(S, y, Ds, spec_for(S, y, opt.word_bits));
      else if (cur.var == y) s_cc = cur;
      else s_cc = build_coeff_circuit(build_eval_from_coeffs(cur, degree_in(S, cur.var)), y, Ds);
      CoeffCircuit t_cc = build_poly_coeff_circuit(T, y, Dt, spec_for(T, y, s_cc.spec.word_bits));
      cur = build_remainder_circuit(s_cc, t_cc, Ds, Dt);

      StepCheck chk;
      chk.step = j;
      chk.var = y;
      chk.Ds = Ds;
      chk.Dt = Dt;
      chk.qubits = cur.circuit.num_qubits();
      chk.gates = cur.circuit.gates().size();
      chk.word_bits = cur.spec.word_bits;
      chk.calls = cur.circuit.calls();
      const Polynomial& expect = steps[j].remainder;
      std::uniform_int_distribution<std::uint64_t> pick(0, opt.grid - 1);
      for (std::size_t s = 0; s < opt.sample_points; ++s) {
        std::map<std::string, std::uint64_t> in;
        std::map<std::string, BigInt> at;
        for (const auto& v : cur.spec.inputs) {
          const std::uint64_t x = s == 0 ? 0 : pick(rng);
          in[v] = x;
          at[v] = x;
        }
        for (std::size_t d = 0; d <= Ds; ++d) {
          const BigInt want = expect.is_zero() ? BigInt(0) : expect.coeff(y, static_cast<unsigned>(d)).evaluate(at);
          if (evaluate_circuit(cur, d, in) != wrap(want, cur.spec.word_bits)) chk.agrees = false;
        }
        ++chk.points_checked;
      }
      res.agrees = res.agrees && chk.agrees;
      res.checks.push_back(std::move(chk));
    }

    PolyCircuit pc = as_poly_circuit(cur);
    EvalGrid grid;
    for (const auto& v : cur.spec.inputs) {
      grid.vars.push_back(v);
      grid.values.push_back(EvalGrid::consecutive({v}, opt.grid).values[0]);
    }
    grid.vars.push_back("d");
    grid.values.push_back(EvalGrid::consecutive({"d"}, std::uint64_t{1} << cur.index.width).values[0]);
    res.pit_inputs = grid.vars;
    res.pit = pit_quantum(pc, grid, opt.delta, rng);
  }
  res.verdict = res.pit.verdict == PITOutcome::ExactZero ? WuVerdict::Proved : WuVerdict::NotReduced;
  res.agrees = res.agrees && res.verdict == res.classical.verdict;
  return res;
}

RunReport cmd_prove_geo(const std::string& text, const CliOptions& opt) {
  const bool q = is_quantum(opt);
  GeoProblem g = parse_geo(text);
  RunReport r;
  r.command = "prove-geo";
  r.input_digest = digest(text);
  r.backend = opt.backend;
  r.seed = opt.seed;
  bool all = true;
  Json concls = Json::array();
  for (std::size_t i = 0; i < g.concls.size(); ++i) {
    Json c{{"name", g.concls[i].first}, {"poly", to_string(g.concls[i].second)}};
    WuVerdict v;
    if (q) {
      HybridOptions h;
      h.word_bits = opt.word_bits;
      h.chain_limit = opt.chain_limit;
      h.grid = opt.grid ? opt.grid : 4;
      h.delta = opt.delta;
      h.seed = derive_seed(opt.seed, 100 + i);
      HybridWuResult hr = hybrid_wu(g, i, h);
      v = hr.verdict;
      c["classical"] = to_json(hr.classical);
      Json checks = Json::array();
      for (const auto& k : hr.checks) {
        Json calls = Json::object();
        for (const auto& [name, n] : k.calls) calls[name] = n;
        checks.push_back({{"step", k.step},
                          {"var", k.var},
                          {"Ds", k.Ds},
                          {"Dt", k.Dt},
                          {"qubits", k.qubits},
                          {"gates", k.gates},
                          {"word_bits", k.word_bits},
                          {"points_checked", k.points_checked},
                          {"agrees", k.agrees},
                          {"calls", calls}});
        for (const auto& [name, n] : k.calls) r.queries[name] += n;
      }
      c["circuit_steps"] = checks;
      c["pit"] = to_json(hr.pit);
      c["pit_inputs"] = hr.pit_inputs;
      c["backends_agree"] = hr.agrees;
      r.queries["U_P"] += hr.pit.queries;
    } else {
      WuProof w = wu_prove(g, i);
      v = w.verdict;
      c["proof"] = to_json(w);
    }
    c["verdict"] = to_string(v);
    all = all && v == WuVerdict::Proved;
    concls.push_back(c);
  }
  r.verdict = all ? "Proved" : "NotReduced";
  r.exit_code = all ? 0 : 1;
  r.details = {{"vars", g.vars()}, {"conclusions", concls}};
  return r;
}

RunReport cmd_pit(const std::string& text, const CliOptions& opt) {
  const bool q = is_quantum(opt);
  Polynomial p = parse_poly_file(text);
  const std::uint64_t g = opt.grid ? opt.grid : 8;
  const EvalGrid grid = EvalGrid::consecutive(p.vars(), g);
  std::mt19937_64 rng(derive_seed(opt.seed, 3));
  PITVerdict v = q ? pit_polynomial(p, grid, opt.delta, opt.word_bits, rng)
                   : sz_classical(p, grid, std::max<std::size_t>(opt.shots, 1), rng);
  RunReport r;
  r.command = "pit";
  r.input_digest = digest(text);
  r.backend = opt.backend;
  r.seed = opt.seed;
  r.verdict = to_string(v.verdict);
  r.exit_code = v.verdict == PITOutcome::NonzeroWitness ? 1 : 0;
  r.queries = {{q ? "U_P" : "evaluations", v.queries}};
  Json j = to_json(v);
  j["grid"] = g;
  j["grid_vars"] = grid.vars;
  j["total_degree"] = p.total_degree();
  j["poly"] = to_string(p);
  r.details = j;
  return r;
}

RunReport cmd_emit_circuit(const std::string& text, const CliOptions& opt) {
  Polynomial p = parse_poly_file(text);
  RegisterSpec spec;
  spec.word_bits = opt.word_bits;
  spec.input_bits = bits_for((opt.grid ? opt.grid : 8) - 1);
  spec.inputs = p.vars();
  RunReport r;
  r.command = "emit-circuit";
  r.input_digest = digest(text);
  r.backend = "circuit";
  r.seed = opt.seed;
  r.verdict = "Emitted";
  PolyCircuit pc;
  Json extra = Json::object();
  if (opt.var.empty()) {
    pc = build_arith(p, spec);
  } else {
    if (std::find(spec.inputs.begin(), spec.inputs.end(), opt.var) == spec.inputs.end()) spec.inputs.push_back(opt.var);
    const std::size_t D = opt.degree ? opt.degree : degree_in(p, opt.var);
    spec.input_bits = std::max(spec.input_bits, bits_for(D));
    spec.index_bits = std::max<std::size_t>(spec.index_bits, bits_for(D));
    CoeffCircuit cc = build_poly_coeff_circuit(p, opt.var, D, spec);
    extra = {{"var", cc.var}, {"degree_bound", cc.degree_bound}, {"basis", to_string(cc.basis)},
             {"index", {{"start", cc.index.start}, {"width", cc.index.width}}}};
    pc = cc;
  }
  Json inputs = Json::array();
  for (std::size_t i = 0; i < pc.inputs.size(); ++i)
    inputs.push_back({{"name", pc.spec.inputs[i]}, {"start", pc.inputs[i].start}, {"width", pc.inputs[i].width}});
  r.details = {{"poly", to_string(p)},
               {"label", pc.label},
               {"word_bits", pc.output.width},
               {"inputs", inputs},
               {"output", {{"start", pc.output.start}, {"width", pc.output.width}}}};
  for (auto& [k, v] : extra.items()) r.details[k] = v;
  r.details["composition"] = to_json(pc.meta);
  r.details["circuit"] = to_json(pc.circuit, opt.gates);
  for (const auto& [k, n] : pc.circuit.calls()) r.queries[k] = n;
  return r;
}

RunReport cmd_bench_queries(const CliOptions& opt) {
  std::mt19937_64 rng(derive_seed(opt.seed, 4));
  RunReport r;
  r.command = "bench-queries";
  r.input_digest = digest("bench-queries");
  r.backend = "quantum-sim";
  r.seed = opt.seed;
  Json rows = Json::array();
  std::vector<double> lx, lq, lc;
  for (std::size_t k : opt.sizes) {
    if (k < 1 || k > 20) throw PreconditionError("grid exponent out of range 1..20");
    const std::uint64_t G = std::uint64_t{1} << k;
    const std::uint64_t marked = G / 3;
    PolyCircuit pc = build_datadriven({{marked, 1}}, k, 4);
    const EvalGrid grid = EvalGrid::consecutive({"index"}, G);
    QuantumPITOptions qo;
    qo.lambda_min = 1.0 / static_cast<double>(G);
    PITVerdict qv = pit_quantum(pc, grid, opt.delta, rng, qo);
    auto oracle = [marked](const GridPoint& p) { return BigInt(p.at("index") == static_cast<std::int64_t>(marked)); };
    double total = 0;
    for (std::size_t t = 0; t < opt.trials; ++t) total += static_cast<double>(sz_classical(oracle, grid, 1, 1000 * G, rng).queries);
    const double mean = total / static_cast<double>(std::max<std::size_t>(opt.trials, 1));
    rows.push_back({{"log2_G", k},
                    {"G", G},
                    {"quantum_queries", qv.queries},
                    {"quantum_success", qv.final_mass},
                    {"classical_mean_queries", mean},
                    {"fixed_point_length", fixed_point_length(opt.delta, 1.0 / static_cast<double>(G))}});
    lx.push_back(std::log(static_cast<double>(G)));
    lq.push_back(std::log(static_cast<double>(qv.queries)));
    lc.push_back(std::log(mean));
  }
  auto fit = [&](const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += y[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (y[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
  };
  const double sq = fit(lq), sc = fit(lc);
  r.verdict = "Measured";
  r.details = {{"h", 1}, {"delta", opt.delta}, {"trials", opt.trials}, {"rows", rows},
               {"quantum_slope", sq}, {"classical_slope", sc}};
  return r;
}

}  // namespace qatp
