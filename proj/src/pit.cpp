// SPDX-License-Identifier: Apache-2.0
#include "qatp/pit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qatp/amplify.hpp"
#include "qatp/errors.hpp"

namespace qatp {

EvalGrid EvalGrid::consecutive(const std::vector<std::string>& vars, std::uint64_t g) {
  if (g == 0) throw PreconditionError("grid needs at least one value per variable");
  EvalGrid grid;
  grid.vars = vars;
  std::vector<std::int64_t> vals(g);
  for (std::uint64_t i = 0; i < g; ++i) vals[i] = static_cast<std::int64_t>(i);
  grid.values.assign(vars.size(), vals);
  return grid;
}

std::size_t EvalGrid::min_size() const {
  std::size_t m = 0;
  for (std::size_t i = 0; i < values.size(); ++i) m = i == 0 ? values[i].size() : std::min(m, values[i].size());
  return m;
}

std::uint64_t EvalGrid::total_points() const {
  std::uint64_t n = 1;
  for (const auto& v : values) {
    if (n > (~std::uint64_t{0}) / std::max<std::size_t>(v.size(), 1)) return ~std::uint64_t{0};
    n *= v.size();
  }
  return n;
}

void EvalGrid::validate() const {
  if (vars.size() != values.size()) throw PreconditionError("grid variables and value sets differ in number");
  std::set<std::string> names(vars.begin(), vars.end());
  if (names.size() != vars.size()) throw PreconditionError("grid variable listed twice");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].empty()) throw PreconditionError("empty value set for " + vars[i]);
    std::set<std::int64_t> s(values[i].begin(), values[i].end());
    if (s.size() != values[i].size()) throw PreconditionError("repeated grid value for " + vars[i]);
  }
}

std::string to_string(PITOutcome v) {
  switch (v) {
    case PITOutcome::NonzeroWitness: return "NonzeroWitness";
    case PITOutcome::LikelyZero: return "LikelyZero";
    case PITOutcome::ExactZero: return "ExactZero";
  }
  return "?";
}

PITVerdict sz_classical(const EvalOracle& oracle, const EvalGrid& grid, std::int64_t D, std::uint64_t m,
                        std::mt19937_64& rng) {
  grid.validate();
  PITVerdict out;
  out.mode = "sampled";
  for (std::uint64_t t = 0; t < m; ++t) {
    GridPoint pt;
    for (std::size_t i = 0; i < grid.vars.size(); ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, grid.size(i) - 1);
      pt[grid.vars[i]] = grid.values[i][pick(rng)];
    }
    ++out.queries;
    BigInt v = oracle(pt);
    if (v != 0) {
      out.verdict = PITOutcome::NonzeroWitness;
      out.point = std::move(pt);
      out.value = v;
      out.confidence = 1;
      return out;
    }
  }
  out.verdict = PITOutcome::LikelyZero;
  // A constant (or a grid with no variables) is settled by one evaluation.
  const double ratio = D <= 0 || grid.vars.empty()
                           ? 0.0
                           : static_cast<double>(D) / static_cast<double>(grid.min_size());
  out.confidence = ratio >= 1 ? 0.0 : 1.0 - std::pow(ratio, static_cast<double>(m));
  return out;
}

PITVerdict sz_classical(const Polynomial& p, const EvalGrid& grid, std::uint64_t m, std::mt19937_64& rng) {
  auto oracle = [&p](const GridPoint& pt) {
    std::map<std::string, BigInt> x;
    for (const auto& [k, v] : pt) x[k] = v;
    return p.evaluate(x);
  };
  return sz_classical(oracle, grid, std::max(p.total_degree(), 0), m, rng);
}

namespace {

std::size_t log2_exact(std::size_t g) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < g) ++k;
  return (std::size_t{1} << k) == g ? k : ~std::size_t{0};
}

}  // namespace

PITVerdict pit_quantum(const PolyCircuit& pc, const EvalGrid& grid, double delta, std::mt19937_64& rng,
                       const QuantumPITOptions& opt) {
  grid.validate();
  for (const auto& name : pc.spec.inputs)
    if (std::find(grid.vars.begin(), grid.vars.end(), name) == grid.vars.end())
      throw PreconditionError("circuit input " + name + " has no grid values");
  if (grid.total_points() > opt.max_points)
    throw CapacityError("grid has more points than the simulator cap of " + std::to_string(opt.max_points));

  const std::size_t n = pc.circuit.num_qubits();
  Circuit prep(n + 1);
  std::vector<Qubit> measured;
  for (std::size_t i = 0; i < grid.vars.size(); ++i) {
    const Register& r = pc.input(grid.vars[i]);
    const std::size_t k = log2_exact(grid.size(i));
    if (k == ~std::size_t{0}) throw PreconditionError("grid size for " + grid.vars[i] + " is not a power of two");
    if (k > r.width) throw CapacityError("grid for " + grid.vars[i] + " does not fit its input register");
    for (std::size_t j = 0; j < grid.size(i); ++j)
      if (grid.values[i][j] != static_cast<std::int64_t>(j))
        throw PreconditionError("grid values for " + grid.vars[i] + " must be 0.." + std::to_string(grid.size(i) - 1));
    for (std::size_t b = 0; b < k; ++b) {
      prep.add(make_h(r[b]));
      measured.push_back(r[b]);
    }
  }
  std::vector<Qubit> ident(n);
  for (Qubit q = 0; q < n; ++q) ident[q] = q;
  prep.append(pc.circuit, ident, {}, "U_P");

  // flag = [output != 0]: set it, then clear it when every output bit is 0.
  const Qubit flag = n;
  Circuit oracle(n + 1);
  oracle.add(make_x(flag));
  std::vector<Control> zero;
  for (Qubit q : pc.output.qubits()) zero.push_back({q, false});
  oracle.add(make_x(flag, zero));

  SearchSpec spec;
  spec.state_prep = std::move(prep);
  spec.oracle = std::move(oracle);
  spec.flag = flag;
  spec.output = measured;
  spec.delta = delta;
  // A round with l iterations calls U_P 2l + 1 times and the search counts l + 1.
  spec.budget = std::max<std::uint64_t>(1, (opt.budget + 1) / 2);
  spec.lambda_min = opt.lambda_min;
  spec.backend = BackendKind::Sparse;
  spec.mode = SimMode::Subspace;
  spec.oracle_label = "flag";

  Searcher searcher(std::move(spec));
  SearchResult r = searcher.run(rng);

  PITVerdict out;
  out.mode = "simulated-exact";
  out.queries = r.counter.get("U_P");
  out.rounds = r.rounds;
  out.initial_mass = r.initial_mass;
  out.final_mass = r.success_prob_estimate;
  out.word_bits = {pc.output.width};
  out.confidence = 1;

  if (r.status == SearchStatus::BudgetExhausted)
    throw BudgetError("quantum PIT ran out of queries after " + std::to_string(out.queries) + " U_P calls");
  if (r.status == SearchStatus::NotFound) {
    out.verdict = PITOutcome::ExactZero;
    return out;
  }

  std::map<std::string, std::uint64_t> inputs;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < grid.vars.size(); ++i) {
    const std::size_t k = log2_exact(grid.size(i));
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < k; ++b)
      if (r.outcome.bits[pos + b]) v |= std::uint64_t{1} << b;
    pos += k;
    inputs[grid.vars[i]] = v;
    out.point[grid.vars[i]] = static_cast<std::int64_t>(v);
  }
  const std::uint64_t v = evaluate_circuit(pc, inputs);
  if (v == 0) throw std::logic_error("measured witness evaluates to zero");
  out.verdict = PITOutcome::NonzeroWitness;
  out.value = to_signed(v, pc.output.width);
  return out;
}

PITVerdict pit_polynomial(const Polynomial& p, const EvalGrid& grid, double delta, std::size_t word_bits,
                          std::mt19937_64& rng, const QuantumPITOptions& opt) {
  grid.validate();
  RegisterSpec spec;
  spec.inputs = grid.vars;
  spec.input_bits = 1;
  for (std::size_t i = 0; i < grid.vars.size(); ++i) {
    std::size_t k = 0;
    while ((std::uint64_t{1} << k) < grid.size(i)) ++k;
    spec.input_bits = std::max(spec.input_bits, k);
  }

  std::vector<std::size_t> widths{word_bits};
  if (word_bits < 62) widths.push_back(std::min<std::size_t>(2 * word_bits, 62));

  PITVerdict out;
  std::uint64_t queries = 0;
  std::vector<std::size_t> tried;
  for (std::size_t w : widths) {
    spec.word_bits = w;
    out = pit_quantum(build_arith(p, spec), grid, delta, rng, opt);
    queries += out.queries;
    tried.push_back(w);
    if (out.verdict == PITOutcome::NonzeroWitness) break;
  }
  out.queries = queries;
  out.word_bits = tried;
  if (out.verdict == PITOutcome::NonzeroWitness) {
    std::map<std::string, BigInt> x;
    for (const auto& [k, v] : out.point) x[k] = v;
    const BigInt exact = p.evaluate(x);
    if (exact == 0) throw std::logic_error("witness does not survive exact evaluation");
    out.value = exact;
  }
  return out;
}

PolyCircuit as_poly_circuit(const CoeffCircuit& cc) {
  PolyCircuit pc = cc;
  pc.spec.inputs.push_back("d");
  pc.inputs.push_back(cc.index);
  return pc;
}

}  // namespace qatp
