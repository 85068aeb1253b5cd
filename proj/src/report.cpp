// SPDX-License-Identifier: Apache-2.0
#include "qatp/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <limits>

namespace qatp {

std::string digest(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string out = "sha256:";
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

Json to_json(const BigInt& v) {
  // Exact values stay exact: numbers when they fit, strings otherwise.
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) terms.push_back({to_json(it->second), it->first});
  return Json{{"text", to_string(p)}, {"monomials", p.num_terms()}, {"terms", terms}};
}

Json to_json(const WuProof& w) {
  Json chain = Json::array();
  for (const auto& e : w.system.chain) chain.push_back({{"lead_var", e.lead_var}, {"poly", to_string(e.poly)}});
  Json steps = Json::array();
  for (const auto& s : w.steps)
    steps.push_back({{"var", s.var},
                     {"chain_index", s.chain_index},
                     {"monomials", s.remainder.num_terms()},
                     {"remainder", to_string(s.remainder)}});
  Json side = Json::array();
  for (const auto& p : w.side_conditions) side.push_back(to_string(p));
  return Json{{"verdict", to_string(w.verdict)},
              {"chain", chain},
              {"steps", steps},
              {"side_conditions", side},
              {"final_remainder", to_string(w.final_remainder)},
              {"max_monomials", w.max_monomials}};
}

Json to_json(const PITVerdict& v) {
  Json j{{"verdict", to_string(v.verdict)}, {"mode", v.mode}, {"queries", v.queries}};
  if (v.verdict == PITOutcome::NonzeroWitness) {
    Json pt = Json::object();
    for (const auto& [k, x] : v.point) pt[k] = x;
    j["witness"] = {{"point", pt}, {"value", to_json(v.value)}};
  } else {
    j["witness"] = nullptr;
  }
  j["confidence"] = v.confidence;
  if (v.mode == "simulated-exact") {
    j["rounds"] = v.rounds;
    j["initial_mass"] = v.initial_mass;
    j["final_mass"] = v.final_mass;
    j["word_bits"] = v.word_bits;
  }
  return j;
}

Json to_json(const CompositionNode& n) {
  Json parts = Json::array();
  for (const auto& p : n.parts) parts.push_back(to_json(p));
  Json j{{"op", n.op}, {"depth", n.depth}, {"qubits", n.qubits}};
  if (!parts.empty()) j["parts"] = parts;
  return j;
}

Json to_json(const Circuit& c, bool with_gates) {
  Json regs = Json::array();
  for (const auto& r : c.registers()) regs.push_back({{"name", r.name}, {"start", r.start}, {"width", r.width}});
  Json calls = Json::object();
  for (const auto& [k, n] : c.calls()) calls[k] = n;
  Json j{{"qubits", c.num_qubits()},
         {"registers", regs},
         {"calls", calls},
         {"gates", c.gates().size()},
         {"primitive_gates", c.primitive_gate_count()},
         {"depth", c.depth()}};
  if (with_gates) {
    Json gates = Json::array();
    for (const auto& g : c.gates()) {
      Json ctl = Json::array();
      for (const auto& k : g.controls) ctl.push_back({k.qubit, k.value ? 1 : 0});
      Json jg{{"kind", to_string(g.kind)}, {"targets", g.targets}};
      if (!ctl.empty()) jg["controls"] = ctl;
      if (g.kind == GateKind::Phase) jg["theta"] = g.theta;
      if (g.kind == GateKind::PhaseAdd) jg["addend"] = g.addend;
      gates.push_back(jg);
    }
    j["gate_list"] = gates;
  }
  return j;
}

Json to_json(const ProofResult& r) {
  Json steps = Json::array();
  for (const auto& s : r.refutation())
    steps.push_back({{"step", s.step},
                     {"premises", {s.premise1, s.premise2}},
                     {"resolvent", r.clauses.to_string(s.resolvent)},
                     {"on", r.clauses.names().at(s.resolved_var)},
                     {"round", s.round}});
  Json stats{{"pair_queries", r.stats.pair_queries},
             {"clauses_final", r.stats.clauses_final},
             {"resolvents_per_round", r.stats.resolvents_per_round}};
  if (r.stats.ukb_queries || r.stats.uj_queries) {
    stats["ukb_queries"] = r.stats.ukb_queries;
    stats["uj_queries"] = r.stats.uj_queries;
    stats["shots"] = r.stats.shots;
    stats["s_per_round"] = r.stats.s_per_round;
  }
  return Json{{"verdict", to_string(r.verdict)}, {"rounds", r.rounds}, {"refutation", steps}, {"stats", stats}};
}

Json to_json(const QueryCounter& q) {
  Json j = Json::object();
  for (const auto& [k, n] : q.all()) j[k] = n;
  return j;
}

Json to_json(const RunReport& r, bool include_timing) {
  Json q = Json::object();
  for (const auto& [k, n] : r.queries) q[k] = n;
  Json j{{"command", r.command},
         {"input_digest", r.input_digest},
         {"verdict", r.verdict},
         {"backend", r.backend},
         {"seed", r.seed},
         {"exit_code", r.exit_code},
         {"queries", q}};
  if (include_timing) j["timing_ms"] = r.timing_ms;
  j["details"] = r.details;
  return j;
}

}  // namespace qatp
