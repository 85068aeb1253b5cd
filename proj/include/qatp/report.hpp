// SPDX-License-Identifier: Apache-2.0
//
// JSON views of proofs, verdicts and circuits, and the run report written by
// the command-line tool. Key order is fixed, so equal inputs give equal bytes.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qatp/pit.hpp"
#include "qatp/poly.hpp"
#include "qatp/qpoly.hpp"
#include "qatp/qsim.hpp"
#include "qatp/resolution.hpp"

namespace qatp {

using Json = nlohmann::ordered_json;

/// "sha256:<hex>" of the bytes.
std::string digest(std::string_view bytes);

Json to_json(const BigInt& v);
/// {"text", "monomials", "terms": [[coeff, [exponents]], ...]}, terms in
/// descending graded order.
Json to_json(const Polynomial& p);
Json to_json(const WuProof& w);
Json to_json(const PITVerdict& v);
Json to_json(const CompositionNode& n);
/// Registers, call counts and sizes. The gate list is included on request.
Json to_json(const Circuit& c, bool with_gates = false);
Json to_json(const ProofResult& r);
Json to_json(const QueryCounter& q);

struct RunReport {
  std::string command;
  std::string input_digest;
  std::string verdict;
  std::string backend;
  std::uint64_t seed = 0;
  double timing_ms = -1;  // written only when include_timing is set
  std::map<std::string, std::uint64_t> queries;
  Json details = Json::object();
  int exit_code = 0;
};

Json to_json(const RunReport& r, bool include_timing = false);

}  // namespace qatp
