// SPDX-License-Identifier: Apache-2.0
//
// Polynomial identity testing: Schwartz-Zippel sampling, and amplitude
// amplification over a grid for points where a polynomial circuit is nonzero.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qatp/poly.hpp"
#include "qatp/qpoly.hpp"

namespace qatp {

/// Per-variable value sets. The quantum path needs each set to be
/// {0, ..., 2^k - 1} so that a layer of Hadamards prepares it.
struct EvalGrid {
  std::vector<std::string> vars;
  std::vector<std::vector<std::int64_t>> values;  // parallel to vars

  /// Every variable ranges over {0, ..., g - 1}.
  static EvalGrid consecutive(const std::vector<std::string>& vars, std::uint64_t g);

  std::size_t size(std::size_t i) const { return values[i].size(); }
  /// Smallest per-variable set size; the Schwartz-Zippel bound uses it.
  std::size_t min_size() const;
  /// Product of the set sizes.
  std::uint64_t total_points() const;
  /// Throws PreconditionError on an empty set, duplicate values or a vars /
  /// values size mismatch.
  void validate() const;
};

using GridPoint = std::map<std::string, std::int64_t>;

enum class PITOutcome { NonzeroWitness, LikelyZero, ExactZero };
std::string to_string(PITOutcome v);

struct PITVerdict {
  PITOutcome verdict = PITOutcome::LikelyZero;
  GridPoint point;        // witness
  BigInt value = 0;       // witness value (signed reading for circuits)
  double confidence = 0;  // 1 - (D/|G|)^m when sampled, 1 when exact or witnessed
  std::uint64_t queries = 0;
  std::string mode;       // "sampled" or "simulated-exact"
  // Quantum runs only.
  std::uint64_t rounds = 0;
  double initial_mass = -1;  // fraction of grid points where the circuit is nonzero
  double final_mass = -1;    // flag mass after the last amplification round
  std::vector<std::size_t> word_bits;  // widths that were searched, in order
};

using EvalOracle = std::function<BigInt(const GridPoint&)>;

/// m uniform samples from the grid; stops at the first nonzero value.
PITVerdict sz_classical(const EvalOracle& oracle, const EvalGrid& grid, std::int64_t D, std::uint64_t m,
                        std::mt19937_64& rng);
/// Same, evaluating p exactly with D = its total degree.
PITVerdict sz_classical(const Polynomial& p, const EvalGrid& grid, std::uint64_t m, std::mt19937_64& rng);

struct QuantumPITOptions {
  /// Known lower bound on the nonzero fraction h/|G|. Unset means the
  /// fixed-point schedule grows until something is found or the mass is 0.
  std::optional<double> lambda_min;
  std::uint64_t budget = 1000000;  // U_P invocations
  std::uint64_t max_points = std::uint64_t{1} << 20;
};

/// Uniform superposition over the grid, pc as the state preparation ("U_P"),
/// a flag set when the output is nonzero, fixed-point amplification on the
/// sparse simulator. The measured point is re-evaluated classically before it
/// is returned. Every pc input must be a grid variable and vice versa.
/// Throws CapacityError past max_points, BudgetError when the search runs out
/// of queries.
PITVerdict pit_quantum(const PolyCircuit& pc, const EvalGrid& grid, double delta, std::mt19937_64& rng,
                       const QuantumPITOptions& opt = {});

/// pit_quantum on build_arith(p). A zero result at word_bits is searched again
/// at twice the width (capped at 62) to catch values that only vanish mod 2^w.
/// The witness is checked against p over the integers.
PITVerdict pit_polynomial(const Polynomial& p, const EvalGrid& grid, double delta, std::size_t word_bits,
                          std::mt19937_64& rng, const QuantumPITOptions& opt = {});

/// The coefficient index becomes an ordinary input named "d".
PolyCircuit as_poly_circuit(const CoeffCircuit& cc);

}  // namespace qatp
