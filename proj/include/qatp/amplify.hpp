// SPDX-License-Identifier: Apache-2.0
//
// Amplitude amplification over a flag qubit: the fixed-point schedule with
// Chebyshev phases, and plain Grover as a cross-check.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qatp/qsim.hpp"

namespace qatp {

enum class Schedule { FixedPoint, Grover };
enum class BackendKind { Dense, Sparse };

/// How the amplified state is obtained. Circuit runs every reflection gate by
/// gate; Subspace prepares A|0> once and applies the reflections inside the
/// two-dimensional invariant subspace, which is exact and much cheaper.
enum class SimMode { Circuit, Subspace };

std::unique_ptr<Backend> make_backend(BackendKind kind, std::size_t n);

struct SearchSpec {
  Circuit state_prep;           // A, acting on all qubits, flag left at |0>
  Circuit oracle;               // flips the flag qubit on marked basis states
  Qubit flag = 0;
  std::vector<Qubit> output;    // measured together with the flag
  double delta = 0.1;
  std::uint64_t budget = 1000000;  // oracle queries over all rounds
  /// Known lower bound on the marked fraction. Unset means the schedule
  /// grows geometrically until a marked outcome is seen.
  std::optional<double> lambda_min;
  Schedule schedule = Schedule::FixedPoint;
  /// Grover only: fixed iteration count instead of the randomized growth.
  std::optional<std::uint64_t> grover_iterations;
  BackendKind backend = BackendKind::Dense;
  SimMode mode = SimMode::Circuit;
  std::string oracle_label = "oracle";
};

enum class SearchStatus { Found, NotFound, BudgetExhausted };
std::string to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::NotFound;
  MeasureOutcome outcome;        // output qubits of the last measurement
  std::uint64_t queries_used = 0;
  double success_prob_estimate = 0;  // exact flag mass of the last amplified state
  double initial_mass = -1;      // flag mass of A|0>, when computed
  std::uint64_t rounds = 0;
  std::uint64_t last_iterations = 0;
  bool exact_zero = false;       // NotFound decided from an exactly zero flag mass
  QueryCounter counter;
};

/// S_0(theta) conjugated by A: I - (1 - e^{i theta}) A|0><0|A^dagger.
Circuit zero_reflection(const Circuit& a, double theta);
/// Phase e^{i theta} on states with the flag set.
Circuit flag_reflection(std::size_t num_qubits, Qubit flag, double theta);

/// Smallest odd L with L >= ln(2/delta)/sqrt(lambda_min).
std::uint64_t fixed_point_length(double delta, double lambda_min);
/// Phases (alpha_1..alpha_l) for L = 2l + 1.
std::vector<double> fixed_point_phases(std::uint64_t l, double delta);
/// Closed-form success probability of the L-query fixed-point sequence.
double fixed_point_success(std::uint64_t L, double delta, double lambda);
/// sin^2((2k+1) asin sqrt(lambda)).
double grover_success(std::uint64_t k, double lambda);

/// A, then per iteration O, flag phase, O^dagger, A S_0 A^dagger; then a final
/// O so the flag can be read. One compute/uncompute pair around a phase counts
/// as a single oracle query.
Circuit amplification_circuit(const SearchSpec& spec, const std::vector<double>& target_phases,
                              const std::vector<double>& zero_phases);

/// Repeated searches against one spec. In subspace mode A|0> is simulated
/// once and shared by every run.
class Searcher {
 public:
  explicit Searcher(SearchSpec spec);

  SearchResult run(std::mt19937_64& rng);
  /// Flag mass of A|0> (one oracle evaluation, simulator-side).
  double initial_mass();
  /// Output distribution of A|0> conditioned on the flag being set.
  const std::map<std::string, double>& marked_outputs();
  const SearchSpec& spec() const { return spec_; }

 private:
  void prepare();

  SearchSpec spec_;
  bool prepared_ = false;
  double lambda_ = 0;
  std::map<std::string, double> good_, bad_;
};

SearchResult fixed_point_search(const SearchSpec& spec, std::mt19937_64& rng);

}  // namespace qatp
