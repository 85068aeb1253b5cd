// SPDX-License-Identifier: Apache-2.0
//
// Gate IR, circuits and two simulators: a dense state vector and a sparse
// basis-map state that keeps Fourier-transformed registers symbolic.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qatp {

using Qubit = std::size_t;
using Amplitude = std::complex<double>;

struct Control {
  Qubit qubit = 0;
  bool value = true;  // fires on |1> when true, on |0> when false

  bool operator==(const Control& o) const { return qubit == o.qubit && value == o.value; }
};

enum class GateKind { H, X, Z, Phase, Swap, QFT, IQFT, PhaseAdd };
std::string to_string(GateKind k);

/// One instruction. Register-level kinds (QFT, IQFT, PhaseAdd) take the
/// register's qubits as targets, least significant first. PhaseAdd multiplies
/// |k> by exp(2 pi i * addend * k / 2^w), i.e. adds `addend` in Fourier space.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<Qubit> targets;
  std::vector<Control> controls;
  double theta = 0.0;
  std::int64_t addend = 0;

  Gate inverse() const;
  bool operator==(const Gate& o) const {
    return kind == o.kind && targets == o.targets && controls == o.controls && theta == o.theta &&
           addend == o.addend;
  }
};

Gate make_h(Qubit q);
Gate make_x(Qubit q, std::vector<Control> controls = {});
Gate make_z(Qubit q, std::vector<Control> controls = {});
Gate make_phase(Qubit q, double theta, std::vector<Control> controls = {});
Gate make_cphase(Qubit control, Qubit target, double theta);
Gate make_swap(Qubit a, Qubit b, std::vector<Control> controls = {});
Gate make_qft(std::vector<Qubit> reg);
Gate make_iqft(std::vector<Qubit> reg);
Gate make_phase_add(std::vector<Qubit> reg, std::int64_t addend, std::vector<Control> controls = {});

struct Register {
  std::string name;
  Qubit start = 0;
  std::size_t width = 0;

  std::vector<Qubit> qubits() const;
  Qubit operator[](std::size_t i) const { return start + i; }
};

class Circuit {
 public:
  explicit Circuit(std::size_t num_qubits = 0) : n_(num_qubits) {}

  std::size_t num_qubits() const { return n_; }
  /// Appends `width` fresh qubits as a named register.
  Register add_register(const std::string& name, std::size_t width);
  const Register& reg(const std::string& name) const;
  bool has_register(const std::string& name) const;
  const std::vector<Register>& registers() const { return regs_; }

  /// Validates and appends a gate.
  void add(Gate g);
  const std::vector<Gate>& gates() const { return gates_; }

  /// Appends `sub` with sub-qubit i mapped to `map[i]` and `controls` added to
  /// every gate. A non-empty label counts one invocation of that label; the
  /// sub-circuit's own counts are merged in as well.
  void append(const Circuit& sub, const std::vector<Qubit>& map, const std::vector<Control>& controls = {},
              const std::string& label = "");
  /// Same-width append with the identity qubit map.
  void append(const Circuit& sub, const std::string& label = "");

  void count_call(const std::string& label, std::uint64_t n = 1) { calls_[label] += n; }
  const std::map<std::string, std::uint64_t>& calls() const { return calls_; }

  Circuit inverse() const;
  /// Decomposes QFT, IQFT and PhaseAdd into H, controlled phases and swaps.
  Circuit expanded() const;
  /// ASAP layer count of the expanded circuit.
  std::size_t depth() const;
  std::size_t primitive_gate_count() const;

 private:
  std::size_t n_;
  std::vector<Register> regs_;
  std::vector<Gate> gates_;
  std::map<std::string, std::uint64_t> calls_;
};

/// Primitive decomposition of one gate (QFT with final bit-reversal swaps).
std::vector<Gate> expand_gate(const Gate& g);

/// Named oracle-call counters.
class QueryCounter {
 public:
  void add(const std::string& name, std::uint64_t n = 1) { counts_[name] += n; }
  void merge(const std::map<std::string, std::uint64_t>& calls, std::uint64_t times = 1);
  std::uint64_t get(const std::string& name) const;
  const std::map<std::string, std::uint64_t>& all() const { return counts_; }

 private:
  std::map<std::string, std::uint64_t> counts_;
};

/// Outcome of a register measurement; bits[i] belongs to register qubit i.
/// `bitstring` lists the most significant qubit first.
struct MeasureOutcome {
  std::vector<bool> bits;
  std::string bitstring;
  std::uint64_t value = 0;  // only meaningful for registers up to 64 qubits
};

MeasureOutcome outcome_from_bits(std::vector<bool> bits);

/// Common interface of both simulators.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::size_t num_qubits() const = 0;
  virtual void reset() = 0;
  virtual void apply(const Gate& g) = 0;
  virtual void apply(const Circuit& c);
  virtual double probability_one(Qubit q) = 0;
  /// Born distribution of the listed qubits, keyed by MSB-first bitstring.
  virtual std::map<std::string, double> distribution(const std::vector<Qubit>& qubits) = 0;
  /// Samples and collapses the listed qubits.
  virtual MeasureOutcome measure(const std::vector<Qubit>& qubits, std::mt19937_64& rng) = 0;
  virtual double norm() = 0;
  virtual std::unique_ptr<Backend> clone() const = 0;
  /// Prepares a computational basis state, qubit q set iff bits[q].
  virtual void set_basis(const std::vector<bool>& bits);
};

/// Qubit cap for the dense simulator: QATP_MAX_QUBITS, default 26.
std::size_t max_dense_qubits();

class StateVector : public Backend {
 public:
  explicit StateVector(std::size_t n);

  std::size_t num_qubits() const override { return n_; }
  void reset() override;
  using Backend::apply;
  void apply(const Gate& g) override;
  double probability_one(Qubit q) override;
  std::map<std::string, double> distribution(const std::vector<Qubit>& qubits) override;
  MeasureOutcome measure(const std::vector<Qubit>& qubits, std::mt19937_64& rng) override;
  double norm() override;
  std::unique_ptr<Backend> clone() const override { return std::make_unique<StateVector>(*this); }

  const std::vector<Amplitude>& amplitudes() const { return amp_; }
  std::vector<Amplitude>& amplitudes() { return amp_; }
  Amplitude operator[](std::uint64_t index) const { return amp_[index]; }

 private:
  void check(const Gate& g) const;
  void dft(const std::vector<Qubit>& reg, bool inverse);

  std::size_t n_;
  std::vector<Amplitude> amp_;
};

/// Value-returning forms of the dense operations.
StateVector apply(StateVector s, const Gate& g);
StateVector apply(StateVector s, const Circuit& c);
StateVector qft(StateVector s, const std::vector<Qubit>& reg);
std::pair<MeasureOutcome, StateVector> measure(StateVector s, const std::vector<Qubit>& reg, std::mt19937_64& rng);

/// Sparse simulator over basis states. Registers transformed by QFT stay in a
/// symbolic Fourier mode: their stored bits hold the pre-transform value, and
/// PhaseAdd on them becomes integer addition. Anything else that touches such
/// a register first materializes it.
class SparseState : public Backend {
 public:
  explicit SparseState(std::size_t n);

  std::size_t num_qubits() const override { return n_; }
  void reset() override;
  using Backend::apply;
  void apply(const Gate& g) override;
  double probability_one(Qubit q) override;
  std::map<std::string, double> distribution(const std::vector<Qubit>& qubits) override;
  MeasureOutcome measure(const std::vector<Qubit>& qubits, std::mt19937_64& rng) override;
  double norm() override;
  std::unique_ptr<Backend> clone() const override { return std::make_unique<SparseState>(*this); }

  std::size_t support() const { return amps_.size(); }
  std::size_t materializations() const { return materializations_; }
  /// Amplitude of a basis state; materializes every symbolic register.
  Amplitude amplitude(const std::vector<bool>& bits);

 private:
  bool bit(std::size_t e, Qubit q) const;
  void set_bit(std::size_t e, Qubit q, bool v);
  std::uint64_t reg_value(std::size_t e, const std::vector<Qubit>& reg) const;
  void set_reg_value(std::size_t e, const std::vector<Qubit>& reg, std::uint64_t v);
  bool controls_ok(std::size_t e, const std::vector<Control>& cs) const;
  void materialize_touching(const std::vector<Qubit>& qs);
  void materialize_all();
  void explicit_dft(const std::vector<Qubit>& reg, bool inverse);
  void merge();

  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> keys_;
  std::vector<Amplitude> amps_;
  std::vector<std::vector<Qubit>> fourier_;
  std::size_t materializations_ = 0;
};

/// Builds the full 2^n x 2^n unitary of a circuit column by column (n <= 10).
std::vector<std::vector<Amplitude>> circuit_matrix(const Circuit& c);

}  // namespace qatp
