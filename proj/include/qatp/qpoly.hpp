// SPDX-License-Identifier: Apache-2.0
//
// Polynomials as reversible circuits: evaluation circuits, data loading,
// Kravchuk coefficient extraction, modular arithmetic and the pseudo-division
// remainder circuit.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qatp/poly.hpp"
#include "qatp/qsim.hpp"

namespace qatp {

using Rational = boost::multiprecision::cpp_rational;

/// Register sizing for circuit-encoded polynomials. Values live in w-bit
/// two's-complement words; inputs are unsigned `input_bits`-wide registers.
struct RegisterSpec {
  std::size_t word_bits = 16;
  std::size_t input_bits = 3;
  std::size_t index_bits = 3;         // coefficient index register |d>
  std::vector<std::string> inputs;    // one register per variable, in order
};

/// Composition record: what was built from what, with depths.
struct CompositionNode {
  std::string op;
  std::size_t depth = 0;
  std::size_t qubits = 0;
  std::vector<CompositionNode> parts;
};

/// U|x>|0>|0_anc> = |x>|F(x) mod 2^w>|garbage>. `uncompute`, appended after
/// `circuit`, returns the ancillas to zero; it is empty once reset.
struct PolyCircuit {
  Circuit circuit;
  Circuit uncompute;
  RegisterSpec spec;                  // word_bits is the width of `output`
  std::vector<Register> inputs;       // parallel to spec.inputs
  Register output;
  std::vector<Register> ancillas;
  std::string label = "U_F";          // counted once per invocation by a host
  CompositionNode meta;

  const Register& input(const std::string& name) const;
};

enum class CoeffBasis { Kravchuk, Monomial };

/// |d>|x>|0> -> |d>|x>|c_d(x)>. Kravchuk basis: c_d = sum_e C(D,e) K_d(e) S(x,e).
/// Monomial basis: the coefficient of y^d. Indices past the degree bound
/// give 0. `var` is the variable the coefficients are taken in; it is not an
/// input.
struct CoeffCircuit : PolyCircuit {
  Register index;
  std::size_t degree_bound = 0;
  CoeffBasis basis = CoeffBasis::Monomial;
  std::string var;
};

std::string to_string(CoeffBasis b);

// ---------------------------------------------------------------------------
// Classical helpers

BigInt binomial(std::int64_t n, std::int64_t k);
/// Binary Kravchuk polynomial K_d(y) = sum_j (-1)^j C(y,j) C(D-y,d-j).
/// Throws PreconditionError unless 0 <= d, y <= D.
BigInt kravchuk(std::int64_t d, std::int64_t y, std::int64_t D);
/// c_d = sum_e C(D,e) K_d(e) values[e], d = 0..D, with D = values.size() - 1.
std::vector<BigInt> kravchuk_transform(const std::vector<BigInt>& values);
/// Inverse: S(y) = sum_d c_d K_d(y) / (2^D C(D,d)) for y = 0..D.
std::vector<Rational> kravchuk_reconstruct(const std::vector<BigInt>& coeffs);
/// M with monomial_coeff[k] = sum_d M[k][d] c_d.
std::vector<std::vector<Rational>> kravchuk_to_monomial(std::int64_t D);
/// Integer weights for reading the coefficient of y^k off the values S(0..D):
/// denom * coeff_k = sum_e numer[k][e] S(e). Built as M times the Kravchuk table.
struct MonomialWeights {
  std::vector<std::vector<BigInt>> numer;
  BigInt denom = 1;
};
MonomialWeights monomial_weights(std::int64_t D);

/// Two's-complement reading of a w-bit word.
std::int64_t to_signed(std::uint64_t v, std::size_t w);
/// x mod 2^w as an unsigned word.
std::uint64_t wrap(const BigInt& x, std::size_t w);

// ---------------------------------------------------------------------------
// Builders

/// QFT on the output, one controlled PhaseAdd per bit-product term of p,
/// inverse QFT. Adds p(x) into the output; no ancillas.
PolyCircuit build_arith(const Polynomial& p, const RegisterSpec& spec);

/// |i>|0> -> |i>|value_i mod 2^w> by index-controlled X cascades. Indices not
/// listed load 0. Throws on an empty list, duplicate or unaddressable index.
PolyCircuit build_datadriven(const std::vector<std::pair<std::uint64_t, BigInt>>& points, std::size_t index_bits,
                             std::size_t word_bits);

/// D+1 invocations of u_s with y set to 0..D, then a weighted sum driven by a
/// data-loaded weight table. In the monomial basis the weights carry an exact
/// denominator 2^a * odd: the odd part is inverted mod 2^w and the 2^a is
/// absorbed by dropping the low a output bits, so the output has
/// word_bits - a bits.
CoeffCircuit build_coeff_circuit(const PolyCircuit& u_s, const std::string& y, std::size_t D,
                                 CoeffBasis basis = CoeffBasis::Monomial);

/// Monomial-basis coefficient circuit for p in y with degree bound D, built on
/// build_arith with enough extra word bits that the output has
/// spec.word_bits bits.
CoeffCircuit build_poly_coeff_circuit(const Polynomial& p, const std::string& y, std::size_t D, RegisterSpec spec);

/// Registers a (w), b (w), out (w): out += a op b mod 2^w.
Circuit u_add(std::size_t w);
Circuit u_sub(std::size_t w);
Circuit u_mul(std::size_t w);

/// Coefficient of y^d of lc(T) S - lc(S) T y^(Ds-Dt):
/// s(d) t(Dt) - t(d + Dt - Ds) s(Ds), with t at a negative index taken as 0.
/// Invokes each coefficient circuit twice. Both must be in the monomial basis
/// over the same variable, inputs and word width.
CoeffCircuit build_remainder_circuit(const CoeffCircuit& u_sy, const CoeffCircuit& u_ty, std::size_t Ds,
                                     std::size_t Dt);

/// Evaluation from coefficients: sum_{d <= D} c_d(x) y^d, with y becoming an
/// input register again. Invokes `c` D+1 times, D = min(degree, bound).
PolyCircuit build_eval_from_coeffs(const CoeffCircuit& c, std::size_t degree = ~std::size_t{0});

/// a(x) - b(x) over shared inputs.
PolyCircuit build_difference(const PolyCircuit& a, const PolyCircuit& b);

/// Appends the uncompute part so every ancilla ends in |0>.
PolyCircuit reset_ancillas(PolyCircuit c);
CoeffCircuit reset_ancillas(CoeffCircuit c);

// ---------------------------------------------------------------------------
// Simulation

/// Runs `c` on a basis input and returns the resulting basis state. Throws
/// std::logic_error if the result is not a basis state.
std::vector<bool> run_basis(const Circuit& c, const std::vector<bool>& input);

/// Prepares the named inputs (and "d" for coefficient circuits), simulates,
/// and reads the output register. Missing inputs are 0. Coefficient indices
/// past the degree bound are rejected.
std::uint64_t evaluate_circuit(const PolyCircuit& pc, const std::map<std::string, std::uint64_t>& inputs);
std::uint64_t evaluate_circuit(const CoeffCircuit& cc, std::uint64_t d,
                               const std::map<std::string, std::uint64_t>& inputs);

}  // namespace qatp
