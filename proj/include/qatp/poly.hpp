// SPDX-License-Identifier: Apache-2.0
//
// Sparse multivariate integer polynomials, pseudo-division, triangulation and
// Wu's method.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qatp {

using BigInt = boost::multiprecision::cpp_int;
using Exponent = std::vector<unsigned>;

/// Graded lex over the variable list: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Integer polynomial over a fixed, ordered variable list. No zero
/// coefficients are stored; the zero polynomial has no terms.
class Polynomial {
 public:
  using Terms = std::map<Exponent, BigInt, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars);

  static Polynomial constant(std::vector<std::string> vars, BigInt c);
  static Polynomial variable(std::vector<std::string> vars, const std::string& name);

  const std::vector<std::string>& vars() const { return *vars_; }
  /// Index of `name` in the variable list; throws PreconditionError if absent.
  std::size_t var_index(const std::string& name) const;
  bool has_var(const std::string& name) const;

  const Terms& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Adds c * x^e; zero results are dropped.
  void add_term(const Exponent& e, const BigInt& c);

  /// Degree in one variable; -1 for the zero polynomial.
  int degree(std::size_t var) const;
  int degree(const std::string& var) const { return degree(var_index(var)); }
  int total_degree() const;
  /// Coefficient of var^d, as a polynomial in the remaining variables.
  Polynomial coeff(std::size_t var, unsigned d) const;
  Polynomial coeff(const std::string& var, unsigned d) const { return coeff(var_index(var), d); }
  /// Leading coefficient in `var` (coeff at the degree).
  Polynomial lc(std::size_t var) const;
  Polynomial lc(const std::string& var) const { return lc(var_index(var)); }
  /// Variables with a positive exponent somewhere.
  std::vector<std::size_t> support() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const BigInt& c) const;
  /// Multiplies by var^k.
  Polynomial shifted(std::size_t var, unsigned k) const;
  Polynomial pow(unsigned k) const;

  /// Throws PreconditionError when a variable of the support is missing.
  BigInt evaluate(const std::map<std::string, BigInt>& point) const;
  /// Values by variable index; must have one entry per variable.
  BigInt evaluate(const std::vector<BigInt>& point) const;

  /// Same polynomial over a larger list that contains every current variable.
  Polynomial rebased(const std::vector<std::string>& vars) const;

  bool operator==(const Polynomial& o) const;

 private:
  void check_ring(const Polynomial& o) const;
  std::shared_ptr<const std::vector<std::string>> vars_ = std::make_shared<std::vector<std::string>>();
  Terms terms_;
};

/// Terms in descending graded-lex order, e.g. "x^2 - 2*x*y + 3".
std::string to_string(const Polynomial& p);

/// Infix: integers, variables, + - * ^ and parentheses. Variables must come
/// from `vars`.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars);
/// Same, collecting variables in order of first appearance.
Polynomial parse_polynomial(std::string_view text);

/// Polynomial file: optional `vars a b c;` header, then one expression with
/// an optional trailing `;`. `#` starts a comment.
Polynomial parse_poly_file(std::string_view text);

/// Geometry statement: `indep ...; dep ...; hyp name = expr; concl name = expr;`
/// The variable list is indep followed by dep.
struct GeoProblem {
  std::vector<std::string> indep;
  std::vector<std::string> dep;
  std::vector<std::pair<std::string, Polynomial>> hyps;
  std::vector<std::pair<std::string, Polynomial>> concls;
  std::vector<std::string> vars() const;
};
GeoProblem parse_geo(std::string_view text);

// ---------------------------------------------------------------------------
// Pseudo-division

/// lc(T,y) * S - lc(S,y) * T * y^(deg S - deg T). Requires deg(S,y) >= deg(T,y) >= 1.
Polynomial pseudo_step(const Polynomial& s, const Polynomial& t, std::size_t y);
Polynomial pseudo_step(const Polynomial& s, const Polynomial& t, const std::string& y);

struct PremResult {
  Polynomial remainder;
  Polynomial quotient;                 // lc^steps * S = quotient * T + remainder
  std::size_t steps = 0;
  std::vector<Polynomial> intermediates;  // one per pseudo_step
  Polynomial multiplier;               // lc(T, y)
};

/// Repeated pseudo_step until deg(., y) < deg(T, y). Requires deg(T,y) >= 1.
PremResult prem(const Polynomial& s, const Polynomial& t, std::size_t y);
PremResult prem(const Polynomial& s, const Polynomial& t, const std::string& y);

struct ChainEntry {
  Polynomial poly;
  std::string lead_var;
};

/// Element k has lead variable dep_order[k] and is free of later variables.
struct TriangularSystem {
  std::vector<ChainEntry> chain;
};

/// Eliminates from the last variable of `dep_order` down. For each variable
/// the candidates of lowest positive degree pivot and the others are reduced
/// against it until a single one remains. Throws DegenerateSystemError if a
/// variable ends up without a pivot.
TriangularSystem triangulate(const std::vector<Polynomial>& hyps, const std::vector<std::string>& dep_order);

enum class WuVerdict { Proved, NotReduced };
std::string to_string(WuVerdict v);

struct WuStep {
  Polynomial remainder;
  std::string var;
  std::size_t chain_index = 0;
};

struct WuProof {
  TriangularSystem system;
  std::vector<WuStep> steps;               // every pseudo_step, in order
  std::vector<Polynomial> side_conditions;  // distinct non-constant multipliers
  Polynomial final_remainder;
  WuVerdict verdict = WuVerdict::NotReduced;
  std::size_t max_monomials = 0;           // over the conclusion and every remainder
};

/// Successive prem of `conclusion` against the chain, last variable first.
WuProof wu_prove(const std::vector<Polynomial>& hyps, const std::vector<std::string>& dep_order,
                 const Polynomial& conclusion);
WuProof wu_prove(const GeoProblem& g, std::size_t concl_index);

}  // namespace qatp
