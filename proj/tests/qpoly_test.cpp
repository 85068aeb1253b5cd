// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "qatp/errors.hpp"
#include "qatp/qpoly.hpp"

using namespace qatp;

namespace {

RegisterSpec make_spec(std::vector<std::string> inputs, std::size_t w, std::size_t input_bits = 2) {
  RegisterSpec s;
  s.inputs = std::move(inputs);
  s.word_bits = w;
  s.input_bits = input_bits;
  return s;
}

Polynomial random_poly(const std::vector<std::string>& vars, std::mt19937_64& rng, const std::vector<unsigned>& max_deg,
                       unsigned total, int coef) {
  std::uniform_int_distribution<int> c(-coef, coef), nterms(1, 5);
  Polynomial p(vars);
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exponent e(vars.size());
    unsigned sum = 0;
    for (std::size_t v = 0; v < e.size(); ++v) {
      e[v] = static_cast<unsigned>(rng() % (max_deg[v] + 1));
      sum += e[v];
    }
    if (sum > total) continue;
    p.add_term(e, c(rng));
  }
  return p;
}

// All points of {0..g-1}^k.
std::vector<std::vector<std::uint64_t>> grid_points(std::size_t k, std::uint64_t g) {
  std::vector<std::vector<std::uint64_t>> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& p : out)
      for (std::uint64_t v = 0; v < g; ++v) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST(Kravchuk, Values) {
  for (int D = 0; D <= 6; ++D)
    for (int y = 0; y <= D; ++y) EXPECT_EQ(kravchuk(0, y, D), 1);
  EXPECT_EQ(kravchuk(1, 0, 2), 2);
  EXPECT_EQ(kravchuk(1, 1, 2), 0);
  EXPECT_EQ(kravchuk(2, 1, 2), -1);
  EXPECT_THROW(kravchuk(3, 0, 2), PreconditionError);
  EXPECT_THROW(kravchuk(0, -1, 2), PreconditionError);
}

TEST(Kravchuk, Orthogonality) {
  for (int D = 0; D <= 10; ++D)
    for (int e = 0; e <= D; ++e)
      for (int f = 0; f <= D; ++f) {
        BigInt s = 0;
        for (int d = 0; d <= D; ++d) s += binomial(D, d) * kravchuk(e, d, D) * kravchuk(f, d, D);
        EXPECT_EQ(s, e == f ? (BigInt(1) << D) * binomial(D, e) : BigInt(0)) << D << " " << e << " " << f;
      }
}

TEST(Kravchuk, ReconstructionRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned deg = static_cast<unsigned>(trial % 7);
    Polynomial s = random_poly({"y"}, rng, {deg}, deg, 9);
    const std::size_t D = deg;
    std::vector<BigInt> vals(D + 1);
    for (std::size_t y = 0; y <= D; ++y) vals[y] = s.evaluate(std::vector<BigInt>{BigInt(y)});
    auto back = kravchuk_reconstruct(kravchuk_transform(vals));
    for (std::size_t y = 0; y <= D; ++y) EXPECT_EQ(back[y], Rational(vals[y]));
  }
}

TEST(Kravchuk, MonomialWeightsInvertVandermonde) {
  for (int D = 0; D <= 6; ++D) {
    MonomialWeights mw = monomial_weights(D);
    // sum_e numer[k][e] e^j = denom * [k == j]
    for (int k = 0; k <= D; ++k)
      for (int j = 0; j <= D; ++j) {
        BigInt s = 0;
        for (int e = 0; e <= D; ++e) s += mw.numer[k][e] * boost::multiprecision::pow(BigInt(e), j);
        EXPECT_EQ(s, k == j ? mw.denom : BigInt(0));
      }
  }
  EXPECT_EQ(monomial_weights(1).denom, 1);
  EXPECT_EQ(monomial_weights(2).denom, 2);
}

TEST(Arith, Examples) {
  auto h16 = parse_polynomial("x22 + x20 - x4");
  PolyCircuit pc = build_arith(h16, make_spec({"x4", "x20", "x22"}, 4));
  EXPECT_EQ(evaluate_circuit(pc, {{"x4", 1}, {"x20", 3}, {"x22", 2}}), 4u);
  EXPECT_EQ(to_signed(evaluate_circuit(pc, {{"x4", 3}, {"x20", 0}, {"x22", 1}}), 4), -2);

  PolyCircuit zero = build_arith(Polynomial({"x"}), make_spec({"x"}, 4));
  EXPECT_EQ(evaluate_circuit(zero, {{"x", 3}}), 0u);
  PolyCircuit id = build_arith(parse_polynomial("x"), make_spec({"x"}, 3, 3));
  EXPECT_EQ(evaluate_circuit(id, {{"x", 5}}), 5u);
  PolyCircuit k = build_arith(parse_polynomial("x^2 - 3"), make_spec({"x"}, 8));
  EXPECT_EQ(evaluate_circuit(k, {}), wrap(-3, 8));
  EXPECT_THROW(build_arith(parse_polynomial("z"), make_spec({"x"}, 4)), PreconditionError);
  EXPECT_THROW(build_arith(parse_polynomial("x"), make_spec({"x"}, 63)), CapacityError);
}

TEST(Arith, AgreesWithEvaluateOnRandomPolynomials) {
  std::mt19937_64 rng(11);
  const std::size_t w = 10;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + trial % 2;
    std::vector<std::string> vars = k == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
    Polynomial p = random_poly(vars, rng, std::vector<unsigned>(k, 3), 3, 3);
    PolyCircuit pc = build_arith(p, make_spec(vars, w));
    for (const auto& pt : grid_points(k, 4)) {
      std::map<std::string, std::uint64_t> in;
      std::vector<BigInt> bp;
      for (std::size_t i = 0; i < k; ++i) {
        in[vars[i]] = pt[i];
        bp.emplace_back(pt[i]);
      }
      ASSERT_EQ(evaluate_circuit(pc, in), wrap(p.evaluate(bp), w)) << to_string(p);
    }
  }
}

TEST(DataDriven, Loads) {
  PolyCircuit one = build_datadriven({{0, 7}}, 1, 4);
  EXPECT_EQ(evaluate_circuit(one, {{"index", 0}}), 7u);
  EXPECT_EQ(evaluate_circuit(one, {{"index", 1}}), 0u);

  auto g1 = parse_polynomial("x1^2 + u2*(x2 - u1)");
  std::vector<std::pair<std::uint64_t, BigInt>> pts;
  std::vector<std::map<std::string, BigInt>> where;
  for (std::uint64_t i = 0; i < 8; ++i) {
    std::map<std::string, BigInt> at{{"x1", i}, {"u2", i % 3}, {"x2", 1}, {"u1", 7 - i}};
    where.push_back(at);
    pts.emplace_back(i, g1.evaluate(at));
  }
  PolyCircuit pc = build_datadriven(pts, 3, 8);
  for (std::uint64_t i = 0; i < 8; ++i) EXPECT_EQ(evaluate_circuit(pc, {{"index", i}}), wrap(g1.evaluate(where[i]), 8));

  EXPECT_THROW(build_datadriven({}, 2, 4), PreconditionError);
  EXPECT_THROW(build_datadriven({{1, 2}, {1, 3}}, 2, 4), PreconditionError);
  EXPECT_THROW(build_datadriven({{4, 2}}, 2, 4), CapacityError);
}

TEST(ArithCircuits, Examples) {
  auto run = [](const Circuit& c, std::size_t w, std::uint64_t a, std::uint64_t b) {
    std::vector<bool> in(c.num_qubits(), false);
    for (std::size_t i = 0; i < w; ++i) {
      in[c.reg("a")[i]] = (a >> i) & 1;
      in[c.reg("b")[i]] = (b >> i) & 1;
    }
    auto out = run_basis(c, in);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < w; ++i) v |= std::uint64_t{out[c.reg("out")[i]]} << i;
    return v;
  };
  EXPECT_EQ(run(u_add(4), 4, 3, 5), 8u);
  EXPECT_EQ(run(u_sub(4), 4, 2, 7), 11u);
  EXPECT_EQ(run(u_mul(5), 5, 3, 3), 9u);
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      EXPECT_EQ(run(u_add(3), 3, a, b), (a + b) % 8);
      EXPECT_EQ(run(u_sub(3), 3, a, b), (a - b + 8) % 8);
      EXPECT_EQ(run(u_mul(3), 3, a, b), (a * b) % 8);
    }
}

TEST(CoeffCircuit, KravchukWeightedSums) {
  const std::size_t w = 8;
  for (const char* src : {"y", "x*y + 2", "3*x^2 - y^2 + x*y"}) {
    Polynomial s = parse_polynomial(src, {"x", "y"});
    const std::size_t D = static_cast<std::size_t>(std::max(1, s.degree("y")));
    PolyCircuit u = build_arith(s, make_spec({"x", "y"}, w));
    CoeffCircuit cc = build_coeff_circuit(u, "y", D, CoeffBasis::Kravchuk);
    EXPECT_EQ(cc.spec.word_bits, w);
    for (std::uint64_t x = 0; x < 4; ++x) {
      std::vector<BigInt> vals;
      for (std::size_t e = 0; e <= D; ++e) vals.push_back(s.evaluate({{"x", x}, {"y", e}}));
      auto c = kravchuk_transform(vals);
      for (std::size_t d = 0; d <= D; ++d) EXPECT_EQ(evaluate_circuit(cc, d, {{"x", x}}), wrap(c[d], w)) << src;
    }
    EXPECT_THROW(evaluate_circuit(cc, D + 1, {}), PreconditionError);
  }
  // y alone, D = 1: c = (S(0) + S(1), S(0) - S(1)) = (1, -1).
  PolyCircuit u = build_arith(parse_polynomial("y"), make_spec({"y"}, 4));
  CoeffCircuit cc = build_coeff_circuit(u, "y", 1, CoeffBasis::Kravchuk);
  EXPECT_EQ(evaluate_circuit(cc, 0, {}), 1u);
  EXPECT_EQ(evaluate_circuit(cc, 1, {}), 15u);
}

TEST(CoeffCircuit, ConstantInYReconstructs) {
  Polynomial s = parse_polynomial("5*x + 1", {"x", "y"});
  const std::size_t D = 3, w = 10;
  CoeffCircuit cc = build_coeff_circuit(build_arith(s, make_spec({"x", "y"}, w)), "y", D, CoeffBasis::Kravchuk);
  for (std::uint64_t x = 0; x < 4; ++x) {
    std::vector<BigInt> c;
    for (std::size_t d = 0; d <= D; ++d) c.emplace_back(to_signed(evaluate_circuit(cc, d, {{"x", x}}), w));
    for (const auto& v : kravchuk_reconstruct(c)) EXPECT_EQ(v, Rational(5 * x + 1));
  }
}

TEST(CoeffCircuit, MonomialCoefficientsAndQueryCount) {
  std::mt19937_64 rng(3);
  const std::size_t w = 10;
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial s = random_poly({"x", "y"}, rng, {2, 3}, 4, 3);
    const std::size_t D = 3;
    CoeffCircuit cc = build_poly_coeff_circuit(s, "y", D, make_spec({"x", "y"}, w));
    EXPECT_EQ(cc.spec.word_bits, w);
    EXPECT_EQ(cc.circuit.calls().at("U_S"), D + 1);
    for (std::uint64_t x = 0; x < 4; ++x)
      for (std::size_t d = 0; d <= D; ++d) {
        BigInt expect = s.coeff("y", static_cast<unsigned>(d)).evaluate({{"x", x}});
        ASSERT_EQ(evaluate_circuit(cc, d, {{"x", x}}), wrap(expect, w)) << to_string(s) << " d=" << d;
      }
  }
  for (std::size_t D = 1; D <= 4; ++D) {
    PolyCircuit u = build_arith(parse_polynomial("y^2 + x"), make_spec({"y", "x"}, 12, 3));
    EXPECT_EQ(build_coeff_circuit(u, "y", D, CoeffBasis::Kravchuk).circuit.calls().at("U_F"), D + 1);
  }
}

TEST(Remainder, ExampleAndCancellation) {
  const std::vector<std::string> vars{"x", "y"};
  auto s = parse_polynomial("y^2 + x", vars), t = parse_polynomial("x*y + 1", vars);
  const std::size_t w = 12;
  auto spec = make_spec(vars, w);
  CoeffCircuit us = build_poly_coeff_circuit(s, "y", 2, spec), ut = build_poly_coeff_circuit(t, "y", 1, spec);
  CoeffCircuit r = build_remainder_circuit(us, ut, 2, 1);
  EXPECT_EQ(r.circuit.calls().at("U_Sy"), 4u);
  EXPECT_EQ(r.circuit.calls().at("U_S"), 2u * 3 + 2u * 2);
  Polynomial expect = pseudo_step(s, t, "y");
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::size_t d = 0; d <= 2; ++d) {
      BigInt c = expect.coeff("y", static_cast<unsigned>(d)).evaluate({{"x", x}});
      EXPECT_EQ(evaluate_circuit(r, d, {{"x", x}}), wrap(c, w)) << "x=" << x << " d=" << d;
    }
  CoeffCircuit same = build_remainder_circuit(ut, ut, 1, 1);
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::size_t d = 0; d <= 1; ++d) EXPECT_EQ(evaluate_circuit(same, d, {{"x", x}}), 0u);
  EXPECT_THROW(build_remainder_circuit(ut, us, 1, 2), PreconditionError);
}

TEST(Remainder, RandomPairsMatchPseudoStep) {
  std::mt19937_64 rng(29);
  const std::vector<std::string> vars{"x", "y"};
  const std::size_t w = 12;
  auto spec = make_spec(vars, w);
  int done = 0;
  while (done < 25) {
    Polynomial s = random_poly(vars, rng, {2, 2}, 4, 3), t = random_poly(vars, rng, {2, 2}, 4, 3);
    const int ds = s.degree("y"), dt = t.degree("y");
    if (dt < 1 || ds < dt) continue;
    ++done;
    CoeffCircuit us = build_poly_coeff_circuit(s, "y", ds, spec), ut = build_poly_coeff_circuit(t, "y", dt, spec);
    CoeffCircuit r = build_remainder_circuit(us, ut, ds, dt);
    Polynomial expect = pseudo_step(s, t, "y");
    for (std::uint64_t x : {0, 1, 3})
      for (int d = 0; d <= ds; ++d) {
        BigInt c = expect.coeff("y", static_cast<unsigned>(d)).evaluate({{"x", x}});
        ASSERT_EQ(evaluate_circuit(r, d, {{"x", x}}), wrap(c, w))
            << to_string(s) << " / " << to_string(t) << " x=" << x << " d=" << d;
      }
  }
}

TEST(Remainder, DepthComposes) {
  const std::vector<std::string> vars{"x", "y"};
  const std::size_t w = 8;
  auto spec = make_spec(vars, w);
  CoeffCircuit us = build_poly_coeff_circuit(parse_polynomial("x*y^2 + 3*y - x", vars), "y", 2, spec);
  CoeffCircuit ut = build_poly_coeff_circuit(parse_polynomial("2*y + x^2", vars), "y", 1, spec);
  CoeffCircuit r = build_remainder_circuit(us, ut, 2, 1);
  ASSERT_EQ(r.meta.parts.size(), 3u);
  const std::size_t arith = r.meta.parts[2].depth;
  EXPECT_EQ(arith, 2 * u_mul(w).depth() + u_sub(w).depth());
  // constant: index constants and the shifted-index adder on 3 qubits
  const std::size_t constant = 1 + 1 + u_add(3).depth();
  EXPECT_LE(r.meta.depth, 2 * us.meta.depth + 2 * ut.meta.depth + arith + constant);
}

TEST(Reset, CleansAncillasAndKeepsOutput) {
  const std::vector<std::string> vars{"x", "y"};
  const std::size_t w = 10;
  auto spec = make_spec(vars, w);
  auto s = parse_polynomial("x*y^2 - y + 2", vars), t = parse_polynomial("y - x", vars);
  CoeffCircuit r = build_remainder_circuit(build_poly_coeff_circuit(s, "y", 2, spec),
                                           build_poly_coeff_circuit(t, "y", 1, spec), 2, 1);
  CoeffCircuit clean = reset_ancillas(r);
  CoeffCircuit twice = reset_ancillas(clean);
  EXPECT_EQ(twice.circuit.gates().size(), clean.circuit.gates().size());
  std::mt19937_64 rng(2);
  for (int k = 0; k < 6; ++k) {
    const std::uint64_t x = rng() % 4, d = rng() % 3;
    std::vector<bool> in(clean.circuit.num_qubits(), false);
    for (std::size_t i = 0; i < 2; ++i) in[clean.input("x")[i]] = (x >> i) & 1;
    for (std::size_t i = 0; i < clean.index.width; ++i) in[clean.index[i]] = (d >> i) & 1;
    auto out = run_basis(clean.circuit, in);
    for (const auto& a : clean.ancillas)
      for (Qubit q : a.qubits()) ASSERT_FALSE(out[q]) << a.name;
    EXPECT_EQ(evaluate_circuit(clean, d, {{"x", x}}), evaluate_circuit(r, d, {{"x", x}}));
  }
  PolyCircuit a = build_arith(s, spec);
  EXPECT_EQ(reset_ancillas(a).circuit.gates().size(), a.circuit.gates().size());
}

TEST(Composition, EvalFromCoefficientsAndDifference) {
  const std::vector<std::string> vars{"x", "y"};
  const std::size_t w = 10;
  auto spec = make_spec(vars, w);
  auto s = parse_polynomial("x*y^2 - 3*y + x^2", vars);
  PolyCircuit back = build_eval_from_coeffs(build_poly_coeff_circuit(s, "y", 2, spec));
  PolyCircuit direct = build_arith(s, spec);
  PolyCircuit diff = build_difference(direct, direct);
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y) {
      EXPECT_EQ(evaluate_circuit(back, {{"x", x}, {"y", y}}), wrap(s.evaluate({{"x", x}, {"y", y}}), w));
      EXPECT_EQ(evaluate_circuit(diff, {{"x", x}, {"y", y}}), 0u);
    }
}
