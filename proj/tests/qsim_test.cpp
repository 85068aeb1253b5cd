// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "qatp/errors.hpp"
#include "qatp/qsim.hpp"

using namespace qatp;

namespace {

constexpr double kPi = std::numbers::pi;
using Matrix = std::vector<std::vector<Amplitude>>;

// Gate matrix straight from the definitions, independent of the simulators.
Matrix gate_matrix(const Gate& g, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix m(dim, std::vector<Amplitude>(dim));
  auto b = [](std::size_t i, Qubit q) { return (i >> q) & 1; };
  for (std::size_t col = 0; col < dim; ++col) {
    bool fire = true;
    for (const auto& c : g.controls) fire = fire && (b(col, c.qubit) == static_cast<std::size_t>(c.value));
    if (!fire) {
      m[col][col] = 1;
      continue;
    }
    const std::size_t w = g.targets.size();
    std::size_t x = 0;
    for (std::size_t k = 0; k < w; ++k) x |= b(col, g.targets[k]) << k;
    std::size_t rest = col;
    for (Qubit q : g.targets) rest &= ~(std::size_t{1} << q);
    auto put = [&](std::size_t y) {
      std::size_t r = rest;
      for (std::size_t k = 0; k < w; ++k) r |= ((y >> k) & 1) << g.targets[k];
      return r;
    };
    const double N = std::ldexp(1.0, static_cast<int>(w));
    switch (g.kind) {
      case GateKind::H:
        m[put(0)][col] += 1 / std::sqrt(2.0);
        m[put(1)][col] += (x ? -1.0 : 1.0) / std::sqrt(2.0);
        break;
      case GateKind::X: m[put(x ^ 1)][col] = 1; break;
      case GateKind::Z: m[col][col] = x ? -1.0 : 1.0; break;
      case GateKind::Phase: m[col][col] = x ? std::polar(1.0, g.theta) : Amplitude(1.0); break;
      case GateKind::Swap: m[put(((x & 1) << 1) | (x >> 1))][col] = 1; break;
      case GateKind::QFT:
      case GateKind::IQFT: {
        double s = g.kind == GateKind::QFT ? 1.0 : -1.0;
        for (std::size_t y = 0; y < (std::size_t{1} << w); ++y)
          m[put(y)][col] = std::polar(1.0 / std::sqrt(N), s * 2 * kPi * double(x * y) / N);
        break;
      }
      case GateKind::PhaseAdd:
        m[col][col] = std::polar(1.0, 2 * kPi * double(g.addend) * double(x) / N);
        break;
    }
  }
  return m;
}

Matrix mul(const Matrix& a, const Matrix& b) {
  const std::size_t d = a.size();
  Matrix c(d, std::vector<Amplitude>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (a[i][k] != Amplitude(0.0))
        for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Matrix oracle_matrix(const Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.num_qubits();
  Matrix m(dim, std::vector<Amplitude>(dim));
  for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1;
  for (const auto& g : c.gates()) m = mul(gate_matrix(g, c.num_qubits()), m);
  return m;
}

double max_diff(const Matrix& a, const Matrix& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

std::vector<Qubit> pick(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<Qubit> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return all;
}

Circuit random_circuit(std::mt19937_64& rng, std::size_t n, std::size_t len, bool registers) {
  Circuit c(n);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (std::size_t i = 0; i < len; ++i) {
    int kind = static_cast<int>(rng() % (registers ? 8 : 5));
    auto q = pick(rng, n, std::min<std::size_t>(n, 3));
    std::vector<Control> ctl;
    if (rng() % 2 && n > 2) ctl.push_back({q[2], static_cast<bool>(rng() % 2)});
    switch (kind) {
      case 0: c.add(make_h(q[0])); break;
      case 1: c.add(make_x(q[0], ctl)); break;
      case 2: c.add(make_z(q[0], ctl)); break;
      case 3: c.add(make_phase(q[0], ang(rng), ctl)); break;
      case 4: c.add(make_swap(q[0], q[1], ctl)); break;
      case 5: c.add(make_qft(pick(rng, n, 1 + rng() % std::min<std::size_t>(n, 3)))); break;
      case 6: c.add(make_iqft(pick(rng, n, 1 + rng() % std::min<std::size_t>(n, 3)))); break;
      case 7: {
        auto reg = pick(rng, n, 1 + rng() % std::min<std::size_t>(n - 1, 3));
        std::vector<Control> pc;
        for (Qubit x = 0; x < n && pc.empty(); ++x)
          if (std::find(reg.begin(), reg.end(), x) == reg.end() && rng() % 2) pc.push_back({x, true});
        c.add(make_phase_add(reg, static_cast<std::int64_t>(rng() % 16) - 8, pc));
        break;
      }
    }
  }
  return c;
}

}  // namespace

TEST(StateVector, BasicGates) {
  StateVector s(1);
  s.apply(make_h(0));
  EXPECT_NEAR(s[0].real(), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s[1].real(), 1 / std::sqrt(2.0), 1e-12);

  StateVector x = apply(StateVector(1), make_x(0));
  EXPECT_NEAR(std::abs(x[1]), 1.0, 1e-12);

  StateVector cp(2);
  cp.apply(make_x(0));
  cp.apply(make_x(1));
  cp.apply(make_cphase(0, 1, kPi));
  EXPECT_NEAR(cp[3].real(), -1.0, 1e-12);
}

TEST(StateVector, RangeErrors) {
  StateVector s(2);
  EXPECT_THROW(s.apply(make_x(2)), PreconditionError);
  Circuit c(2);
  EXPECT_THROW(c.add(make_x(0, {{0, true}})), PreconditionError);
  EXPECT_THROW(c.add(make_swap(0, 0)), PreconditionError);
  EXPECT_THROW(c.add(make_x(5)), PreconditionError);
}

TEST(StateVector, CapacityCheckedBeforeAllocation) {
  setenv("QATP_MAX_QUBITS", "8", 1);
  EXPECT_THROW(StateVector(9), CapacityError);
  EXPECT_NO_THROW(StateVector(8));
  unsetenv("QATP_MAX_QUBITS");
  EXPECT_EQ(max_dense_qubits(), 26u);
}

TEST(Qft, ZeroStateIsUniform) {
  StateVector s = qft(StateVector(3), {0, 1, 2});
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(s[i] - Amplitude(1 / std::sqrt(8.0))), 0, 1e-12);
}

TEST(Qft, RoundTripAndSingleQubit) {
  std::mt19937_64 rng(4);
  StateVector s(4);
  s.apply(random_circuit(rng, 4, 30, false));
  StateVector t = apply(qft(s, {1, 2, 3}), make_iqft({1, 2, 3}));
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(s[i] - t[i]), 0, 1e-9);

  Circuit a(1), b(1);
  a.add(make_qft({0}));
  b.add(make_h(0));
  EXPECT_LT(max_diff(circuit_matrix(a), circuit_matrix(b)), 1e-12);
}

TEST(Qft, ExpansionMatchesDefinition) {
  for (std::size_t w = 1; w <= 4; ++w) {
    Circuit c(w + 1);
    std::vector<Qubit> reg;
    for (std::size_t i = 0; i < w; ++i) reg.push_back(i + 1);
    c.add(make_qft(reg));
    c.add(make_phase_add(reg, 3, {{0, true}}));
    c.add(make_iqft(reg));
    EXPECT_LT(max_diff(oracle_matrix(c.expanded()), oracle_matrix(c)), 1e-9) << "w=" << w;
    EXPECT_GT(c.depth(), 0u);
  }
}

TEST(Qft, AdderAddsModulo) {
  Circuit c(3);
  c.add(make_x(0));
  c.add(make_x(2));  // |5>
  c.add(make_qft({0, 1, 2}));
  c.add(make_phase_add({0, 1, 2}, 6));
  c.add(make_iqft({0, 1, 2}));
  StateVector s(3);
  s.apply(c);
  EXPECT_NEAR(std::norm(s[3]), 1.0, 1e-12);  // 5 + 6 = 11 = 3 mod 8
}

TEST(StateVector, AgreesWithMatrixOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 2 + rng() % 5;
    Circuit c = random_circuit(rng, n, 25, true);
    EXPECT_LT(max_diff(circuit_matrix(c), oracle_matrix(c)), 1e-9) << "trial " << t;
  }
}

TEST(StateVector, InverseUndoes) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    Circuit c = random_circuit(rng, 5, 40, true);
    StateVector s(5);
    s.apply(random_circuit(rng, 5, 20, false));
    StateVector u = s;
    u.apply(c);
    u.apply(c.inverse());
    EXPECT_NEAR(u.norm(), 1.0, 1e-9);
    for (std::size_t i = 0; i < 32; ++i) ASSERT_NEAR(std::abs(u[i] - s[i]), 0, 1e-9);
  }
}

TEST(StateVector, NormPreservedOverThousandGates) {
  std::mt19937_64 rng(13);
  StateVector s(8);
  s.apply(random_circuit(rng, 8, 1000, true));
  EXPECT_NEAR(s.norm(), 1.0, 1e-9);
}

TEST(Measure, Examples) {
  std::mt19937_64 rng(1);
  auto [o1, s1] = measure(apply(StateVector(1), make_x(0)), {0}, rng);
  EXPECT_EQ(o1.bitstring, "1");

  StateVector ten(2);
  ten.apply(make_x(1));
  auto [o2, s2] = measure(ten, {0, 1}, rng);
  EXPECT_EQ(o2.bitstring, "10");
  EXPECT_EQ(o2.value, 2u);

  int ones = 0;
  for (int seed = 0; seed < 10000; ++seed) {
    std::mt19937_64 r(seed);
    StateVector h = apply(StateVector(1), make_h(0));
    if (h.measure({0}, r).value == 1) ++ones;
  }
  EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);
}

TEST(Measure, CollapsesAndIsDeterministic) {
  StateVector s(2);
  s.apply(make_h(0));
  s.apply(make_x(1, {{0, true}}));
  std::mt19937_64 a(99), b(99);
  StateVector t = s;
  auto oa = s.measure({0}, a);
  auto ob = t.measure({0}, b);
  EXPECT_EQ(oa.bitstring, ob.bitstring);
  EXPECT_NEAR(s.probability_one(1), oa.value ? 1.0 : 0.0, 1e-12);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
}

TEST(Circuit, AppendCountsAndControls) {
  Circuit inner(2);
  inner.add(make_x(1, {{0, true}}));
  Circuit outer(4);
  outer.append(inner, {2, 3}, {{0, false}}, "U");
  outer.append(inner, {3, 2}, {}, "U");
  EXPECT_EQ(outer.calls().at("U"), 2u);
  ASSERT_EQ(outer.gates().size(), 2u);
  EXPECT_EQ(outer.gates()[0].controls.size(), 2u);

  Circuit q(2);
  q.add(make_qft({0, 1}));
  EXPECT_THROW(outer.append(q, {0, 1}, {{2, true}}), PreconditionError);

  Circuit wrapper(4);
  wrapper.append(outer, "W");
  QueryCounter qc;
  qc.merge(wrapper.calls(), 3);
  EXPECT_EQ(qc.get("U"), 6u);
  EXPECT_EQ(qc.get("W"), 3u);
}

TEST(Sparse, AgreesWithDense) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 2 + rng() % 6;
    Circuit c = random_circuit(rng, n, 40, true);
    StateVector d(n);
    SparseState s(n);
    d.apply(c);
    s.apply(c);
    EXPECT_NEAR(s.norm(), 1.0, 1e-9);
    auto dd = d.distribution({0, 1});
    auto sd = s.distribution({0, 1});
    for (const auto& [k, p] : dd) EXPECT_NEAR(p, sd[k], 1e-9);
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
      std::vector<bool> bits(n);
      for (std::size_t q = 0; q < n; ++q) bits[q] = (i >> q) & 1;
      ASSERT_NEAR(std::abs(s.amplitude(bits) - d[i]), 0, 1e-9) << "trial " << t << " index " << i;
    }
  }
}

TEST(Sparse, FourierRegistersStaySymbolic) {
  // A wide adder that the dense simulator could not hold.
  const std::size_t w = 40;
  SparseState s(w + 1);
  std::vector<Qubit> reg;
  for (std::size_t i = 0; i < w; ++i) reg.push_back(i);
  s.apply(make_h(w));
  s.apply(make_qft(reg));
  for (int k = 0; k < 100; ++k) s.apply(make_phase_add(reg, 12345, {{w, true}}));
  s.apply(make_iqft(reg));
  EXPECT_EQ(s.materializations(), 0u);
  EXPECT_EQ(s.support(), 2u);
  auto d = s.distribution({0, 1, 2, 3, 4, 5, 6, 7});
  std::uint64_t low = (12345ull * 100) & 0xff;
  std::string key;
  for (int b = 7; b >= 0; --b) key.push_back((low >> b) & 1 ? '1' : '0');
  EXPECT_NEAR(d[key], 0.5, 1e-12);
  EXPECT_NEAR(d["00000000"], 0.5, 1e-12);
}
