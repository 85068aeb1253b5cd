// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "qatp/amplify.hpp"
#include "qatp/errors.hpp"

using namespace qatp;

namespace {

// Uniform search over g qubits; the oracle flips the flag (qubit g) on the
// listed values.
SearchSpec uniform_search(std::size_t g, const std::set<std::uint64_t>& marked) {
  SearchSpec s;
  s.state_prep = Circuit(g + 1);
  s.oracle = Circuit(g + 1);
  for (Qubit q = 0; q < g; ++q) {
    s.state_prep.add(make_h(q));
    s.output.push_back(q);
  }
  for (std::uint64_t v : marked) {
    std::vector<Control> c;
    for (Qubit q = 0; q < g; ++q) c.push_back({q, ((v >> q) & 1) != 0});
    s.oracle.add(make_x(g, c));
  }
  s.oracle.count_call("U_P");
  s.flag = g;
  return s;
}

std::set<std::uint64_t> first_n(std::uint64_t h) {
  std::set<std::uint64_t> m;
  for (std::uint64_t i = 0; i < h; ++i) m.insert(i * 5 + 1);
  return m;
}

}  // namespace

TEST(Reflection, GroverDiffusionMatrix) {
  Circuit a(2);
  a.add(make_h(0));
  a.add(make_h(1));
  auto m = circuit_matrix(zero_reflection(a, std::numbers::pi));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(m[i][j] - Amplitude((i == j ? 1.0 : 0.0) - 0.5)), 0, 1e-12);

  auto id = circuit_matrix(zero_reflection(a, 0.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(id[i][j] - Amplitude(i == j ? 1.0 : 0.0)), 0, 1e-12);
}

TEST(Reflection, FlagPhase) {
  StateVector s(2);
  s.apply(make_x(1));
  s.apply(flag_reflection(2, 1, 0.7));
  EXPECT_NEAR(std::abs(s[2] - std::polar(1.0, 0.7)), 0, 1e-12);
  EXPECT_THROW(flag_reflection(2, 2, 0.1), PreconditionError);
}

TEST(Grover, MatchesClosedForm) {
  for (std::size_t g = 4; g <= 8; ++g)
    for (double lambda : {1.0 / 16, 1.0 / 8, 1.0 / 4}) {
      auto h = static_cast<std::uint64_t>(lambda * std::ldexp(1.0, static_cast<int>(g)));
      SearchSpec s = uniform_search(g, first_n(h));
      s.schedule = Schedule::Grover;
      for (std::uint64_t k = 0; k <= 4; ++k) {
        s.grover_iterations = k;
        s.budget = k + 1;
        std::mt19937_64 rng(k);
        SearchResult r = fixed_point_search(s, rng);
        EXPECT_NEAR(r.success_prob_estimate, grover_success(k, lambda), 1e-6) << g << " " << lambda << " " << k;
      }
    }
}

TEST(FixedPoint, MatchesClosedFormAndNeverOvershoots) {
  const double delta = 0.1;
  const std::size_t g = 6;
  SearchSpec base = uniform_search(g, {});
  base.delta = delta;
  base.lambda_min = 1.0 / 64;
  const std::uint64_t L = fixed_point_length(delta, 1.0 / 64);
  for (std::uint64_t h = 1; h <= 64; h = h * 2 + 1) {
    SearchSpec s = uniform_search(g, first_n(std::min<std::uint64_t>(h, 12)));
    s.delta = delta;
    s.lambda_min = 1.0 / 64;
    double lambda = std::min<std::uint64_t>(h, 12) / 64.0;
    std::mt19937_64 rng(h);
    SearchResult r = fixed_point_search(s, rng);
    EXPECT_NEAR(r.success_prob_estimate, fixed_point_success(L, delta, lambda), 1e-9);
    EXPECT_GE(r.success_prob_estimate, 1 - delta * delta - 1e-9) << "lambda " << lambda;
  }
  for (double lambda = 1.0 / 64; lambda <= 1.0; lambda += 0.01)
    EXPECT_GE(fixed_point_success(L, delta, lambda), 1 - delta * delta - 1e-12);
}

TEST(FixedPoint, PaperSizedExample) {
  SearchSpec s = uniform_search(8, {77});
  s.delta = 0.1;
  s.lambda_min = 1.0 / 256;
  std::mt19937_64 rng(3);
  SearchResult r = fixed_point_search(s, rng);
  EXPECT_GE(r.success_prob_estimate, 0.99);
  EXPECT_LE(r.queries_used, static_cast<std::uint64_t>(std::ceil(std::log(2 / 0.1)) * 16));
  EXPECT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.outcome.value, 77u);
  EXPECT_EQ(r.counter.get("U_P"), 2 * r.last_iterations + 1);
}

TEST(FixedPoint, TrivialCases) {
  std::set<std::uint64_t> all;
  for (std::uint64_t v = 0; v < 8; ++v) all.insert(v);
  std::mt19937_64 rng(1);
  SearchResult r = fixed_point_search(uniform_search(3, all), rng);
  EXPECT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.queries_used, 1u);

  SearchSpec none = uniform_search(3, {});
  none.budget = 50;
  SearchResult z = fixed_point_search(none, rng);
  EXPECT_EQ(z.status, SearchStatus::NotFound);
  EXPECT_TRUE(z.exact_zero);
  EXPECT_LE(z.queries_used, 50u);
}

TEST(FixedPoint, SubspaceAndSparseAgreeWithCircuit) {
  for (std::uint64_t h : {1, 3, 7}) {
    SearchSpec s = uniform_search(5, first_n(h));
    s.lambda_min = 1.0 / 32;
    std::mt19937_64 r1(9), r2(9), r3(9);
    SearchResult a = fixed_point_search(s, r1);
    s.mode = SimMode::Subspace;
    SearchResult b = fixed_point_search(s, r2);
    s.mode = SimMode::Circuit;
    s.backend = BackendKind::Sparse;
    SearchResult c = fixed_point_search(s, r3);
    EXPECT_NEAR(a.success_prob_estimate, b.success_prob_estimate, 1e-9);
    EXPECT_NEAR(a.success_prob_estimate, c.success_prob_estimate, 1e-9);
    EXPECT_NEAR(b.initial_mass, h / 32.0, 1e-12);
  }
}

TEST(FixedPoint, AdaptiveFindsWithoutKnownFraction) {
  for (int seed = 0; seed < 20; ++seed) {
    SearchSpec s = uniform_search(7, {5});
    s.mode = SimMode::Subspace;
    std::mt19937_64 rng(seed);
    SearchResult r = fixed_point_search(s, rng);
    ASSERT_EQ(r.status, SearchStatus::Found);
    EXPECT_EQ(r.outcome.value, 5u);
    EXPECT_LT(r.queries_used, 200u);
  }
}

TEST(FixedPoint, QueryScalingIsSquareRoot) {
  std::vector<double> xs, ys;
  for (int e = 4; e <= 10; ++e) {
    SearchSpec s = uniform_search(static_cast<std::size_t>(e), {3});
    s.lambda_min = std::ldexp(1.0, -e);
    std::mt19937_64 rng(e);
    SearchResult r = fixed_point_search(s, rng);
    EXPECT_GE(r.success_prob_estimate, 0.99);
    xs.push_back(std::log(std::ldexp(1.0, e)));
    ys.push_back(std::log(static_cast<double>(r.queries_used)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
  EXPECT_NEAR(num / den, 0.5, 0.1);
}

TEST(FixedPoint, RejectsBadSpecs) {
  SearchSpec s = uniform_search(3, {1});
  std::mt19937_64 rng(0);
  s.delta = 1.5;
  EXPECT_THROW(fixed_point_search(s, rng), PreconditionError);
  s.delta = 0.1;
  s.output.push_back(3);
  EXPECT_THROW(fixed_point_search(s, rng), PreconditionError);
}
