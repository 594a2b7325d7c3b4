// Copyright 2026 The aptuple Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "aptuple/j_integrals.hpp"
#include "aptuple/sieve_lab.hpp"

using namespace aptuple;

namespace {

struct Naive {
  int mu = 1;
  std::uint64_t phi = 1;
  int omega = 0;
  std::uint32_t tau = 1;
};

Naive naive(std::uint32_t n) {
  Naive r;
  std::uint32_t m = n;
  for (std::uint32_t p = 2; p * p <= m || m > 1; ++p) {
    if (p * p > m) p = m;
    if (m % p) continue;
    int e = 0;
    std::uint64_t pe = 1;
    while (m % p == 0) {
      m /= p;
      ++e;
      pe *= p;
    }
    r.omega += 1;
    r.tau *= e + 1;
    r.phi *= pe / p * (p - 1);
    r.mu = e > 1 ? 0 : -r.mu;
  }
  return r;
}

double relative(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_SUITE("sieve-lab") {
  TEST_CASE("arithmetic tables match naive factorization") {
    const MultiplicativeTables t(3000, 3, 6);
    for (std::uint32_t n = 1; n < 3000; ++n) {
      const auto r = naive(n);
      CHECK(t.mu(n) == r.mu);
      CHECK(t.phi(n) == r.phi);
      CHECK(t.omega(n) == r.omega);
      CHECK(t.divisor_count(n) == r.tau);
    }
    CHECK(t.prime_factors(360) == std::vector<std::uint32_t>{2, 3, 5});
  }

  TEST_CASE("support excludes A and the prime k") {
    const MultiplicativeTables t(100, 5, 6);
    CHECK(t.in_support(1));
    CHECK(t.in_support(7));
    CHECK_FALSE(t.in_support(5));
    CHECK_FALSE(t.in_support(35));
    CHECK_FALSE(t.in_support(2));
    CHECK_FALSE(t.in_support(49));
    CHECK_FALSE(t.in_support(100));
    for (auto d : t.support()) CHECK(t.f1(d) != 0.0);
  }

  TEST_CASE("Dirichlet convolution identities") {
    for (int k : {2, 3, 4}) {
      const MultiplicativeTables t(10000, k, 1);
      for (std::uint32_t d = 1; d < 10000; ++d) {
        if (t.mu(d) == 0) continue;
        double conv = 0.0, conv_star = 0.0;
        for (std::uint32_t e = 1; e <= d; ++e)
          if (d % e == 0) {
            conv += t.f(e) * t.mu(d / e);
            conv_star += t.fstar(e) * t.mu(d / e);
          }
        CHECK(conv == doctest::Approx(t.f1(d)).epsilon(1e-12).scale(1.0));
        CHECK(conv_star == doctest::Approx(t.f1star(d)).epsilon(1e-12).scale(1.0));
      }
    }
  }

  TEST_CASE("smooth weights") {
    const MultiplicativeTables t(60, 3, 6);
    const SievePoly p{1, 14};
    const auto y = build_y(p, t, 2.0);
    CHECK(y[1] == doctest::Approx(2.0 * p(1.0)));
    CHECK(y[4] == 0.0);
    CHECK(y[2] == 0.0);
    CHECK(y.size() == 60);
    CHECK(y[59] == doctest::Approx(2.0 * p(std::log(60.0 / 59) / std::log(60.0))));
  }

  TEST_CASE("inversion roundtrip at R2 = 100, k = 3") {
    const MultiplicativeTables t(100, 3, 6);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> unit(-1, 1);
    std::vector<double> y(100, 0.0);
    for (auto r : t.support()) y[r] = unit(gen);
    const auto back = y_from_lambda(t, lambda_from_y(t, y));
    for (std::uint32_t r = 0; r < 100; ++r) CHECK(std::abs(back[r] - y[r]) <= 1e-12 * std::max(1.0, std::abs(y[r])));
  }

  TEST_CASE("single-point weights") {
    const MultiplicativeTables t(40, 2, 2);
    std::vector<double> y(40, 0.0);
    y[1] = 1.0;
    const auto lambda = lambda_from_y(t, y);
    CHECK(lambda[1] == 1.0);
    for (std::uint32_t p : {3u, 5u, 7u, 37u}) CHECK(lambda[p] == 0.0);
    CHECK(T_direct(t, lambda, 1, SumKind::kPlain).value == 1.0);
  }

  TEST_CASE("lambda_1 from its defining sum") {
    const MultiplicativeTables t(30, 2, 2);
    const auto y = build_y(SievePoly{1, 14}, t, 1.0);
    double expect = 0.0;
    for (auto r : t.support()) expect += y[r] / t.f1(r);
    CHECK(lambda_from_y(t, y)[1] == doctest::Approx(expect).epsilon(1e-14));
  }

  TEST_CASE("direct sum against a hand expansion") {
    // Support {1, 3, 5} for R2 = 6, k = 2, A = 2; f(p) = p/2.
    const MultiplicativeTables t(6, 2, 2);
    REQUIRE(t.support() == std::vector<std::uint32_t>{1, 3, 5});
    std::vector<double> lambda(6, 0.0);
    const double a = 0.7, b = -1.3, c = 2.1;
    lambda[1] = a;
    lambda[3] = b;
    lambda[5] = c;
    const double expect = a * a + 2 * a * b / 1.5 + b * b / 1.5 + 2 * a * c / 2.5 + c * c / 2.5 + 2 * b * c / 3.75;
    CHECK(T_direct(t, lambda, 1, SumKind::kPlain).value == doctest::Approx(expect).epsilon(1e-14));
    // delta = 3 strips 3 from every lcm: f([d,e,3]/3).
    const double expect3 = a * a + 2 * a * b + b * b + 2 * a * c / 2.5 + c * c / 2.5 + 2 * b * c / 2.5;
    CHECK(T_direct(t, lambda, 3, SumKind::kPlain).value == doctest::Approx(expect3).epsilon(1e-14));
  }

  TEST_CASE("diagonal form: simple cases") {
    const MultiplicativeTables t(50, 3, 6);
    std::vector<double> zero(50, 0.0);
    CHECK(T_diagonal(t, zero, 1, SumKind::kPlain).value == 0.0);
    const auto y = build_y(SievePoly{1, 22}, t, 1.5);
    double expect = 0.0;
    for (auto a : t.support()) expect += y[a] * y[a] / t.f1(a);
    CHECK(T_diagonal(t, y, 1, SumKind::kPlain).value == doctest::Approx(expect).epsilon(1e-14));
    CHECK(T_diagonal(t, y, 1, SumKind::kPlain).value >= 0.0);
    CHECK_THROWS_AS(T_diagonal(t, y, 4, SumKind::kPlain), std::invalid_argument);
    CHECK_THROWS_AS(T_diagonal(t, y, 3, SumKind::kPlain), std::invalid_argument);
  }

  TEST_CASE("direct equals diagonal on seeded random weights") {
    for (int k : {2, 3}) {
      const std::uint64_t A = primorial(k);
      const MultiplicativeTables t(30, k, A);
      std::mt19937_64 gen(100 + k);
      std::uniform_real_distribution<double> unit(-1, 1);
      std::vector<double> y(30, 0.0);
      for (auto r : t.support()) y[r] = unit(gen);
      const auto lambda = lambda_from_y(t, y);
      const auto ystar = ystar_from_y(t, y);
      for (std::uint64_t delta : {1ull, 5ull, 7ull, 35ull, 31ull}) {
        CAPTURE(delta);
        CHECK(relative(T_direct(t, lambda, delta, SumKind::kPlain).value,
                       T_diagonal(t, y, delta, SumKind::kPlain).value) <= 1e-10);
        CHECK(relative(T_direct(t, lambda, delta, SumKind::kStar).value,
                       T_diagonal(t, ystar, delta, SumKind::kStar).value) <= 1e-10);
      }
      // A prime beyond the support leaves every lcm alone.
      CHECK(relative(T_direct(t, lambda, 31, SumKind::kPlain).value, T_direct(t, lambda, 1, SumKind::kPlain).value) <=
            1e-14);
      // Two expressions for y*.
      const auto ystar2 = ystar_from_lambda(t, lambda);
      for (std::uint32_t r = 0; r < 30; ++r) CHECK(ystar[r] == doctest::Approx(ystar2[r]).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("verify runner is seeded and passes") {
    VerifyOptions opt;
    opt.cases = 12;
    opt.R2 = 40;
    opt.seed = 42;
    const auto a = run_verify(opt);
    CHECK(a.pass);
    opt.threads = 3;
    const auto b = run_verify(opt);
    REQUIRE(a.cases.size() == b.cases.size());
    for (std::size_t i = 0; i < a.cases.size(); ++i) {
      CHECK(a.cases[i].case_seed == b.cases[i].case_seed);
      CHECK(a.cases[i].direct == b.cases[i].direct);
    }
  }

  TEST_CASE("main-term approximations") {
    const SievePoly p{1, 14};
    const double S = 2.5;
    const auto empty = T_asymptotic(p, 1000, 3, 6, S, {}, SumKind::kPlain);
    const double logR = std::log(1000.0);
    CHECK(empty.value == doctest::Approx(std::pow(logR, 3) * S / 2 * compute_J(p, 3)).epsilon(1e-12));
    const auto far = T_asymptotic(p, 1000, 3, 6, S, {1009}, SumKind::kStar);
    const auto none = T_asymptotic(p, 1000, 3, 6, S, {}, SumKind::kStar);
    CHECK(far.value == doctest::Approx(none.value).epsilon(1e-14));
    CHECK_THROWS_AS(T_asymptotic(p, 1000, 3, 6, S, {3}, SumKind::kPlain), std::invalid_argument);
  }

  TEST_CASE("sum of 1/f1 at the smallest u") {
    const auto r = lemma3_check(2, 2, 2, 2.64);
    CHECK(r.lhs == 1.0);
    CHECK(r.literal_main_term == doctest::Approx(2 * r.main_term));
  }

  TEST_CASE("context singular series") {
    CHECK(context_singular_series(2, 2, 1'000'000) == doctest::Approx(2.6406).epsilon(1e-4));
    CHECK_THROWS_AS(context_singular_series(3, 2, 1000), std::domain_error);
    CHECK(primorial(10) == 210);
  }

  TEST_CASE("weight size along a grid") {
    const auto zero = lambda_bound_report(SievePoly{}, 3, 6, 1.0, {100, 1000});
    for (const auto& pt : zero.points) CHECK(pt.max_abs_lambda == 0.0);
    const auto rep = lambda_bound_report(SievePoly{1, 14}, 3, 6, context_singular_series(3, 6));
    REQUIRE(rep.points.size() == 3);
    CHECK(rep.finite);
    CHECK_FALSE(rep.trend_violated);
  }

  TEST_CASE("S0 computed two ways") {
    const KTuple tuple({{2, 1}, {2, 3}});
    const MultiplicativeTables t(50, 2, 4);
    std::vector<double> unit(50, 0.0);
    unit[1] = 1.0;
    const auto one = s0_identity_check(tuple, 10000, t, unit);
    CHECK(one.scan_value == 10001.0);
    CHECK(one.lattice_value == 10001.0);
    const auto none = s0_identity_check(tuple, 10000, t, std::vector<double>(50, 0.0));
    CHECK(none.scan_value == 0.0);
    CHECK(none.lattice_value == 0.0);
    const auto w = build_weights(SievePoly{1, 14}, t, 2.6406);
    const auto full = s0_identity_check(tuple, 10000, t, w.lambda);
    CHECK(full.rel_diff <= 1e-9);
    CHECK(full.scan_value > 0.0);
  }
}
