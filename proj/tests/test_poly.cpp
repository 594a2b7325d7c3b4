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

#include <algorithm>
#include <cmath>
#include <random>

#include "aptuple/poly.hpp"
#include "aptuple/quadrature.hpp"

using namespace aptuple;

namespace {

// Direct evaluation of the alternating-sum integrand with explicit truncation.
double integrand(const SievePoly& p, const std::vector<double>& shifts, InnerKind kind, int e, double t) {
  const SievePoly tilde = antiderivative(p);
  double sum = 0.0;
  const std::size_t n = shifts.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double arg = 1.0 - t;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        arg -= shifts[i];
        ++bits;
      }
    if (arg < 0.0) continue;
    const double v = kind == InnerKind::kI0 ? p(arg) : tilde(arg);
    sum += (bits & 1) ? -v : v;
  }
  return sum * sum * std::pow(t, e);
}

}  // namespace

TEST_SUITE("poly-calculus") {
  TEST_CASE("evaluation") {
    const SievePoly p{1, 22};
    CHECK(p(0.0) == 1.0);
    CHECK(p(1.0) == 23.0);
    CHECK(SievePoly{}(0.7) == 0.0);
    CHECK(eval(SievePoly{1, 10, 150}, 0.5) == doctest::Approx(1 + 5 + 37.5));
  }

  TEST_CASE("parsing and invariants") {
    CHECK(SievePoly::parse("1,22") == SievePoly{1, 22});
    CHECK(SievePoly::parse("1, 10, 150") == SievePoly{1, 10, 150});
    CHECK(SievePoly::parse("1,0,0").degree() == 0);
    CHECK(SievePoly::parse("0").is_zero());
    CHECK_THROWS_AS(SievePoly::parse("1,x"), std::invalid_argument);
    CHECK_THROWS_AS(SievePoly::parse("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(SievePoly(std::vector<double>(10, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(SievePoly({1.0, NAN}), std::invalid_argument);
    CHECK(SievePoly{1, 35, -10, 400}.to_string() == "1+35x-10x^2+400x^3");
  }

  TEST_CASE("antiderivative") {
    CHECK(antiderivative(SievePoly{1}) == SievePoly{0, 1});
    CHECK(antiderivative(SievePoly{1, 14}) == SievePoly{0, 1, 7});
    for (const auto& p : {SievePoly{1, 22}, SievePoly{1, 30, 0, 300}, SievePoly{-2, 0.5}})
      CHECK(antiderivative(p)(0.0) == 0.0);
    CHECK_THROWS_AS(antiderivative(SievePoly(std::vector<double>(9, 1.0))), std::length_error);
  }

  TEST_CASE("definite integrals") {
    CHECK(definite_integral_exact(SievePoly{0, 1}, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    // (1-t)^2 t = t - 2t^2 + t^3
    CHECK(definite_integral_exact(SievePoly{0, 1, -2, 1}, 0, 1) == doctest::Approx(1.0 / 12).epsilon(1e-14));
    CHECK(definite_integral_exact(SievePoly{3, 4, 5}, 0.3, 0.3) == 0.0);
  }

  TEST_CASE("truncated polynomials") {
    const TruncatedPoly plus(SievePoly{1, 14}, Truncation::kPlus);
    CHECK(plus(-1e-300) == 0.0);
    CHECK(plus(0.0) == 1.0);
    CHECK(plus(0.5) == 8.0);
    const TruncatedPoly tilde(SievePoly{1, 14}, Truncation::kTildePlus);
    CHECK(tilde(-0.25) == 0.0);
    CHECK(tilde(0.5) == doctest::Approx(0.5 + 7 * 0.25));
  }

  TEST_CASE("inner integral special cases") {
    const SievePoly p{1, 22};
    InnerIntegralSpec none{{}, 4, InnerKind::kI0};
    // (23 - 22t)^2 t^3 expanded by hand: 529/4 - 1012/5 + 484/6.
    CHECK(inner_integral(none, p) == doctest::Approx(529.0 / 4 - 1012.0 / 5 + 484.0 / 6).epsilon(1e-13));

    InnerIntegralSpec far{{1.5}, 2, InnerKind::kI1};
    CHECK(inner_integral(far, SievePoly{1}) == doctest::Approx(1.0 / 3).epsilon(1e-14));

    InnerIntegralSpec zero{{0.0}, 3, InnerKind::kI1};
    CHECK(inner_integral(zero, SievePoly{1, 14}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(inner_integral(InnerIntegralSpec{{}, 1, InnerKind::kI1}, p), std::invalid_argument);
    CHECK_THROWS_AS(inner_integral(InnerIntegralSpec{{}, 0, InnerKind::kI0}, p), std::invalid_argument);
    CHECK_THROWS_AS(inner_integral(InnerIntegralSpec{{-0.1}, 2, InnerKind::kI0}, p), std::invalid_argument);
  }

  TEST_CASE("breakpoint-split evaluation matches adaptive quadrature") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> coef(-20.0, 40.0), shift(0.0, 1.2);
    AdaptiveOptions opt;
    opt.abs_tol = 1e-12;
    opt.max_depth = 50;
    for (int trial = 0; trial < 100; ++trial) {
      const int degree = static_cast<int>(gen() % 4);
      std::vector<double> c{1.0};
      for (int i = 0; i < degree; ++i) c.push_back(coef(gen));
      const SievePoly p(c);
      const int k = 2 + static_cast<int>(gen() % 9);
      std::vector<double> shifts(gen() % 4);
      for (double& s : shifts) s = shift(gen);
      std::sort(shifts.begin(), shifts.end());
      const InnerKind kind = trial % 2 == 0 ? InnerKind::kI0 : InnerKind::kI1;
      const InnerIntegralSpec spec{shifts, k, kind};
      const double exact = inner_integral(spec, p);

      // Integrate piecewise between the kinks so the reference is smooth per panel.
      std::vector<double> cuts{0.0, 1.0};
      for (std::size_t mask = 0; mask < (std::size_t{1} << shifts.size()); ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < shifts.size(); ++i)
          if (mask >> i & 1) s += shifts[i];
        if (s > 0.0 && s < 1.0) cuts.push_back(1.0 - s);
      }
      std::sort(cuts.begin(), cuts.end());
      double reference = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        reference += adaptive_integrate([&](double t) { return integrand(p, shifts, kind, spec.exponent(), t); },
                                        cuts[i], cuts[i + 1], opt)
                         .value;
      CHECK(exact >= 0.0);
      CHECK(exact == doctest::Approx(reference).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("I1 vanishes quadratically in each shift") {
    const SievePoly p{1, 10, 80};
    double worst = 0.0;
    for (double other : {0.1, 0.4, 0.9})
      for (double x = 1e-3; x <= 0.5; x *= 1.7) {
        const double v = inner_integral(InnerIntegralSpec{{x, other}, 5, InnerKind::kI1}, p);
        worst = std::max(worst, v / (x * x));
      }
    CHECK(std::isfinite(worst));
    CHECK(worst < 1e3);
  }

  TEST_CASE("Gauss-Legendre rules") {
    for (int n : {1, 2, 5, 10, 33, 64}) {
      const auto& r = gauss_legendre(n);
      double w = 0.0;
      for (double x : r.weights) w += x;
      CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
      // Exact for degree 2n - 1.
      double m = 0.0;
      for (int i = 0; i < n; ++i) m += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
      CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    }
    CHECK_THROWS(gauss_legendre(0));
  }

  TEST_CASE("adaptive quadrature and series guard") {
    const auto r = adaptive_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0 / 3).epsilon(1e-7));
    const auto guarded = with_series_guard([](double y) { return std::expm1(y) / y; }, 1e-6);
    CHECK(guarded(0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(guarded(0.5) == doctest::Approx(std::expm1(0.5) / 0.5));
    AdaptiveOptions shallow;
    shallow.max_depth = 2;
    shallow.abs_tol = 1e-14;
    CHECK_THROWS_AS(adaptive_integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, shallow),
                    QuadratureError);
  }
}
