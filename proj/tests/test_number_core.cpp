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
#include <random>

#include "aptuple/arith.hpp"
#include "aptuple/number_core.hpp"

using namespace aptuple;

namespace {

KTuple forms(std::initializer_list<std::pair<long, long>> ab) {
  std::vector<LinearForm> v;
  for (auto [a, b] : ab) v.push_back({BigInt(a), BigInt(b)});
  return KTuple(std::move(v));
}

// Residue count by brute force, independent of the library's nu_p.
std::uint64_t brute_nu(const KTuple& t, std::int64_t p) {
  std::uint64_t count = 0;
  for (std::int64_t n = 0; n < p; ++n) {
    BigInt prod = 1;
    for (const auto& f : t.forms()) prod *= f.a * n + f.b;
    if (prod % p == 0) ++count;
  }
  return count;
}

bool has_clause(const Hypothesis1Report& r, Hypothesis1Clause c) {
  for (const auto& v : r.violations)
    if (v.clause == c) return true;
  return false;
}

}  // namespace

TEST_SUITE("number-core") {
  TEST_CASE("nu_p counts residues") {
    CHECK(nu_p(KTuple::from_shifts({0, 1}), 2) == 2);
    CHECK(nu_p(KTuple::from_shifts({0, 2}), 2) == 1);
    CHECK(nu_p(KTuple::from_shifts({0, 2, 6}), 5) == 3);
  }

  TEST_CASE("nu_p agrees with brute force and stays within bounds") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 40; ++trial) {
      const int k = 1 + static_cast<int>(gen() % 5);
      std::vector<LinearForm> fs;
      while (static_cast<int>(fs.size()) < k) {
        LinearForm f{BigInt(1 + gen() % 6), BigInt(static_cast<long>(gen() % 41) - 20)};
        if (std::find(fs.begin(), fs.end(), f) == fs.end()) fs.push_back(f);
      }
      const KTuple t(fs);
      for (std::uint32_t p : primes_up_to(30)) {
        const auto nu = nu_p(t, p);
        CHECK(nu == brute_nu(t, p));
        CHECK(nu <= p);
        bool vanishing = false;
        for (const auto& f : t.forms()) vanishing = vanishing || (f.a % p == 0 && f.b % p == 0);
        if (!vanishing) CHECK(nu <= static_cast<std::uint64_t>(k));
      }
    }
  }

  TEST_CASE("admissibility") {
    CHECK_FALSE(is_admissible(KTuple::from_shifts({0, 1})).admissible);
    CHECK_FALSE(is_admissible(KTuple::from_shifts({0, 2, 4})).admissible);
    const auto r = is_admissible(KTuple::from_shifts({0, 2, 6}));
    CHECK(r.admissible);
    CHECK(r.profile.at(2) == 1);
    CHECK(r.profile.at(3) == 2);
    CHECK(is_admissible(KTuple::from_shifts({0, 2, 6, 8})).admissible);
  }

  TEST_CASE("tuple construction rejects bad input") {
    CHECK_THROWS_AS(KTuple(std::vector<LinearForm>{}), std::invalid_argument);
    CHECK_THROWS_AS(KTuple::from_shifts({0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(is_admissible(forms({{0, 1}, {1, 2}})), std::invalid_argument);
  }

  TEST_CASE("normal-form check") {
    CHECK(hypothesis1_check(forms({{2, 1}, {2, 3}})).ok);
    const auto twin = hypothesis1_check(KTuple::from_shifts({0, 2}));
    CHECK_FALSE(twin.ok);
    CHECK(has_clause(twin, Hypothesis1Clause::kDeterminantPrime));
    const auto mixed = hypothesis1_check(forms({{6, 1}, {2, 1}}));
    CHECK_FALSE(mixed.ok);
    CHECK(has_clause(mixed, Hypothesis1Clause::kRadicalMismatch));
  }

  TEST_CASE("normalize") {
    const auto already = normalize(forms({{2, 1}, {2, 3}}));
    CHECK(already.M == 1);
    CHECK(already.B == 0);

    const auto twin = normalize(KTuple::from_shifts({0, 2}));
    CHECK(twin.M == 2);
    CHECK(twin.B == 1);
    CHECK(twin.bigA == 4);
    CHECK(twin.tuple.forms()[0] == LinearForm{2, 1});
    CHECK(twin.tuple.forms()[1] == LinearForm{2, 3});

    const auto mixed = normalize(forms({{1, 0}, {2, 1}}));
    CHECK(mixed.M == 2);
    CHECK(mixed.B == 1);
    CHECK(mixed.tuple.forms()[1] == LinearForm{4, 3});

    CHECK_THROWS_AS(normalize(KTuple::from_shifts({0, 1})), InadmissibleTupleError);
    CHECK_THROWS_AS(normalize(forms({{1, 1}, {3, 3}})), DegenerateTupleError);
  }

  TEST_CASE("normalized tuples have nu_p = 0 on A and k elsewhere") {
    for (const auto& t : {KTuple::from_shifts({0, 2, 6}), KTuple::from_shifts({0, 4, 6, 10}),
                          forms({{1, 0}, {3, 2}}), KTuple::from_shifts({0, 2, 6, 8, 12})}) {
      const auto nt = normalize(t);
      CHECK(hypothesis1_check(nt.tuple).ok);
      CHECK(normalize(nt.tuple).M == 1);
      for (std::uint32_t p : primes_up_to(100)) {
        const std::uint64_t expect = (nt.bigA % p == 0) ? 0 : t.k();
        CHECK(nu_p(nt.tuple, p) == expect);
      }
    }
  }

  TEST_CASE("singular series: trivial tuple") {
    const auto nt = normalize(KTuple::from_shifts({0}));
    CHECK(singular_series(nt, 1000).value == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("singular series against an independent partial product") {
    const auto nt = normalize(forms({{2, 1}, {2, 3}}));
    const auto s = singular_series(nt, 1'000'000);
    // Plain sieve and 1 - 1/(p-1)^2 over odd primes.
    const std::size_t limit = 1'000'000;
    std::vector<bool> composite(limit + 1, false);
    long double prod = 4.0L;
    for (std::size_t p = 2; p <= limit; ++p) {
      if (composite[p]) continue;
      for (std::size_t m = p * p; m <= limit; m += p) composite[m] = true;
      if (p > 2) prod *= 1.0L - 1.0L / ((p - 1.0L) * (p - 1.0L));
    }
    CHECK(s.value == doctest::Approx(static_cast<double>(prod)).epsilon(1e-12));
    CHECK(s.value > 0.0);
    CHECK(s.tail_bound > 0.0);
    const auto coarse = singular_series(nt, 100'000);
    CHECK(std::abs(coarse.value - s.value) <= coarse.tail_bound);
  }

  TEST_CASE("singular series with a bound below the primes of A") {
    const auto nt = normalize(forms({{1, 0}, {7, 2}}));
    CHECK(nt.bigA % 7 == 0);
    const double small = singular_series(nt, 5).value;
    const double large = singular_series(nt, 11).value;
    // The p | A factors are fixed; only p = 11 (not dividing A) enters.
    CHECK(large / small == doctest::Approx((1.0 - 2.0 / 11) / std::pow(1.0 - 1.0 / 11, 2)).epsilon(1e-12));
  }

  TEST_CASE("factorization helpers") {
    CHECK(distinct_prime_factors(std::uint64_t{360}) == std::vector<std::uint64_t>{2, 3, 5});
    CHECK(distinct_prime_factors(std::uint64_t{1}).empty());
    const BigInt big = BigInt("1000000007") * BigInt("998244353");
    const auto f = distinct_prime_factors(big);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == BigInt("998244353"));
    CHECK(is_prime(1'000'000'007ULL));
    CHECK_FALSE(is_prime(3215031751ULL));
  }
}
