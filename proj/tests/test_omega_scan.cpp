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

#include <random>

#include "aptuple/omega_scan.hpp"

using namespace aptuple;

namespace {

int trial_division_omega(std::uint64_t n) {
  int count = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      n /= p;
      ++count;
    }
  return count + (n > 1 ? 1 : 0);
}

}  // namespace

TEST_SUITE("omega-scanner") {
  TEST_CASE("smallest prime factors") {
    const auto t = build_spf(1000);
    CHECK(t.spf[2] == 2);
    CHECK(t.spf[91] == 7);
    CHECK(t.spf[97] == 97);
    CHECK_THROWS_AS(build_spf(std::uint64_t{1} << 32), std::invalid_argument);
    CHECK_THROWS_AS(build_spf(1'000'000, 1000), SpfMemoryError);
    try {
      build_spf(1'000'000, 1000);
    } catch (const SpfMemoryError& e) {
      CHECK(e.required_bytes() == 4'000'004);
    }
  }

  TEST_CASE("omega with multiplicity") {
    const auto t = build_spf(2000);
    CHECK(omega(12, t) == 3);
    CHECK(omega(1, t) == 0);
    CHECK(omega(5 * 7 * 11, t) == 3);
    CHECK(omega(1024, t) == 10);
    CHECK_THROWS_AS(omega(0, t), std::out_of_range);
    CHECK_THROWS_AS(omega(2001, t), std::out_of_range);
    for (std::uint64_t n = 1; n <= 2000; ++n) CHECK(omega(n, t) == trial_division_omega(n));
  }

  TEST_CASE("twin forms near 10") {
    const auto r = scan(KTuple::from_shifts({0, 2}), 10, 20, 2);
    CHECK(r.min_omega == 2);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front() == 11);
    CHECK(r.target_hits == 2);  // 11 and 17
  }

  TEST_CASE("prime triple at 5") {
    const auto r = scan(KTuple::from_shifts({0, 2, 6}), 2, 30, 3);
    CHECK(r.min_omega == 3);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front() == 5);
  }

  TEST_CASE("inadmissible tuples still scan") {
    const auto r = scan(KTuple::from_shifts({0, 1}), 4, 500, 2);
    CHECK(r.min_omega >= 3);
    CHECK(r.target_hits == 0);
  }

  TEST_CASE("histogram, additivity and threading") {
    const KTuple t({{2, 1}, {6, 5}, {1, 12}});
    const auto a = scan(t, 100, 3000, 6);
    std::uint64_t total = 0;
    for (const auto& [om, c] : a.histogram) total += c;
    CHECK(total == 2901);
    const auto b = scan(t, 100, 3000, 6, 4);
    CHECK(a.histogram == b.histogram);
    CHECK(a.witnesses == b.witnesses);
    CHECK(a.target_hits == b.target_hits);

    std::mt19937_64 gen(4);
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t n = 100 + gen() % 2901;
      const std::uint64_t prod_omega = trial_division_omega(2 * n + 1) + trial_division_omega(6 * n + 5) +
                                       trial_division_omega(n + 12);
      const auto one = scan(t, n, n, 100);
      CHECK(one.min_omega == static_cast<int>(prod_omega));
    }
  }

  TEST_CASE("min omega never increases on a larger range") {
    const auto t = KTuple::from_shifts({0, 2, 6, 8});
    int prev = 1 << 30;
    for (std::uint64_t end : {120u, 500u, 2000u, 9000u}) {
      const auto r = scan(t, 100, end, 11);
      CHECK(r.min_omega <= prev);
      prev = r.min_omega;
    }
  }

  TEST_CASE("non-positive forms are rejected") {
    CHECK_THROWS_AS(scan(KTuple({{1, -5}, {1, 0}}), 1, 10, 3), std::invalid_argument);
    CHECK_THROWS_AS(scan(KTuple::from_shifts({0, 2}), 10, 5, 3), std::invalid_argument);
  }

  TEST_CASE("existence spot checks") {
    const auto three = verify_theorem_sample(KTuple::from_shifts({0, 2, 6}), 10000, 20000);
    CHECK(three.target == 8);
    CHECK(three.hit);
    const auto four = verify_theorem_sample(KTuple::from_shifts({0, 2, 6, 8}), 10000, 20000);
    CHECK(four.target == 11);
    CHECK(four.hit);
    CHECK_THROWS_AS(verify_theorem_sample(KTuple::from_shifts({0, 2, 4}), 10, 20), InadmissibleTupleError);
  }
}
