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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace aptuple {

using BigInt = boost::multiprecision::cpp_int;

// All primes p <= limit, ascending (sieve of Eratosthenes over odd numbers).
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

// Smallest-prime-factor array for 0..limit built by the linear sieve;
// spf[0] = spf[1] = 0.
std::vector<std::uint32_t> linear_sieve_spf(std::uint32_t limit);

bool is_prime(std::uint64_t n);

// Distinct prime factors of |n|, ascending. Empty for n in {-1, 0, 1}.
std::vector<BigInt> distinct_prime_factors(const BigInt& n);
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

// Non-negative residue of n modulo m (m > 0).
std::uint64_t mod_u64(const BigInt& n, std::uint64_t m);

std::optional<std::int64_t> to_int64(const BigInt& n);

// a*b, or nullopt when the product does not fit in 64 bits.
std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b);

}  // namespace aptuple
