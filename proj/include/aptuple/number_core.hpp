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

// k-tuples of integer linear forms: admissibility, normalization to the
// "same radical / coprime determinant" shape, and the singular series.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aptuple/arith.hpp"

namespace aptuple {

/// L(x) = a*x + b.
struct LinearForm {
  BigInt a;
  BigInt b;

  BigInt operator()(const BigInt& x) const { return a * x + b; }
  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// An ordered collection of pairwise distinct linear forms.
class KTuple {
 public:
  explicit KTuple(std::vector<LinearForm> forms);

  /// Convenience for tuples of shifts {n + h_1, ..., n + h_k}.
  static KTuple from_shifts(const std::vector<std::int64_t>& shifts);

  std::size_t k() const { return forms_.size(); }
  const std::vector<LinearForm>& forms() const { return forms_; }
  const LinearForm& operator[](std::size_t i) const { return forms_[i]; }

  friend bool operator==(const KTuple&, const KTuple&) = default;

 private:
  std::vector<LinearForm> forms_;
};

/// prime p -> nu_p, the number of residues n mod p with Pi(n) = 0 mod p.
using NuProfile = std::map<std::uint64_t, std::uint64_t>;

struct AdmissibilityReport {
  bool admissible = false;
  NuProfile profile;  // primes p <= k
};

enum class Hypothesis1Clause {
  kNonPositiveLeading,
  kInadmissible,
  kRadicalMismatch,
  kLeadingPrimeDividesConstant,
  kDegenerateDeterminant,
  kDeterminantPrime,
};

std::string to_string(Hypothesis1Clause clause);

struct Hypothesis1Violation {
  Hypothesis1Clause clause;
  std::string detail;
};

struct Hypothesis1Report {
  bool ok = true;
  std::vector<Hypothesis1Violation> violations;
};

/// Tuple after the substitution x -> M x + B.
struct NormalizedTuple {
  KTuple tuple;
  BigInt M = 1;
  BigInt B = 0;
  BigInt bigA = 1;  // product of the leading coefficients
};

struct SingularSeriesValue {
  double value = 0.0;
  std::uint64_t prime_bound = 0;
  double tail_bound = 0.0;  // absolute, heuristic
};

class DegenerateTupleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InadmissibleTupleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t nu_p(const KTuple& tuple, std::uint64_t p);

/// Checks nu_p < p for every prime p <= k. Throws std::invalid_argument on a
/// leading coefficient < 1.
AdmissibilityReport is_admissible(const KTuple& tuple);

Hypothesis1Report hypothesis1_check(const KTuple& tuple);

/// Returns the identity transform when the tuple already passes
/// hypothesis1_check; otherwise substitutes x -> M x + B with M the product
/// of all primes <= k, dividing some a_i, or dividing some determinant, and
/// B the least non-negative CRT solution avoiding the roots of Pi mod each p.
NormalizedTuple normalize(const KTuple& tuple);

inline constexpr std::uint64_t kDefaultSingularSeriesBound = 10'000'000;

SingularSeriesValue singular_series(const NormalizedTuple& nt,
                                    std::uint64_t prime_bound = kDefaultSingularSeriesBound);

}  // namespace aptuple
