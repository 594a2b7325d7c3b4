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

// Finite Selberg-weight laboratory: the y/lambda change of variables, the
// quadratic forms T_delta and T*_delta, and small-scale checks of their
// asymptotics.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aptuple/number_core.hpp"
#include "aptuple/poly.hpp"

namespace aptuple {

/// Arithmetic tables on 0..limit-1. f, f1, fstar, f1star are the
/// multiplicative functions with values p/k, (p-k)/k, (p-1)/(k-1) and
/// (p-k)/(k-1) at primes; they are only meaningful on square-free n.
class MultiplicativeTables {
 public:
  MultiplicativeTables(std::uint32_t limit, int k, std::uint64_t bigA);

  std::uint32_t limit() const { return limit_; }
  int k() const { return k_; }
  std::uint64_t bigA() const { return bigA_; }

  int mu(std::uint32_t n) const { return mu_[n]; }
  std::uint64_t phi(std::uint32_t n) const { return phi_[n]; }
  int omega(std::uint32_t n) const { return omega_[n]; }
  std::uint32_t divisor_count(std::uint32_t n) const { return tau_[n]; }
  double f(std::uint32_t n) const { return f_[n]; }
  double f1(std::uint32_t n) const { return f1_[n]; }
  double fstar(std::uint32_t n) const { return fstar_[n]; }
  double f1star(std::uint32_t n) const { return f1star_[n]; }

  /// Square-free, coprime to A, and not divisible by k (where f1 vanishes).
  bool in_support(std::uint64_t n) const { return n < limit_ && support_mask_[n]; }
  const std::vector<std::uint32_t>& support() const { return support_; }

  std::vector<std::uint32_t> prime_factors(std::uint32_t n) const;

 private:
  std::uint32_t limit_;
  int k_;
  std::uint64_t bigA_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint64_t> phi_;
  std::vector<std::uint8_t> omega_;
  std::vector<std::uint32_t> tau_;
  std::vector<double> f_, f1_, fstar_, f1star_;
  std::vector<bool> support_mask_;
  std::vector<std::uint32_t> support_;
};

/// Product of the primes p <= k.
std::uint64_t primorial(int k);

/// Singular series of a k-tuple in normal form with leading-coefficient
/// product A: nu_p = 0 for p | A and nu_p = k otherwise.
double context_singular_series(int k, std::uint64_t bigA, std::uint64_t prime_bound = 10'000'000);

/// Dense arrays indexed by n < R2, zero off the support.
struct WeightTable {
  std::uint32_t R2 = 0;
  int k = 0;
  std::uint64_t bigA = 1;
  double sseries = 1.0;
  std::vector<double> y;
  std::vector<double> lambda;
  std::vector<double> ystar;
};

/// y_r = S * P(log(R2/r)/log R2) on the support. Requires R2 >= 2.
std::vector<double> build_y(const SievePoly& p, const MultiplicativeTables& t, double sseries);

/// lambda_d = mu(d) f(d) sum_r y_{rd} / f1(rd).
std::vector<double> lambda_from_y(const MultiplicativeTables& t, const std::vector<double>& y);
/// y_r = mu(r) f1(r) sum_d lambda_{dr} / f(dr).
std::vector<double> y_from_lambda(const MultiplicativeTables& t, const std::vector<double>& lambda);
/// y*_a = mu^2(a) (a/phi(a)) sum_m y_{ma} / phi(m).
std::vector<double> ystar_from_y(const MultiplicativeTables& t, const std::vector<double>& y);
/// y*_r = mu(r) f1*(r) sum_d lambda_{dr} / f*(dr).
std::vector<double> ystar_from_lambda(const MultiplicativeTables& t, const std::vector<double>& lambda);

/// Tables for R2 plus y, lambda and y* built from P.
WeightTable build_weights(const SievePoly& p, const MultiplicativeTables& t, double sseries);

enum class SumKind { kPlain, kStar };
enum class SumMethod { kDirect, kDiagonal, kAsymptotic };
std::string to_string(SumKind kind);
std::string to_string(SumMethod method);

struct SieveSum {
  std::uint64_t delta = 1;
  SumKind kind = SumKind::kPlain;
  SumMethod method = SumMethod::kDirect;
  double value = 0.0;
};

/// sum_{d,e} lambda_d lambda_e / f([d,e,delta]/delta) (f* for kStar), by
/// explicit lcm enumeration. Quadratic in the support size.
/// Throws std::invalid_argument unless delta is square-free and coprime to A.
SieveSum T_direct(const MultiplicativeTables& t, const std::vector<double>& lambda, std::uint64_t delta,
                  SumKind kind);

/// sum_{(a,delta)=1} (1/f1(a)) (sum_{s|delta} mu(s) y_{as})^2, with f1* and y*
/// for kStar.
SieveSum T_diagonal(const MultiplicativeTables& t, const std::vector<double>& y_or_ystar, std::uint64_t delta,
                    SumKind kind);

/// Main term with shifts log p_i / log R2: (log R2)^k S/(k-1)! I0 for kPlain,
/// (log R2)^(k+1) phi(A) S / (A (k-2)!) I1 for kStar.
SieveSum T_asymptotic(const SievePoly& p, std::uint32_t R2, int k, std::uint64_t bigA, double sseries,
                      const std::vector<std::uint64_t>& primes, SumKind kind);

struct Lemma3Result {
  std::uint64_t u = 0;
  double lhs = 0.0;
  double main_term = 0.0;          // (log u)^k / (S k!)
  double literal_main_term = 0.0;  // (A/phi(A)) (log u)^k / (S k!)
  double ratio = 0.0;
  double literal_ratio = 0.0;
};

/// sum over support a < u of 1/f1(a), against both main-term readings.
Lemma3Result lemma3_check(std::uint64_t u, int k, std::uint64_t bigA, double sseries);

struct LambdaBoundPoint {
  std::uint32_t R2 = 0;
  double max_abs_lambda = 0.0;
  double normalized = 0.0;  // max |lambda_d| / (log R2)^k
};

struct LambdaBoundReport {
  std::vector<LambdaBoundPoint> points;
  bool finite = true;
  bool trend_violated = false;  // normalized value increased along the grid
};

LambdaBoundReport lambda_bound_report(const SievePoly& p, int k, std::uint64_t bigA, double sseries,
                                      const std::vector<std::uint32_t>& grid = {100, 1000, 10000});

struct S0Check {
  double scan_value = 0.0;
  double lattice_value = 0.0;
  double rel_diff = 0.0;
};

/// S0 over n in [N, 2N] two ways: by scanning divisors of Pi(n) and by
/// counting residues of Pi modulo [d, e]. lambda is indexed by d < limit.
S0Check s0_identity_check(const KTuple& tuple, std::uint64_t N, const MultiplicativeTables& t,
                          const std::vector<double>& lambda);

struct VerifyOptions {
  int k = 0;              // 0 draws k from {2, 3} per case
  std::uint32_t R2 = 60;  // largest R2; each case draws from [10, R2]
  int cases = 50;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  double tolerance = 1e-10;
};

struct VerifyCase {
  int index = 0;
  std::uint64_t case_seed = 0;
  std::uint32_t R2 = 0;
  int k = 0;
  std::uint64_t delta = 1;
  double direct = 0.0, diagonal = 0.0, rel_diff = 0.0;
  double direct_star = 0.0, diagonal_star = 0.0, rel_diff_star = 0.0;
  double ystar_rel_diff = 0.0;     // y* from y against y* from lambda
  double roundtrip_rel_diff = 0.0; // y -> lambda -> y
  bool pass = false;
};

struct VerifySummary {
  VerifyOptions options;
  std::vector<VerifyCase> cases;
  double max_rel_diff = 0.0;
  int failures = 0;
  bool pass = false;
};

/// Seeded random y vectors; every case records its own seed for replay.
VerifySummary run_verify(const VerifyOptions& opt);

struct TrendPoint {
  std::uint32_t R2 = 0;
  Lemma3Result lemma3;
  double T_value = 0.0;  // diagonal form, delta = 1
  double T_main = 0.0;
  double T_ratio = 0.0;
};

struct TrendReport {
  int k = 2;
  std::uint64_t bigA = 1;
  double sseries = 0.0;
  SievePoly poly;
  std::vector<TrendPoint> points;
  bool lemma3_ok = false;
  bool T_ok = false;
  bool ok = false;
  std::vector<std::string> diagnostics;
};

/// Ratios in [0.5, 2] at the last grid point and closer to 1 than at the first.
TrendReport run_trends(int k, const std::vector<std::uint32_t>& grid, const SievePoly& p, std::uint64_t bigA = 0);

}  // namespace aptuple
