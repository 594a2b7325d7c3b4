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

// Limiting sieve integrals. The x-integrals are exact piecewise-polynomial
// integrals; outer variables use adaptive Gauss-Legendre, or Monte Carlo for
// the generic J_r. All epsilon-dependent terms are taken at epsilon = 0.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "aptuple/monte_carlo.hpp"
#include "aptuple/poly.hpp"

namespace aptuple {

struct SieveParams {
  int k = 2;
  int h = 3;
  double r1 = 0.5;
  double r2 = 0.25;

  /// Full invariant set: k >= 2, h >= 1, 0 < r2 <= r1, r1 + 2 r2 <= 1.
  void validate() const;

  /// Upper limit (1 - r1)/r2 of the prime-weight support in outer coordinates.
  double weight_support() const { return (1.0 - r1) / r2; }
};

/// W_0(y) = 1 - (r2/r1) y on [0, r1/r2].
double w0(const SieveParams& params, double y);

/// Outer weight of J_r after substituting u = x/r2, with s = sum of the u's:
/// (1 - r1 - r2 s) / (r1 (1 - r2 s)); the 1/prod(u) factor is separate.
double jr_weight(const SieveParams& params, double s);

struct JrEntry {
  int r = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

struct JReport {
  double J = 0.0;
  double J0 = 0.0;
  std::array<double, 3> J0_parts{};
  double J1 = 0.0;
  double J2 = 0.0;
  std::array<double, 3> J2_parts{};
  double J3 = 0.0;
  std::array<double, 8> J3_parts{};
  std::vector<JrEntry> Jr_extra;  // r >= 4, Monte Carlo
};

struct JTolerances {
  double outer_2d = 1e-7;  // J0, J2
  double outer_3d = 1e-6;  // each J3 part
};

struct MonteCarloOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// J = int_0^1 P(1-t)^2 t^(k-1) dt, by expanding the integrand (k >= 1).
double compute_J(const SievePoly& p, int k);
double compute_J(const SievePoly& p, const SieveParams& params);

struct J0Parts {
  double total = 0.0;
  std::array<double, 3> parts{};
};
J0Parts compute_J0(const SievePoly& p, const SieveParams& params, const JTolerances& tol = {});

double compute_J1(const SievePoly& p, const SieveParams& params);

struct J2Parts {
  double total = 0.0;
  std::array<double, 3> parts{};
};
J2Parts compute_J2(const SievePoly& p, const SieveParams& params, const JTolerances& tol = {});

struct J3Parts {
  double total = 0.0;
  std::array<double, 8> parts{};
};
J3Parts compute_J3(const SievePoly& p, const SieveParams& params, const JTolerances& tol = {});

/// Monte Carlo estimate of J_r over the ordered region u_1 < ... < u_{r-1},
/// sum u < (1-r1)/r2, sum u < min(1/r2 - 1, 1/r2 - u_{r-1}), with I_1 exact
/// at each point. r = 1 is evaluated exactly (std_error 0).
/// Throws std::invalid_argument for samples < 10^4 (r >= 2) and
/// std::domain_error if the integrand turns NaN.
MeanEstimate compute_Jr_generic(const SievePoly& p, const SieveParams& params, int r,
                                const MonteCarloOptions& mc);

inline constexpr std::uint64_t kMinMonteCarloSamples = 10'000;

/// J, J0, J1..J3 and, for h >= 4, J_4..J_h by Monte Carlo.
JReport compute_jreport(const SievePoly& p, const SieveParams& params, const MonteCarloOptions& mc = {},
                        const JTolerances& tol = {});

/// sum_{r=1}^{h} J_r from a report.
double sum_Jr(const JReport& report, int h);

}  // namespace aptuple
