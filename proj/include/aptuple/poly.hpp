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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aptuple {

/// Sieve polynomial with ascending double coefficients, degree <= 8.
class SievePoly {
 public:
  static constexpr int kMaxDegree = 8;

  SievePoly() = default;
  /// Trailing zeros are trimmed. Throws std::invalid_argument for degree > 8
  /// or non-finite coefficients.
  explicit SievePoly(std::vector<double> coeffs);
  SievePoly(std::initializer_list<double> coeffs) : SievePoly(std::vector<double>(coeffs)) {}

  /// Comma-separated ascending coefficients: "1,22" is 1 + 22x.
  static SievePoly parse(std::string_view text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator()(double x) const {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
  }

  SievePoly scaled(double c) const;
  std::string to_string() const;  // "1+22x" style, for reports

  friend bool operator==(const SievePoly&, const SievePoly&) = default;

 private:
  std::vector<double> coeffs_;
};

inline double eval(const SievePoly& p, double x) { return p(x); }

/// Integral from 0 to x. Requires degree <= 7 (throws std::length_error).
SievePoly antiderivative(const SievePoly& p);

double definite_integral_exact(const SievePoly& p, double lo, double hi);

enum class Truncation { kPlus, kTildePlus };

/// P+(x) = P(x) for x >= 0, else 0; P~+(x) = int_0^x P for x >= 0, else 0.
class TruncatedPoly {
 public:
  TruncatedPoly(const SievePoly& base, Truncation mode);

  double operator()(double x) const { return x < 0.0 ? 0.0 : active_(x); }
  int degree() const { return active_.degree(); }
  Truncation mode() const { return mode_; }
  const SievePoly& base() const { return base_; }

 private:
  SievePoly base_;
  Truncation mode_;
  SievePoly active_;
};

enum class InnerKind { kI0, kI1 };

struct InnerIntegralSpec {
  std::vector<double> shifts;  // non-negative
  int k = 2;
  InnerKind kind = InnerKind::kI0;

  int exponent() const { return kind == InnerKind::kI0 ? k - 1 : k - 2; }
};

inline constexpr double kBreakpointMergeTol = 1e-12;

/// int_0^1 ( sum_{J subset shifts} (-1)^|J| F+(1 - t - sum_J x) )^2 t^e dt
/// with F+ = P+ (I0, e = k-1) or P~+ (I1, e = k-2). [0,1] is split at the
/// points 1 - sum_J x, so each piece is integrated as an exact polynomial.
double inner_integral(const InnerIntegralSpec& spec, const SievePoly& p);

/// Same as inner_integral with a prebuilt truncated polynomial; the hot path
/// for repeated evaluation.
double inner_integral(std::span<const double> shifts, int exponent, const TruncatedPoly& f);

}  // namespace aptuple
