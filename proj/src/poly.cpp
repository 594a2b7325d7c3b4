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

#include "aptuple/poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aptuple/quadrature.hpp"

namespace aptuple {

SievePoly::SievePoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (degree() > kMaxDegree)
    throw std::invalid_argument("polynomial degree " + std::to_string(degree()) +
                                " exceeds the cap of " + std::to_string(kMaxDegree));
}

SievePoly SievePoly::parse(std::string_view text) {
  std::vector<double> coeffs;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty coefficient in '" + std::string(text) + "'");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad coefficient '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("bad coefficient '" + item + "'");
    coeffs.push_back(v);
  }
  if (coeffs.empty()) throw std::invalid_argument("empty polynomial");
  return SievePoly(std::move(coeffs));
}

SievePoly SievePoly::scaled(double c) const {
  std::vector<double> out(coeffs_);
  for (double& v : out) v *= c;
  return SievePoly(std::move(out));
}

std::string SievePoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double c = coeffs_[i];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? "-" : "+");
    else if (c < 0) os << "-";
    const double mag = std::abs(c);
    if (i == 0 || mag != 1.0) os << mag;
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

SievePoly antiderivative(const SievePoly& p) {
  if (p.degree() > SievePoly::kMaxDegree - 1)
    throw std::length_error("antiderivative would exceed the degree cap");
  if (p.is_zero()) return {};
  std::vector<double> out(p.coeffs().size() + 1, 0.0);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) out[i + 1] = p.coeffs()[i] / static_cast<double>(i + 1);
  return SievePoly(std::move(out));
}

double definite_integral_exact(const SievePoly& p, double lo, double hi) {
  if (lo == hi) return 0.0;
  // Antiderivative coefficients are evaluated directly so degree-8 input works.
  auto prim = [&](double x) {
    double r = 0.0;
    const auto c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i] / static_cast<double>(i + 1);
    return r * x;
  };
  return prim(hi) - prim(lo);
}

TruncatedPoly::TruncatedPoly(const SievePoly& base, Truncation mode)
    : base_(base), mode_(mode), active_(mode == Truncation::kPlus ? base : antiderivative(base)) {}

double inner_integral(std::span<const double> shifts, int exponent, const TruncatedPoly& f) {
  constexpr std::size_t kMaxShifts = 12;
  if (shifts.size() > kMaxShifts) throw std::invalid_argument("inner_integral: too many shifts");
  if (exponent < 0) throw std::invalid_argument("inner_integral: negative exponent");
  if (f.degree() < 0) return 0.0;

  const std::size_t subsets = std::size_t{1} << shifts.size();
  std::vector<double> offset(subsets);
  std::vector<double> sign(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    double s = 0.0;
    int bits = 0;
    for (std::size_t i = 0; i < shifts.size(); ++i)
      if (mask >> i & 1) {
        s += shifts[i];
        ++bits;
      }
    offset[mask] = s;
    sign[mask] = (bits & 1) ? -1.0 : 1.0;
  }

  // Pieces of [0,1] on which the set of non-truncated terms is constant.
  std::vector<double> cuts{0.0, 1.0};
  for (double s : offset) {
    const double c = 1.0 - s;
    if (c > 0.0 && c < 1.0) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> merged;
  for (double c : cuts)
    if (merged.empty() || c - merged.back() > kBreakpointMergeTol) merged.push_back(c);
  if (merged.back() < 1.0) merged.back() = 1.0;

  const int degree = 2 * f.degree() + exponent;
  std::vector<std::size_t> active;
  double total = 0.0;
  for (std::size_t piece = 0; piece + 1 < merged.size(); ++piece) {
    const double lo = merged[piece], hi = merged[piece + 1];
    const double mid = 0.5 * (lo + hi);
    active.clear();
    for (std::size_t m = 0; m < subsets; ++m)
      if (1.0 - mid - offset[m] >= 0.0) active.push_back(m);
    if (active.empty()) continue;
    total += integrate_polynomial(
        [&](double t) {
          double sum = 0.0;
          for (std::size_t m : active) {
            // Clamp tiny negative arguments inside an active piece.
            sum += sign[m] * f(std::max(0.0, 1.0 - t - offset[m]));
          }
          double tp = 1.0;
          for (int e = 0; e < exponent; ++e) tp *= t;
          return sum * sum * tp;
        },
        lo, hi, degree);
  }
  return total;
}

double inner_integral(const InnerIntegralSpec& spec, const SievePoly& p) {
  if (spec.kind == InnerKind::kI0 && spec.k < 1) throw std::invalid_argument("I0 needs k >= 1");
  if (spec.kind == InnerKind::kI1 && spec.k < 2) throw std::invalid_argument("I1 needs k >= 2");
  for (double x : spec.shifts)
    if (!(x >= 0.0)) throw std::invalid_argument("inner_integral: shifts must be non-negative");
  const TruncatedPoly f(p, spec.kind == InnerKind::kI0 ? Truncation::kPlus : Truncation::kTildePlus);
  return inner_integral(spec.shifts, spec.exponent(), f);
}

}  // namespace aptuple
