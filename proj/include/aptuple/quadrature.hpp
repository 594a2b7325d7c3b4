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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace aptuple {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussPoints = 64;

/// n-point rule, 1 <= n <= kMaxGaussPoints. Rules are built once and shared.
const GaussRule& gauss_legendre(int n);

/// Integral over [lo, hi] of f, assumed to be a polynomial of the given
/// degree there. The rule has ceil((degree+1)/2) points, which makes it exact
/// up to rounding.
template <class F>
double integrate_polynomial(F&& f, double lo, double hi, int degree) {
  if (hi <= lo || degree < 0) return 0.0;
  const int n = std::max(1, (degree + 2) / 2);
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

struct AdaptiveOptions {
  double abs_tol = 1e-7;
  int max_depth = 40;
  int order = 10;  // Gauss points per panel
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated |fine - coarse| estimate
  long evaluations = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double estimate, double achieved)
      : std::runtime_error("adaptive quadrature did not reach tolerance (estimate " +
                           std::to_string(estimate) + ", error " + std::to_string(achieved) + ")"),
        estimate_(estimate),
        achieved_(achieved) {}
  double estimate() const { return estimate_; }
  double achieved_error() const { return achieved_; }

 private:
  double estimate_;
  double achieved_;
};

namespace detail {

template <class F>
double gauss_panel(F& f, double a, double b, const GaussRule& rule, long& evals) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  evals += static_cast<long>(rule.nodes.size());
  return s * half;
}

template <class F>
void adaptive_step(F& f, double a, double b, double whole, double local_tol, int depth,
                   const AdaptiveOptions& opt, const GaussRule& rule, double richardson,
                   QuadratureResult& out, bool& failed) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(f, a, m, rule, out.evaluations);
  const double right = gauss_panel(f, m, b, rule, out.evaluations);
  const double fine = left + right;
  const double err = std::abs(fine - whole);
  if (err <= local_tol || err <= 1e-14 * std::abs(fine) || depth >= opt.max_depth) {
    if (err > local_tol && err > 1e-14 * std::abs(fine)) failed = true;
    out.value += fine + (fine - whole) * richardson;
    out.error += err;
    return;
  }
  adaptive_step(f, a, m, left, 0.5 * local_tol, depth + 1, opt, rule, richardson, out, failed);
  adaptive_step(f, m, b, right, 0.5 * local_tol, depth + 1, opt, rule, richardson, out, failed);
}

}  // namespace detail

/// Composite Gauss-Legendre with dyadic refinement. Each panel compares the
/// panel rule with its two halves; accepted panels get a Richardson
/// correction. Node sets are fixed, so results are bit-reproducible.
/// Throws QuadratureError when max_depth is hit with the error above abs_tol.
template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  QuadratureResult out;
  if (!(b > a)) return out;
  const GaussRule& rule = gauss_legendre(opt.order);
  const double richardson = 1.0 / (std::ldexp(1.0, 2 * opt.order) - 1.0);
  bool failed = false;
  const double whole = detail::gauss_panel(f, a, b, rule, out.evaluations);
  detail::adaptive_step(f, a, b, whole, opt.abs_tol, 0, opt, rule, richardson, out, failed);
  if (!std::isfinite(out.value)) throw QuadratureError(out.value, out.error);
  if (failed && out.error > opt.abs_tol) throw QuadratureError(out.value, out.error);
  return out;
}

/// Wraps f so that below `threshold` it is replaced by the quadratic through
/// f(h), f(2h), f(3h) with h = threshold. For integrands with a removable
/// singularity at 0 whose direct evaluation cancels badly.
template <class F>
auto with_series_guard(F f, double threshold) {
  return [f = std::move(f), threshold](double y) {
    if (y >= threshold) return f(y);
    const double h = threshold;
    const double f1 = f(h), f2 = f(2 * h), f3 = f(3 * h);
    // Newton form in s = y/h around nodes 1, 2, 3.
    const double s = y / h;
    const double d1 = f2 - f1;
    const double d2 = f3 - 2 * f2 + f1;
    return f1 + (s - 1) * d1 + 0.5 * (s - 1) * (s - 2) * d2;
  };
}

}  // namespace aptuple
