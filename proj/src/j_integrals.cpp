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

#include "aptuple/j_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "aptuple/quadrature.hpp"

namespace aptuple {

namespace {

constexpr double kSeriesGuard = 1e-6;

void require_basic(const SieveParams& params, int min_k) {
  if (params.k < min_k) throw std::invalid_argument("k must be at least " + std::to_string(min_k));
  if (!(params.r1 > 0.0 && params.r1 <= 1.0)) throw std::invalid_argument("r1 must lie in (0, 1]");
  if (!(params.r2 > 0.0)) throw std::invalid_argument("r2 must be positive");
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Outer integral of a smooth-on-[a,b] integrand with an optional guard at 0.
double outer(const std::function<double(double)>& g, double a, double b, double tol, bool guard_zero) {
  if (!(b > a)) return 0.0;
  AdaptiveOptions opt;
  opt.abs_tol = tol;
  if (guard_zero && a == 0.0) return adaptive_integrate(with_series_guard(g, kSeriesGuard), a, b, opt).value;
  return adaptive_integrate(g, a, b, opt).value;
}

// Nested (y, z) integral with z in [zlo(y), zhi(y)].
double nested(const std::function<double(double, double)>& f, double ya, double yb,
              const std::function<double(double)>& zlo, const std::function<double(double)>& zhi, double tol) {
  if (!(yb > ya)) return 0.0;
  const double inner_tol = 0.25 * tol / (yb - ya);
  auto g = [&](double y) {
    const double a = zlo(y), b = zhi(y);
    if (!(b > a)) return 0.0;
    AdaptiveOptions opt;
    opt.abs_tol = inner_tol;
    return adaptive_integrate([&](double z) { return f(y, z); }, a, b, opt).value;
  };
  return outer(g, ya, yb, 0.5 * tol, ya == 0.0);
}

}  // namespace

void SieveParams::validate() const {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (h < 1) throw std::invalid_argument("h must be at least 1");
  if (!(r2 > 0.0 && r2 <= r1)) throw std::invalid_argument("need 0 < r2 <= r1");
  if (r1 + 2.0 * r2 > 1.0 + 1e-12) throw std::invalid_argument("need r1 + 2 r2 <= 1");
}

double w0(const SieveParams& params, double y) { return 1.0 - params.r2 / params.r1 * y; }

double jr_weight(const SieveParams& params, double s) {
  return (1.0 - params.r1 - params.r2 * s) / (params.r1 * (1.0 - params.r2 * s));
}

double compute_J(const SievePoly& p, int k) {
  if (k < 1) throw std::invalid_argument("compute_J needs k >= 1");
  if (p.is_zero()) return 0.0;
  // Q(t) = P(1 - t) by binomial expansion.
  const auto c = p.coeffs();
  std::vector<double> q(c.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double binom = 1.0;
    for (std::size_t j = 0; j <= i; ++j) {
      q[j] += c[i] * binom * ((j % 2) ? -1.0 : 1.0);
      binom = binom * static_cast<double>(i - j) / static_cast<double>(j + 1);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      total += q[i] * q[j] / static_cast<double>(i + j + static_cast<std::size_t>(k));
  return total;
}

double compute_J(const SievePoly& p, const SieveParams& params) { return compute_J(p, params.k); }

J0Parts compute_J0(const SievePoly& p, const SieveParams& params, const JTolerances& tol) {
  require_basic(params, 1);
  if (params.r2 > params.r1) throw std::invalid_argument("compute_J0 needs r2 <= r1");
  const int k = params.k;
  const int e = k - 1;
  const int deg = 2 * std::max(p.degree(), 0) + e;
  const double kk = k;

  auto inner01 = [&](double y) {
    return integrate_polynomial(
        [&](double x) {
          const double d = p(1.0 - x) - p(1.0 - x - y);
          return d * d * ipow(x, e);
        },
        0.0, 1.0 - y, deg);
  };
  auto inner02 = [&](double y) {
    return integrate_polynomial(
        [&](double x) {
          const double v = p(1.0 - x);
          return v * v * ipow(x, e);
        },
        1.0 - y, 1.0, deg);
  };

  J0Parts out;
  out.parts[0] = kk * outer([&](double y) { return w0(params, y) / y * inner01(y); }, 0.0, 1.0,
                            tol.outer_2d, true);
  out.parts[1] = kk * outer([&](double y) { return w0(params, y) / y * inner02(y); }, 0.0, 1.0,
                            tol.outer_2d, true);
  const double J = compute_J(p, k);
  out.parts[2] = kk * J *
                 outer([&](double y) { return w0(params, y) / y; }, 1.0, params.r1 / params.r2,
                       tol.outer_2d, false);
  out.total = out.parts[0] + out.parts[1] + out.parts[2];
  return out;
}

double compute_J1(const SievePoly& p, const SieveParams& params) {
  require_basic(params, 2);
  const TruncatedPoly pt(p, Truncation::kTildePlus);
  return (1.0 - params.r1) / params.r1 * inner_integral({}, params.k - 2, pt);
}

J2Parts compute_J2(const SievePoly& p, const SieveParams& params, const JTolerances& tol) {
  require_basic(params, 2);
  const SievePoly pt = antiderivative(p);
  const int e = params.k - 2;
  const int deg = 2 * std::max(pt.degree(), 0) + e;
  const double Y = params.weight_support();
  auto weight = [&](double y) { return jr_weight(params, y) / y; };

  auto inner21 = [&](double y) {
    return integrate_polynomial(
        [&](double x) {
          const double d = pt(1.0 - x) - pt(1.0 - x - y);
          return d * d * ipow(x, e);
        },
        0.0, 1.0 - y, deg);
  };
  auto inner22 = [&](double y) {
    return integrate_polynomial(
        [&](double x) {
          const double v = pt(1.0 - x);
          return v * v * ipow(x, e);
        },
        1.0 - y, 1.0, deg);
  };
  const double full = integrate_polynomial(
      [&](double x) {
        const double v = pt(1.0 - x);
        return v * v * ipow(x, e);
      },
      0.0, 1.0, deg);

  const double ytop = std::min(1.0, Y);
  J2Parts out;
  out.parts[0] = outer([&](double y) { return weight(y) * inner21(y); }, 0.0, ytop, tol.outer_2d, true);
  out.parts[1] = outer([&](double y) { return weight(y) * inner22(y); }, 0.0, ytop, tol.outer_2d, true);
  out.parts[2] = full * outer(weight, 1.0, Y, tol.outer_2d, false);
  out.total = out.parts[0] + out.parts[1] + out.parts[2];
  return out;
}

J3Parts compute_J3(const SievePoly& p, const SieveParams& params, const JTolerances& tol) {
  require_basic(params, 2);
  const SievePoly pt = antiderivative(p);
  const int e = params.k - 2;
  const int deg = 2 * std::max(pt.degree(), 0) + e;
  const double Y = params.weight_support();
  const double t3 = tol.outer_3d;

  auto weight = [&](double y, double z) { return jr_weight(params, y + z) / (y * z); };
  auto xint = [&](auto&& sq, double lo, double hi) {
    return integrate_polynomial([&](double x) { return sq(x) * ipow(x, e); }, lo, hi, deg);
  };
  auto one = [&](double x) {
    const double v = pt(1.0 - x);
    return v * v;
  };
  auto two = [&](double y) {
    return [&, y](double x) {
      const double v = pt(1.0 - x) - pt(1.0 - x - y);
      return v * v;
    };
  };
  auto three = [&](double y, double z) {
    return [&, y, z](double x) {
      const double v = pt(1.0 - x) - pt(1.0 - x - y) - pt(1.0 - x - z);
      return v * v;
    };
  };
  auto four = [&](double y, double z) {
    return [&, y, z](double x) {
      const double v = pt(1.0 - x) - pt(1.0 - x - y) - pt(1.0 - x - z) + pt(1.0 - x - y - z);
      return v * v;
    };
  };

  // Every z-range is intersected with the weight support z <= Y - y.
  auto cap = [&](double y, double hi) { return std::min(hi, Y - y); };
  auto from_y = [](double y) { return y; };
  const double full = xint(one, 0.0, 1.0);

  J3Parts out;
  auto& P = out.parts;
  P[0] = nested([&](double y, double z) { return weight(y, z) * full; }, 1.0, Y / 2, from_y,
                [&](double y) { return Y - y; }, t3);
  P[1] = nested([&](double y, double z) { return weight(y, z) * xint(one, 1.0 - y, 1.0); }, 0.0,
                std::min(1.0, Y / 2), from_y, [&](double y) { return Y - y; }, t3);
  P[2] = nested([&](double y, double z) { return weight(y, z) * xint(two(y), 0.0, 1.0 - y); }, 0.0,
                std::min(1.0, Y - 1.0), [](double) { return 1.0; }, [&](double y) { return Y - y; }, t3);
  P[3] = nested([&](double y, double z) { return weight(y, z) * xint(two(y), 1.0 - z, 1.0 - y); }, 0.0,
                std::min(1.0, Y / 2), from_y, [&](double y) { return cap(y, 1.0); }, t3);
  P[4] = nested([&](double y, double z) { return weight(y, z) * xint(three(y, z), 0.0, 1.0 - z); }, 0.5,
                std::min(1.0, Y / 2), from_y, [&](double y) { return cap(y, 1.0); }, t3);
  P[5] = nested([&](double y, double z) { return weight(y, z) * xint(three(y, z), 0.0, 1.0 - z); }, 0.0,
                0.5, [](double y) { return 1.0 - y; }, [&](double y) { return cap(y, 1.0); }, t3);
  P[6] = nested([&](double y, double z) { return weight(y, z) * xint(three(y, z), 1.0 - y - z, 1.0 - z); },
                0.0, std::min(0.5, Y / 2), from_y, [&](double y) { return cap(y, 1.0 - y); }, t3);
  P[7] = nested([&](double y, double z) { return weight(y, z) * xint(four(y, z), 0.0, 1.0 - y - z); }, 0.0,
                std::min(0.5, Y / 2), from_y, [&](double y) { return cap(y, 1.0 - y); }, t3);
  out.total = 0.0;
  for (double v : P) out.total += v;
  return out;
}

MeanEstimate compute_Jr_generic(const SievePoly& p, const SieveParams& params, int r,
                                const MonteCarloOptions& mc) {
  require_basic(params, 2);
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  const TruncatedPoly pt(p, Truncation::kTildePlus);
  const int e = params.k - 2;

  if (r == 1) {
    MeanEstimate out;
    out.mean = jr_weight(params, 0.0) * inner_integral({}, e, pt);
    return out;
  }
  if (mc.samples < kMinMonteCarloSamples)
    throw std::invalid_argument("compute_Jr_generic needs at least 10^4 samples");

  const int m = r - 1;
  const double Y = params.weight_support();
  if (!(Y > 0.0)) return MeanEstimate{0.0, 0.0, mc.samples};

  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;
  const double volume = std::pow(Y, m) / (factorial * factorial);
  const double top = 1.0 / params.r2;
  const CounterRng rng(mc.seed);

  auto sample = [&](std::uint64_t i) {
    std::array<double, 16> cut{};
    std::array<double, 16> u{};
    if (m > 15) throw std::invalid_argument("r too large");
    for (int j = 0; j < m; ++j) cut[j] = rng.uniform(i, static_cast<std::uint32_t>(j));
    std::sort(cut.begin(), cut.begin() + m);
    double prev = 0.0, sum = 0.0, prod = 1.0;
    for (int j = 0; j < m; ++j) {
      u[j] = Y * (cut[j] - prev);
      prev = cut[j];
      sum += u[j];
      prod *= u[j];
    }
    if (!(prod > 0.0)) return 0.0;
    std::sort(u.begin(), u.begin() + m);
    if (!(sum < top - 1.0 && sum < top - u[m - 1])) return 0.0;
    const double v = volume * jr_weight(params, sum) / prod *
                     inner_integral(std::span<const double>(u.data(), m), e, pt);
    if (std::isnan(v)) throw std::domain_error("NaN in J_r integrand");
    return v;
  };
  return monte_carlo_mean(sample, mc.samples, mc.threads);
}

JReport compute_jreport(const SievePoly& p, const SieveParams& params, const MonteCarloOptions& mc,
                        const JTolerances& tol) {
  JReport rep;
  rep.J = compute_J(p, params.k);
  // Integrate P / sqrt(J) so tolerances act relative to the size of P.
  const double scale = (rep.J > 0.0 && std::isfinite(rep.J)) ? std::sqrt(rep.J) : 1.0;
  const double s2 = scale * scale;
  const SievePoly q = p.scaled(1.0 / scale);
  const auto rescale = [s2](auto v) {
    for (auto& x : v) x *= s2;
    return v;
  };
  const auto j0 = compute_J0(q, params, tol);
  rep.J0 = j0.total * s2;
  rep.J0_parts = rescale(j0.parts);
  rep.J1 = compute_J1(p, params);
  const auto j2 = compute_J2(q, params, tol);
  rep.J2 = j2.total * s2;
  rep.J2_parts = rescale(j2.parts);
  const auto j3 = compute_J3(q, params, tol);
  rep.J3 = j3.total * s2;
  rep.J3_parts = rescale(j3.parts);
  for (int r = 4; r <= params.h; ++r) {
    MonteCarloOptions opt = mc;
    opt.seed = mc.seed + static_cast<std::uint64_t>(r);
    const auto est = compute_Jr_generic(q, params, r, opt);
    rep.Jr_extra.push_back({r, est.mean * s2, est.std_error * s2, est.samples});
  }
  return rep;
}

double sum_Jr(const JReport& report, int h) {
  double s = 0.0;
  if (h >= 1) s += report.J1;
  if (h >= 2) s += report.J2;
  if (h >= 3) s += report.J3;
  for (const auto& e : report.Jr_extra)
    if (e.r <= h) s += e.value;
  return s;
}

}  // namespace aptuple
