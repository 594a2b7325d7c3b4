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

#include "aptuple/sieve_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aptuple/arith.hpp"
#include "aptuple/monte_carlo.hpp"

namespace aptuple {

MultiplicativeTables::MultiplicativeTables(std::uint32_t limit, int k, std::uint64_t bigA)
    : limit_(limit), k_(k), bigA_(bigA) {
  if (limit < 2) throw std::invalid_argument("table limit must be at least 2");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (bigA == 0) throw std::invalid_argument("A must be positive");
  spf_ = linear_sieve_spf(limit - 1);
  mu_.assign(limit, 0);
  phi_.assign(limit, 0);
  omega_.assign(limit, 0);
  tau_.assign(limit, 0);
  f_.assign(limit, 0.0);
  f1_.assign(limit, 0.0);
  fstar_.assign(limit, 0.0);
  f1star_.assign(limit, 0.0);
  support_mask_.assign(limit, false);

  std::vector<std::uint8_t> spf_exp(limit, 0);
  std::vector<std::uint32_t> spf_rest(limit, 1);
  const double kd = k;
  mu_[1] = 1;
  phi_[1] = 1;
  tau_[1] = 1;
  f_[1] = f1_[1] = fstar_[1] = f1star_[1] = 1.0;
  for (std::uint32_t n = 2; n < limit; ++n) {
    const std::uint32_t p = spf_[n];
    const std::uint32_t m = n / p;
    const double pd = p;
    if (m % p == 0) {
      mu_[n] = 0;
      phi_[n] = phi_[m] * p;
      omega_[n] = omega_[m];
      spf_exp[n] = static_cast<std::uint8_t>(spf_exp[m] + 1);
      spf_rest[n] = spf_rest[m];
    } else {
      mu_[n] = static_cast<std::int8_t>(-mu_[m]);
      phi_[n] = phi_[m] * (p - 1);
      omega_[n] = static_cast<std::uint8_t>(omega_[m] + 1);
      spf_exp[n] = 1;
      spf_rest[n] = m;
      f_[n] = f_[m] * pd / kd;
      f1_[n] = f1_[m] * (pd - kd) / kd;
      fstar_[n] = fstar_[m] * (pd - 1.0) / (kd - 1.0);
      f1star_[n] = f1star_[m] * (pd - kd) / (kd - 1.0);
    }
    tau_[n] = tau_[spf_rest[n]] * (spf_exp[n] + 1u);
  }

  const bool k_prime = is_prime(static_cast<std::uint64_t>(k));
  for (std::uint32_t n = 1; n < limit; ++n) {
    if (mu_[n] == 0) continue;
    if (std::gcd(static_cast<std::uint64_t>(n), bigA) != 1) continue;
    if (k_prime && n % static_cast<std::uint32_t>(k) == 0) continue;
    support_mask_[n] = true;
    support_.push_back(n);
  }
}

std::vector<std::uint32_t> MultiplicativeTables::prime_factors(std::uint32_t n) const {
  std::vector<std::uint32_t> out;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  return out;
}

std::uint64_t primorial(int k) {
  std::uint64_t a = 1;
  for (std::uint32_t p : primes_up_to(static_cast<std::uint64_t>(std::max(k, 1)))) {
    const auto next = checked_mul(a, p);
    if (!next) throw std::overflow_error("primorial overflows 64 bits");
    a = *next;
  }
  return a;
}

double context_singular_series(int k, std::uint64_t bigA, std::uint64_t prime_bound) {
  long double log_sum = 0.0L;
  const long double kd = k;
  for (std::uint32_t p : primes_up_to(prime_bound)) {
    const long double pd = p;
    const long double nu = (bigA % p == 0) ? 0.0L : kd;
    const long double local = 1.0L - nu / pd;
    if (local <= 0.0L)
      throw std::domain_error("local factor vanishes at p = " + std::to_string(p) + "; include it in A");
    log_sum += std::log(local) - kd * std::log1p(-1.0L / pd);
  }
  return static_cast<double>(std::exp(log_sum));
}

std::vector<double> build_y(const SievePoly& p, const MultiplicativeTables& t, double sseries) {
  const double logR = std::log(static_cast<double>(t.limit()));
  std::vector<double> y(t.limit(), 0.0);
  for (std::uint32_t r : t.support()) y[r] = sseries * p(std::log(t.limit() / static_cast<double>(r)) / logR);
  return y;
}

namespace {

void check_size(const MultiplicativeTables& t, const std::vector<double>& v) {
  if (v.size() != t.limit()) throw std::invalid_argument("weight array does not match the table limit");
}

// out_d = sign(d) * g(d) * sum_{m = d, 2d, ...} v_m / h(m) over the support.
template <class G, class H>
std::vector<double> invert(const MultiplicativeTables& t, const std::vector<double>& v, G g, H h) {
  check_size(t, v);
  std::vector<double> out(t.limit(), 0.0);
  for (std::uint32_t d : t.support()) {
    long double sum = 0.0L;
    for (std::uint64_t m = d; m < t.limit(); m += d)
      if (v[m] != 0.0 && t.in_support(m)) sum += v[m] / h(static_cast<std::uint32_t>(m));
    out[d] = g(d) * static_cast<double>(sum);
  }
  return out;
}

}  // namespace

std::vector<double> lambda_from_y(const MultiplicativeTables& t, const std::vector<double>& y) {
  return invert(
      t, y, [&](std::uint32_t d) { return t.mu(d) * t.f(d); }, [&](std::uint32_t m) { return t.f1(m); });
}

std::vector<double> y_from_lambda(const MultiplicativeTables& t, const std::vector<double>& lambda) {
  return invert(
      t, lambda, [&](std::uint32_t r) { return t.mu(r) * t.f1(r); }, [&](std::uint32_t m) { return t.f(m); });
}

std::vector<double> ystar_from_y(const MultiplicativeTables& t, const std::vector<double>& y) {
  check_size(t, y);
  std::vector<double> out(t.limit(), 0.0);
  for (std::uint32_t a : t.support()) {
    long double sum = 0.0L;
    for (std::uint64_t ma = a, m = 1; ma < t.limit(); ma += a, ++m)
      if (y[ma] != 0.0 && t.in_support(ma)) sum += y[ma] / static_cast<long double>(t.phi(static_cast<std::uint32_t>(m)));
    out[a] = static_cast<double>(a) / static_cast<double>(t.phi(a)) * static_cast<double>(sum);
  }
  return out;
}

std::vector<double> ystar_from_lambda(const MultiplicativeTables& t, const std::vector<double>& lambda) {
  return invert(
      t, lambda, [&](std::uint32_t r) { return t.mu(r) * t.f1star(r); },
      [&](std::uint32_t m) { return t.fstar(m); });
}

WeightTable build_weights(const SievePoly& p, const MultiplicativeTables& t, double sseries) {
  WeightTable w;
  w.R2 = t.limit();
  w.k = t.k();
  w.bigA = t.bigA();
  w.sseries = sseries;
  w.y = build_y(p, t, sseries);
  w.lambda = lambda_from_y(t, w.y);
  w.ystar = ystar_from_y(t, w.y);
  return w;
}

std::string to_string(SumKind kind) { return kind == SumKind::kPlain ? "plain" : "star"; }

std::string to_string(SumMethod method) {
  switch (method) {
    case SumMethod::kDirect: return "direct";
    case SumMethod::kDiagonal: return "diagonal";
    case SumMethod::kAsymptotic: return "asymptotic";
  }
  return "?";
}

namespace {

std::vector<std::uint64_t> checked_delta_primes(const MultiplicativeTables& t, std::uint64_t delta) {
  if (delta == 0) throw std::invalid_argument("delta must be positive");
  if (std::gcd(delta, t.bigA()) != 1) throw std::invalid_argument("delta must be coprime to A");
  auto primes = distinct_prime_factors(delta);
  std::uint64_t rad = 1;
  for (auto p : primes) rad *= p;
  if (rad != delta) throw std::invalid_argument("delta must be square-free");
  return primes;
}

double f_of(std::uint64_t n, int k, SumKind kind) {
  double v = 1.0;
  const double kd = k;
  for (std::uint64_t p : distinct_prime_factors(n))
    v *= kind == SumKind::kPlain ? static_cast<double>(p) / kd : (static_cast<double>(p) - 1.0) / (kd - 1.0);
  return v;
}

}  // namespace

SieveSum T_direct(const MultiplicativeTables& t, const std::vector<double>& lambda, std::uint64_t delta,
                  SumKind kind) {
  check_size(t, lambda);
  checked_delta_primes(t, delta);
  std::vector<std::uint32_t> live;
  for (std::uint32_t d : t.support())
    if (lambda[d] != 0.0) live.push_back(d);
  std::map<std::uint64_t, double> f_cache;
  long double total = 0.0L;
  for (std::uint32_t d : live)
    for (std::uint32_t e : live) {
      const std::uint64_t g = std::gcd(d, e);
      const auto l = checked_mul(d / g, e);
      if (!l) throw std::overflow_error("lcm overflow in T_direct");
      const auto ld = checked_mul(*l, delta);
      if (!ld) throw std::overflow_error("lcm overflow in T_direct");
      const std::uint64_t m = std::lcm(*l, delta) / delta;
      auto it = f_cache.find(m);
      if (it == f_cache.end()) it = f_cache.emplace(m, f_of(m, t.k(), kind)).first;
      total += static_cast<long double>(lambda[d]) * lambda[e] / it->second;
    }
  return {delta, kind, SumMethod::kDirect, static_cast<double>(total)};
}

SieveSum T_diagonal(const MultiplicativeTables& t, const std::vector<double>& y, std::uint64_t delta, SumKind kind) {
  check_size(t, y);
  const auto primes = checked_delta_primes(t, delta);
  std::vector<std::pair<std::uint64_t, int>> divisors{{1, 1}};
  for (auto p : primes) {
    const std::size_t n = divisors.size();
    for (std::size_t i = 0; i < n; ++i) divisors.emplace_back(divisors[i].first * p, -divisors[i].second);
  }
  long double total = 0.0L;
  for (std::uint32_t a : t.support()) {
    if (std::gcd(static_cast<std::uint64_t>(a), delta) != 1) continue;
    long double inner = 0.0L;
    for (const auto& [s, mu_s] : divisors) {
      const auto as = checked_mul(a, s);
      if (as && *as < t.limit()) inner += mu_s * static_cast<long double>(y[*as]);
    }
    if (inner == 0.0L) continue;
    const double f1 = kind == SumKind::kPlain ? t.f1(a) : t.f1star(a);
    total += inner * inner / f1;
  }
  return {delta, kind, SumMethod::kDiagonal, static_cast<double>(total)};
}

SieveSum T_asymptotic(const SievePoly& p, std::uint32_t R2, int k, std::uint64_t bigA, double sseries,
                      const std::vector<std::uint64_t>& primes, SumKind kind) {
  if (R2 < 2) throw std::invalid_argument("R2 must be at least 2");
  const double logR = std::log(static_cast<double>(R2));
  std::uint64_t delta = 1;
  InnerIntegralSpec spec;
  spec.k = k;
  spec.kind = kind == SumKind::kPlain ? InnerKind::kI0 : InnerKind::kI1;
  for (auto q : primes) {
    if (bigA % q == 0) throw std::invalid_argument("primes must not divide A");
    spec.shifts.push_back(std::log(static_cast<double>(q)) / logR);
    delta *= q;
  }
  const double inner = inner_integral(spec, p);
  double value;
  if (kind == SumKind::kPlain) {
    value = std::pow(logR, k) * sseries / std::tgamma(static_cast<double>(k)) * inner;
  } else {
    double phiA = 1.0;
    for (auto q : distinct_prime_factors(bigA)) phiA *= 1.0 - 1.0 / static_cast<double>(q);
    value = std::pow(logR, k + 1) * phiA * sseries / std::tgamma(static_cast<double>(k - 1)) * inner;
  }
  return {delta, kind, SumMethod::kAsymptotic, value};
}

Lemma3Result lemma3_check(std::uint64_t u, int k, std::uint64_t bigA, double sseries) {
  if (u < 2) throw std::invalid_argument("u must be at least 2");
  if (u > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("u too large");
  const MultiplicativeTables t(static_cast<std::uint32_t>(u), k, bigA);
  long double lhs = 0.0L;
  for (std::uint32_t a : t.support()) lhs += 1.0L / t.f1(a);
  Lemma3Result r;
  r.u = u;
  r.lhs = static_cast<double>(lhs);
  r.main_term = std::pow(std::log(static_cast<double>(u)), k) / (sseries * std::tgamma(k + 1.0));
  double a_over_phi = 1.0;
  for (auto q : distinct_prime_factors(bigA)) a_over_phi *= static_cast<double>(q) / (static_cast<double>(q) - 1.0);
  r.literal_main_term = a_over_phi * r.main_term;
  r.ratio = r.lhs / r.main_term;
  r.literal_ratio = r.lhs / r.literal_main_term;
  return r;
}

LambdaBoundReport lambda_bound_report(const SievePoly& p, int k, std::uint64_t bigA, double sseries,
                                      const std::vector<std::uint32_t>& grid) {
  LambdaBoundReport rep;
  for (std::uint32_t R2 : grid) {
    const MultiplicativeTables t(R2, k, bigA);
    const auto lambda = lambda_from_y(t, build_y(p, t, sseries));
    LambdaBoundPoint pt;
    pt.R2 = R2;
    for (double v : lambda) pt.max_abs_lambda = std::max(pt.max_abs_lambda, std::abs(v));
    pt.normalized = pt.max_abs_lambda / std::pow(std::log(static_cast<double>(R2)), k);
    if (!std::isfinite(pt.normalized)) rep.finite = false;
    if (!rep.points.empty() && pt.normalized > rep.points.back().normalized * (1.0 + 1e-12))
      rep.trend_violated = true;
    rep.points.push_back(pt);
  }
  return rep;
}

S0Check s0_identity_check(const KTuple& tuple, std::uint64_t N, const MultiplicativeTables& t,
                          const std::vector<double>& lambda) {
  check_size(t, lambda);
  std::vector<std::pair<std::int64_t, std::int64_t>> forms;
  for (const auto& L : tuple.forms()) {
    const auto a = to_int64(L.a), b = to_int64(L.b);
    if (!a || !b) throw std::invalid_argument("form coefficients must fit in 64 bits");
    forms.emplace_back(*a, *b);
  }
  auto mod = [](std::int64_t v, std::int64_t m) {
    const std::int64_t r = v % m;
    return r < 0 ? r + m : r;
  };
  auto pi_divisible = [&](std::int64_t n, std::int64_t m) {
    __int128 prod = 1;
    for (const auto& [a, b] : forms) prod = prod * mod(mod(a, m) * mod(n, m) + mod(b, m), m) % m;
    return prod == 0;
  };

  std::vector<std::uint32_t> live;
  for (std::uint32_t d : t.support())
    if (lambda[d] != 0.0) live.push_back(d);
  std::vector<std::vector<std::uint32_t>> live_primes;
  std::map<std::uint32_t, std::vector<bool>> roots;  // p -> (n mod p is a root of Pi)
  for (std::uint32_t d : live) {
    live_primes.push_back(t.prime_factors(d));
    for (std::uint32_t p : live_primes.back())
      if (!roots.count(p)) {
        std::vector<bool> r(p);
        for (std::uint32_t c = 0; c < p; ++c) r[c] = pi_divisible(c, p);
        roots.emplace(p, std::move(r));
      }
  }

  const std::int64_t lo = static_cast<std::int64_t>(N), hi = static_cast<std::int64_t>(2 * N);
  long double scan = 0.0L;
  for (std::int64_t n = lo; n <= hi; ++n) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < live.size(); ++i) {
      bool divides = true;
      for (std::uint32_t p : live_primes[i])
        if (!roots.at(p)[static_cast<std::size_t>(n % p)]) {
          divides = false;
          break;
        }
      if (divides) s += lambda[live[i]];
    }
    scan += s * s;
  }

  auto floor_div = [](std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  std::map<std::uint64_t, std::int64_t> counts;
  auto count_for = [&](std::uint64_t m) {
    auto it = counts.find(m);
    if (it != counts.end()) return it->second;
    std::int64_t c = 0;
    const auto mi = static_cast<std::int64_t>(m);
    for (std::int64_t r = 0; r < mi; ++r)
      if (pi_divisible(r, mi)) c += floor_div(hi - r, mi) - floor_div(lo - 1 - r, mi);
    counts.emplace(m, c);
    return c;
  };
  long double lattice = 0.0L;
  for (std::uint32_t d : live)
    for (std::uint32_t e : live) {
      const std::uint64_t m = static_cast<std::uint64_t>(d) / std::gcd(d, e) * e;
      lattice += static_cast<long double>(lambda[d]) * lambda[e] * count_for(m);
    }

  S0Check out;
  out.scan_value = static_cast<double>(scan);
  out.lattice_value = static_cast<double>(lattice);
  const double scale = std::max(std::abs(out.scan_value), std::abs(out.lattice_value));
  out.rel_diff = scale == 0.0 ? 0.0 : std::abs(out.scan_value - out.lattice_value) / scale;
  return out;
}

namespace {

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale == 0.0 ? 0.0 : diff / scale;
}

VerifyCase verify_case(const VerifyOptions& opt, int index) {
  VerifyCase c;
  c.index = index;
  c.case_seed = CounterRng(opt.seed).bits(static_cast<std::uint64_t>(index), 0);
  std::mt19937_64 gen(c.case_seed);
  c.k = opt.k != 0 ? opt.k : (gen() % 2 == 0 ? 2 : 3);
  const std::uint32_t lo = std::min<std::uint32_t>(10, opt.R2);
  c.R2 = std::uniform_int_distribution<std::uint32_t>(lo, opt.R2)(gen);
  const std::uint64_t bigA = primorial(c.k);

  std::vector<std::uint64_t> candidates;
  for (std::uint32_t p : primes_up_to(c.R2 + 20))
    if (bigA % p != 0 && p != static_cast<std::uint32_t>(c.k)) candidates.push_back(p);
  std::shuffle(candidates.begin(), candidates.end(), gen);
  const int shape = static_cast<int>(gen() % 3);
  c.delta = 1;
  for (int i = 0; i < shape && i < static_cast<int>(candidates.size()); ++i) c.delta *= candidates[i];

  const MultiplicativeTables t(c.R2, c.k, bigA);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> y(t.limit(), 0.0);
  for (std::uint32_t r : t.support()) y[r] = unit(gen);
  const auto lambda = lambda_from_y(t, y);
  const auto ystar = ystar_from_y(t, y);

  c.direct = T_direct(t, lambda, c.delta, SumKind::kPlain).value;
  c.diagonal = T_diagonal(t, y, c.delta, SumKind::kPlain).value;
  c.rel_diff = rel_diff(c.direct, c.diagonal);
  c.direct_star = T_direct(t, lambda, c.delta, SumKind::kStar).value;
  c.diagonal_star = T_diagonal(t, ystar, c.delta, SumKind::kStar).value;
  c.rel_diff_star = rel_diff(c.direct_star, c.diagonal_star);
  c.ystar_rel_diff = max_rel_diff(ystar, ystar_from_lambda(t, lambda));
  c.roundtrip_rel_diff = max_rel_diff(y, y_from_lambda(t, lambda));
  c.pass = c.rel_diff <= opt.tolerance && c.rel_diff_star <= opt.tolerance && c.ystar_rel_diff <= opt.tolerance &&
           c.roundtrip_rel_diff <= 1e-12;
  return c;
}

}  // namespace

VerifySummary run_verify(const VerifyOptions& opt) {
  if (opt.cases < 0) throw std::invalid_argument("cases must be non-negative");
  if (opt.R2 < 2) throw std::invalid_argument("R2 must be at least 2");
  if (opt.k != 0 && opt.k < 2) throw std::invalid_argument("k must be at least 2");
  VerifySummary s;
  s.options = opt;
  s.cases.resize(static_cast<std::size_t>(opt.cases));
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max(opt.cases, 1))));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = static_cast<int>(w); i < opt.cases; i += static_cast<int>(threads)) s.cases[i] = verify_case(opt, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& c : s.cases) {
    s.max_rel_diff = std::max({s.max_rel_diff, c.rel_diff, c.rel_diff_star});
    if (!c.pass) ++s.failures;
  }
  s.pass = s.failures == 0;
  return s;
}

TrendReport run_trends(int k, const std::vector<std::uint32_t>& grid, const SievePoly& p, std::uint64_t bigA) {
  if (grid.size() < 2) throw std::invalid_argument("trend grid needs at least two points");
  TrendReport rep;
  rep.k = k;
  rep.bigA = bigA == 0 ? primorial(k) : bigA;
  rep.sseries = context_singular_series(k, rep.bigA);
  rep.poly = p;
  for (std::uint32_t R2 : grid) {
    TrendPoint pt;
    pt.R2 = R2;
    pt.lemma3 = lemma3_check(R2, k, rep.bigA, rep.sseries);
    const MultiplicativeTables t(R2, k, rep.bigA);
    pt.T_value = T_diagonal(t, build_y(p, t, rep.sseries), 1, SumKind::kPlain).value;
    pt.T_main = T_asymptotic(p, R2, k, rep.bigA, rep.sseries, {}, SumKind::kPlain).value;
    pt.T_ratio = pt.T_value / pt.T_main;
    rep.points.push_back(pt);
  }
  auto judge = [&](const char* name, double first, double last, std::uint32_t R2_first, std::uint32_t R2_last) {
    bool ok = true;
    std::ostringstream os;
    os.precision(6);
    if (!(last >= 0.5 && last <= 2.0)) {
      os << name << " ratio " << last << " at " << R2_last << " is outside [0.5, 2]";
      rep.diagnostics.push_back(os.str());
      os.str("");
      ok = false;
    }
    if (!(std::abs(last - 1.0) < std::abs(first - 1.0))) {
      os << name << " ratio " << last << " at " << R2_last << " is not closer to 1 than " << first << " at "
         << R2_first;
      rep.diagnostics.push_back(os.str());
      ok = false;
    }
    return ok;
  };
  const auto& a = rep.points.front();
  const auto& b = rep.points.back();
  rep.lemma3_ok = judge("lemma3", a.lemma3.ratio, b.lemma3.ratio, a.R2, b.R2);
  rep.T_ok = judge("T", a.T_ratio, b.T_ratio, a.R2, b.R2);
  rep.ok = rep.lemma3_ok && rep.T_ok;
  return rep;
}

}  // namespace aptuple
