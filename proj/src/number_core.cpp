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

#include "aptuple/number_core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace aptuple {

namespace {

std::string form_str(const LinearForm& f) {
  std::ostringstream os;
  os << f.a << "n" << (f.b < 0 ? "-" : "+") << (f.b < 0 ? BigInt(-f.b) : f.b);
  return os.str();
}

std::set<BigInt> prime_set(const BigInt& n) {
  auto ps = distinct_prime_factors(n);
  return {ps.begin(), ps.end()};
}

void require_positive_leading(const KTuple& tuple) {
  for (const auto& f : tuple.forms()) {
    if (f.a < 1)
      throw std::invalid_argument("leading coefficient must be positive: " + form_str(f));
  }
}

}  // namespace

KTuple::KTuple(std::vector<LinearForm> forms) : forms_(std::move(forms)) {
  if (forms_.empty()) throw std::invalid_argument("a k-tuple needs at least one form");
  for (std::size_t i = 0; i < forms_.size(); ++i)
    for (std::size_t j = i + 1; j < forms_.size(); ++j)
      if (forms_[i] == forms_[j])
        throw std::invalid_argument("duplicate form " + form_str(forms_[i]));
}

KTuple KTuple::from_shifts(const std::vector<std::int64_t>& shifts) {
  std::vector<LinearForm> forms;
  forms.reserve(shifts.size());
  for (auto h : shifts) forms.push_back({1, h});
  return KTuple(std::move(forms));
}

std::string to_string(Hypothesis1Clause clause) {
  switch (clause) {
    case Hypothesis1Clause::kNonPositiveLeading: return "non_positive_leading";
    case Hypothesis1Clause::kInadmissible: return "inadmissible";
    case Hypothesis1Clause::kRadicalMismatch: return "radical_mismatch";
    case Hypothesis1Clause::kLeadingPrimeDividesConstant: return "leading_prime_divides_constant";
    case Hypothesis1Clause::kDegenerateDeterminant: return "degenerate_determinant";
    case Hypothesis1Clause::kDeterminantPrime: return "determinant_prime";
  }
  return "unknown";
}

std::uint64_t nu_p(const KTuple& tuple, std::uint64_t p) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> residues;
  residues.reserve(tuple.k());
  for (const auto& f : tuple.forms()) residues.emplace_back(mod_u64(f.a, p), mod_u64(f.b, p));
  std::uint64_t count = 0;
  for (std::uint64_t n = 0; n < p; ++n) {
    for (auto [a, b] : residues) {
      const auto v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * n + b) % p);
      if (v == 0) {
        ++count;
        break;
      }
    }
  }
  return count;
}

AdmissibilityReport is_admissible(const KTuple& tuple) {
  require_positive_leading(tuple);
  AdmissibilityReport report;
  report.admissible = true;
  for (std::uint32_t p : primes_up_to(tuple.k())) {
    const auto nu = nu_p(tuple, p);
    report.profile[p] = nu;
    if (nu >= p) report.admissible = false;
  }
  return report;
}

Hypothesis1Report hypothesis1_check(const KTuple& tuple) {
  Hypothesis1Report report;
  auto fail = [&](Hypothesis1Clause c, std::string detail) {
    report.ok = false;
    report.violations.push_back({c, std::move(detail)});
  };

  bool positive = true;
  for (const auto& f : tuple.forms()) {
    if (f.a < 1) {
      positive = false;
      fail(Hypothesis1Clause::kNonPositiveLeading, form_str(f));
    }
  }
  if (!positive) return report;

  const auto adm = is_admissible(tuple);
  if (!adm.admissible) {
    for (auto [p, nu] : adm.profile)
      if (nu >= p) fail(Hypothesis1Clause::kInadmissible, "nu_" + std::to_string(p) + " = " +
                                                              std::to_string(nu));
  }

  const auto& forms = tuple.forms();
  const auto radical = prime_set(forms[0].a);
  for (std::size_t i = 1; i < forms.size(); ++i) {
    if (prime_set(forms[i].a) != radical)
      fail(Hypothesis1Clause::kRadicalMismatch, form_str(forms[0]) + " vs " + form_str(forms[i]));
  }

  std::set<BigInt> leading_primes;
  for (const auto& f : forms) {
    auto ps = prime_set(f.a);
    leading_primes.insert(ps.begin(), ps.end());
  }
  for (const auto& p : leading_primes)
    for (const auto& f : forms)
      if (f.b % p == 0) {
        std::ostringstream os;
        os << p << " | " << f.b << " in " << form_str(f);
        fail(Hypothesis1Clause::kLeadingPrimeDividesConstant, os.str());
      }

  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      const BigInt det = forms[i].a * forms[j].b - forms[j].a * forms[i].b;
      if (det == 0) {
        fail(Hypothesis1Clause::kDegenerateDeterminant, form_str(forms[i]) + ", " + form_str(forms[j]));
        continue;
      }
      for (const auto& q : distinct_prime_factors(det)) {
        for (const auto& f : forms) {
          if (f.a % q != 0) {
            std::ostringstream os;
            os << q << " | det(" << form_str(forms[i]) << ", " << form_str(forms[j]) << ") = " << det
               << " but " << q << " does not divide " << f.a;
            fail(Hypothesis1Clause::kDeterminantPrime, os.str());
            break;
          }
        }
      }
    }
  }
  return report;
}

NormalizedTuple normalize(const KTuple& tuple) {
  const auto adm = is_admissible(tuple);
  if (!adm.admissible) throw InadmissibleTupleError("tuple is not admissible");

  const auto& forms = tuple.forms();
  std::set<BigInt> primes;
  for (std::uint32_t p : primes_up_to(tuple.k())) primes.insert(p);
  for (const auto& f : forms) {
    auto ps = distinct_prime_factors(f.a);
    primes.insert(ps.begin(), ps.end());
  }
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      const BigInt det = forms[i].a * forms[j].b - forms[j].a * forms[i].b;
      if (det == 0)
        throw DegenerateTupleError("forms " + form_str(forms[i]) + " and " + form_str(forms[j]) +
                                   " have zero determinant");
      auto ps = distinct_prime_factors(det);
      primes.insert(ps.begin(), ps.end());
    }
  }

  auto product_of_a = [](const std::vector<LinearForm>& fs) {
    BigInt A = 1;
    for (const auto& f : fs) A *= f.a;
    return A;
  };

  if (hypothesis1_check(tuple).ok) return {tuple, 1, 0, product_of_a(forms)};

  // CRT: B = c_p mod p for each p, with c_p the least residue where Pi(c_p) != 0.
  BigInt M = 1, B = 0;
  for (const auto& p : primes) {
    BigInt c = 0;
    for (; c < p; ++c) {
      bool root = false;
      for (const auto& f : forms)
        if (f(c) % p == 0) {
          root = true;
          break;
        }
      if (!root) break;
    }
    if (c == p) throw InadmissibleTupleError("no admissible residue (internal)");
    // Solve B' = B mod M, B' = c mod p.
    BigInt t = ((c - B) % p + p) % p;
    const BigInt inv = [&] {
      // M^{-1} mod p by Fermat (p prime).
      return boost::multiprecision::powm(BigInt(M % p), BigInt(p - 2), p);
    }();
    t = (t * inv) % p;
    B += M * t;
    M *= p;
    B %= M;
  }

  std::vector<LinearForm> out;
  out.reserve(forms.size());
  for (const auto& f : forms) out.push_back({f.a * M, f.a * B + f.b});
  KTuple result(std::move(out));
  return {result, M, B, product_of_a(result.forms())};
}

SingularSeriesValue singular_series(const NormalizedTuple& nt, std::uint64_t prime_bound) {
  const auto k = static_cast<double>(nt.tuple.k());
  if (prime_bound < nt.tuple.k())
    throw std::invalid_argument("singular_series: prime_bound must be at least k");

  const auto a_primes = distinct_prime_factors(nt.bigA);
  std::set<std::uint64_t> divides_A;
  long double log_value = 0.0L;
  for (const auto& q : a_primes) {
    const long double p = static_cast<long double>(q);
    log_value -= k * std::log1p(-1.0L / p);
    if (q <= prime_bound) divides_A.insert(static_cast<std::uint64_t>(q));
  }
  for (std::uint32_t p : primes_up_to(prime_bound)) {
    if (divides_A.count(p)) continue;
    const long double lp = p;
    const long double local = 1.0L - k / lp;
    if (local <= 0.0L)
      throw std::domain_error("singular_series: non-positive local factor at p = " +
                              std::to_string(p) + " (tuple not normalized?)");
    log_value += std::log(local) - k * std::log1p(-1.0L / lp);
  }

  SingularSeriesValue out;
  out.value = static_cast<double>(std::exp(log_value));
  out.prime_bound = prime_bound;
  constexpr double kTailConstant = 2.0;
  out.tail_bound = out.value * std::expm1(kTailConstant * k * k / static_cast<double>(prime_bound));
  return out;
}

}  // namespace aptuple
