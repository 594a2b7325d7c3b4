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

#include "aptuple/bound.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <thread>

namespace aptuple {

namespace {

BoundReport finish(const JReport& jr, const SievePoly& p, const SieveParams& params, const BoundOptions& opt) {
  BoundReport rep;
  rep.params = params;
  rep.poly = p;
  rep.jreport = jr;
  const double k = params.k;
  const double scale = params.r2 * k * (k - 1.0);
  rep.nu = (jr.J0 - scale * sum_Jr(jr, params.h)) / jr.J;
  rep.bound_real = rep.nu + k / params.r1;

  double var = 0.0;
  for (const auto& e : jr.Jr_extra)
    if (e.r <= params.h) var += e.std_error * e.std_error;
  rep.bound_std_error = scale * std::sqrt(var) / jr.J;

  rep.r_k = static_cast<long>(std::floor(rep.bound_real));
  if (rep.bound_std_error > 0.0) {
    const double spread = 3.0 * rep.bound_std_error;
    if (std::floor(rep.bound_real - spread) != std::floor(rep.bound_real + spread))
      throw IndeterminateFloorError(rep.bound_real, rep.bound_std_error);
  }
  const double frac = rep.bound_real - std::floor(rep.bound_real);
  const double margin = 10.0 * opt.tolerance + 3.0 * rep.bound_std_error;
  rep.boundary_warning = frac < margin || 1.0 - frac < margin;
  return rep;
}

void check_bound_inputs(const SievePoly& p, const SieveParams& params) {
  params.validate();
  if (params.h > 4) throw std::invalid_argument("h must be in 1..4");
  if (p.is_zero()) throw std::invalid_argument("J = 0 for the zero polynomial");
}

}  // namespace

BoundReport compute_bound(const SievePoly& p, const SieveParams& params, const BoundOptions& opt) {
  check_bound_inputs(p, params);
  return finish(compute_jreport(p, params, opt.mc, opt.tol), p, params, opt);
}

BoundReport compute_bound(const KTuple& tuple, const SievePoly& p, SieveParams params,
                          const BoundOptions& opt) {
  if (!is_admissible(tuple).admissible) throw InadmissibleTupleError("tuple is not admissible");
  params.k = static_cast<int>(tuple.k());
  return compute_bound(p, params, opt);
}

long table1_rk(int k) {
  static const std::map<int, long> rk{{3, 8}, {4, 11}, {5, 15}, {6, 18}, {7, 22}, {8, 26}, {9, 30}, {10, 34}};
  auto it = rk.find(k);
  if (it == rk.end()) throw std::out_of_range("no tabulated bound for k = " + std::to_string(k));
  return it->second;
}

const std::vector<Table3Entry>& table3_entries() {
  static const std::vector<Table3Entry> rows{
      {3, 3, SievePoly{1, 14}, 8.220},
      {4, 3, SievePoly{1, 22}, 11.653},
      {5, 3, SievePoly{1, 33}, 15.306},
      {6, 3, SievePoly{1, 10, 40}, 18.936},
      {7, 3, SievePoly{1, 10, 60}, 22.834},
      {8, 3, SievePoly{1, 10, 80}, 26.860},
      {9, 3, SievePoly{1, 30, 0, 300}, 30.942},
      {10, 3, SievePoly{1, 35, -10, 400}, 35.158},
      {10, 4, SievePoly{1, 10, 150}, 34.77},
  };
  return rows;
}

std::vector<Table3Row> reproduce_table3(const SieveParams& params, const BoundOptions& opt, double tolerance) {
  std::vector<Table3Row> out;
  for (const auto& e : table3_entries()) {
    SieveParams p = params;
    p.k = e.k;
    p.h = e.h;
    const BoundReport rep = compute_bound(e.poly, p, opt);
    Table3Row row;
    row.k = e.k;
    row.h = e.h;
    row.poly = e.poly;
    row.reference_value = e.reference_value;
    row.reference_floor = static_cast<long>(std::floor(e.reference_value));
    row.computed = rep.bound_real;
    row.computed_floor = rep.r_k;
    row.std_error = rep.bound_std_error;
    row.within = std::abs(rep.bound_real - e.reference_value) + 3.0 * rep.bound_std_error <= tolerance &&
                 row.computed_floor == row.reference_floor;
    out.push_back(row);
  }
  return out;
}

std::vector<BoundReport> h_sweep(const SievePoly& p, const SieveParams& params, const BoundOptions& opt,
                                 int max_h) {
  SieveParams top = params;
  top.h = max_h;
  check_bound_inputs(p, top);
  const JReport jr = compute_jreport(p, top, opt.mc, opt.tol);
  std::vector<BoundReport> out;
  for (int h = 1; h <= max_h; ++h) {
    SieveParams ph = params;
    ph.h = h;
    out.push_back(finish(jr, p, ph, opt));
  }
  return out;
}

namespace {

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  double norm = 0.0;
  std::vector<double> x;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.norm < b.norm;
}

SievePoly poly_from(const std::vector<double>& x) {
  std::vector<double> c{1.0};
  c.insert(c.end(), x.begin(), x.end());
  return SievePoly(std::move(c));
}

std::vector<double> seed_coefficients(int k, int degree) {
  const Table3Entry* nearest = nullptr;
  for (const auto& e : table3_entries()) {
    if (e.h != 3) continue;
    if (!nearest || std::abs(e.k - k) < std::abs(nearest->k - k)) nearest = &e;
  }
  std::vector<double> x(degree, 0.0);
  const auto c = nearest->poly.coeffs();
  for (int i = 1; i <= degree && i < static_cast<int>(c.size()); ++i) x[i - 1] = c[i];
  // Degree-truncated seeds of the cubic rows lose most of their mass; fall
  // back on a linear term of comparable size.
  if (degree >= 1 && std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) x[0] = 10.0;
  return x;
}

struct RestartResult {
  Candidate best;
  std::vector<double> history;  // objective per evaluation
  bool ok = false;
};

RestartResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          int max_evals) {
  RestartResult res;
  const std::size_t n = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    res.history.push_back(v);
    Candidate c{v, std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)), x};
    if (better(c, res.best)) res.best = c;
    return c;
  };

  std::vector<Candidate> simplex;
  simplex.push_back(eval(x0));
  if (!std::isfinite(simplex[0].value)) return res;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += 0.1 * std::max(std::abs(x0[i]), 1.0);
    simplex.push_back(eval(x));
  }

  while (static_cast<int>(res.history.size()) < max_evals) {
    std::sort(simplex.begin(), simplex.end(), better);
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (simplex[n].x[j] - centroid[j]);
      return x;
    };
    const Candidate refl = eval(along(-1.0));
    if (better(refl, simplex[0])) {
      const Candidate exp = eval(along(-2.0));
      simplex[n] = better(exp, refl) ? exp : refl;
    } else if (better(refl, simplex[n - 1])) {
      simplex[n] = refl;
    } else {
      const bool outside = better(refl, simplex[n]);
      const Candidate con = eval(along(outside ? -0.5 : 0.5));
      if (better(con, outside ? refl : simplex[n])) {
        simplex[n] = con;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          std::vector<double> x(n);
          for (std::size_t j = 0; j < n; ++j) x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
          simplex[i] = eval(x);
        }
      }
    }
    const double spread = std::abs(simplex.back().value - simplex.front().value);
    if (std::isfinite(spread) && spread < 1e-7) break;
  }
  res.ok = std::isfinite(res.best.value);
  return res;
}

}  // namespace

OptimizationRun optimize_poly(int k, int degree, const SieveParams& params, int restarts, std::uint64_t seed,
                              const BoundOptions& bopt, const OptimizeOptions& oopt) {
  if (degree < 0 || degree > SievePoly::kMaxDegree - 1) throw std::invalid_argument("degree must be in 0..7");
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  SieveParams base = params;
  base.k = k;
  base.validate();

  OptimizationRun run;
  run.degree = degree;
  run.restarts = restarts;

  auto objective = [&](const std::vector<double>& x) {
    try {
      return compute_bound(poly_from(x), base, bopt).bound_real;
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  if (degree == 0) {
    run.best = compute_bound(SievePoly{1.0}, base, bopt);
    run.trace.emplace_back(1, run.best.bound_real);
    return run;
  }

  const std::vector<double> anchor = seed_coefficients(k, degree);
  constexpr int kSeedAttempts = 5;
  std::vector<RestartResult> results(restarts);
  auto do_restart = [&](int r) {
    for (int attempt = 0; attempt < kSeedAttempts; ++attempt) {
      std::mt19937_64 gen(seed * 1000003ULL + static_cast<std::uint64_t>(r) * 101ULL + attempt);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::vector<double> x0 = anchor;
      if (r > 0 || attempt > 0) {
        const double scale = std::max(1.0, *std::max_element(anchor.begin(), anchor.end(),
                                                             [](double a, double b) { return std::abs(a) < std::abs(b); }));
        for (double& v : x0) v += oopt.perturbation * (v != 0.0 ? std::abs(v) : 0.1 * scale) * unit(gen);
      }
      RestartResult res = nelder_mead(objective, x0, oopt.max_evaluations);
      if (res.ok) {
        results[r] = std::move(res);
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, oopt.threads);
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r) do_restart(r);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int r = static_cast<int>(t); r < restarts; r += static_cast<int>(threads)) do_restart(r);
      });
    for (auto& th : pool) th.join();
  }

  int winner = -1;
  for (int r = 0; r < restarts; ++r) {
    if (!results[r].ok) continue;
    if (winner < 0 || better(results[r].best, results[winner].best)) winner = r;
  }
  if (winner < 0) throw std::runtime_error("optimize_poly: every restart failed");

  double best_so_far = std::numeric_limits<double>::infinity();
  int counter = 0;
  for (const auto& res : results)
    for (double v : res.history) {
      best_so_far = std::min(best_so_far, v);
      run.trace.emplace_back(++counter, best_so_far);
    }

  BoundOptions final_opt = bopt;
  if (base.h >= 4) final_opt.mc.samples *= 10;
  run.best = compute_bound(poly_from(results[winner].best.x), base, final_opt);
  return run;
}

}  // namespace aptuple
