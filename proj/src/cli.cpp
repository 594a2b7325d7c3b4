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

#include "aptuple/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "aptuple/bound.hpp"
#include "aptuple/json_io.hpp"
#include "aptuple/number_core.hpp"
#include "aptuple/omega_scan.hpp"
#include "aptuple/sieve_lab.hpp"

namespace aptuple::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<unsigned> threads;

  unsigned thread_count() const {
    if (threads) return std::max(1u, *threads);
    if (const char* env = std::getenv("SIEVE_LAB_THREADS")) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  std::uint64_t require_seed(const std::string& what) const {
    if (!seed) throw UsageError("--seed is required for " + what);
    return *seed;
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::uint32_t> parse_grid(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad grid value '" + item + "'");
    }
    if (used != item.size() || v < 2 || v > 4.0e9 || v != std::floor(v))
      throw UsageError("grid values must be integers in [2, 4e9]: '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

struct BoundArgs {
  int k = 4;
  int h = 3;
  std::string poly = "1";
  double r1 = 0.5;
  double r2 = 0.25;
  std::uint64_t samples = 1'000'000;
  std::string tuple;
};

void add_bound_flags(CLI::App* cmd, BoundArgs& a, bool with_poly) {
  cmd->add_option("--k", a.k, "tuple length")->check(CLI::Range(2, 1000));
  cmd->add_option("--h", a.h, "number of J_r terms (1..4)")->check(CLI::Range(1, 4));
  if (with_poly) cmd->add_option("--poly", a.poly, "coefficients c0,c1,... of P");
  cmd->add_option("--r1", a.r1, "level r1");
  cmd->add_option("--r2", a.r2, "level r2");
  cmd->add_option("--samples", a.samples, "Monte Carlo samples for J_r, r >= 4");
}

BoundOptions bound_options(const BoundArgs& a, const Globals& g, bool stochastic_default_seed) {
  BoundOptions opt;
  opt.mc.samples = a.samples;
  opt.mc.threads = g.thread_count();
  if (a.h >= 4 && !stochastic_default_seed) opt.mc.seed = g.require_seed("Monte Carlo (h >= 4)");
  else opt.mc.seed = g.seed.value_or(0);
  if (g.tolerance) opt.tolerance = *g.tolerance;
  return opt;
}

SieveParams sieve_params(const BoundArgs& a) {
  SieveParams p;
  p.k = a.k;
  p.h = a.h;
  p.r1 = a.r1;
  p.r2 = a.r2;
  return p;
}

void print_bound(std::ostream& out, const BoundReport& r) {
  out << "k = " << r.params.k << ", h = " << r.params.h << ", P = " << r.poly.to_string() << "\n";
  out << "  J  = " << fmt(r.jreport.J, 9) << "\n";
  out << "  J0 = " << fmt(r.jreport.J0, 9) << "\n";
  out << "  J1 = " << fmt(r.jreport.J1, 9) << "\n";
  out << "  J2 = " << fmt(r.jreport.J2, 9) << "\n";
  out << "  J3 = " << fmt(r.jreport.J3, 9) << "\n";
  for (const auto& e : r.jreport.Jr_extra)
    out << "  J" << e.r << " = " << fmt(e.value, 9) << " +- " << fmt(e.std_error, 9) << "\n";
  out << "bound_real = " << fmt(r.bound_real) << "\n";
  out << "r_k = " << r.r_k << (r.boundary_warning ? "  (warning: close to an integer)" : "") << "\n";
}

Json bound_json(const BoundReport& r, const BoundOptions& opt, const std::optional<KTuple>& tuple) {
  Json j = to_json(r);
  j["monte_carlo"] = {{"samples", opt.mc.samples}, {"seed", opt.mc.seed}};
  j["tolerance"] = num(opt.tolerance);
  if (tuple) j["tuple"] = to_json(*tuple);
  return j;
}

struct OptimizeArgs {
  BoundArgs bound;
  int degree = 2;
  int restarts = 8;
  int max_evals = 150;
};

void add_optimize_flags(CLI::App* cmd, OptimizeArgs& a) {
  add_bound_flags(cmd, a.bound, false);
  cmd->add_option("--degree", a.degree, "degree of P")->check(CLI::Range(0, 7));
  cmd->add_option("--restarts", a.restarts, "Nelder-Mead restarts")->check(CLI::Range(1, 10000));
  cmd->add_option("--max-evals", a.max_evals, "objective evaluations per restart")->check(CLI::Range(1, 1000000));
}

int do_optimize(const OptimizeArgs& a, const Globals& g, std::ostream& out) {
  const std::uint64_t seed = g.require_seed("optimize");
  BoundOptions bopt = bound_options(a.bound, g, true);
  bopt.mc.seed = seed;
  OptimizeOptions oopt;
  oopt.max_evaluations = a.max_evals;
  oopt.threads = g.thread_count();
  const auto run = optimize_poly(a.bound.k, a.degree, sieve_params(a.bound), a.restarts, seed, bopt, oopt);
  if (g.json) {
    Json j = to_json(run);
    j["seed"] = seed;
    j["max_evals"] = a.max_evals;
    emit(out, j);
  } else {
    out << "best after " << run.trace.size() << " evaluations:\n";
    print_bound(out, run.best);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Almost-prime k-tuple sieve toolkit", "aptuple"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "seed for stochastic paths");
  app.add_option("--tolerance", g.tolerance, "command-specific tolerance");
  app.add_option("--threads", g.threads, "worker threads (default: SIEVE_LAB_THREADS or all cores)");

  std::function<int()> action;

  std::string tuple_arg;
  auto* check = app.add_subcommand("check", "admissibility and normal-form conditions");
  check->add_option("--tuple", tuple_arg, "tuple JSON or @file")->required();
  check->callback([&] {
    action = [&] {
      const KTuple t = parse_tuple_arg(tuple_arg);
      const auto adm = is_admissible(t);
      const auto h1 = hypothesis1_check(t);
      if (g.json) {
        Json j{{"tuple", to_json(t)}};
        j["admissible"] = adm.admissible;
        j["nu"] = to_json(adm)["nu"];
        j["hypothesis1"] = to_json(h1);
        emit(out, j);
      } else {
        out << "admissible: " << (adm.admissible ? "true" : "false") << "\n";
        for (const auto& [p, nu] : adm.profile) out << "  nu_" << p << " = " << nu << "\n";
        out << "normal form: " << (h1.ok ? "true" : "false") << "\n";
        for (const auto& v : h1.violations) out << "  " << to_string(v.clause) << ": " << v.detail << "\n";
      }
      return kExitOk;
    };
  });

  auto* normalize_cmd = app.add_subcommand("normalize", "substitute n -> Mn + B to reach normal form");
  normalize_cmd->add_option("--tuple", tuple_arg, "tuple JSON or @file")->required();
  normalize_cmd->callback([&] {
    action = [&] {
      const auto nt = normalize(parse_tuple_arg(tuple_arg));
      if (g.json) {
        emit(out, to_json(nt));
      } else {
        out << "M = " << nt.M << ", B = " << nt.B << ", A = " << nt.bigA << "\n";
        for (const auto& f : nt.tuple.forms()) out << "  " << f.a << " n + " << f.b << "\n";
      }
      return kExitOk;
    };
  });

  double prime_bound = 1e7;
  auto* sseries = app.add_subcommand("sseries", "singular series of the normalized tuple");
  sseries->add_option("--tuple", tuple_arg, "tuple JSON or @file")->required();
  sseries->add_option("--prime-bound", prime_bound, "largest prime in the product")->check(CLI::Range(2.0, 4.0e9));
  sseries->callback([&] {
    action = [&] {
      const auto nt = normalize(parse_tuple_arg(tuple_arg));
      const auto s = singular_series(nt, static_cast<std::uint64_t>(prime_bound));
      if (g.json) {
        Json j = to_json(s);
        j["normalized"] = to_json(nt);
        emit(out, j);
      } else {
        out << "S = " << fmt(s.value, 9) << " (primes <= " << s.prime_bound << ", tail <= " << s.tail_bound << ")\n";
      }
      return kExitOk;
    };
  });

  BoundArgs bargs;
  auto* bound_cmd = app.add_subcommand("bound", "sieve bound for a polynomial P");
  add_bound_flags(bound_cmd, bargs, true);
  bound_cmd->add_option("--tuple", bargs.tuple, "take k from an admissible tuple");
  OptimizeArgs oargs;
  auto* bound_opt = bound_cmd->add_subcommand("optimize", "minimize the bound over P");
  add_optimize_flags(bound_opt, oargs);
  bound_opt->callback([&] { action = [&] { return do_optimize(oargs, g, out); }; });
  bound_cmd->callback([&] {
    if (action) return;  // the optimize subcommand already set it
    action = [&] {
      const SievePoly p = SievePoly::parse(bargs.poly);
      const BoundOptions opt = bound_options(bargs, g, false);
      std::optional<KTuple> tuple;
      BoundReport r;
      if (!bargs.tuple.empty()) {
        tuple = parse_tuple_arg(bargs.tuple);
        r = compute_bound(*tuple, p, sieve_params(bargs), opt);
      } else {
        r = compute_bound(p, sieve_params(bargs), opt);
      }
      if (g.json) emit(out, bound_json(r, opt, tuple));
      else print_bound(out, r);
      return kExitOk;
    };
  });

  OptimizeArgs oargs_top;
  auto* optimize_cmd = app.add_subcommand("optimize", "minimize the bound over P");
  add_optimize_flags(optimize_cmd, oargs_top);
  optimize_cmd->callback([&] { action = [&] { return do_optimize(oargs_top, g, out); }; });

  std::uint64_t t3_samples = 1'000'000;
  auto* table3 = app.add_subcommand("table3", "recompute the reference bound table");
  table3->add_option("--samples", t3_samples, "Monte Carlo samples for the h = 4 row");
  table3->callback([&] {
    action = [&] {
      const double tol = g.tolerance.value_or(0.02);
      BoundOptions opt;
      opt.mc.samples = t3_samples;
      opt.mc.seed = g.seed.value_or(0);
      opt.mc.threads = g.thread_count();
      const auto rows = reproduce_table3(SieveParams{}, opt, tol);
      bool all = true;
      for (const auto& r : rows) all = all && r.within;
      if (g.json) {
        emit(out, Json{{"tolerance", num(tol)},
                       {"samples", opt.mc.samples},
                       {"seed", opt.mc.seed},
                       {"all_within", all},
                       {"rows", to_json(rows)}});
      } else {
        out << " k  h  P                      reference   computed   floor  ok\n";
        for (const auto& r : rows) {
          char line[160];
          std::snprintf(line, sizeof line, "%2d  %d  %-22s %9.3f  %9.4f   %2ld/%-2ld  %s\n", r.k, r.h,
                        r.poly.to_string().c_str(), r.reference_value, r.computed, r.reference_floor, r.computed_floor,
                        r.within ? "yes" : "NO");
          out << line;
        }
        out << (all ? "all rows within " : "rows outside ") << tol << "\n";
      }
      return all ? kExitOk : kExitVerification;
    };
  });

  auto* sievelab = app.add_subcommand("sievelab", "finite Selberg-weight identities and trends");
  sievelab->require_subcommand(1);
  VerifyOptions vopt;
  auto* verify = sievelab->add_subcommand("verify", "T_direct against T_diagonal on seeded random weights");
  verify->add_option("--k", vopt.k, "k (0 draws from {2, 3})");
  verify->add_option("--R2", vopt.R2, "largest R2")->check(CLI::Range(2u, 200u));
  verify->add_option("--cases", vopt.cases, "number of cases")->check(CLI::Range(0, 100000));
  verify->callback([&] {
    action = [&] {
      vopt.seed = g.require_seed("sievelab verify");
      vopt.threads = g.thread_count();
      if (g.tolerance) vopt.tolerance = *g.tolerance;
      const auto s = run_verify(vopt);
      if (g.json) {
        emit(out, to_json(s));
      } else {
        out << (s.pass ? "PASS" : "FAIL") << ": " << s.cases.size() - s.failures << "/" << s.cases.size()
            << " cases, max relative difference " << s.max_rel_diff << "\n";
        for (const auto& c : s.cases)
          if (!c.pass)
            out << "  case " << c.index << " seed " << c.case_seed << " R2 " << c.R2 << " k " << c.k << " delta "
                << c.delta << " rel " << c.rel_diff << " / " << c.rel_diff_star << "\n";
      }
      return s.pass ? kExitOk : kExitVerification;
    };
  });
  int trend_k = 2;
  std::string trend_grid = "1e3,1e4,1e5,1e6";
  std::string trend_poly = "1";
  std::uint64_t trend_A = 0;
  auto* trends = sievelab->add_subcommand("trends", "asymptotic ratios along an R2 grid");
  trends->add_option("--k", trend_k, "k")->check(CLI::Range(2, 20));
  trends->add_option("--R2", trend_grid, "comma-separated grid");
  trends->add_option("--poly", trend_poly, "coefficients of P");
  trends->add_option("--A", trend_A, "modulus A (default: product of primes <= k)");
  trends->callback([&] {
    action = [&] {
      const auto rep = run_trends(trend_k, parse_grid(trend_grid), SievePoly::parse(trend_poly), trend_A);
      if (g.json) {
        emit(out, to_json(rep));
      } else {
        out << "k = " << rep.k << ", A = " << rep.bigA << ", S = " << fmt(rep.sseries, 7) << "\n";
        out << "      R2   sum 1/f1 ratio   (A/phi(A) form)   T ratio\n";
        for (const auto& p : rep.points) {
          char line[128];
          std::snprintf(line, sizeof line, "%8u   %14.6f   %15.6f   %7.4f\n", p.R2, p.lemma3.ratio,
                        p.lemma3.literal_ratio, p.T_ratio);
          out << line;
        }
        for (const auto& d : rep.diagnostics) out << "  " << d << "\n";
        out << (rep.ok ? "trends OK" : "trends FAILED") << "\n";
      }
      return rep.ok ? kExitOk : kExitVerification;
    };
  });
  std::uint64_t s0_N = 10000;
  std::uint32_t s0_R2 = 50;
  std::string s0_poly = "1,14";
  auto* s0 = sievelab->add_subcommand("s0", "S0 by scanning against S0 by residue counting");
  s0->add_option("--tuple", tuple_arg, "tuple JSON or @file")->required();
  s0->add_option("--N", s0_N, "range [N, 2N]")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));
  s0->add_option("--R2", s0_R2, "R2")->check(CLI::Range(2u, 100u));
  s0->add_option("--poly", s0_poly, "coefficients of P");
  s0->callback([&] {
    action = [&] {
      const KTuple t = parse_tuple_arg(tuple_arg);
      const auto nt = normalize(t);
      const auto bigA = to_int64(nt.bigA);
      if (!bigA) throw std::invalid_argument("A does not fit in 64 bits");
      const MultiplicativeTables tables(s0_R2, static_cast<int>(t.k()), static_cast<std::uint64_t>(*bigA));
      const double S = singular_series(nt).value;
      const auto w = build_weights(SievePoly::parse(s0_poly), tables, S);
      const auto c = s0_identity_check(t, s0_N, tables, w.lambda);
      const double tol = g.tolerance.value_or(1e-9);
      const bool ok = c.rel_diff <= tol;
      if (g.json) {
        emit(out, Json{{"tuple", to_json(t)},
                       {"N", s0_N},
                       {"R2", s0_R2},
                       {"poly", to_json(SievePoly::parse(s0_poly))},
                       {"scan", num(c.scan_value)},
                       {"lattice", num(c.lattice_value)},
                       {"rel_diff", num(c.rel_diff)},
                       {"pass", ok}});
      } else {
        out << "scan = " << fmt(c.scan_value, 4) << ", lattice = " << fmt(c.lattice_value, 4)
            << ", relative difference " << c.rel_diff << (ok ? "  PASS" : "  FAIL") << "\n";
      }
      return ok ? kExitOk : kExitVerification;
    };
  });
  int lb_k = 3;
  std::string lb_poly = "1,14";
  std::string lb_grid = "1e2,1e3,1e4";
  auto* lb = sievelab->add_subcommand("lambda", "max |lambda_d| / (log R2)^k along a grid");
  lb->add_option("--k", lb_k, "k")->check(CLI::Range(2, 20));
  lb->add_option("--poly", lb_poly, "coefficients of P");
  lb->add_option("--R2", lb_grid, "comma-separated grid");
  lb->callback([&] {
    action = [&] {
      const std::uint64_t A = primorial(lb_k);
      const auto rep =
          lambda_bound_report(SievePoly::parse(lb_poly), lb_k, A, context_singular_series(lb_k, A), parse_grid(lb_grid));
      if (g.json) {
        emit(out, to_json(rep));
      } else {
        for (const auto& p : rep.points) out << p.R2 << "  " << fmt(p.normalized) << "\n";
        if (rep.trend_violated) out << "warning: normalized maximum increased along the grid\n";
      }
      return rep.finite ? kExitOk : kExitVerification;
    };
  });

  std::uint64_t scan_start = 0, scan_end = 0;
  std::optional<long> scan_target;
  auto* scan_cmd = app.add_subcommand("scan", "Omega(Pi(n)) over a range");
  scan_cmd->add_option("--tuple", tuple_arg, "tuple JSON or @file")->required();
  scan_cmd->add_option("--start", scan_start, "first n")->required();
  scan_cmd->add_option("--end", scan_end, "last n")->required();
  scan_cmd->add_option("--target", scan_target, "count n with Omega <= target (default: tabulated r_k)");
  scan_cmd->callback([&] {
    action = [&] {
      const KTuple t = parse_tuple_arg(tuple_arg);
      Json j;
      ScanReport rep = [&] {
        if (scan_target) return scan(t, scan_start, scan_end, *scan_target, g.thread_count());
        return verify_theorem_sample(t, scan_start, scan_end, g.thread_count()).report;
      }();
      if (g.json) {
        emit(out, to_json(rep));
      } else {
        out << "n in [" << rep.start << ", " << rep.end << "], min Omega = " << rep.min_omega << ", hits (<= "
            << rep.target << ") = " << rep.target_hits << "\n";
        out << "witnesses:";
        for (auto n : rep.witnesses) out << " " << n;
        out << "\nhistogram:";
        for (const auto& [om, c] : rep.histogram) out << " " << om << ":" << c;
        out << "\n";
      }
      return kExitOk;
    };
  });

  std::vector<std::string> argv_store{"aptuple"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  if (!action) {
    err << app.help();
    return kExitUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IndeterminateFloorError& e) {
    err << "error: " << e.what() << "; increase --samples\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace aptuple::cli
