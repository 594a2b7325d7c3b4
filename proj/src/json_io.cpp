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

#include "aptuple/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aptuple/arith.hpp"

namespace aptuple {

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json bigint_json(const BigInt& v) {
  if (auto small = to_int64(v)) return *small;
  return v.str();
}

BigInt bigint_from_json(const Json& v) {
  if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d != std::floor(d) || std::abs(d) > 9.0e15) throw std::invalid_argument("coefficient is not an integer");
    return BigInt(static_cast<std::int64_t>(d));
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto body = (!s.empty() && s[0] == '-') ? s.substr(1) : s;
    if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad integer string '" + s + "'");
    return BigInt(s);
  }
  throw std::invalid_argument("coefficient must be an integer or a decimal string");
}

KTuple tuple_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("forms") || !j["forms"].is_array())
    throw std::invalid_argument("tuple JSON needs a \"forms\" array");
  std::vector<LinearForm> forms;
  for (const auto& f : j["forms"]) {
    if (!f.is_object() || !f.contains("a") || !f.contains("b"))
      throw std::invalid_argument("each form needs \"a\" and \"b\"");
    forms.push_back({bigint_from_json(f["a"]), bigint_from_json(f["b"])});
  }
  return KTuple(std::move(forms));
}

KTuple parse_tuple_arg(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot read tuple file " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("tuple JSON: ") + e.what());
  }
  return tuple_from_json(j);
}

Json to_json(const KTuple& t) {
  Json forms = Json::array();
  for (const auto& f : t.forms()) forms.push_back({{"a", bigint_json(f.a)}, {"b", bigint_json(f.b)}});
  return {{"forms", forms}};
}

Json to_json(const NormalizedTuple& nt) {
  Json j = to_json(nt.tuple);
  j["M"] = bigint_json(nt.M);
  j["B"] = bigint_json(nt.B);
  j["bigA"] = bigint_json(nt.bigA);
  return j;
}

Json to_json(const AdmissibilityReport& r) {
  Json profile = Json::object();
  for (const auto& [p, nu] : r.profile) profile[std::to_string(p)] = nu;
  return {{"admissible", r.admissible}, {"nu", profile}};
}

Json to_json(const Hypothesis1Report& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back({{"clause", to_string(x.clause)}, {"detail", x.detail}});
  return {{"ok", r.ok}, {"violations", v}};
}

Json to_json(const SingularSeriesValue& s) {
  return {{"value", num(s.value)}, {"prime_bound", s.prime_bound}, {"tail_bound", num(s.tail_bound)}};
}

Json to_json(const SieveParams& p) {
  return {{"k", p.k}, {"h", p.h}, {"r1", num(p.r1)}, {"r2", num(p.r2)}};
}

Json to_json(const SievePoly& p) {
  Json c = Json::array();
  for (double v : p.coeffs()) c.push_back(num(v));
  return {{"coeffs", c}, {"text", p.to_string()}};
}

namespace {

template <std::size_t N>
Json parts(double total, const std::array<double, N>& values) {
  Json a = Json::array();
  for (double v : values) a.push_back(num(v));
  return {{"total", num(total)}, {"parts", a}};
}

}  // namespace

Json to_json(const JReport& r) {
  Json jr = Json::array();
  for (const auto& e : r.Jr_extra)
    jr.push_back({{"r", e.r}, {"value", num(e.value)}, {"stderr", num(e.std_error)}, {"samples", e.samples}});
  return {{"J", num(r.J)},   {"J0", parts(r.J0, r.J0_parts)}, {"J1", num(r.J1)},
          {"J2", parts(r.J2, r.J2_parts)}, {"J3", parts(r.J3, r.J3_parts)}, {"Jr", jr}};
}

Json to_json(const BoundReport& r) {
  return {{"params", to_json(r.params)},
          {"poly", to_json(r.poly)},
          {"integrals", to_json(r.jreport)},
          {"nu", num(r.nu)},
          {"bound_real", num(r.bound_real)},
          {"bound_stderr", num(r.bound_std_error)},
          {"r_k", r.r_k},
          {"boundary_warning", r.boundary_warning}};
}

Json to_json(const std::vector<Table3Row>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back({{"k", r.k},
                 {"h", r.h},
                 {"poly", r.poly.to_string()},
                 {"reference", num(r.reference_value)},
                 {"reference_floor", r.reference_floor},
                 {"computed", num(r.computed)},
                 {"computed_floor", r.computed_floor},
                 {"stderr", num(r.std_error)},
                 {"within", r.within}});
  return a;
}

Json to_json(const OptimizationRun& run) {
  Json trace = Json::array();
  for (const auto& [i, v] : run.trace) trace.push_back({i, num(v)});
  return {{"degree", run.degree}, {"restarts", run.restarts}, {"best", to_json(run.best)}, {"trace", trace}};
}

Json to_json(const ScanReport& r) {
  Json hist = Json::object();
  for (const auto& [om, c] : r.histogram) hist[std::to_string(om)] = c;
  return {{"tuple", to_json(r.tuple)},   {"start", r.start},        {"end", r.end},
          {"target", r.target},          {"histogram", hist},       {"min_omega", r.min_omega},
          {"witnesses", r.witnesses},    {"target_hits", r.target_hits}};
}

Json to_json(const TheoremSample& s) {
  return {{"k", s.k}, {"target", s.target}, {"hit", s.hit}, {"scan", to_json(s.report)}};
}

Json to_json(const VerifySummary& s) {
  Json cases = Json::array();
  for (const auto& c : s.cases)
    cases.push_back({{"index", c.index},
                     {"seed", c.case_seed},
                     {"R2", c.R2},
                     {"k", c.k},
                     {"delta", c.delta},
                     {"direct", num(c.direct)},
                     {"diagonal", num(c.diagonal)},
                     {"rel_diff", num(c.rel_diff)},
                     {"direct_star", num(c.direct_star)},
                     {"diagonal_star", num(c.diagonal_star)},
                     {"rel_diff_star", num(c.rel_diff_star)},
                     {"ystar_rel_diff", num(c.ystar_rel_diff)},
                     {"roundtrip_rel_diff", num(c.roundtrip_rel_diff)},
                     {"pass", c.pass}});
  return {{"k", s.options.k},
          {"R2", s.options.R2},
          {"cases_requested", s.options.cases},
          {"seed", s.options.seed},
          {"tolerance", num(s.options.tolerance)},
          {"pass", s.pass},
          {"failures", s.failures},
          {"max_rel_diff", num(s.max_rel_diff)},
          {"cases", cases}};
}

Json to_json(const TrendReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"R2", p.R2},
                   {"lemma3_lhs", num(p.lemma3.lhs)},
                   {"lemma3_main", num(p.lemma3.main_term)},
                   {"lemma3_ratio", num(p.lemma3.ratio)},
                   {"lemma3_literal_main", num(p.lemma3.literal_main_term)},
                   {"lemma3_literal_ratio", num(p.lemma3.literal_ratio)},
                   {"T", num(p.T_value)},
                   {"T_main", num(p.T_main)},
                   {"T_ratio", num(p.T_ratio)}});
  return {{"k", r.k},
          {"bigA", r.bigA},
          {"sseries", num(r.sseries)},
          {"poly", to_json(r.poly)},
          {"points", pts},
          {"lemma3_ok", r.lemma3_ok},
          {"T_ok", r.T_ok},
          {"ok", r.ok},
          {"diagnostics", r.diagnostics}};
}

Json to_json(const LambdaBoundReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"R2", p.R2}, {"max_abs_lambda", num(p.max_abs_lambda)}, {"normalized", num(p.normalized)}});
  return {{"points", pts}, {"finite", r.finite}, {"trend_violated", r.trend_violated}};
}

}  // namespace aptuple
