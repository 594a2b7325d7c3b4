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

// JSON views of the library's reports. Keys keep insertion order and doubles
// are rounded to 12 significant digits, so equal inputs dump to equal bytes.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aptuple/bound.hpp"
#include "aptuple/number_core.hpp"
#include "aptuple/omega_scan.hpp"
#include "aptuple/sieve_lab.hpp"

namespace aptuple {

using Json = nlohmann::ordered_json;

Json num(double v);
Json bigint_json(const BigInt& v);
BigInt bigint_from_json(const Json& v);

/// {"forms":[{"a":1,"b":0},...]}; throws std::invalid_argument on bad input.
KTuple tuple_from_json(const Json& j);
/// Inline JSON text, or "@path" naming a file that holds it.
KTuple parse_tuple_arg(const std::string& arg);

Json to_json(const KTuple& t);
Json to_json(const NormalizedTuple& nt);
Json to_json(const AdmissibilityReport& r);
Json to_json(const Hypothesis1Report& r);
Json to_json(const SingularSeriesValue& s);
Json to_json(const SieveParams& p);
Json to_json(const SievePoly& p);
Json to_json(const JReport& r);
Json to_json(const BoundReport& r);
Json to_json(const std::vector<Table3Row>& rows);
Json to_json(const OptimizationRun& run);
Json to_json(const ScanReport& r);
Json to_json(const TheoremSample& s);
Json to_json(const VerifySummary& s);
Json to_json(const TrendReport& r);
Json to_json(const LambdaBoundReport& r);

}  // namespace aptuple
