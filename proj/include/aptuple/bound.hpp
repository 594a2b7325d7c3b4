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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aptuple/j_integrals.hpp"
#include "aptuple/number_core.hpp"
#include "aptuple/poly.hpp"

namespace aptuple {

struct BoundOptions {
  MonteCarloOptions mc;
  JTolerances tol;
  /// boundary_warning fires when bound_real is within 10 * tolerance of an
  /// integer.
  double tolerance = 1e-6;
};

struct BoundReport {
  SieveParams params;
  SievePoly poly;
  JReport jreport;
  double nu = 0.0;
  double bound_real = 0.0;
  long r_k = 0;
  bool boundary_warning = false;
  double bound_std_error = 0.0;  // from Monte Carlo J_r, r >= 4
};

class IndeterminateFloorError : public std::runtime_error {
 public:
  IndeterminateFloorError(double bound, double std_error)
      : std::runtime_error("Monte Carlo error too large to fix the floor of " + std::to_string(bound) +
                           " (stderr " + std::to_string(std_error) + ")"),
        bound_(bound),
        std_error_(std_error) {}
  double bound() const { return bound_; }
  double std_error() const { return std_error_; }

 private:
  double bound_, std_error_;
};

/// nu = (J0 - r2 k (k-1) sum_{r<=h} J_r) / J; bound_real = nu + k/r1.
/// Requires h in 1..4 and P nonzero.
BoundReport compute_bound(const SievePoly& p, const SieveParams& params, const BoundOptions& opt = {});

/// Same, taking k from an admissible tuple (params.k is overwritten).
BoundReport compute_bound(const KTuple& tuple, const SievePoly& p, SieveParams params,
                          const BoundOptions& opt = {});

/// Floor bounds for k = 3..10.
long table1_rk(int k);

struct Table3Row {
  int k = 0;
  int h = 3;
  SievePoly poly;
  double reference_value = 0.0;
  long reference_floor = 0;
  double computed = 0.0;
  long computed_floor = 0;
  double std_error = 0.0;
  bool within = false;
};

struct Table3Entry {
  int k;
  int h;
  SievePoly poly;
  double reference_value;
};

/// Reference rows: k = 3..10 with h = 3, then k = 10 with h = 4.
const std::vector<Table3Entry>& table3_entries();

/// params supplies r1, r2; k and h come from each row.
std::vector<Table3Row> reproduce_table3(const SieveParams& params, const BoundOptions& opt,
                                        double tolerance);

struct OptimizationRun {
  int degree = 0;
  int restarts = 0;
  BoundReport best;
  std::vector<std::pair<int, double>> trace;  // (evaluation, best-so-far bound_real)
};

struct OptimizeOptions {
  int max_evaluations = 150;
  double perturbation = 0.3;  // relative, for restarts after the first
  unsigned threads = 1;
};

/// Nelder-Mead on (c_1, ..., c_degree) with c_0 = 1, multi-start from
/// perturbed reference polynomials. Objective is bound_real.
OptimizationRun optimize_poly(int k, int degree, const SieveParams& params, int restarts,
                              std::uint64_t seed, const BoundOptions& bopt = {},
                              const OptimizeOptions& oopt = {});

/// compute_bound for h = 1..max_h (bound_real is non-increasing in h).
std::vector<BoundReport> h_sweep(const SievePoly& p, const SieveParams& params, const BoundOptions& opt = {},
                                 int max_h = 3);

}  // namespace aptuple
