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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aptuple/number_core.hpp"

namespace aptuple {

struct SpfTable {
  std::uint32_t limit = 0;
  std::vector<std::uint32_t> spf;  // index 0..limit
};

class SpfMemoryError : public std::runtime_error {
 public:
  SpfMemoryError(std::uint64_t required, std::uint64_t available)
      : std::runtime_error("smallest-prime-factor table needs " + std::to_string(required) + " bytes, " +
                           std::to_string(available) + " available"),
        required_(required) {}
  std::uint64_t required_bytes() const { return required_; }

 private:
  std::uint64_t required_;
};

inline constexpr std::uint64_t kMaxSpfLimit = std::uint64_t{1} << 31;

/// Linear sieve up to limit (<= 2^31). max_bytes = 0 uses half of physical memory.
SpfTable build_spf(std::uint64_t limit, std::uint64_t max_bytes = 0);

/// Prime factors of n counted with multiplicity; omega(1) = 0.
/// Throws std::out_of_range outside [1, limit].
int omega(std::uint64_t n, const SpfTable& spf);

struct ScanReport {
  KTuple tuple;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  long target = 0;
  std::map<int, std::uint64_t> histogram;  // Omega(Pi(n)) -> count
  int min_omega = 0;
  std::vector<std::uint64_t> witnesses;  // first ten n attaining min_omega
  std::uint64_t target_hits = 0;
};

inline constexpr std::size_t kMaxWitnesses = 10;

/// Omega(Pi(n)) = sum_i Omega(L_i(n)) for n in [start, end]. Every form must be
/// positive on the range. The table is built on demand when spf is null.
ScanReport scan(const KTuple& tuple, std::uint64_t start, std::uint64_t end, long target, unsigned threads = 1,
                const SpfTable* spf = nullptr);

struct TheoremSample {
  int k = 0;
  long target = 0;
  ScanReport report;
  bool hit = false;
};

/// Admissibility gate, then a scan with target r_k for k = 3..10.
TheoremSample verify_theorem_sample(const KTuple& tuple, std::uint64_t start, std::uint64_t end,
                                    unsigned threads = 1);

}  // namespace aptuple
