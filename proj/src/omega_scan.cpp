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

#include "aptuple/omega_scan.hpp"

#include <unistd.h>

#include <algorithm>
#include <climits>
#include <exception>
#include <thread>

#include "aptuple/arith.hpp"
#include "aptuple/bound.hpp"

namespace aptuple {

SpfTable build_spf(std::uint64_t limit, std::uint64_t max_bytes) {
  if (limit > kMaxSpfLimit) throw std::invalid_argument("spf limit exceeds 2^31");
  const std::uint64_t required = (limit + 1) * sizeof(std::uint32_t);
  if (max_bytes == 0) {
    const long pages = sysconf(_SC_PHYS_PAGES), page = sysconf(_SC_PAGE_SIZE);
    max_bytes = (pages > 0 && page > 0) ? static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page) / 2
                                        : std::uint64_t{1} << 32;
  }
  if (required > max_bytes) throw SpfMemoryError(required, max_bytes);
  SpfTable t;
  t.limit = static_cast<std::uint32_t>(std::min<std::uint64_t>(limit, UINT32_MAX));
  t.spf = linear_sieve_spf(t.limit);
  return t;
}

int omega(std::uint64_t n, const SpfTable& spf) {
  if (n < 1 || n > spf.limit) throw std::out_of_range("omega: " + std::to_string(n) + " outside the table");
  int count = 0;
  while (n > 1) {
    n /= spf.spf[n];
    ++count;
  }
  return count;
}

namespace {

struct Chunk {
  std::map<int, std::uint64_t> histogram;
  int min_omega = INT_MAX;
  std::vector<std::uint64_t> witnesses;
  std::uint64_t hits = 0;
};

}  // namespace

ScanReport scan(const KTuple& tuple, std::uint64_t start, std::uint64_t end, long target, unsigned threads,
                const SpfTable* spf) {
  if (end < start) throw std::invalid_argument("scan range is empty");
  std::vector<std::pair<std::int64_t, std::int64_t>> forms;
  __int128 largest = 0;
  for (const auto& L : tuple.forms()) {
    const auto a = to_int64(L.a), b = to_int64(L.b);
    if (!a || !b) throw std::invalid_argument("form coefficients must fit in 64 bits");
    const __int128 lo = static_cast<__int128>(*a) * start + *b;
    const __int128 hi = static_cast<__int128>(*a) * end + *b;
    if (lo <= 0 || hi <= 0) throw std::invalid_argument("a form is non-positive on the scan range");
    largest = std::max({largest, lo, hi});
    forms.emplace_back(*a, *b);
  }
  if (largest > static_cast<__int128>(kMaxSpfLimit))
    throw std::invalid_argument("form values exceed the 2^31 table cap");

  SpfTable owned;
  if (!spf || spf->limit < largest) {
    owned = build_spf(static_cast<std::uint64_t>(largest));
    spf = &owned;
  }

  const std::uint64_t count = end - start + 1;
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count)));
  std::vector<Chunk> chunks(workers);
  auto work = [&](unsigned w) {
    Chunk& c = chunks[w];
    const std::uint64_t lo = start + count * w / workers;
    const std::uint64_t hi = start + count * (w + 1) / workers;
    for (std::uint64_t n = lo; n < hi; ++n) {
      int total = 0;
      for (const auto& [a, b] : forms)
        total += omega(static_cast<std::uint64_t>(a * static_cast<std::int64_t>(n) + b), *spf);
      ++c.histogram[total];
      if (total <= target) ++c.hits;
      if (total < c.min_omega) {
        c.min_omega = total;
        c.witnesses.clear();
      }
      if (total == c.min_omega && c.witnesses.size() < kMaxWitnesses) c.witnesses.push_back(n);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  ScanReport rep{tuple, start, end, target, {}, INT_MAX, {}, 0};
  for (const auto& c : chunks) {
    for (const auto& [om, cnt] : c.histogram) rep.histogram[om] += cnt;
    rep.target_hits += c.hits;
    rep.min_omega = std::min(rep.min_omega, c.min_omega);
  }
  for (const auto& c : chunks)
    if (c.min_omega == rep.min_omega)
      for (auto n : c.witnesses)
        if (rep.witnesses.size() < kMaxWitnesses) rep.witnesses.push_back(n);
  return rep;
}

TheoremSample verify_theorem_sample(const KTuple& tuple, std::uint64_t start, std::uint64_t end, unsigned threads) {
  if (!is_admissible(tuple).admissible) throw InadmissibleTupleError("tuple is not admissible");
  const int k = static_cast<int>(tuple.k());
  const long target = table1_rk(k);
  TheoremSample s{k, target, scan(tuple, start, end, target, threads), false};
  s.hit = s.report.target_hits > 0;
  return s;
}

}  // namespace aptuple
