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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace aptuple {

/// Stateless counter-based generator: draw (counter, lane) always yields the
/// same value for a given seed, independent of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter, std::uint32_t lane) const {
    std::uint64_t z = mix(seed_ ^ 0x243F6A8885A308D3ULL);
    z = mix(z + counter * 0x9E3779B97F4A7C15ULL);
    z = mix(z + (static_cast<std::uint64_t>(lane) + 1) * 0xD1B54A32D192ED03ULL);
    return z;
  }

  /// Uniform in [0, 1), 53 bits.
  double uniform(std::uint64_t counter, std::uint32_t lane) const {
    return static_cast<double>(bits(counter, lane) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t seed_;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

namespace detail {

struct Moments {
  double n = 0, mean = 0, m2 = 0;
};

inline Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Moments r;
  r.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * (b.n / r.n);
  r.m2 = a.m2 + b.m2 + delta * delta * (a.n * b.n / r.n);
  return r;
}

inline Moments pairwise_reduce(std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(pairwise_reduce(v, lo, mid), pairwise_reduce(v, mid, hi));
}

}  // namespace detail

inline constexpr std::uint64_t kMonteCarloChunk = 4096;

/// Mean and standard error of sample(i) for i in [0, n). Samples are grouped
/// in fixed chunks and chunk moments are merged pairwise, so the result is
/// identical for any thread count.
template <class Sample>
MeanEstimate monte_carlo_mean(const Sample& sample, std::uint64_t n, unsigned threads = 1) {
  MeanEstimate out;
  out.samples = n;
  if (n == 0) return out;
  const std::uint64_t chunks = (n + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<detail::Moments> moments(chunks);
  auto work = [&](std::uint64_t first) {
    for (std::uint64_t c = first; c < chunks; c += std::max(1u, threads)) {
      detail::Moments m;
      const std::uint64_t end = std::min(n, (c + 1) * kMonteCarloChunk);
      for (std::uint64_t i = c * kMonteCarloChunk; i < end; ++i) {
        const double x = sample(i);
        m.n += 1;
        const double d = x - m.mean;
        m.mean += d / m.n;
        m.m2 += d * (x - m.mean);
      }
      moments[c] = m;
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  const detail::Moments total = detail::pairwise_reduce(moments, 0, moments.size());
  out.mean = total.mean;
  out.std_error = total.n > 1 ? std::sqrt(total.m2 / (total.n - 1) / total.n) : 0.0;
  return out;
}

}  // namespace aptuple
