#pragma once

// Seeded Monte Carlo sharding. Samples are cut into fixed blocks and each
// block draws from its own stream, so results do not depend on the thread
// count.

#include <boxgal/core.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace boxgal {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of stream `block` under a user seed.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ splitmix64(block + 0x5851F42D4C957F2Dull));
}

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound), bound >= 1, by rejection (no modulo bias).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_below needs a positive bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

inline constexpr std::uint64_t kSamplesPerBlock = 4096;

/// Runs fn(rng, begin, end) for every block of [0, samples) and returns the
/// per-block results in block order.
template <class R, class Fn>
std::vector<R> run_blocks(std::uint64_t samples, std::uint64_t seed, unsigned threads, Fn fn) {
  const std::uint64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<R> out(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Rng rng(stream_seed(seed, b));
        const std::uint64_t begin = b * kSamplesPerBlock;
        out[b] = fn(rng, begin, std::min(samples, begin + kSamplesPerBlock));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = blocks;
      }
    }
  };
  const unsigned t = std::max(1u, std::min<unsigned>(threads ? threads : default_threads(),
                                                      static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Wilson score interval.
struct WilsonInterval {
  double lo = 0;
  double hi = 1;
  double radius() const { return (hi - lo) / 2; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

inline WilsonInterval wilson(std::uint64_t hits, std::uint64_t n, double z = 1.96) {
  if (n == 0) throw DomainError("Wilson interval needs at least one sample");
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (ph + z2 / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
  // Rounding can leave the endpoints a hair inside the estimate at 0 or 1.
  return {std::min(ph, std::max(0.0, center - half)), std::max(ph, std::min(1.0, center + half))};
}

}  // namespace boxgal
