#pragma once

// Prime sieve and the analytic number theory estimates used by the bound
// evaluators: Mertens, the prime number theorem, and two products over
// dyadic prime windows.

#include <boxgal/core.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace boxgal {

/// Meissel-Mertens constant, 10 decimals (OEIS A077761: 0.2614972128476...).
inline constexpr double kMeisselMertens = 0.2614972128;

inline constexpr std::uint64_t kDefaultSieveLimit = 100'000'000;

/// Primality of every integer up to `limit`, one bit per odd number.
class SieveTable {
 public:
  explicit SieveTable(std::uint64_t limit) : limit_(limit), bits_(limit / 128 + 1, ~0ull) {
    // bit i stands for 2i+1
    clear(0);
    for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit_; ++i) {
      if (!test(i)) continue;
      const std::uint64_t p = 2 * i + 1;
      for (std::uint64_t m = p * p; m <= limit_; m += 2 * p) clear(m / 2);
    }
  }

  std::uint64_t limit() const { return limit_; }

  bool is_prime(std::uint64_t x) const {
    if (x > limit_) throw DomainError("query " + std::to_string(x) + " exceeds the sieve limit " + std::to_string(limit_));
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    return test(x / 2);
  }

  /// Primes p with lo < p <= hi.
  std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const {
    if (hi > limit_) throw DomainError("upper end " + std::to_string(hi) + " exceeds the sieve limit");
    std::vector<std::uint64_t> out;
    if (lo < 2 && hi >= 2) out.push_back(2);
    for (std::uint64_t x = std::max<std::uint64_t>(3, lo + 1) | 1; x <= hi; x += 2)
      if (test(x / 2)) out.push_back(x);
    return out;
  }

 private:
  bool test(std::uint64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
  void clear(std::uint64_t i) { bits_[i >> 6] &= ~(1ull << (i & 63)); }

  std::uint64_t limit_;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

struct SharedSieve {
  std::mutex mu;
  std::shared_ptr<const SieveTable> table;
  std::uint64_t max_limit = kDefaultSieveLimit;
};

inline SharedSieve& shared_sieve_state() {
  static SharedSieve s;
  return s;
}

}  // namespace detail

/// Largest limit the shared sieve may grow to.
inline void set_sieve_limit(std::uint64_t limit) {
  auto& s = detail::shared_sieve_state();
  std::lock_guard lock(s.mu);
  s.max_limit = limit;
}

/// Process-wide sieve covering at least `needed`; built lazily, then read-only.
inline std::shared_ptr<const SieveTable> shared_sieve(std::uint64_t needed) {
  auto& s = detail::shared_sieve_state();
  std::lock_guard lock(s.mu);
  if (needed > s.max_limit)
    throw DomainError("x = " + std::to_string(needed) + " exceeds the sieve limit " + std::to_string(s.max_limit));
  if (!s.table || s.table->limit() < needed) {
    std::uint64_t target = std::max<std::uint64_t>(needed, 1 << 16);
    if (s.table) target = std::max(target, std::min(s.max_limit, 2 * s.table->limit()));
    s.table = std::make_shared<const SieveTable>(std::min(target, s.max_limit));
  }
  return s.table;
}

inline std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  return shared_sieve(hi)->primes_in(lo, hi);
}

inline std::uint64_t prime_pi(std::uint64_t x) { return primes_in(0, x).size(); }

/// theta(x) = sum_{p <= x} log p
inline double chebyshev_theta(std::uint64_t x) {
  double t = 0;
  for (auto p : primes_in(0, x)) t += std::log(static_cast<double>(p));
  return t;
}

struct MertensReport {
  std::uint64_t x = 0;
  double sum = 0;
  double main_term = 0;  // log log x + M
  double residual = 0;   // sum - main_term
  double scaled_residual() const { return residual * std::log(static_cast<double>(x)); }
};

/// sum_{p <= x} 1/p against log log x + M.
inline MertensReport mertens_sum(std::uint64_t x) {
  if (x < 3) throw DomainError("mertens_sum needs x >= 3");
  MertensReport r;
  r.x = x;
  for (auto p : primes_in(0, x)) r.sum += 1.0 / static_cast<double>(p);
  r.main_term = std::log(std::log(static_cast<double>(x))) + kMeisselMertens;
  r.residual = r.sum - r.main_term;
  return r;
}

struct PntReport {
  std::uint64_t x = 0;
  std::uint64_t pi = 0;
  double x_over_log = 0;
  double theta = 0;
  /// |pi(x) - x/log x| log^2 x / x
  double pi_scaled_error = 0;
  /// |theta(x) - x| log x / x
  double theta_scaled_error = 0;
  double pi_relative_error = 0;
  double theta_relative_error = 0;
};

inline PntReport pnt_report(std::uint64_t x) {
  if (x < 2) throw DomainError("pnt_report needs x >= 2");
  PntReport r;
  r.x = x;
  const double xd = static_cast<double>(x);
  const double lx = std::log(xd);
  r.pi = prime_pi(x);
  r.x_over_log = xd / lx;
  r.theta = chebyshev_theta(x);
  r.pi_scaled_error = std::abs(static_cast<double>(r.pi) - r.x_over_log) * lx * lx / xd;
  r.theta_scaled_error = std::abs(r.theta - xd) * lx / xd;
  r.pi_relative_error = std::abs(static_cast<double>(r.pi) - r.x_over_log) / static_cast<double>(r.pi);
  r.theta_relative_error = std::abs(r.theta - xd) / xd;
  return r;
}

struct DyadicProductReport {
  double z = 0;
  std::size_t primes = 0;
  /// prod_{z<p<=2z} (1 + 1/omega(p))
  double product = 1;
  /// exp(sum 1/omega(p)), from 1 + t <= e^t
  double exp_bound = 1;
  double C = 0;
  /// whether omega(p) >= p/C across the window
  bool hypothesis_holds = true;
  /// exp(C sum 1/p)
  double mertens_bound = 1;
  bool product_le_exp() const { return product <= exp_bound * (1 + 1e-12); }
  bool product_le_mertens() const { return product <= mertens_bound * (1 + 1e-12); }
};

inline DyadicProductReport dyadic_product_bound(double z, const std::function<double(std::uint64_t)>& omega,
                                                double C) {
  if (!(z > 0)) throw DomainError("window parameter z must be positive");
  DyadicProductReport r;
  r.z = z;
  r.C = C;
  double sum_inv_omega = 0;
  double sum_inv_p = 0;
  for (auto p : primes_in(static_cast<std::uint64_t>(std::floor(z)), static_cast<std::uint64_t>(std::floor(2 * z)))) {
    const double w = omega(p);
    if (!(w > 0)) throw DomainError("omega(" + std::to_string(p) + ") must be positive");
    const double pd = static_cast<double>(p);
    r.product *= 1 + 1 / w;
    sum_inv_omega += 1 / w;
    sum_inv_p += 1 / pd;
    if (w * C < pd * (1 - 1e-12)) r.hypothesis_holds = false;
    ++r.primes;
  }
  r.exp_bound = std::exp(sum_inv_omega);
  r.mertens_bound = std::exp(C * sum_inv_p);
  return r;
}

struct ConvergentProductReport {
  double z = 0;
  double alpha = 0;
  double C = 0;
  std::size_t primes = 0;
  /// prod_{z<p<=2z} (1 + C p^-alpha)
  double product = 1;
  /// exp(sum C p^-alpha)
  double exp_bound = 1;
  /// C (pi(2z) - pi(z)) log z z^(alpha-1) / z
  double c_prime = 0;
  /// exp(C' z / (z^alpha log z))
  double closed_form = 1;
  bool product_le_exp() const { return product <= exp_bound * (1 + 1e-12); }
  bool exp_le_closed_form() const { return exp_bound <= closed_form * (1 + 1e-12); }
};

inline ConvergentProductReport convergent_product(double z, double alpha, double C) {
  if (!(alpha > 1)) throw DomainError("convergent_product needs alpha > 1");
  if (!(z > 1)) throw DomainError("convergent_product needs z > 1");
  if (C < 0) throw DomainError("C must be nonnegative");
  ConvergentProductReport r;
  r.z = z;
  r.alpha = alpha;
  r.C = C;
  double sum = 0;
  for (auto p : primes_in(static_cast<std::uint64_t>(std::floor(z)), static_cast<std::uint64_t>(std::floor(2 * z)))) {
    const double t = C * std::pow(static_cast<double>(p), -alpha);
    r.product *= 1 + t;
    sum += t;
    ++r.primes;
  }
  r.exp_bound = std::exp(sum);
  const double lz = std::log(z);
  r.c_prime = C * static_cast<double>(r.primes) * lz * std::pow(z, alpha - 1) / z;
  r.closed_form = std::exp(r.c_prime * z / (std::pow(z, alpha) * lz));
  return r;
}

}  // namespace boxgal
