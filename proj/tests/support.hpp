#pragma once

// Test-side generators and brute-force oracles. Nothing here calls the
// library route it is used to check.

#include <boxgal/boxgal.hpp>

#include <cstdint>
#include <vector>

namespace testsupport {

/// Seeded splitmix64 stream for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// uniform in [lo, hi]
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t pick(const std::vector<std::uint64_t>& v) { return v[next() % v.size()]; }

 private:
  std::uint64_t s_;
};

inline boxgal::FFPoly random_poly(Gen& g, const boxgal::PrimeField& f, int degree, bool monic) {
  std::vector<boxgal::Residue> c(static_cast<std::size_t>(degree + 1));
  for (auto& v : c) v = g.next() % f.p();
  if (monic) c.back() = 1;
  return boxgal::FFPoly(f, c);
}

/// Schoolbook product of coefficient vectors mod p.
inline std::vector<std::uint64_t> mul_mod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                          std::uint64_t p) {
  std::vector<std::uint64_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

/// Monic polynomial of degree n with lower coefficients = base-p digits of idx.
inline std::vector<std::uint64_t> monic_from_index(std::uint64_t idx, std::uint64_t p, unsigned n) {
  std::vector<std::uint64_t> c(n + 1, 0);
  for (unsigned k = 0; k < n; ++k) {
    c[k] = idx % p;
    idx /= p;
  }
  c[n] = 1;
  return c;
}

inline std::uint64_t index_from_monic(const std::vector<std::uint64_t>& c, std::uint64_t p) {
  std::uint64_t idx = 0;
  for (std::size_t k = c.size() - 1; k-- > 0;) idx = idx * p + c[k];
  return idx;
}

/// Moebius values on M_{p,n} by sieving products: every monic of degree n is
/// written as a product of irreducibles found at lower degrees.
/// Returns mu for all degrees 0..n as tables indexed like monic_from_index.
inline std::vector<std::vector<int>> moebius_by_products(std::uint64_t p, unsigned n) {
  std::vector<std::vector<int>> mu(n + 1);
  std::vector<std::vector<bool>> irreducible(n + 1);
  mu[0] = {1};
  irreducible[0] = {false};
  for (unsigned d = 1; d <= n; ++d) {
    std::uint64_t size = 1;
    for (unsigned k = 0; k < d; ++k) size *= p;
    // 2 = not yet written as a product
    std::vector<int> m(size, 2);
    // products A * B with 1 <= deg A <= deg B, deg A + deg B = d, A irreducible
    for (unsigned a = 1; 2 * a <= d; ++a) {
      const unsigned b = d - a;
      std::uint64_t sa = 1, sb = 1;
      for (unsigned k = 0; k < a; ++k) sa *= p;
      for (unsigned k = 0; k < b; ++k) sb *= p;
      for (std::uint64_t i = 0; i < sa; ++i) {
        if (!irreducible[a][i]) continue;
        const auto A = monic_from_index(i, p, a);
        for (std::uint64_t j = 0; j < sb; ++j) {
          const auto B = monic_from_index(j, p, b);
          const auto idx = index_from_monic(mul_mod(A, B, p), p);
          if (m[idx] != 2) continue;
          // A irreducible: mu(A B) = 0 if A | B, else -mu(B)
          bool divides = false;
          {
            // trial division of B by A
            std::vector<std::uint64_t> r = B;
            for (std::size_t top = r.size(); top-- >= A.size();) {
              const std::uint64_t c = r[top];
              if (c != 0)
                for (std::size_t t = 0; t < A.size(); ++t)
                  r[top - (A.size() - 1) + t] = (r[top - (A.size() - 1) + t] + (p - c) * A[t]) % p;
              if (top == A.size() - 1) break;
            }
            divides = std::all_of(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(A.size() - 1),
                                  [](std::uint64_t v) { return v == 0; });
          }
          m[idx] = divides ? 0 : -mu[b][j];
        }
      }
    }
    irreducible[d].assign(size, false);
    for (std::uint64_t i = 0; i < size; ++i)
      if (m[i] == 2) {
        m[i] = -1;
        irreducible[d][i] = true;
      }
    mu[d] = std::move(m);
  }
  return mu;
}

/// Number of monic irreducibles of degree n over F_p (Gauss).
inline std::int64_t gauss_count(std::int64_t p, unsigned n) {
  auto mobius_int = [](unsigned m) {
    int r = 1;
    for (unsigned q = 2; q * q <= m; ++q)
      if (m % q == 0) {
        m /= q;
        if (m % q == 0) return 0;
        r = -r;
      }
    if (m > 1) r = -r;
    return r;
  };
  std::int64_t s = 0;
  for (unsigned d = 1; d <= n; ++d)
    if (n % d == 0) {
      std::int64_t pw = 1;
      for (unsigned k = 0; k < n / d; ++k) pw *= p;
      s += mobius_int(d) * pw;
    }
  return s / n;
}

/// Determinant mod p by Gaussian elimination.
inline std::uint64_t det_mod(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
  const std::size_t n = a.size();
  std::uint64_t det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] % p == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = (p - det) % p;
    }
    det = det * a[c][c] % p;
    const std::uint64_t inv = boxgal::powmod(a[c][c], p - 2, p);
    for (std::size_t r = c + 1; r < n; ++r) {
      const std::uint64_t f = a[r][c] * inv % p;
      for (std::size_t k = c; k < n; ++k) a[r][k] = (a[r][k] + (p - f) * a[c][k]) % p;
    }
  }
  return det;
}

/// Resultant of coefficient vectors (little-endian, exact degrees) via the Sylvester matrix mod p.
inline std::uint64_t sylvester_resultant_mod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                             std::uint64_t p) {
  const std::size_t m = a.size() - 1, k = b.size() - 1;
  std::vector<std::vector<std::uint64_t>> s(m + k, std::vector<std::uint64_t>(m + k, 0));
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j <= m; ++j) s[r][r + j] = a[m - j] % p;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j <= k; ++j) s[k + r][r + j] = b[k - j] % p;
  return det_mod(s, p);
}

/// Closed-form discriminants of X^2 + bX + c and X^3 + aX^2 + bX + c.
inline boxgal::BigInt disc_quadratic(const boxgal::BigInt& b, const boxgal::BigInt& c) { return b * b - 4 * c; }

inline boxgal::BigInt disc_cubic(const boxgal::BigInt& a, const boxgal::BigInt& b, const boxgal::BigInt& c) {
  return a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
}

/// X^4 + b X^3 + c X^2 + d X + e
inline boxgal::BigInt disc_quartic(const boxgal::BigInt& b, const boxgal::BigInt& c, const boxgal::BigInt& d,
                                   const boxgal::BigInt& e) {
  using boxgal::BigInt;
  BigInt r = 256 * e * e * e - 192 * b * d * e * e - 128 * c * c * e * e + 144 * c * d * d * e - 27 * d * d * d * d;
  r += 144 * b * b * c * e * e - 6 * b * b * d * d * e - 80 * b * c * c * d * e + 18 * b * c * d * d * d;
  r += 16 * c * c * c * c * e - 4 * c * c * c * d * d - 27 * b * b * b * b * e * e + 18 * b * b * b * c * d * e;
  r += -4 * b * b * b * d * d * d - 4 * b * b * c * c * c * e + b * b * c * c * d * d;
  return r;
}

}  // namespace testsupport
