#pragma once

// Exact arithmetic in Q[zeta_N], used so that Fourier-side identities whose
// value is rational can be checked without floating-point tolerance.

#include <boxgal/core.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace boxgal {

/// Integer coefficients of the N-th cyclotomic polynomial, little-endian.
inline std::vector<BigInt> cyclotomic_polynomial(std::uint64_t n) {
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<BigInt> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (std::uint64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto phi = cyclotomic_polynomial(d);
    const std::size_t dp = phi.size() - 1;
    std::vector<BigInt> quo(num.size() - dp, 0);
    for (std::size_t k = quo.size(); k-- > 0;) {
      BigInt t = num[k + dp];  // phi is monic
      quo[k] = t;
      if (t == 0) continue;
      for (std::size_t j = 0; j <= dp; ++j) num[k + j] -= t * phi[j];
    }
    num = std::move(quo);
  }
  return num;
}

/// Element sum_k c_k zeta_N^k of the group ring Q[Z/N]; equality and
/// exact_value() are taken in the field Q(zeta_N).
template <class S>
class Cyclotomic {
 public:
  explicit Cyclotomic(std::uint64_t order) : order_(order), c_(order, S(0)) {}

  static Cyclotomic unit(std::uint64_t order, std::uint64_t k) {
    Cyclotomic z(order);
    z.c_[k % order] = S(1);
    return z;
  }

  static Cyclotomic scalar(std::uint64_t order, const S& s) {
    Cyclotomic z(order);
    z.c_[0] = s;
    return z;
  }

  std::uint64_t order() const { return order_; }
  const std::vector<S>& coeffs() const { return c_; }

  /// Adds s * zeta^k.
  void add_term(std::uint64_t k, const S& s) { c_[k % order_] += s; }

  Cyclotomic& operator+=(const Cyclotomic& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }

  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    Cyclotomic r(a.order_);
    const std::uint64_t n = a.order_;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (a.c_[i] == 0) continue;
      for (std::uint64_t j = 0; j < n; ++j) {
        if (b.c_[j] == 0) continue;
        r.c_[(i + j) % n] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  friend Cyclotomic operator*(const S& s, Cyclotomic a) {
    for (auto& v : a.c_) v *= s;
    return a;
  }

  /// Galois-free complex embedding zeta -> exp(2 pi i / N).
  Complex to_complex() const {
    Complex z = 0;
    for (std::uint64_t k = 0; k < order_; ++k)
      if (c_[k] != 0) z += to_double(c_[k]) * root_of_unity(k, order_);
    return z;
  }

  /// Coefficients of the canonical representative modulo Phi_N.
  std::vector<S> reduced() const {
    auto phi = cyclotomic_polynomial(order_);
    const std::size_t dp = phi.size() - 1;
    std::vector<S> r(c_);
    for (std::size_t k = r.size(); k-- > dp;) {
      S t = r[k];
      if (t == 0) continue;
      for (std::size_t j = 0; j <= dp; ++j) r[k - dp + j] -= t * S(phi[j]);
    }
    r.resize(dp);
    return r;
  }

  /// The value if this element is rational, otherwise nullopt.
  std::optional<S> exact_value() const {
    auto r = reduced();
    for (std::size_t k = 1; k < r.size(); ++k)
      if (r[k] != 0) return std::nullopt;
    return r.empty() ? S(0) : r[0];
  }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    return a.order_ == b.order_ && a.reduced() == b.reduced();
  }

 private:
  std::uint64_t order_;
  std::vector<S> c_;
};

}  // namespace boxgal
