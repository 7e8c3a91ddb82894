#pragma once

// The torus F_p((1/T)) / F_p[T] and its additive characters.

#include <boxgal/ffpoly.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace boxgal {

/// A finite, strictly increasing set of primes with product P.
class PrimeSet {
 public:
  explicit PrimeSet(std::vector<std::uint64_t> primes) : primes_(std::move(primes)) {
    if (primes_.empty()) throw DomainError("prime set must be nonempty");
    std::sort(primes_.begin(), primes_.end());
    if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end())
      throw DomainError("prime set entries must be distinct");
    product_ = 1;
    for (auto p : primes_) {
      if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
      if (product_ > UINT64_MAX / p) throw DomainError("product of the prime set overflows 64 bits");
      product_ *= p;
    }
  }

  PrimeSet(std::initializer_list<std::uint64_t> primes) : PrimeSet(std::vector<std::uint64_t>(primes)) {}

  const std::vector<std::uint64_t>& primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  std::uint64_t product() const { return product_; }
  std::uint64_t min() const { return primes_.front(); }
  std::uint64_t operator[](std::size_t i) const { return primes_[i]; }

  std::size_t index_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) throw DomainError(std::to_string(p) + " is not in the prime set");
    return static_cast<std::size_t>(it - primes_.begin());
  }

  bool contains(std::uint64_t p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  std::vector<std::uint64_t> primes_;
  std::uint64_t product_ = 1;
};

inline std::string to_string(const PrimeSet& ps) {
  std::string s = "{";
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + std::to_string(ps[i]);
  return s + "}";
}

/// Class in T_p kept as its canonical tail sum_{j<0} c_j T^j. Only nonzero
/// coefficients are stored.
class TorusElem {
 public:
  explicit TorusElem(PrimeField field) : field_(field) {}

  /// Reduces the Laurent polynomial sum_k coeffs[k] T^(lowest + k) into the
  /// torus by discarding every nonnegative power.
  static TorusElem from_laurent(PrimeField field, std::int64_t lowest, const std::vector<Residue>& coeffs) {
    TorusElem t(field);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      std::int64_t j = lowest + static_cast<std::int64_t>(k);
      if (j < 0) t.set(j, coeffs[k]);
    }
    return t;
  }

  static TorusElem monomial(PrimeField field, std::int64_t j, Residue c = 1) {
    TorusElem t(field);
    if (j < 0) t.set(j, c);
    return t;
  }

  const PrimeField& field() const { return field_; }
  const std::map<std::int64_t, Residue>& tail() const { return tail_; }
  bool is_zero() const { return tail_.empty(); }

  Residue coeff(std::int64_t j) const {
    auto it = tail_.find(j);
    return it == tail_.end() ? 0 : it->second;
  }

  friend TorusElem operator+(const TorusElem& a, const TorusElem& b) {
    if (!(a.field_ == b.field_)) throw FieldMismatch();
    TorusElem r = a;
    for (const auto& [j, c] : b.tail_) r.set(j, a.field_.add(a.coeff(j), c));
    return r;
  }

  friend TorusElem operator-(const TorusElem& a) {
    TorusElem r(a.field_);
    for (const auto& [j, c] : a.tail_) r.set(j, a.field_.neg(c));
    return r;
  }

  friend bool operator==(const TorusElem&, const TorusElem&) = default;

 private:
  void set(std::int64_t j, Residue c) {
    c %= field_.p();
    if (c == 0) {
      tail_.erase(j);
    } else {
      tail_[j] = c;
    }
  }

  PrimeField field_;
  std::map<std::int64_t, Residue> tail_;
};

/// res_p: the coefficient of T^-1.
inline Residue res(const TorusElem& xi) { return xi.coeff(-1); }

/// Class of T^-n * G * H.
inline TorusElem frac_mul(unsigned n, const FFPoly& g, const FFPoly& h) {
  FFPoly prod = g * h;
  return TorusElem::from_laurent(g.field(), -static_cast<std::int64_t>(n), prod.coeffs());
}

/// e_p(xi) = exp(2 pi i res(xi) / p).
inline Complex e_p(const TorusElem& xi) { return root_of_unity(res(xi), xi.field().p()); }

/// One torus element per prime of a PrimeSet.
class MultiTorusElem {
 public:
  MultiTorusElem(PrimeSet primes, std::vector<TorusElem> parts) : primes_(std::move(primes)), parts_(std::move(parts)) {
    if (parts_.size() != primes_.size()) throw DomainError("one torus component per prime required");
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (parts_[i].field().p() != primes_[i]) throw FieldMismatch();
  }

  const PrimeSet& primes() const { return primes_; }
  const std::vector<TorusElem>& parts() const { return parts_; }
  const TorusElem& operator[](std::size_t i) const { return parts_[i]; }

 private:
  PrimeSet primes_;
  std::vector<TorusElem> parts_;
};

/// Numerator k of psi_P = k / P, with 0 <= k < P.
inline std::uint64_t psi_numerator(const PrimeSet& primes, const std::vector<Residue>& residues) {
  const std::uint64_t big = primes.product();
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::uint64_t cofactor = big / primes[i];
    k = (k + mulmod(residues[i] % primes[i], cofactor, big)) % big;
  }
  return k;
}

/// psi_P(xi) = sum_p res(xi_p)/p mod 1, exactly.
inline Rational psi_P(const MultiTorusElem& xi) {
  std::vector<Residue> r;
  for (const auto& part : xi.parts()) r.push_back(res(part));
  return Rational(BigInt(psi_numerator(xi.primes(), r)), BigInt(xi.primes().product()));
}

/// e_P(xi) = e(psi_P(xi)).
inline Complex e_P(const MultiTorusElem& xi) {
  std::vector<Residue> r;
  for (const auto& part : xi.parts()) r.push_back(res(part));
  return root_of_unity(psi_numerator(xi.primes(), r), xi.primes().product());
}

}  // namespace boxgal
