#pragma once

// Polynomials over a prime field F_p: ring arithmetic, factorization,
// the Moebius function, resultants and discriminants.

#include <boxgal/core.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <iterator>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace boxgal {

using Residue = std::uint64_t;

class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (1ull << 32)) throw DomainError("field characteristic must be below 2^32");
    if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
  }

  std::uint64_t p() const { return p_; }

  Residue reduce(std::int64_t v) const { return mod_floor(v, p_); }
  Residue add(Residue a, Residue b) const { return (a + b) % p_; }
  Residue sub(Residue a, Residue b) const { return (a + p_ - b) % p_; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const { return (a * b) % p_; }
  Residue pow(Residue a, std::uint64_t e) const { return powmod(a, e, p_); }
  Residue inv(Residue a) const {
    if (a % p_ == 0) throw DomainError("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

/// Dense polynomial over F_p, little-endian, trailing zeros stripped.
class FFPoly {
 public:
  explicit FFPoly(PrimeField field) : field_(field) {}

  FFPoly(PrimeField field, std::vector<Residue> coeffs) : field_(field), coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_) c %= field_.p();
    trim();
  }

  static FFPoly from_signed(PrimeField field, std::span<const std::int64_t> coeffs) {
    std::vector<Residue> c(coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = field.reduce(coeffs[i]);
    return FFPoly(field, std::move(c));
  }

  static FFPoly constant(PrimeField field, Residue c) { return FFPoly(field, {c}); }

  /// c * T^k
  static FFPoly monomial(PrimeField field, std::size_t k, Residue c = 1) {
    std::vector<Residue> v(k + 1, 0);
    v[k] = c;
    return FFPoly(field, std::move(v));
  }

  const PrimeField& field() const { return field_; }
  std::uint64_t p() const { return field_.p(); }
  const std::vector<Residue>& coeffs() const { return coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Residue leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }

  /// i-th coefficient, zero past the degree.
  Residue coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }

  Residue evaluate(Residue x) const {
    Residue acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = field_.add(field_.mul(acc, x), *it);
    return acc;
  }

  FFPoly monic() const {
    if (is_zero()) return *this;
    Residue inv = field_.inv(leading());
    std::vector<Residue> c(coeffs_);
    for (auto& v : c) v = field_.mul(v, inv);
    return FFPoly(field_, std::move(c));
  }

  FFPoly scaled(Residue s) const {
    std::vector<Residue> c(coeffs_);
    for (auto& v : c) v = field_.mul(v, s % field_.p());
    return FFPoly(field_, std::move(c));
  }

  friend bool operator==(const FFPoly& a, const FFPoly& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  /// Degree first, then coefficients from the top down. On monics of a fixed
  /// degree this matches the enumeration index order.
  friend std::strong_ordering operator<=>(const FFPoly& a, const FFPoly& b) {
    if (auto c = a.coeffs_.size() <=> b.coeffs_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.coeffs_.rbegin(), a.coeffs_.rend(), b.coeffs_.rbegin(),
                                                  b.coeffs_.rend());
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  PrimeField field_;
  std::vector<Residue> coeffs_;
};

namespace detail {
inline void require_same_field(const FFPoly& a, const FFPoly& b) {
  if (!(a.field() == b.field())) throw FieldMismatch();
}
}  // namespace detail

inline FFPoly operator+(const FFPoly& a, const FFPoly& b) {
  detail::require_same_field(a, b);
  const auto& f = a.field();
  std::vector<Residue> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.add(a.coeff(i), b.coeff(i));
  return FFPoly(f, std::move(c));
}

inline FFPoly operator-(const FFPoly& a) {
  std::vector<Residue> c(a.coeffs());
  for (auto& v : c) v = a.field().neg(v);
  return FFPoly(a.field(), std::move(c));
}

inline FFPoly operator-(const FFPoly& a, const FFPoly& b) {
  detail::require_same_field(a, b);
  const auto& f = a.field();
  std::vector<Residue> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.sub(a.coeff(i), b.coeff(i));
  return FFPoly(f, std::move(c));
}

inline FFPoly operator*(const FFPoly& a, const FFPoly& b) {
  detail::require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return FFPoly(a.field());
  const std::uint64_t p = a.p();
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  std::vector<Residue> c(ac.size() + bc.size() - 1, 0);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) c[i + j] = (c[i + j] + ac[i] * bc[j]) % p;
  }
  return FFPoly(a.field(), std::move(c));
}

struct DivRem {
  FFPoly quotient;
  FFPoly remainder;
};

inline DivRem divrem(const FFPoly& a, const FFPoly& b) {
  detail::require_same_field(a, b);
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  const auto& f = a.field();
  if (a.degree() < b.degree()) return {FFPoly(f), a};
  std::vector<Residue> r(a.coeffs());
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  std::vector<Residue> q(r.size() - db, 0);
  const Residue inv_lead = f.inv(bc.back());
  for (std::size_t k = q.size(); k-- > 0;) {
    Residue t = f.mul(r[k + db], inv_lead);
    q[k] = t;
    if (t == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) r[k + j] = f.sub(r[k + j], f.mul(t, bc[j]));
  }
  r.resize(db);
  return {FFPoly(f, std::move(q)), FFPoly(f, std::move(r))};
}

inline FFPoly operator%(const FFPoly& a, const FFPoly& b) { return divrem(a, b).remainder; }
inline FFPoly operator/(const FFPoly& a, const FFPoly& b) { return divrem(a, b).quotient; }

/// Monic gcd; gcd(0, 0) = 0.
inline FFPoly gcd(FFPoly a, FFPoly b) {
  detail::require_same_field(a, b);
  while (!b.is_zero()) {
    FFPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Formal derivative.
inline FFPoly derivative(const FFPoly& a) {
  if (a.degree() < 1) return FFPoly(a.field());
  const auto& f = a.field();
  std::vector<Residue> c(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) c[i - 1] = f.mul(a.coeffs()[i], i % f.p());
  return FFPoly(f, std::move(c));
}

/// base^e mod modulus.
inline FFPoly pow_mod(FFPoly base, std::uint64_t e, const FFPoly& modulus) {
  detail::require_same_field(base, modulus);
  FFPoly result = FFPoly::constant(base.field(), 1) % modulus;
  base = base % modulus;
  while (e) {
    if (e & 1) result = (result * base) % modulus;
    base = (base * base) % modulus;
    e >>= 1;
  }
  return result;
}

inline bool is_squarefree(const FFPoly& a) {
  if (a.is_zero()) throw DomainError("is_squarefree of the zero polynomial");
  if (a.degree() < 1) return true;
  return gcd(a, derivative(a)).is_one();
}

// ---------------------------------------------------------------------------
// Factorization

struct Factorization {
  Residue unit = 0;
  std::vector<std::pair<FFPoly, unsigned>> factors;

  /// Number of irreducible factors counted with multiplicity.
  unsigned omega_total() const {
    unsigned s = 0;
    for (const auto& [f, m] : factors) s += m;
    return s;
  }
};

namespace detail {

// For a polynomial with F' = 0 every exponent is a multiple of p and
// a^p = a in F_p, so the p-th root just drops exponents.
inline FFPoly pth_root(const FFPoly& a) {
  const std::uint64_t p = a.p();
  std::vector<Residue> c;
  for (std::size_t i = 0; i < a.coeffs().size(); i += p) c.push_back(a.coeffs()[i]);
  return FFPoly(a.field(), std::move(c));
}

inline void squarefree_parts(const FFPoly& f, unsigned scale, std::vector<std::pair<FFPoly, unsigned>>& out) {
  if (f.degree() < 1) return;
  FFPoly df = derivative(f);
  if (df.is_zero()) {
    squarefree_parts(pth_root(f), scale * static_cast<unsigned>(f.p()), out);
    return;
  }
  FFPoly c = gcd(f, df);
  FFPoly w = f / c;
  unsigned i = 1;
  while (!w.is_one()) {
    FFPoly y = gcd(w, c);
    FFPoly z = w / y;
    if (z.degree() > 0) out.emplace_back(z.monic(), i * scale);
    ++i;
    w = y;
    c = c / y;
  }
  if (!c.is_one()) squarefree_parts(pth_root(c), scale * static_cast<unsigned>(f.p()), out);
}

}  // namespace detail

/// Squarefree decomposition of a monic polynomial: pairs (A_i, i) with
/// f = prod A_i^i and each A_i squarefree and pairwise coprime.
inline std::vector<std::pair<FFPoly, unsigned>> squarefree_decomposition(const FFPoly& f) {
  if (f.is_zero()) throw DomainError("squarefree decomposition of the zero polynomial");
  std::vector<std::pair<FFPoly, unsigned>> out;
  detail::squarefree_parts(f.monic(), 1, out);
  return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs
/// (g_d, d) where g_d is the product of all irreducible factors of degree d.
inline std::vector<std::pair<FFPoly, unsigned>> distinct_degree_factorization(FFPoly f) {
  std::vector<std::pair<FFPoly, unsigned>> out;
  const auto& field = f.field();
  const FFPoly t = FFPoly::monomial(field, 1);
  FFPoly h = t % f;
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(std::max(f.degree(), 0)); ++d) {
    h = pow_mod(h, f.p(), f);
    FFPoly g = gcd(h - t, f);
    if (!g.is_one()) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, static_cast<unsigned>(f.degree()));
  return out;
}

namespace detail {

// Splits g, a product of distinct monic irreducibles of degree d, into them.
inline void equal_degree_split(const FFPoly& g, unsigned d, std::mt19937_64& rng, std::vector<FFPoly>& out) {
  if (static_cast<unsigned>(g.degree()) == d) {
    out.push_back(g);
    return;
  }
  const auto& field = g.field();
  const std::uint64_t p = field.p();
  std::uniform_int_distribution<std::uint64_t> coin(0, p - 1);
  for (;;) {
    std::vector<Residue> c(static_cast<std::size_t>(g.degree()));
    for (auto& v : c) v = coin(rng);
    FFPoly a(field, std::move(c));
    if (a.degree() < 1) continue;
    FFPoly probe(field);
    if (p == 2) {
      // Absolute trace a + a^2 + ... + a^(2^(d-1)).
      FFPoly term = a % g;
      probe = term;
      for (unsigned k = 1; k < d; ++k) {
        term = (term * term) % g;
        probe = probe + term;
      }
    } else {
      // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
      FFPoly frob = a % g;
      FFPoly norm = frob;
      for (unsigned k = 1; k < d; ++k) {
        frob = pow_mod(frob, p, g);
        norm = (norm * frob) % g;
      }
      probe = pow_mod(norm, (p - 1) / 2, g) - FFPoly::constant(field, 1);
    }
    FFPoly h = gcd(probe, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree_split(h, d, rng, out);
      equal_degree_split(g / h, d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Complete factorization into monic irreducibles, sorted by operator<=>.
inline Factorization factor(const FFPoly& f) {
  if (f.is_zero()) throw DomainError("factor of the zero polynomial");
  Factorization result;
  result.unit = f.leading();
  std::mt19937_64 rng(0x5eed'f00dULL);
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    for (const auto& [block, d] : distinct_degree_factorization(part)) {
      std::vector<FFPoly> irreducibles;
      detail::equal_degree_split(block, d, rng, irreducibles);
      for (auto& q : irreducibles) result.factors.emplace_back(std::move(q), mult);
    }
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return result;
}

/// Rabin-style test via distinct-degree factorization.
inline bool is_irreducible(const FFPoly& f) {
  if (f.degree() < 1) return false;
  FFPoly m = f.monic();
  if (!is_squarefree(m)) return false;
  auto ddf = distinct_degree_factorization(m);
  return ddf.size() == 1 && static_cast<int>(ddf[0].second) == m.degree();
}

/// Product of the factors (times the unit).
inline FFPoly expand(const Factorization& fz, PrimeField field) {
  FFPoly acc = FFPoly::constant(field, fz.unit);
  for (const auto& [q, m] : fz.factors)
    for (unsigned i = 0; i < m; ++i) acc = acc * q;
  return acc;
}

/// Moebius function of a monic polynomial.
inline int moebius(const FFPoly& f) {
  if (!f.is_monic()) throw DomainError("moebius requires a nonzero monic polynomial");
  if (f.degree() == 0) return 1;
  if (!is_squarefree(f)) return 0;
  unsigned r = 0;
  for (const auto& [block, d] : distinct_degree_factorization(f)) r += static_cast<unsigned>(block.degree()) / d;
  return (r % 2 == 0) ? 1 : -1;
}

/// Factor degrees of a squarefree monic polynomial, ascending.
inline std::vector<unsigned> factor_degrees(const FFPoly& f) {
  std::vector<unsigned> parts;
  for (const auto& [block, d] : distinct_degree_factorization(f.monic()))
    for (int k = 0; k < block.degree() / static_cast<int>(d); ++k) parts.push_back(d);
  std::sort(parts.begin(), parts.end());
  return parts;
}

// ---------------------------------------------------------------------------
// Resultant, discriminant, quadratic character

/// Res(a, b) by the Euclidean remainder sequence.
inline Residue resultant(FFPoly a, FFPoly b) {
  detail::require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) throw DomainError("resultant with the zero polynomial");
  const auto& f = a.field();
  Residue acc = 1;
  for (;;) {
    const auto da = static_cast<std::uint64_t>(a.degree());
    const auto db = static_cast<std::uint64_t>(b.degree());
    if (db == 0) return f.mul(acc, f.pow(b.leading(), da));
    if (da == 0) return f.mul(acc, f.pow(a.leading(), db));
    FFPoly r = a % b;
    if (r.is_zero()) return 0;
    const auto dr = static_cast<std::uint64_t>(r.degree());
    // Res(a, b) = (-1)^(da db) Res(b, a) and Res(b, a) = lc(b)^(da - dr) Res(b, r).
    if ((da * db) % 2 == 1) acc = f.neg(acc);
    acc = f.mul(acc, f.pow(b.leading(), da - dr));
    a = std::move(b);
    b = std::move(r);
  }
}

/// disc(F) = (-1)^(n(n-1)/2) Res(F, F') for monic F of degree n >= 1.
inline Residue discriminant(const FFPoly& f) {
  if (!f.is_monic()) throw DomainError("discriminant requires a monic polynomial");
  if (f.degree() < 1) throw DomainError("discriminant of a constant polynomial");
  FFPoly df = derivative(f);
  if (df.is_zero()) return 0;
  const auto n = static_cast<std::uint64_t>(f.degree());
  Residue r = resultant(f, df);
  return ((n * (n - 1) / 2) % 2 == 1) ? f.field().neg(r) : r;
}

/// Legendre symbol by Euler's criterion.
inline int quadratic_character(Residue a, const PrimeField& field) {
  const std::uint64_t p = field.p();
  if (p == 2) throw DomainError("quadratic character needs an odd prime (p = 2 given)");
  a %= p;
  if (a == 0) return 0;
  return field.pow(a, (p - 1) / 2) == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Enumeration of monic polynomials

/// The p^n monic polynomials of degree n. Index i has coefficient k equal to
/// the k-th base-p digit of i, so index order is the coefficient-vector
/// order read from the top coefficient down.
class MonicPolys {
 public:
  MonicPolys(PrimeField field, unsigned n, std::uint64_t cap = kDefaultEnumerationCap)
      : field_(field), n_(n), size_(checked_pow(field.p(), n, cap)) {}

  std::uint64_t size() const { return size_; }
  unsigned degree() const { return n_; }
  const PrimeField& field() const { return field_; }

  FFPoly operator[](std::uint64_t index) const {
    std::vector<Residue> c(n_ + 1);
    const std::uint64_t p = field_.p();
    for (unsigned k = 0; k < n_; ++k) {
      c[k] = index % p;
      index /= p;
    }
    c[n_] = 1;
    return FFPoly(field_, std::move(c));
  }

  /// Inverse of operator[].
  std::uint64_t index_of(const FFPoly& f) const {
    if (!(f.field() == field_) || f.degree() != static_cast<int>(n_) || !f.is_monic())
      throw DomainError("polynomial is not in M_{p,n}");
    std::uint64_t idx = 0;
    for (unsigned k = n_; k-- > 0;) idx = idx * field_.p() + f.coeff(k);
    return idx;
  }

  class iterator {
   public:
    using value_type = FFPoly;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const MonicPolys* owner, std::uint64_t i) : owner_(owner), i_(i) {}
    FFPoly operator*() const { return (*owner_)[i_]; }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++i_;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.i_ == b.i_; }

   private:
    const MonicPolys* owner_ = nullptr;
    std::uint64_t i_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  PrimeField field_;
  unsigned n_;
  std::uint64_t size_;
};

inline MonicPolys enumerate_monic(PrimeField field, unsigned n, std::uint64_t cap = kDefaultEnumerationCap) {
  return MonicPolys(field, n, cap);
}

/// mu over M_{p,n}, indexed like MonicPolys.
inline std::vector<int> moebius_table(PrimeField field, unsigned n, std::uint64_t cap = kDefaultEnumerationCap) {
  MonicPolys polys(field, n, cap);
  std::vector<int> mu(polys.size());
  for (std::uint64_t i = 0; i < polys.size(); ++i) mu[i] = moebius(polys[i]);
  return mu;
}

/// Independent factorization route: trial division by monic irreducibles,
/// which are themselves generated by sieving lower degrees. Only for tiny
/// search spaces (p^(deg/2) irreducible candidates per degree).
inline Factorization factor_by_trial_division(const FFPoly& f, std::uint64_t cap = 10'000) {
  if (f.is_zero()) throw DomainError("factor of the zero polynomial");
  const auto& field = f.field();
  Factorization result;
  result.unit = f.leading();
  FFPoly rest = f.monic();
  std::vector<FFPoly> irreducibles;
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(std::max(rest.degree(), 0)); ++d) {
    for (const FFPoly& cand : MonicPolys(field, d, cap)) {
      bool irreducible = true;
      for (const auto& q : irreducibles) {
        if (2 * q.degree() > cand.degree()) break;
        if ((cand % q).is_zero()) {
          irreducible = false;
          break;
        }
      }
      if (!irreducible) continue;
      irreducibles.push_back(cand);
      unsigned m = 0;
      for (;;) {
        auto [quo, rem] = divrem(rest, cand);
        if (!rem.is_zero()) break;
        rest = std::move(quo);
        ++m;
      }
      if (m > 0) result.factors.emplace_back(cand, m);
    }
  }
  if (rest.degree() > 0) result.factors.emplace_back(rest, 1);
  std::sort(result.factors.begin(), result.factors.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return result;
}

// ---------------------------------------------------------------------------
// Text form "T^3+2*T+1"

inline std::string to_string(const FFPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t k = f.coeffs().size(); k-- > 0;) {
    Residue c = f.coeffs()[k];
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (k == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c) + "*";
    out += 'T';
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

/// Accepts the canonical form plus spaces, '-' signs, repeated exponents and
/// the variable names T or X.
inline FFPoly parse_ffpoly(std::string_view text, PrimeField field) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw DomainError("empty polynomial text");
  FFPoly acc(field);
  std::size_t i = 0;
  auto fail = [&] { throw DomainError("cannot parse polynomial '" + std::string(text) + "'"); };
  auto read_uint = [&](std::uint64_t& v) {
    std::size_t start = i;
    v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      if (v > (UINT64_MAX - 9) / 10) fail();
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
      ++i;
    }
    return i > start;
  };
  while (i < s.size()) {
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
      neg = s[i] == '-';
      ++i;
    } else if (i != 0) {
      fail();
    }
    std::uint64_t coef = 1;
    std::uint64_t digits = 0;
    bool had_coef = read_uint(digits);
    if (had_coef) coef = digits;
    std::size_t exp = 0;
    if (i < s.size() && s[i] == '*') {
      if (!had_coef) fail();
      ++i;
    }
    if (i < s.size() && (s[i] == 'T' || s[i] == 'X' || s[i] == 't' || s[i] == 'x')) {
      ++i;
      exp = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::uint64_t e = 0;
        if (!read_uint(e)) fail();
        exp = static_cast<std::size_t>(e);
      }
    } else if (!had_coef) {
      fail();
    }
    Residue c = coef % field.p();
    if (neg) c = field.neg(c);
    acc = acc + FFPoly::monomial(field, exp, c);
  }
  return acc;
}

}  // namespace boxgal
