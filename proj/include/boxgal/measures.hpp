#pragma once

// Coefficient laws on Z, their reductions modulo d, and the pushforward
// measure on M_{P,n}. Templates over the scalar S run either in double or
// exactly in Rational.

#include <boxgal/cyclotomic.hpp>
#include <boxgal/fourier.hpp>
#include <boxgal/torus.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace boxgal {

/// Uniform on [a+1, a+L].
struct UniformBox {
  std::int64_t a = 0;
  std::uint64_t L = 1;
  friend bool operator==(const UniformBox&, const UniformBox&) = default;
};

/// Finite support with exact masses.
struct ExplicitLaw {
  std::map<std::int64_t, Rational> mass;
  friend bool operator==(const ExplicitLaw&, const ExplicitLaw&) = default;
};

class CoeffLaw {
 public:
  CoeffLaw(UniformBox box) : law_(box) {
    if (box.L < 1) throw DomainError("box length L must be at least 1");
  }

  CoeffLaw(ExplicitLaw law) : law_(std::move(law)) {
    const auto& m = std::get<ExplicitLaw>(law_).mass;
    if (m.empty()) throw DomainError("explicit law needs at least one support point");
    Rational total = 0;
    for (const auto& [v, w] : m) {
      if (w < 0) throw DomainError("explicit law has a negative mass");
      total += w;
    }
    if (total != 1) throw DomainError("explicit law masses must sum to 1");
  }

  static CoeffLaw box(std::int64_t a, std::uint64_t L) { return CoeffLaw(UniformBox{a, L}); }
  static CoeffLaw point(std::int64_t v) { return CoeffLaw(ExplicitLaw{{{v, Rational(1)}}}); }

  bool is_box() const { return std::holds_alternative<UniformBox>(law_); }
  const UniformBox& as_box() const { return std::get<UniformBox>(law_); }
  const ExplicitLaw& as_explicit() const { return std::get<ExplicitLaw>(law_); }

  friend bool operator==(const CoeffLaw&, const CoeffLaw&) = default;

 private:
  std::variant<UniformBox, ExplicitLaw> law_;
};

/// "box:a=0,L=100" or "explicit:0:0.5,1:0.5" (masses may be decimals or p/q).
inline CoeffLaw parse_law(const std::string& text) {
  auto fail = [&](const std::string& why) -> CoeffLaw { throw DomainError("bad law '" + text + "': " + why); };
  if (text.rfind("box:", 0) == 0) {
    std::optional<std::int64_t> a;
    std::optional<std::uint64_t> L;
    std::string body = text.substr(4);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(',', pos);
      std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto eq = item.find('=');
      if (eq == std::string::npos) return fail("expected key=value");
      std::string key = item.substr(0, eq);
      Rational v = parse_rational(item.substr(eq + 1));
      if (boost::multiprecision::denominator(v) != 1) return fail("box parameters must be integers");
      if (key == "a") {
        a = static_cast<std::int64_t>(boost::multiprecision::numerator(v));
      } else if (key == "L") {
        if (v < 1) return fail("L must be at least 1");
        L = static_cast<std::uint64_t>(boost::multiprecision::numerator(v));
      } else {
        return fail("unknown key '" + key + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!L) return fail("missing L");
    return CoeffLaw::box(a.value_or(0), *L);
  }
  if (text.rfind("explicit:", 0) == 0) {
    ExplicitLaw law;
    std::string body = text.substr(9);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(',', pos);
      std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto colon = item.find(':', item[0] == '-' ? 1 : 0);
      if (colon == std::string::npos) return fail("expected value:mass");
      std::int64_t v = std::stoll(item.substr(0, colon));
      law.mass[v] += parse_rational(item.substr(colon + 1));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return CoeffLaw(std::move(law));
  }
  return fail("expected 'box:' or 'explicit:' prefix");
}

inline std::string to_string(const CoeffLaw& law) {
  if (law.is_box()) {
    const auto& b = law.as_box();
    return "box:a=" + std::to_string(b.a) + ",L=" + std::to_string(b.L);
  }
  std::string s = "explicit:";
  bool first = true;
  for (const auto& [v, w] : law.as_explicit().mass) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(v) + ":" + w.str();
  }
  return s;
}

/// Law of X^n + sum_{k<n} zeta_k X^k with independent zeta_k.
struct PolyLaw {
  unsigned n = 0;
  std::vector<CoeffLaw> laws;

  static PolyLaw iid(unsigned n, const CoeffLaw& law) { return PolyLaw{n, std::vector<CoeffLaw>(n, law)}; }

  const CoeffLaw& operator[](std::size_t k) const { return laws.at(k); }
};

/// P(zeta = u mod d) for u = 0..d-1.
template <class S = Rational>
std::vector<S> residue_law(const CoeffLaw& law, std::uint64_t d) {
  if (d == 0) throw DomainError("modulus d must be at least 1");
  std::vector<S> out(d, S(0));
  if (law.is_box()) {
    const auto& b = law.as_box();
    const auto L = static_cast<std::int64_t>(b.L);
    const auto dd = static_cast<std::int64_t>(d);
    // #{v in [a+1, a+L] : v = u mod d} = floor((a+L-u)/d) - floor((a-u)/d)
    for (std::uint64_t u = 0; u < d; ++u) {
      const auto uu = static_cast<std::int64_t>(u);
      std::int64_t count = floor_div(b.a + L - uu, dd) - floor_div(b.a - uu, dd);
      out[u] = scalar_from_rational<S>(Rational(count, L));
    }
  } else {
    std::vector<Rational> acc(d, 0);
    for (const auto& [v, w] : law.as_explicit().mass) acc[mod_floor(v, d)] += w;
    for (std::uint64_t u = 0; u < d; ++u) out[u] = scalar_from_rational<S>(acc[u]);
  }
  return out;
}

/// CRT helper for a PrimeSet: maps residue tuples to Z/P and back.
class Crt {
 public:
  explicit Crt(const PrimeSet& primes) : primes_(primes) {
    const std::uint64_t big = primes.product();
    for (auto p : primes.primes()) {
      std::uint64_t m = big / p;
      std::uint64_t inv = powmod(m % p, p - 2, p);
      idempotents_.push_back(mulmod(m, inv, big));
    }
  }

  std::uint64_t combine(std::span<const Residue> r) const {
    const std::uint64_t big = primes_.product();
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < r.size(); ++i) x = (x + mulmod(r[i], idempotents_[i], big)) % big;
    return x;
  }

 private:
  PrimeSet primes_;
  std::vector<std::uint64_t> idempotents_;
};

/// Pushforward of a PolyLaw to M_{P,n}: one probability row over Z/P per
/// coefficient slot; the mass of a tuple is the product over slots.
template <class S = Rational>
class ProductMeasure {
 public:
  ProductMeasure(PrimeSet primes, unsigned n, std::vector<std::vector<S>> rows)
      : primes_(std::move(primes)), n_(n), rows_(std::move(rows)), crt_(primes_) {
    if (rows_.size() != n_) throw DomainError("one residue row per coefficient slot required");
    for (const auto& r : rows_)
      if (r.size() != primes_.product()) throw DomainError("residue rows must have length P");
  }

  const PrimeSet& primes() const { return primes_; }
  unsigned degree() const { return n_; }
  const std::vector<std::vector<S>>& rows() const { return rows_; }
  const Crt& crt() const { return crt_; }

  GridShape shape(std::uint64_t cap = kDefaultEnumerationCap) const { return GridShape(primes_, n_, cap); }

  /// Mass of the tuple with lower coefficients digits[s][k].
  S mass(const std::vector<std::vector<Residue>>& digits) const {
    S m(1);
    std::vector<Residue> r(primes_.size());
    for (unsigned k = 0; k < n_; ++k) {
      for (std::size_t s = 0; s < r.size(); ++s) r[s] = digits[s][k];
      m *= rows_[k][crt_.combine(r)];
      if (m == 0) break;
    }
    return m;
  }

  /// Marginal on a subset of the primes.
  ProductMeasure project(const PrimeSet& sub) const {
    for (auto p : sub.primes())
      if (!primes_.contains(p)) throw DomainError("projection target is not a subset of the prime set");
    const std::uint64_t q = sub.product();
    std::vector<std::vector<S>> out(n_, std::vector<S>(q, S(0)));
    for (unsigned k = 0; k < n_; ++k)
      for (std::uint64_t r = 0; r < rows_[k].size(); ++r) out[k][r % q] += rows_[k][r];
    return ProductMeasure(sub, n_, std::move(out));
  }

  /// Mass of every tuple as a grid function.
  GridFunction to_grid(std::uint64_t cap = kDefaultEnumerationCap) const {
    GridShape sh = shape(cap);
    GridFunction g(sh);
    for (std::uint64_t i = 0; i < sh.size(); ++i) g.values[i] = to_double(mass(sh.digits(i)));
    return g;
  }

 private:
  PrimeSet primes_;
  unsigned n_;
  std::vector<std::vector<S>> rows_;
  Crt crt_;
};

/// Row k is residue_law(law_k, P); storage is n * P.
template <class S = Rational>
ProductMeasure<S> pushforward(const PolyLaw& law, const PrimeSet& primes) {
  if (law.laws.size() != law.n) throw DomainError("PolyLaw needs one coefficient law per slot");
  std::vector<std::vector<S>> rows;
  for (unsigned k = 0; k < law.n; ++k) rows.push_back(residue_law<S>(law.laws[k], primes.product()));
  return ProductMeasure<S>(primes, law.n, std::move(rows));
}

namespace detail {

// Per-slot phase: coefficient k of H pairs with coefficient n-1-k of G, so
// slot k contributes sum_s (r mod p_s) G_s^(n-1-k) P/p_s to the numerator.
inline std::vector<std::uint64_t> slot_multipliers(const PrimeSet& primes, const std::vector<std::vector<Residue>>& g,
                                                   unsigned n, unsigned k) {
  std::vector<std::uint64_t> mult(primes.size());
  for (std::size_t s = 0; s < primes.size(); ++s) mult[s] = g[s][n - 1 - k];
  return mult;
}

inline std::uint64_t slot_phase(const PrimeSet& primes, std::uint64_t r, const std::vector<std::uint64_t>& mult) {
  std::vector<Residue> res(primes.size());
  for (std::size_t s = 0; s < primes.size(); ++s) res[s] = (r % primes[s]) * mult[s] % primes[s];
  return psi_numerator(primes, res);
}

}  // namespace detail

/// P-hat(T^-n G) = prod_k sum_r P(zeta_k = r mod P) e(phase_k(r)). O(n P).
/// `g` holds the lower coefficients of every component of G.
template <class S>
Complex measure_fourier_at(const ProductMeasure<S>& m, const std::vector<std::vector<Residue>>& g) {
  const std::uint64_t big = m.primes().product();
  Complex prod = 1;
  for (unsigned k = 0; k < m.degree(); ++k) {
    auto mult = detail::slot_multipliers(m.primes(), g, m.degree(), k);
    Complex acc = 0;
    for (std::uint64_t r = 0; r < big; ++r) {
      if (m.rows()[k][r] == 0) continue;
      acc += to_double(m.rows()[k][r]) * root_of_unity(detail::slot_phase(m.primes(), r, mult), big);
    }
    prod *= acc;
  }
  return prod;
}

template <class S>
Complex measure_fourier_at(const ProductMeasure<S>& m, std::uint64_t g_index) {
  return measure_fourier_at(m, m.shape().digits(g_index));
}

/// Same product in Q(zeta_P).
inline Cyclotomic<Rational> measure_fourier_exact(const ProductMeasure<Rational>& m,
                                                  const std::vector<std::vector<Residue>>& g) {
  const std::uint64_t big = m.primes().product();
  auto prod = Cyclotomic<Rational>::scalar(big, Rational(1));
  for (unsigned k = 0; k < m.degree(); ++k) {
    auto mult = detail::slot_multipliers(m.primes(), g, m.degree(), k);
    Cyclotomic<Rational> acc(big);
    for (std::uint64_t r = 0; r < big; ++r)
      if (m.rows()[k][r] != 0) acc.add_term(detail::slot_phase(m.primes(), r, mult), m.rows()[k][r]);
    prod = prod * acc;
  }
  return prod;
}

/// sum_G |P-hat(T^-n G)|^gamma via the slot factorization: the n slots of G
/// range independently over Z/P, so the sum is prod_k sum_c |lambda-hat_k(c)|^gamma.
template <class S>
double l_gamma_norm(const ProductMeasure<S>& m, double gamma) {
  if (!(gamma >= 1)) throw DomainError("gamma must be at least 1");
  const auto& primes = m.primes();
  const std::uint64_t big = primes.product();
  std::vector<std::vector<double>> rows;
  for (const auto& row : m.rows()) {
    std::vector<double> r(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) r[i] = to_double(row[i]);
    rows.push_back(std::move(r));
  }
  double total = 1;
  std::vector<std::uint64_t> mult(primes.size());
  for (const auto& row : rows) {
    double slot = 0;
    for (std::uint64_t c = 0; c < big; ++c) {
      for (std::size_t s = 0; s < primes.size(); ++s) mult[s] = c % primes[s];
      Complex acc = 0;
      for (std::uint64_t r = 0; r < big; ++r)
        if (row[r] != 0) acc += row[r] * root_of_unity(detail::slot_phase(primes, r, mult), big);
      slot += std::pow(std::abs(acc), gamma);
    }
    total *= slot;
  }
  return total;
}

/// Reference route: enumerate every frequency.
template <class S>
double l_gamma_norm_naive(const ProductMeasure<S>& m, double gamma, std::uint64_t cap = kDefaultEnumerationCap) {
  GridShape shape = m.shape(cap);
  double total = 0;
  for (std::uint64_t g = 0; g < shape.size(); ++g) total += std::pow(std::abs(measure_fourier_at(m, g)), gamma);
  return total;
}

/// (1 + P(P-1)/L)^n
inline double l1_bound(const PrimeSet& primes, std::uint64_t L, unsigned n) {
  if (L < 1) throw DomainError("L must be at least 1");
  const double big = static_cast<double>(primes.product());
  return std::pow(1.0 + big * (big - 1.0) / static_cast<double>(L), static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// The h / omega condition

/// omega(p) = h(p)^2/p - 1, with h recorded alongside. `verified` is false
/// for user-supplied omega tables that were not derived from a checked h.
struct OmegaWitness {
  std::map<std::uint64_t, Rational> h;
  std::map<std::uint64_t, Rational> omega;
  bool verified = false;
};

struct HViolation {
  std::uint64_t d = 0;
  std::uint64_t u = 0;
  unsigned k = 0;
  Rational probability;
  Rational bound;
  std::string reason;
};

struct HConditionResult {
  std::optional<OmegaWitness> witness;
  std::optional<HViolation> violation;
  bool ok() const { return witness.has_value(); }
};

inline OmegaWitness unverified_omega(std::map<std::uint64_t, Rational> omega) {
  return OmegaWitness{{}, std::move(omega), false};
}

/// Checks P(zeta_k = u mod d) <= prod_{p | d} 1/h(p) for every squarefree
/// d | P, every residue u and every slot k, and h(p)^2 > p.
inline HConditionResult check_h_condition(const PolyLaw& law, const PrimeSet& primes,
                                          const std::map<std::uint64_t, Rational>& h) {
  for (auto p : primes.primes()) {
    auto it = h.find(p);
    if (it == h.end()) throw DomainError("h is missing a value for p = " + std::to_string(p));
    if (it->second <= 0) throw DomainError("h(p) must be positive");
  }
  HConditionResult result;
  const std::size_t s = primes.size();
  for (std::uint64_t mask = 1; mask < (1ull << s); ++mask) {
    std::uint64_t d = 1;
    Rational bound = 1;
    for (std::size_t i = 0; i < s; ++i) {
      if (mask & (1ull << i)) {
        d *= primes[i];
        bound /= h.at(primes[i]);
      }
    }
    for (unsigned k = 0; k < law.n; ++k) {
      auto row = residue_law<Rational>(law.laws[k], d);
      for (std::uint64_t u = 0; u < d; ++u) {
        if (row[u] > bound) {
          result.violation = HViolation{d, u, k, row[u], bound, "residue mass exceeds prod 1/h(p)"};
          return result;
        }
      }
    }
  }
  OmegaWitness w;
  w.verified = true;
  for (auto p : primes.primes()) {
    const Rational hp = h.at(p);
    if (hp * hp <= Rational(p)) {
      result.violation = HViolation{p, 0, 0, hp * hp, Rational(p), "h(p)^2 <= p"};
      return result;
    }
    w.h[p] = hp;
    w.omega[p] = hp * hp / Rational(p) - 1;
  }
  result.witness = std::move(w);
  return result;
}

}  // namespace boxgal
