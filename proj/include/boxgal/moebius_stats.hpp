#pragma once

// Expectations of mu_Q and eta_Q under the pushforward measure, each by more
// than one route: direct enumeration, the Fourier side, and divisor sums.

#include <boxgal/measures.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace boxgal {

/// A subset Q of an ambient PrimeSet, as a bitmask.
class SubsetSelector {
 public:
  SubsetSelector(const PrimeSet& ambient, std::uint64_t mask) : ambient_(ambient), mask_(mask) {
    if (ambient.size() < 64 && (mask >> ambient.size()) != 0) throw DomainError("subset is not contained in the prime set");
  }

  SubsetSelector(const PrimeSet& ambient, const std::vector<std::uint64_t>& members) : ambient_(ambient), mask_(0) {
    for (auto p : members) mask_ |= 1ull << ambient.index_of(p);
  }

  static SubsetSelector all(const PrimeSet& ambient) {
    return SubsetSelector(ambient, ambient.size() >= 64 ? ~0ull : (1ull << ambient.size()) - 1);
  }

  const PrimeSet& ambient() const { return ambient_; }
  std::uint64_t mask() const { return mask_; }
  bool empty() const { return mask_ == 0; }
  bool contains_index(std::size_t s) const { return (mask_ >> s) & 1u; }

  std::vector<std::uint64_t> members() const {
    std::vector<std::uint64_t> out;
    for (std::size_t s = 0; s < ambient_.size(); ++s)
      if (contains_index(s)) out.push_back(ambient_[s]);
    return out;
  }

  std::size_t size() const { return members().size(); }

  /// The subset as a PrimeSet; requires a nonempty subset.
  PrimeSet as_prime_set() const { return PrimeSet(members()); }

  std::uint64_t product() const {
    std::uint64_t q = 1;
    for (auto p : members()) q *= p;
    return q;
  }

 private:
  PrimeSet ambient_;
  std::uint64_t mask_;
};

/// mu_Q(F) = prod_{p in Q} mu_p(F_p). `tuple` has one entry per ambient prime.
inline int moebius_tuple(const std::vector<FFPoly>& tuple, const SubsetSelector& q) {
  if (tuple.size() != q.ambient().size()) throw DomainError("tuple does not match the prime set");
  int v = 1;
  for (std::size_t s = 0; s < tuple.size(); ++s)
    if (q.contains_index(s)) v *= moebius(tuple[s]);
  return v;
}

/// eta_Q(F) = prod_{p in Q} 1{mu_p(F_p) = 0}.
inline int eta_tuple(const std::vector<FFPoly>& tuple, const SubsetSelector& q) {
  if (tuple.size() != q.ambient().size()) throw DomainError("tuple does not match the prime set");
  int v = 1;
  for (std::size_t s = 0; s < tuple.size(); ++s)
    if (q.contains_index(s)) v *= moebius(tuple[s]) == 0 ? 1 : 0;
  return v;
}

namespace detail {

inline const std::vector<int>& cached_moebius_table(std::uint64_t p, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, std::vector<int>> memo;
  std::lock_guard lock(mu);
  auto key = std::make_pair(p, n);
  auto it = memo.find(key);
  if (it == memo.end()) it = memo.emplace(key, moebius_table(PrimeField(p), n)).first;
  return it->second;
}

// Sum over M_{Q,n} of projected mass times prod_p weight_p(F_p).
template <class S, class Weight>
S expect_over_subset(const ProductMeasure<S>& m, const SubsetSelector& q, std::uint64_t cap, Weight weight) {
  if (!(q.ambient() == m.primes())) throw DomainError("subset belongs to a different prime set");
  if (q.empty()) {
    // Empty product: the expectation of 1.
    S total(1);
    return total;
  }
  const PrimeSet sub = q.as_prime_set();
  const auto proj = m.project(sub);
  const GridShape shape(sub, m.degree(), cap);
  std::vector<const std::vector<int>*> mu;
  for (auto p : sub.primes()) mu.push_back(&cached_moebius_table(p, m.degree()));
  S acc(0);
  for (std::uint64_t i = 0; i < shape.size(); ++i) {
    int w = 1;
    for (std::size_t s = 0; s < sub.size() && w != 0; ++s) w *= weight((*mu[s])[shape.component(i, s)]);
    if (w == 0) continue;
    acc += S(w) * proj.mass(shape.digits(i));
  }
  return acc;
}

}  // namespace detail

/// E_P(mu_Q) by enumerating M_{Q,n}; primes outside Q marginalize out.
template <class S>
S expected_moebius_direct(const ProductMeasure<S>& m, const SubsetSelector& q,
                          std::uint64_t cap = kDefaultEnumerationCap) {
  return detail::expect_over_subset(m, q, cap, [](int mu) { return mu; });
}

/// E_P(eta_Q) by enumerating M_{Q,n}.
template <class S>
S expected_eta_direct(const ProductMeasure<S>& m, const SubsetSelector& q, std::uint64_t cap = kDefaultEnumerationCap) {
  return detail::expect_over_subset(m, q, cap, [](int mu) { return mu == 0 ? 1 : 0; });
}

namespace detail {

inline const std::vector<std::vector<std::int64_t>>& cached_spectrum_counts(std::uint64_t p, unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, std::vector<std::vector<std::int64_t>>> memo;
  std::lock_guard lock(mu);
  auto key = std::make_pair(p, n);
  auto it = memo.find(key);
  if (it == memo.end()) it = memo.emplace(key, moebius_spectrum_counts(PrimeField(p), n)).first;
  return it->second;
}

// Ambient-grid digits for G with G_p = T^n outside Q and the given
// component indices inside Q.
inline std::vector<std::vector<Residue>> embed_frequency(const PrimeSet& ambient, const SubsetSelector& q,
                                                         const GridShape& sub_shape, std::uint64_t sub_index) {
  auto sub_digits = sub_shape.digits(sub_index);
  std::vector<std::vector<Residue>> g(ambient.size(), std::vector<Residue>(sub_shape.degree(), 0));
  std::size_t j = 0;
  for (std::size_t s = 0; s < ambient.size(); ++s)
    if (q.contains_index(s)) g[s] = sub_digits[j++];
  return g;
}

}  // namespace detail

/// E_P(mu_Q) = Q^-n sum_{G : G_p = T^n off Q} P-hat(T^-n G) prod_{p in Q} mu-hat_p(-T^-n G_p).
/// Exact in Q(zeta_P) when S = Rational, complex double otherwise.
template <class S>
S expected_moebius_fourier(const ProductMeasure<S>& m, const SubsetSelector& q,
                           std::uint64_t cap = kDefaultEnumerationCap) {
  if (!(q.ambient() == m.primes())) throw DomainError("subset belongs to a different prime set");
  if (q.empty()) return S(1);
  const PrimeSet sub = q.as_prime_set();
  const GridShape sub_shape(sub, m.degree(), cap);
  const unsigned n = m.degree();
  const std::uint64_t big = m.primes().product();
  const double q_pow_n = static_cast<double>(sub_shape.size());

  if constexpr (std::is_same_v<S, Rational>) {
    Cyclotomic<Rational> acc(big);
    for (std::uint64_t gi = 0; gi < sub_shape.size(); ++gi) {
      auto g = detail::embed_frequency(m.primes(), q, sub_shape, gi);
      auto term = measure_fourier_exact(m, g);
      const std::uint64_t neg = sub_shape.negated(gi);
      for (std::size_t s = 0; s < sub.size(); ++s) {
        const std::uint64_t p = sub[s];
        const auto& counts = detail::cached_spectrum_counts(p, n)[sub_shape.component(neg, s)];
        Cyclotomic<Rational> mu_hat(big);
        for (std::uint64_t k = 0; k < p; ++k)
          if (counts[k] != 0) mu_hat.add_term(k * (big / p), Rational(counts[k]));
        term = term * mu_hat;
      }
      acc += term;
    }
    auto v = acc.exact_value();
    if (!v) throw Error("Fourier-side expectation did not reduce to a rational");
    return *v / Rational(sub_shape.size());
  } else {
    std::vector<const Spectrum*> spectra;
    std::vector<Spectrum> owned;
    owned.reserve(sub.size());
    for (auto p : sub.primes()) owned.push_back(moebius_spectrum(PrimeField(p), n, cap));
    Complex acc = 0;
    for (std::uint64_t gi = 0; gi < sub_shape.size(); ++gi) {
      auto g = detail::embed_frequency(m.primes(), q, sub_shape, gi);
      Complex term = measure_fourier_at(m, g);
      const std::uint64_t neg = sub_shape.negated(gi);
      for (std::size_t s = 0; s < sub.size(); ++s) term *= owned[s].values[sub_shape.component(neg, s)];
      acc += term;
    }
    return static_cast<S>(acc.real() / q_pow_n);
  }
}

// ---------------------------------------------------------------------------
// Divisor-sum route

namespace detail {

// Residue rows modulo Q for each coefficient slot.
template <class S>
std::vector<std::vector<S>> rows_mod(const PolyLaw& law, std::uint64_t q) {
  std::vector<std::vector<S>> rows;
  for (unsigned k = 0; k < law.n; ++k) rows.push_back(residue_law<S>(law.laws[k], q));
  return rows;
}

template <class S>
std::vector<std::vector<S>> rows_mod(const ProductMeasure<S>& m, std::uint64_t q) {
  return m.project(PrimeSet(std::vector<std::uint64_t>{q})).rows();
}

// P(D_k^2 | f mod p_k for all k), given slot rows modulo prod p_k.
template <class S>
S joint_square_divisor_mass(const std::vector<std::vector<S>>& rows, unsigned n,
                            const std::vector<std::pair<std::uint64_t, FFPoly>>& assignment, std::uint64_t cap) {
  if (assignment.empty()) return S(1);
  std::vector<std::uint64_t> primes;
  for (const auto& [p, d] : assignment) primes.push_back(p);
  const PrimeSet ps(primes);
  const Crt crt(ps);
  // ps is sorted; line the assignment up with it.
  std::vector<FFPoly> squares(ps.size(), FFPoly(PrimeField(2)));
  std::vector<std::unique_ptr<MonicPolys>> cofactors(ps.size());
  std::uint64_t total = 1;
  for (const auto& [p, d] : assignment) {
    if (!d.is_monic() || d.p() != p) throw DomainError("square divisor must be monic over F_p");
    if (2 * d.degree() > static_cast<int>(n)) throw DomainError("2 deg D exceeds n");
    const std::size_t s = ps.index_of(p);
    squares[s] = d * d;
    cofactors[s] = std::make_unique<MonicPolys>(PrimeField(p), n - 2 * static_cast<unsigned>(d.degree()), cap);
    if (total > cap / cofactors[s]->size()) throw CapExceeded("square-divisor enumeration exceeds the cap");
    total *= cofactors[s]->size();
  }
  S acc(0);
  std::vector<FFPoly> targets(ps.size(), FFPoly(PrimeField(2)));
  std::vector<Residue> r(ps.size());
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t rest = t;
    for (std::size_t s = 0; s < ps.size(); ++s) {
      const auto size = cofactors[s]->size();
      targets[s] = squares[s] * (*cofactors[s])[rest % size];
      rest /= size;
    }
    S mass(1);
    for (unsigned k = 0; k < n && mass != 0; ++k) {
      for (std::size_t s = 0; s < ps.size(); ++s) r[s] = targets[s].coeff(k);
      mass *= rows[k][crt.combine(r)];
    }
    acc += mass;
  }
  return acc;
}

}  // namespace detail

/// P(D_1^2 | f_{p_1}, ..., D_r^2 | f_{p_r}) for distinct primes p_k.
template <class S = Rational>
S prob_joint_square_divisors(const PolyLaw& law, const std::vector<std::pair<std::uint64_t, FFPoly>>& assignment,
                             std::uint64_t cap = kDefaultEnumerationCap) {
  std::uint64_t q = 1;
  for (const auto& [p, d] : assignment) q *= p;
  return detail::joint_square_divisor_mass(detail::rows_mod<S>(law, q), law.n, assignment, cap);
}

/// E_P(eta_Q) = (-1)^r sum_{i_k in [1, n/2]} sum_{D_k in M_{p_k,i_k}} prod mu(D_k) P(D_1^2|f_{p_1}, ...).
/// For n < 2 the index range is empty and the value is 0 (r >= 1).
template <class S = Rational>
S expected_eta_divisorsum(const PolyLaw& law, const std::vector<std::uint64_t>& subset,
                          std::uint64_t cap = kDefaultEnumerationCap) {
  if (subset.empty()) return S(1);
  const unsigned n = law.n;
  const unsigned half = n / 2;
  if (half == 0) return S(0);
  std::uint64_t q = 1;
  for (auto p : subset) q *= p;
  const auto rows = detail::rows_mod<S>(law, q);

  // All (D, mu(D)) with 1 <= deg D <= n/2 and mu(D) != 0, per prime.
  std::vector<std::vector<std::pair<FFPoly, int>>> divisors(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const PrimeField f(subset[k]);
    for (unsigned i = 1; i <= half; ++i)
      for (const FFPoly& d : MonicPolys(f, i, cap))
        if (int mu = moebius(d); mu != 0) divisors[k].emplace_back(d, mu);
  }
  S acc(0);
  std::vector<std::pair<std::uint64_t, FFPoly>> assignment;
  std::function<void(std::size_t, int)> walk = [&](std::size_t k, int sign) {
    if (k == subset.size()) {
      acc += S(sign) * detail::joint_square_divisor_mass(rows, n, assignment, cap);
      return;
    }
    for (const auto& [d, mu] : divisors[k]) {
      assignment.emplace_back(subset[k], d);
      walk(k + 1, sign * mu);
      assignment.pop_back();
    }
  };
  walk(0, 1);
  return (subset.size() % 2 == 0) ? acc : S(-acc);
}

/// Values of both sides of mu^2(F) = sum_{D^2 | F} mu(D).
struct MuSquaredSides {
  int lhs = 0;
  int rhs = 0;
  bool holds() const { return lhs == rhs; }
};

inline MuSquaredSides mu_squared_sides(const FFPoly& f) {
  if (!f.is_monic()) throw DomainError("mu^2 identity needs a monic polynomial");
  MuSquaredSides out;
  const int m = moebius(f);
  out.lhs = m * m;
  for (unsigned i = 0; 2 * i <= static_cast<unsigned>(f.degree()); ++i)
    for (const FFPoly& d : MonicPolys(f.field(), i))
      if ((f % (d * d)).is_zero()) out.rhs += moebius(d);
  return out;
}

inline bool mu_squared_identity_check(const FFPoly& f) { return mu_squared_sides(f).holds(); }

template <class S>
struct Lemma31Sides {
  S lhs;
  S rhs;
};

/// P(E and mu_p(F) = 0) against -sum_{i=1}^{n/2} sum_{D in M_{p,i}} mu(D) P(E, D^2 | F).
/// The right side enumerates multiples D^2 E' directly rather than testing mu.
template <class S>
Lemma31Sides<S> lemma31_check(const ProductMeasure<S>& m, const std::function<bool(const FFPoly&)>& event,
                              std::uint64_t cap = kDefaultEnumerationCap) {
  if (m.primes().size() != 1) throw DomainError("lemma31_check needs a measure over a single prime");
  const PrimeField field(m.primes()[0]);
  const unsigned n = m.degree();
  const GridShape shape = m.shape(cap);
  Lemma31Sides<S> out{S(0), S(0)};
  for (std::uint64_t i = 0; i < shape.size(); ++i) {
    const FFPoly f = shape.polys(i)[0];
    if (event(f) && moebius(f) == 0) out.lhs += m.mass(shape.digits(i));
  }
  for (unsigned deg = 1; 2 * deg <= n; ++deg) {
    for (const FFPoly& d : MonicPolys(field, deg, cap)) {
      const int mu = moebius(d);
      if (mu == 0) continue;
      const FFPoly d2 = d * d;
      S mass(0);
      for (const FFPoly& e : MonicPolys(field, n - 2 * deg, cap)) {
        const FFPoly f = d2 * e;
        if (event(f)) mass += m.mass(shape.digits(shape.index_of(std::vector<FFPoly>{f})));
      }
      out.rhs -= S(mu) * mass;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hoelder bound

struct HolderReport {
  double gamma = 1;
  /// gamma / (gamma - 1); infinity at gamma = 1.
  double delta_conjugate = std::numeric_limits<double>::infinity();
  double epsilon0 = 0;
  double alpha = 0;
  double q_product = 0;
  unsigned n = 0;
  /// sum over the restricted frequencies of |P-hat|^gamma
  double measure_norm = 0;
  /// (sum prod |mu-hat_p|^delta)^(1/delta), or the max at delta = infinity
  double moebius_norm = 0;
  double raw_bound = 0;
  double expectation = 0;
  bool raw_inequality_holds = false;
  double u = 0;
  double simplified_bound = 0;
  /// whether max |mu-hat_p| <= p^((3/4+eps0) n) for every p in Q here
  bool spectral_bound_holds = false;
  bool measure_norm_within_alpha = false;
};

/// |E_P(mu_Q)| <= Q^-n (sum |P-hat|^gamma)^(1/gamma) (sum prod |mu-hat_p|^delta)^(1/delta),
/// and the simplification Q^(-u n) under the spectral bound.
template <class S>
HolderReport holder_bound(const ProductMeasure<S>& m, const SubsetSelector& q, double gamma, double epsilon0,
                          double alpha, std::uint64_t cap = kDefaultEnumerationCap) {
  if (!(gamma >= 1 && gamma < 4.0 / 3.0)) throw DomainError("gamma must lie in [1, 4/3)");
  if (!(epsilon0 > 0)) throw DomainError("epsilon0 must be positive");
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (q.empty()) throw DomainError("holder_bound needs a nonempty subset Q");
  HolderReport r;
  r.gamma = gamma;
  r.delta_conjugate = gamma == 1 ? std::numeric_limits<double>::infinity() : gamma / (gamma - 1);
  const double inv_delta = gamma == 1 ? 0.0 : 1.0 / r.delta_conjugate;
  if (!(0.25 - inv_delta - epsilon0 > 0)) throw DomainError("need 1/4 - 1/delta - epsilon0 > 0");
  r.epsilon0 = epsilon0;
  r.alpha = alpha;
  r.n = m.degree();

  const PrimeSet sub = q.as_prime_set();
  const GridShape sub_shape(sub, m.degree(), cap);
  r.q_product = static_cast<double>(sub.product());

  for (std::uint64_t gi = 0; gi < sub_shape.size(); ++gi)
    r.measure_norm += std::pow(std::abs(measure_fourier_at(m, detail::embed_frequency(m.primes(), q, sub_shape, gi))), gamma);

  // The restricted Moebius sum factorizes over p in Q; G -> -G is a bijection.
  r.moebius_norm = 1;
  r.spectral_bound_holds = true;
  for (auto p : sub.primes()) {
    const Spectrum& spec = moebius_spectrum(PrimeField(p), m.degree(), cap);
    const double mx = spec.max_abs();
    if (mx > std::pow(static_cast<double>(p), (0.75 + epsilon0) * m.degree()) * (1 + 1e-12))
      r.spectral_bound_holds = false;
    if (gamma == 1) {
      r.moebius_norm *= mx;
    } else {
      double acc = 0;
      for (const auto& v : spec.values) acc += std::pow(std::abs(v), r.delta_conjugate);
      r.moebius_norm *= std::pow(acc, inv_delta);
    }
  }
  const double qn = std::pow(r.q_product, static_cast<double>(m.degree()));
  r.raw_bound = std::pow(r.measure_norm, 1.0 / gamma) * r.moebius_norm / qn;
  r.expectation = to_double(expected_moebius_direct(m, q, cap));
  r.raw_inequality_holds = std::abs(r.expectation) <= r.raw_bound * (1 + 1e-9) + 1e-12;
  r.u = 0.25 - inv_delta - epsilon0 - std::log(alpha) / std::log(r.q_product);
  r.simplified_bound = std::pow(r.q_product, -r.u * m.degree());
  r.measure_norm_within_alpha = r.measure_norm <= std::pow(alpha, gamma * m.degree()) * (1 + 1e-12);
  return r;
}

}  // namespace boxgal
