#pragma once

// Galois group statistics for random integer polynomials. Frobenius cycle
// types come from factoring f mod p (Dedekind); a sound but incomplete rule
// set turns them into an S_n certificate.

#include <boxgal/discprob.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace boxgal {

struct CycleType {
  /// ascending factor degrees
  std::vector<unsigned> parts;
  std::uint64_t prime = 0;

  unsigned total() const { return std::accumulate(parts.begin(), parts.end(), 0u); }
  /// sign of the permutation: odd iff n - #cycles is odd
  bool is_odd() const { return (total() - parts.size()) % 2 == 1; }

  /// Some power of the element is a single r-cycle: r occurs once and every
  /// other part is coprime to r.
  bool isolates_cycle(unsigned r) const {
    if (std::count(parts.begin(), parts.end(), r) != 1) return false;
    for (auto part : parts)
      if (part != r && std::gcd(part, r) != 1) return false;
    return true;
  }

  friend bool operator==(const CycleType&, const CycleType&) = default;
};

inline std::string to_string(const CycleType& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.parts.size(); ++i) s += (i ? "," : "") + std::to_string(t.parts[i]);
  return s + "]";
}

/// Factor degrees of f mod p, or nullopt when f mod p is not squarefree.
inline std::optional<CycleType> cycle_type(const IntPoly& f, std::uint64_t p) {
  const FFPoly fp = f.mod(PrimeField(p));
  if (!is_squarefree(fp)) return std::nullopt;
  CycleType t{factor_degrees(fp), p};
  std::sort(t.parts.begin(), t.parts.end());
  return t;
}

/// An integer root, searched among the divisors of the constant term. Returns
/// nullopt if none exists or if |f(0)| is too large to enumerate divisors.
inline std::optional<BigInt> integer_root(const IntPoly& f) {
  const BigInt c0 = f[0];
  if (c0 == 0) return BigInt(0);
  const BigInt a = c0 < 0 ? BigInt(-c0) : c0;
  if (a > BigInt(1) << 62) {
    for (int s : {1, -1})
      if (f.evaluate(BigInt(s)) == 0) return BigInt(s);
    return std::nullopt;
  }
  const auto v = static_cast<std::uint64_t>(a);
  for (std::uint64_t d = 1; d * d <= v; ++d) {
    if (v % d != 0) continue;
    for (std::uint64_t e : {d, v / d})
      for (int s : {1, -1}) {
        BigInt x = BigInt(e) * s;
        if (f.evaluate(x) == 0) return x;
      }
  }
  return std::nullopt;
}

enum class Verdict { SnCertified, NotSnReducible, NotSnDiscSquare, Unknown };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::SnCertified: return "SN_CERTIFIED";
    case Verdict::NotSnReducible: return "NOT_SN(reducible)";
    case Verdict::NotSnDiscSquare: return "NOT_SN(disc-square)";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

/// Witness primes; 0 when absent.
struct Certificate {
  Verdict verdict = Verdict::Unknown;
  /// type [n]
  std::uint64_t transitive_prime = 0;
  /// type [1, n-1] or an isolated prime cycle of length > n/2; unused when n is prime
  std::uint64_t primitive_prime = 0;
  /// isolated 3-cycle, prime cycle of length <= n-3, or transposition
  std::uint64_t cycle_prime = 0;
  /// odd permutation
  std::uint64_t odd_prime = 0;
  std::optional<BigInt> rational_root;
  std::optional<BigInt> disc;
  unsigned primes_scanned = 0;
};

namespace detail {

// State of the rule set over the types seen so far.
struct CertifierState {
  unsigned n;
  bool transitive = false;
  bool primitive = false;
  bool has_transposition = false;
  bool has_jordan_cycle = false;
  bool has_odd = false;

  explicit CertifierState(unsigned deg) : n(deg) { primitive = is_prime_u64(deg); }

  // Transitive group of prime degree is primitive. A transitive group with a
  // [1, n-1] element is 2-transitive. A transitive group containing a prime
  // q-cycle with q > n/2 is primitive (blocks would have size >= q > n/2).
  // Primitive + transposition = S_n; primitive + 3-cycle or prime q-cycle
  // with q <= n-3 contains A_n (Jordan).
  void observe(const CycleType& t, Certificate& c) {
    const auto& parts = t.parts;
    if (parts.size() == 1) {
      transitive = true;
      if (!c.transitive_prime) c.transitive_prime = t.prime;
    }
    bool prim_here = parts.size() == 2 && parts[0] == 1 && parts[1] == n - 1;
    bool alt_here = false;
    bool transposition_here = t.isolates_cycle(2);
    for (auto q : parts) {
      if (!is_prime_u64(q) || !t.isolates_cycle(q)) continue;
      if (2 * q > n) prim_here = true;
      if (q == 3 || q + 3 <= n) alt_here = true;
    }
    if (prim_here && !primitive) {
      primitive = true;
      c.primitive_prime = t.prime;
    }
    if ((alt_here || transposition_here) && !c.cycle_prime) c.cycle_prime = t.prime;
    has_jordan_cycle = has_jordan_cycle || alt_here;
    has_transposition = has_transposition || transposition_here;
    if (t.is_odd() && !has_odd) {
      has_odd = true;
      c.odd_prime = t.prime;
    }
  }

  bool certified() const {
    if (!transitive) return false;
    if (n <= 2) return true;
    if (!primitive) return false;
    return has_transposition || (has_jordan_cycle && has_odd);
  }
};

}  // namespace detail

/// Scans the first `prime_budget` primes from 2 upward.
inline Certificate sn_certificate(const IntPoly& f, unsigned prime_budget) {
  const unsigned n = f.degree();
  if (n < 2) throw DomainError("sn_certificate needs degree n >= 2");
  if (prime_budget < 1) throw DomainError("prime budget must be at least 1");
  Certificate c;
  if (auto r = integer_root(f)) {
    c.rational_root = r;
    c.verdict = Verdict::NotSnReducible;
    return c;
  }
  detail::CertifierState state(n);
  std::uint64_t p = 2;
  for (unsigned used = 0; used < prime_budget; ++p) {
    if (!is_prime_u64(p)) continue;
    ++used;
    c.primes_scanned = used;
    auto t = cycle_type(f, p);
    if (!t) continue;
    state.observe(*t, c);
    if (state.certified()) {
      c.verdict = Verdict::SnCertified;
      return c;
    }
  }
  c.disc = disc_int(f);
  if (*c.disc == 0) {
    // gcd(f, f') is a proper factor
    c.verdict = Verdict::NotSnReducible;
  } else if (is_perfect_square_int(*c.disc)) {
    c.verdict = Verdict::NotSnDiscSquare;
  } else {
    c.verdict = Verdict::Unknown;
  }
  return c;
}

enum class CubicGroup { S3, C3, S2, C1, Degenerate };

inline std::string to_string(CubicGroup g) {
  switch (g) {
    case CubicGroup::S3: return "S3";
    case CubicGroup::C3: return "C3";
    case CubicGroup::S2: return "S2";
    case CubicGroup::C1: return "C1";
    case CubicGroup::Degenerate: return "degenerate";
  }
  return "degenerate";
}

/// Exact Galois group of a monic cubic. If f = (X - r) g, disc f = disc(g) g(r)^2,
/// so the square test on disc f also decides g.
inline CubicGroup exact_cubic_galois(const IntPoly& f) {
  if (f.degree() != 3) throw DomainError("exact_cubic_galois needs degree 3");
  const BigInt d = disc_int(f);
  if (d == 0) return CubicGroup::Degenerate;
  const bool square = is_perfect_square_int(d);
  if (integer_root(f)) return square ? CubicGroup::C1 : CubicGroup::S2;
  return square ? CubicGroup::C3 : CubicGroup::S3;
}

/// n^3 log L / sqrt(L)
inline double gallagher_rhs(unsigned n, double L) {
  if (!(L >= 2)) throw DomainError("gallagher_rhs needs L >= 2");
  const double nn = n;
  return nn * nn * nn * std::log(L) / std::sqrt(L);
}

enum class Regime { Gallagher, Uniform, Outside, NotBox };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::Gallagher: return "L>=n^7";
    case Regime::Uniform: return "|a|<=exp(n^(1/3))/2";
    case Regime::Outside: return "outside";
    case Regime::NotBox: return "not-a-box-law";
  }
  return "outside";
}

/// Where (n, a, L) sits relative to the uniformity statement: either L >= n^7,
/// or |a| <= exp(n^(1/3))/2.
inline Regime uniformity_regime(const PolyLaw& law) {
  if (law.laws.empty() || !std::all_of(law.laws.begin(), law.laws.end(),
                                       [&](const CoeffLaw& c) { return c.is_box() && c == law.laws[0]; }))
    return Regime::NotBox;
  const auto& b = law.laws[0].as_box();
  const double n = law.n;
  if (static_cast<double>(b.L) >= std::pow(n, 7)) return Regime::Gallagher;
  if (std::abs(static_cast<double>(b.a)) <= 0.5 * std::exp(std::cbrt(n))) return Regime::Uniform;
  return Regime::Outside;
}

struct GaloisEstimate {
  std::uint64_t samples = 0;
  std::uint64_t certified = 0;
  std::uint64_t disc_square = 0;
  std::uint64_t reducible = 0;
  std::uint64_t unknown = 0;
  std::uint64_t seed = 0;
  unsigned budget = 0;
  /// NaN unless the law is an iid box law
  double gallagher_bound = std::nan("");
  Regime regime = Regime::NotBox;
  double elapsed_ms = 0;

  double rate(std::uint64_t count) const { return static_cast<double>(count) / static_cast<double>(samples); }
  double certified_rate() const { return rate(certified); }
  double disc_square_rate() const { return rate(disc_square); }
  double reducible_rate() const { return rate(reducible); }
  double unknown_rate() const { return rate(unknown); }

  bool same_result(const GaloisEstimate& o) const {
    return samples == o.samples && certified == o.certified && disc_square == o.disc_square &&
           reducible == o.reducible && unknown == o.unknown && seed == o.seed && budget == o.budget;
  }
};

struct GaloisOptions {
  std::uint64_t samples = 10'000;
  unsigned budget = 50;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Optional per-sample hook, called from worker threads.
using SampleObserver = std::function<void(const IntPoly&, const Certificate&)>;

inline GaloisEstimate estimate_prob_sn(const PolyLaw& law, const GaloisOptions& opt,
                                       const SampleObserver& observer = {}) {
  if (opt.samples < 1) throw DomainError("samples must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const PolySampler sampler(law);
  if (law.n < 2) throw DomainError("estimate_prob_sn needs n >= 2");
  struct Tally {
    std::uint64_t cert = 0, sq = 0, red = 0, unk = 0;
  };
  auto blocks = run_blocks<Tally>(opt.samples, opt.seed, opt.threads, [&](Rng& rng, std::uint64_t b, std::uint64_t e) {
    Tally t;
    std::vector<std::int64_t> lower;
    for (std::uint64_t i = b; i < e; ++i) {
      sampler.draw(rng, lower);
      const IntPoly f = IntPoly::from_lower(lower);
      const Certificate c = sn_certificate(f, opt.budget);
      switch (c.verdict) {
        case Verdict::SnCertified: ++t.cert; break;
        case Verdict::NotSnDiscSquare: ++t.sq; break;
        case Verdict::NotSnReducible: ++t.red; break;
        case Verdict::Unknown: ++t.unk; break;
      }
      if (observer) observer(f, c);
    }
    return t;
  });
  GaloisEstimate est;
  est.samples = opt.samples;
  est.seed = opt.seed;
  est.budget = opt.budget;
  for (const auto& t : blocks) {
    est.certified += t.cert;
    est.disc_square += t.sq;
    est.reducible += t.red;
    est.unknown += t.unk;
  }
  est.regime = uniformity_regime(law);
  if (est.regime != Regime::NotBox) {
    const double L = static_cast<double>(law.laws[0].as_box().L);
    if (L >= 2) est.gallagher_bound = gallagher_rhs(law.n, L);
  }
  est.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return est;
}

}  // namespace boxgal
