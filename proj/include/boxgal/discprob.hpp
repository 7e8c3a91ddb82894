#pragma once

// Probability that the discriminant is a square: exactly over F_p, and by
// Monte Carlo over Z with a multi-prime prescreen. Also the evaluators for
// the stated upper bounds.

#include <boxgal/bounds.hpp>
#include <boxgal/moebius_stats.hpp>
#include <boxgal/parallel.hpp>

#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace boxgal {

// ---------------------------------------------------------------------------
// Over F_p

/// chi_p(a) >= 0; zero counts as a square.
inline bool is_square_fq(Residue a, const PrimeField& field) { return quadratic_character(a, field) >= 0; }

/// P(disc F is a square) by enumerating M_{p,n}.
template <class S>
S prob_disc_square_fq(const ProductMeasure<S>& m, std::uint64_t cap = kDefaultEnumerationCap) {
  if (m.primes().size() != 1) throw DomainError("prob_disc_square_fq needs a measure over a single prime");
  const PrimeField field(m.primes()[0]);
  if (field.p() == 2) throw DomainError("prob_disc_square_fq needs an odd prime (p = 2 given)");
  const GridShape shape = m.shape(cap);
  S acc(0);
  for (std::uint64_t i = 0; i < shape.size(); ++i) {
    const auto digits = shape.digits(i);
    S w = m.mass(digits);
    if (w == 0) continue;
    auto c = digits[0];
    c.push_back(1);
    if (is_square_fq(discriminant(FFPoly(field, std::move(c))), field)) acc += w;
  }
  return acc;
}

template <class S>
struct DecompositionTerms {
  S lhs;
  S rhs;
  S expected_mu;
  S expected_eta;
  /// ((-1)^n / 2) E(mu), the signed Moebius average
  S signed_moebius_term;
  bool exact_match() const { return lhs == rhs; }
};

/// P(disc = square) against 1/2 + ((-1)^n/2) E(mu) + (1/2) E(1_{mu = 0}).
template <class S>
DecompositionTerms<S> decomposition_check(const ProductMeasure<S>& m, std::uint64_t cap = kDefaultEnumerationCap) {
  DecompositionTerms<S> t;
  t.lhs = prob_disc_square_fq(m, cap);
  const auto all = SubsetSelector::all(m.primes());
  t.expected_mu = expected_moebius_direct(m, all, cap);
  t.expected_eta = expected_eta_direct(m, all, cap);
  const S half = S(1) / S(2);
  t.signed_moebius_term = (m.degree() % 2 == 0 ? half : S(-half)) * t.expected_mu;
  t.rhs = half + t.signed_moebius_term + half * t.expected_eta;
  return t;
}

/// Parameters (gamma, alpha, c) of the finite-field estimate.
struct FqBoundParams {
  double gamma = 1;
  double alpha = 2;
  double c = 0.2;

  void validate() const {
    if (!(gamma >= 1 && gamma < 4.0 / 3.0)) throw DomainError("gamma must lie in [1, 4/3)");
    if (!(alpha > 0)) throw DomainError("alpha must be positive");
    if (!(c > 0 && c < (4 - 3 * gamma) / (4 * gamma))) throw DomainError("c must lie in (0, (4-3 gamma)/(4 gamma))");
  }
};

struct Prop33Report {
  std::uint64_t q = 0;
  unsigned n = 0;
  FqBoundParams params;
  double omega_q = 0;
  double fourier_norm = 0;
  double fourier_norm_limit = 0;
  bool norm_condition = false;
  /// sum_{i <= n/2} sum_{D in M_{q,i}} mu(D) P(D^2 | F); always <= 0, so its absolute value is compared
  double divisor_sum = 0;
  bool divisor_condition = false;
  double prob_square = 0;
  double deviation = 0;
  double bound = 0;
  bool conclusion_holds = false;
  /// both hypotheses hold; the threshold C on q is not effective, so this does not certify the conclusion
  bool hypotheses_hold() const { return norm_condition && divisor_condition; }
};

template <class S>
Prop33Report prop33_check(const ProductMeasure<S>& m, const FqBoundParams& params, double omega_q,
                          std::uint64_t cap = kDefaultEnumerationCap) {
  params.validate();
  if (m.primes().size() != 1) throw DomainError("prop33_check needs a measure over a single prime");
  if (!(omega_q >= 0)) throw DomainError("omega_q must be nonnegative");
  Prop33Report r;
  r.q = m.primes()[0];
  r.n = m.degree();
  r.params = params;
  r.omega_q = omega_q;
  const double nn = static_cast<double>(r.n);
  r.fourier_norm = l_gamma_norm(m, params.gamma);
  r.fourier_norm_limit = std::pow(params.alpha, params.gamma * nn);
  r.norm_condition = r.fourier_norm <= r.fourier_norm_limit * (1 + 1e-12);

  const PrimeField field(r.q);
  const auto rows = m.rows();
  double sum = 0;
  for (unsigned i = 1; 2 * i <= r.n; ++i)
    for (const FFPoly& d : MonicPolys(field, i, cap))
      if (int mu = moebius(d); mu != 0)
        sum += mu * to_double(detail::joint_square_divisor_mass(rows, r.n, {{r.q, d}}, cap));
  r.divisor_sum = sum;
  const double inv_omega = omega_q == 0 ? std::numeric_limits<double>::infinity() : 1 / omega_q;
  r.divisor_condition = std::abs(sum) <= inv_omega * (1 + 1e-12);

  r.prob_square = to_double(prob_disc_square_fq(m, cap));
  r.deviation = std::abs(r.prob_square - 0.5);
  r.bound = 0.5 * std::pow(static_cast<double>(r.q), -params.c * nn) + 0.5 * inv_omega;
  r.conclusion_holds = r.deviation <= r.bound * (1 + 1e-12);
  return r;
}

// ---------------------------------------------------------------------------
// Over Z

/// Monic integer polynomial, little-endian coefficients.
class IntPoly {
 public:
  explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
    if (c_.size() < 2 || c_.back() != 1) throw DomainError("IntPoly must be monic of degree at least 1");
  }

  /// X^n + sum_{k<n} lower[k] X^k
  static IntPoly from_lower(std::span<const std::int64_t> lower) {
    std::vector<BigInt> c(lower.begin(), lower.end());
    c.emplace_back(1);
    return IntPoly(std::move(c));
  }

  unsigned degree() const { return static_cast<unsigned>(c_.size() - 1); }
  const std::vector<BigInt>& coeffs() const { return c_; }
  const BigInt& operator[](std::size_t k) const { return c_[k]; }

  FFPoly mod(const PrimeField& field) const {
    std::vector<Residue> r(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) r[k] = mod_floor(c_[k], field.p());
    return FFPoly(field, std::move(r));
  }

  BigInt evaluate(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  std::vector<BigInt> c_;
};

inline std::string to_string(const IntPoly& f) {
  std::string out;
  for (std::size_t k = f.coeffs().size(); k-- > 0;) {
    const BigInt& c = f[k];
    if (c == 0) continue;
    BigInt a = c < 0 ? BigInt(-c) : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? "-" : "+";
    }
    if (a != 1 || k == 0) {
      out += a.str();
      if (k > 0) out += "*";
    }
    if (k >= 1) out += "X";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

/// Parses e.g. "X^3-3*X-1"; T is accepted for X. The result must be monic.
inline IntPoly parse_intpoly(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  auto fail = [&] { throw DomainError("cannot parse integer polynomial '" + std::string(text) + "'"); };
  if (s.empty()) fail();
  std::map<std::size_t, BigInt> terms;
  std::size_t i = 0;
  while (i < s.size()) {
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
      neg = s[i] == '-';
      ++i;
    } else if (i != 0) {
      fail();
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    const bool had_coef = i > start;
    // skip leading zeros: cpp_int would take them as an octal prefix
    while (start + 1 < i && s[start] == '0') ++start;
    BigInt coef = had_coef ? BigInt(s.substr(start, i - start)) : BigInt(1);
    if (i < s.size() && s[i] == '*') {
      if (!had_coef) fail();
      ++i;
    }
    std::size_t exp = 0;
    if (i < s.size() && (s[i] == 'X' || s[i] == 'T' || s[i] == 'x' || s[i] == 't')) {
      ++i;
      exp = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t e0 = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == e0 || i - e0 > 6) fail();
        exp = std::stoul(s.substr(e0, i - e0));
      }
    } else if (!had_coef) {
      fail();
    }
    terms[exp] += neg ? BigInt(-coef) : coef;
  }
  std::size_t deg = terms.rbegin()->first;
  while (deg > 0 && terms[deg] == 0) --deg;
  std::vector<BigInt> c(deg + 1, 0);
  for (const auto& [e, v] : terms)
    if (e <= deg) c[e] = v;
  return IntPoly(std::move(c));
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign < 0 ? BigInt(-a[n - 1][n - 1]) : a[n - 1][n - 1];
}

/// Sylvester matrix of (a, b) with deg a = m, deg b = k: k shifted rows of a, then m of b.
inline std::vector<std::vector<BigInt>> sylvester_matrix(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  const std::size_t m = a.size() - 1;
  const std::size_t k = b.size() - 1;
  const std::size_t size = m + k;
  std::vector<std::vector<BigInt>> s(size, std::vector<BigInt>(size, 0));
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j <= m; ++j) s[r][r + j] = a[m - j];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j <= k; ++j) s[k + r][r + j] = b[k - j];
  return s;
}

/// disc(f) = (-1)^(n(n-1)/2) Res(f, f') for monic f.
inline BigInt disc_int(const IntPoly& f) {
  const unsigned n = f.degree();
  if (n == 1) return 1;
  std::vector<BigInt> df(n);
  for (unsigned k = 1; k <= n; ++k) df[k - 1] = f[k] * k;
  BigInt r = bareiss_determinant(sylvester_matrix(f.coeffs(), df));
  return (static_cast<std::uint64_t>(n) * (n - 1) / 2) % 2 == 1 ? BigInt(-r) : r;
}

inline bool is_perfect_square_int(const BigInt& x) {
  if (x < 0) return false;
  BigInt r = boost::multiprecision::sqrt(x);
  return r * r == x;
}

/// The `count` odd primes following max(n, 20).
inline std::vector<std::uint64_t> default_filter_primes(unsigned n, std::size_t count = 25) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = std::max<std::uint64_t>(n, 20) + 1; out.size() < count; ++x)
    if (x % 2 == 1 && is_prime_u64(x)) out.push_back(x);
  return out;
}

namespace detail {

// Draws one integer coefficient. Explicit laws use thresholds of the CDF
// scaled to 2^64, so each mass is realized to within 2^-64.
class CoeffSampler {
 public:
  explicit CoeffSampler(const CoeffLaw& law) {
    if (law.is_box()) {
      box_ = law.as_box();
      return;
    }
    Rational cum = 0;
    const Rational two64 = Rational(BigInt(1) << 64);
    for (const auto& [v, w] : law.as_explicit().mass) {
      if (w == 0) continue;
      cum += w;
      values_.push_back(v);
      Rational t = cum * two64;
      BigInt fl = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
      thresholds_.push_back(fl >= (BigInt(1) << 64) ? UINT64_MAX : static_cast<std::uint64_t>(fl));
    }
    thresholds_.back() = UINT64_MAX;
  }

  std::int64_t operator()(Rng& rng) const {
    if (values_.empty()) return box_.a + 1 + static_cast<std::int64_t>(uniform_below(rng, box_.L));
    const std::uint64_t u = rng();
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (u < thresholds_[i]) return values_[i];
    return values_.back();
  }

 private:
  UniformBox box_;
  std::vector<std::int64_t> values_;
  std::vector<std::uint64_t> thresholds_;
};

}  // namespace detail

/// Draws the lower coefficients of f.
class PolySampler {
 public:
  explicit PolySampler(const PolyLaw& law) : n_(law.n) {
    if (law.laws.size() != law.n) throw DomainError("PolyLaw needs one coefficient law per slot");
    if (law.n < 1) throw DomainError("degree n must be at least 1");
    for (const auto& l : law.laws) slots_.emplace_back(l);
  }

  unsigned degree() const { return n_; }

  void draw(Rng& rng, std::vector<std::int64_t>& lower) const {
    lower.resize(n_);
    for (unsigned k = 0; k < n_; ++k) lower[k] = slots_[k](rng);
  }

 private:
  unsigned n_;
  std::vector<detail::CoeffSampler> slots_;
};

struct DiscSquareEstimate {
  std::uint64_t samples = 0;
  /// disc is a square, zero included
  std::uint64_t hits = 0;
  std::uint64_t zero_disc = 0;
  /// samples that reached the exact check
  std::uint64_t exact_checks = 0;
  /// rejected samples whose exact disc was nonetheless a square (verify mode only; must stay 0)
  std::uint64_t prescreen_violations = 0;
  double estimate = 0;
  WilsonInterval wilson95;
  double zero_disc_rate = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0;

  /// Everything but the timing.
  bool same_result(const DiscSquareEstimate& o) const {
    return samples == o.samples && hits == o.hits && zero_disc == o.zero_disc && exact_checks == o.exact_checks &&
           prescreen_violations == o.prescreen_violations && seed == o.seed;
  }
};

struct McOptions {
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  /// empty means default_filter_primes(n)
  std::vector<std::uint64_t> filter_primes;
  /// also run the exact check on rejected samples
  bool verify_rejections = false;
};

/// True if some filter prime proves disc(f) is not a square in Z.
inline bool prescreen_rejects(std::span<const std::int64_t> lower, const std::vector<PrimeField>& fields,
                              std::vector<Residue>& scratch) {
  for (const auto& field : fields) {
    scratch.resize(lower.size() + 1);
    for (std::size_t k = 0; k < lower.size(); ++k) scratch[k] = field.reduce(lower[k]);
    scratch.back() = 1;
    if (quadratic_character(discriminant(FFPoly(field, scratch)), field) < 0) return true;
  }
  return false;
}

inline DiscSquareEstimate mc_disc_square(const PolyLaw& law, const McOptions& opt) {
  if (opt.samples < 1) throw DomainError("samples must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const PolySampler sampler(law);
  std::vector<PrimeField> fields;
  for (auto p : opt.filter_primes.empty() ? default_filter_primes(law.n) : opt.filter_primes) {
    if (p == 2) throw DomainError("filter primes must be odd");
    fields.emplace_back(p);
  }
  struct Tally {
    std::uint64_t hits = 0, zero = 0, exact = 0, violations = 0;
  };
  auto blocks = run_blocks<Tally>(opt.samples, opt.seed, opt.threads, [&](Rng& rng, std::uint64_t b, std::uint64_t e) {
    Tally t;
    std::vector<std::int64_t> lower;
    std::vector<Residue> scratch;
    for (std::uint64_t i = b; i < e; ++i) {
      sampler.draw(rng, lower);
      const bool rejected = prescreen_rejects(lower, fields, scratch);
      if (rejected && !opt.verify_rejections) continue;
      const BigInt d = disc_int(IntPoly::from_lower(lower));
      const bool square = is_perfect_square_int(d);
      if (rejected) {
        if (square) ++t.violations;
        continue;
      }
      ++t.exact;
      if (square) ++t.hits;
      if (d == 0) ++t.zero;
    }
    return t;
  });
  DiscSquareEstimate est;
  est.samples = opt.samples;
  est.seed = opt.seed;
  for (const auto& t : blocks) {
    est.hits += t.hits;
    est.zero_disc += t.zero;
    est.exact_checks += t.exact;
    est.prescreen_violations += t.violations;
  }
  const double n = static_cast<double>(est.samples);
  est.estimate = static_cast<double>(est.hits) / n;
  est.zero_disc_rate = static_cast<double>(est.zero_disc) / n;
  est.wilson95 = wilson(est.hits, est.samples);
  est.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return est;
}

// ---------------------------------------------------------------------------
// Bound evaluators (natural logarithms)

/// 2^(-(1/2 - delta) log L / log log L) + (log L / log log L) (2 / ((1 - delta) log L))^((1/4 - eps) n)
inline double theorem2_rhs(double L, unsigned n, double delta, double eps) {
  if (!(L >= 16)) throw DomainError("theorem2_rhs needs L >= 16");
  if (!(delta > 0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  if (!(eps > 0 && eps < 0.125)) throw DomainError("epsilon must lie in (0, 1/8)");
  if (n <= 8) throw DomainError("theorem2_rhs needs n > 8");
  const double lg = std::log(L);
  const double t = lg / std::log(lg);
  return std::pow(2.0, -(0.5 - delta) * t) + t * std::pow(2 / ((1 - delta) * lg), (0.25 - eps) * n);
}

/// prod_p (1 + 1/(2 p^(cn))) - 1 + 2^-#P prod_p (1 + 1/omega(p))
inline double prop23_rhs(const PrimeSet& primes, const std::map<std::uint64_t, double>& omega, double c, unsigned n) {
  if (!(c > 0)) throw DomainError("c must be positive");
  double first = 1;
  double second = std::pow(2.0, -static_cast<double>(primes.size()));
  for (auto p : primes.primes()) {
    auto it = omega.find(p);
    if (it == omega.end()) throw DomainError("omega is missing p = " + std::to_string(p));
    if (!(it->second > 0)) throw DomainError("omega(" + std::to_string(p) + ") must be positive");
    first *= 1 + 0.5 * std::pow(static_cast<double>(p), -c * n);
    second *= 1 + 1 / it->second;
  }
  return first - 1 + second;
}

class EmptyWindow : public DomainError {
 public:
  EmptyWindow(double lo, double hi)
      : DomainError("no prime in the window (" + std::to_string(lo) + ", " + std::to_string(hi) + "]"), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

/// All primes p with (1-delta)/2 log L < p <= (1-delta) log L.
inline PrimeSet choose_prime_window(double L, double delta) {
  if (!(delta > 0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  if (!(L > 1)) throw DomainError("L must exceed 1");
  const double hi = (1 - delta) * std::log(L);
  const double lo = hi / 2;
  auto primes = primes_in(static_cast<std::uint64_t>(std::floor(lo)), static_cast<std::uint64_t>(std::floor(hi)));
  // floor(lo) < p is the same as lo < p for integers p unless lo is an integer
  std::erase_if(primes, [&](std::uint64_t p) { return !(static_cast<double>(p) > lo); });
  if (primes.empty()) throw EmptyWindow(lo, hi);
  return PrimeSet(primes);
}

/// prop23_rhs with the window of choose_prime_window(L, delta), omega(p) = (p-4)/4 and c = 1/4 - eps.
struct WindowedBound {
  PrimeSet primes;
  double value = 0;
  bool applicable = false;
  std::string note;
};

inline WindowedBound prop23_with_window(double L, double delta, double eps, unsigned n) {
  WindowedBound w{choose_prime_window(L, delta), 0, false, ""};
  std::map<std::uint64_t, double> omega;
  for (auto p : w.primes.primes()) {
    if (p <= 4) {
      w.note = "window contains p = " + std::to_string(p) + " where (p-4)/4 <= 0";
      return w;
    }
    omega[p] = (static_cast<double>(p) - 4) / 4;
  }
  w.value = prop23_rhs(w.primes, omega, 0.25 - eps, n);
  w.applicable = true;
  return w;
}

}  // namespace boxgal
