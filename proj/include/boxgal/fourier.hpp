#pragma once

// Fourier analysis on M_{P,n} = prod_p M_{p,n} at the frequencies T^-n G.
//
// For monic G, H of degree n, res(T^-n G H) is the coefficient of T^(n-1) in
// G H, i.e. sum_{i+j=n-1} G^i H^j. Both indices stay below n, so the leading
// coefficients never take part and the transform is an ordinary character
// transform over (Z/p)^n per prime with the coefficient order of G reversed.
//
// Only the grid T^-n G is used. For degree-n inputs the character sum at a
// general theta depends only on the tail of theta down to T^-n, and every such
// tail is T^-n G for a unique monic G, so nothing is lost.

#include <boxgal/cyclotomic.hpp>
#include <boxgal/ffpoly.hpp>
#include <boxgal/torus.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

namespace boxgal {

/// Index space of M_{P,n}. The flat index is mixed radix: the first prime
/// varies fastest, and within a prime coefficient 0 varies fastest.
class GridShape {
 public:
  GridShape(PrimeSet primes, unsigned n, std::uint64_t cap = kDefaultEnumerationCap)
      : primes_(std::move(primes)), n_(n) {
    size_ = 1;
    for (auto p : primes_.primes()) {
      std::uint64_t block = checked_pow(p, n, cap);
      if (size_ > cap / block) throw CapExceeded("grid M_{P,n} exceeds the enumeration cap");
      strides_.push_back(size_);
      size_ *= block;
    }
  }

  const PrimeSet& primes() const { return primes_; }
  unsigned degree() const { return n_; }
  std::uint64_t size() const { return size_; }
  std::size_t prime_count() const { return primes_.size(); }

  /// Index of the component for prime number s (0-based) inside M_{p_s,n}.
  std::uint64_t component(std::uint64_t index, std::size_t s) const { return (index / strides_[s]) % block(s); }

  std::uint64_t block(std::size_t s) const {
    std::uint64_t b = 1;
    for (unsigned k = 0; k < n_; ++k) b *= primes_[s];
    return b;
  }

  std::uint64_t stride(std::size_t s) const { return strides_[s]; }

  /// Lower coefficients (G^0..G^(n-1)) of every component.
  std::vector<std::vector<Residue>> digits(std::uint64_t index) const {
    std::vector<std::vector<Residue>> out(primes_.size(), std::vector<Residue>(n_));
    for (std::size_t s = 0; s < primes_.size(); ++s) {
      const std::uint64_t p = primes_[s];
      for (unsigned k = 0; k < n_; ++k) {
        out[s][k] = index % p;
        index /= p;
      }
    }
    return out;
  }

  std::uint64_t index_of(const std::vector<std::vector<Residue>>& digits) const {
    std::uint64_t idx = 0;
    for (std::size_t s = primes_.size(); s-- > 0;) {
      for (unsigned k = n_; k-- > 0;) idx = idx * primes_[s] + digits[s][k] % primes_[s];
    }
    return idx;
  }

  /// Monic polynomial tuple at a flat index.
  std::vector<FFPoly> polys(std::uint64_t index) const {
    auto d = digits(index);
    std::vector<FFPoly> out;
    for (std::size_t s = 0; s < primes_.size(); ++s) {
      d[s].push_back(1);
      out.emplace_back(PrimeField(primes_[s]), d[s]);
    }
    return out;
  }

  std::uint64_t index_of(const std::vector<FFPoly>& tuple) const {
    if (tuple.size() != primes_.size()) throw DomainError("tuple size does not match the prime set");
    std::vector<std::vector<Residue>> d(primes_.size(), std::vector<Residue>(n_));
    for (std::size_t s = 0; s < primes_.size(); ++s) {
      const auto& f = tuple[s];
      if (f.p() != primes_[s] || f.degree() != static_cast<int>(n_) || !f.is_monic())
        throw DomainError("tuple entry is not in M_{p,n}");
      for (unsigned k = 0; k < n_; ++k) d[s][k] = f.coeff(k);
    }
    return index_of(d);
  }

  /// Index of the all-T^n tuple.
  std::uint64_t zero_frequency() const { return 0; }

  /// The monic G' with T^-n G' = -T^-n G in the torus: lower coefficients negated.
  std::uint64_t negated(std::uint64_t index) const {
    auto d = digits(index);
    for (std::size_t s = 0; s < primes_.size(); ++s)
      for (auto& v : d[s]) v = (primes_[s] - v) % primes_[s];
    return index_of(d);
  }

  /// Digit-reversed index: coefficient k of each component moves to n-1-k.
  std::uint64_t reversed(std::uint64_t index) const {
    auto d = digits(index);
    for (auto& comp : d) std::reverse(comp.begin(), comp.end());
    return index_of(d);
  }

  friend bool operator==(const GridShape& a, const GridShape& b) {
    return a.primes_ == b.primes_ && a.n_ == b.n_;
  }

 private:
  PrimeSet primes_;
  unsigned n_;
  std::uint64_t size_ = 1;
  std::vector<std::uint64_t> strides_;
};

/// Pairing res_p(T^-n G H) for one prime: sum_{i=0}^{n-1} G^i H^(n-1-i).
inline Residue pairing(std::span<const Residue> g, std::span<const Residue> h, std::uint64_t p) {
  const std::size_t n = g.size();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc = (acc + g[i] * h[n - 1 - i]) % p;
  return acc;
}

/// Phase numerator k of e_P(T^-n G H) = exp(2 pi i k / P).
inline std::uint64_t tuple_phase(const GridShape& shape, const std::vector<std::vector<Residue>>& g,
                                 const std::vector<std::vector<Residue>>& h) {
  std::vector<Residue> r(shape.prime_count());
  for (std::size_t s = 0; s < r.size(); ++s) r[s] = pairing(g[s], h[s], shape.primes()[s]);
  return psi_numerator(shape.primes(), r);
}

/// Complex-valued function on M_{P,n}.
struct GridFunction {
  GridShape shape;
  std::vector<Complex> values;

  explicit GridFunction(GridShape s) : shape(std::move(s)), values(shape.size(), 0.0) {}
  GridFunction(GridShape s, std::vector<Complex> v) : shape(std::move(s)), values(std::move(v)) {
    if (values.size() != shape.size()) throw DomainError("grid function size does not match its shape");
  }

  static GridFunction from_real(GridShape s, const std::vector<double>& v) {
    std::vector<Complex> c(v.begin(), v.end());
    return GridFunction(std::move(s), std::move(c));
  }

  static GridFunction point_mass(GridShape s, std::uint64_t at, double weight = 1.0) {
    GridFunction f(std::move(s));
    f.values.at(at) = weight;
    return f;
  }
};

/// Value at flat index G is eta-hat(T^-n G).
struct Spectrum {
  GridShape shape;
  std::vector<Complex> values;

  double max_abs() const {
    double m = 0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// eta-hat(T^-n G) straight from the definition, using torus arithmetic for
/// every character. O(P^n); the reference route.
inline Complex transform_at(const GridFunction& eta, std::uint64_t g_index) {
  const auto& shape = eta.shape;
  if (g_index >= shape.size()) throw DomainError("frequency index outside M_{P,n}");
  const auto g = shape.polys(g_index);
  const unsigned n = shape.degree();
  Complex acc = 0;
  for (std::uint64_t h = 0; h < shape.size(); ++h) {
    if (eta.values[h] == Complex(0)) continue;
    const auto hp = shape.polys(h);
    std::vector<TorusElem> parts;
    for (std::size_t s = 0; s < hp.size(); ++s) parts.push_back(frac_mul(n, g[s], hp[s]));
    acc += eta.values[h] * e_P(MultiTorusElem(shape.primes(), std::move(parts)));
  }
  return acc;
}

namespace detail {

// In-place length-p DFT along one axis of a mixed-radix tensor.
// sign = +1 forward, -1 inverse (no normalisation).
inline void axis_dft(std::vector<Complex>& data, std::uint64_t stride, std::uint64_t p, int sign) {
  std::vector<Complex> roots(p);
  for (std::uint64_t k = 0; k < p; ++k) roots[k] = root_of_unity(sign > 0 ? k : (p - k) % p, p);
  std::vector<Complex> line(p), out(p);
  const std::uint64_t span = stride * p;
  for (std::uint64_t base = 0; base < data.size(); base += span) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      for (std::uint64_t j = 0; j < p; ++j) line[j] = data[base + off + j * stride];
      for (std::uint64_t k = 0; k < p; ++k) {
        Complex acc = 0;
        for (std::uint64_t j = 0; j < p; ++j) acc += line[j] * roots[(k * j) % p];
        out[k] = acc;
      }
      for (std::uint64_t k = 0; k < p; ++k) data[base + off + k * stride] = out[k];
    }
  }
}

inline void tensor_dft(const GridShape& shape, std::vector<Complex>& data, int sign) {
  for (std::size_t s = 0; s < shape.prime_count(); ++s) {
    const std::uint64_t p = shape.primes()[s];
    std::uint64_t stride = shape.stride(s);
    for (unsigned k = 0; k < shape.degree(); ++k, stride *= p) axis_dft(data, stride, p, sign);
  }
}

}  // namespace detail

/// All of eta-hat(T^-n G) by per-coordinate transforms.
inline Spectrum full_spectrum(const GridFunction& eta) {
  std::vector<Complex> raw = eta.values;
  detail::tensor_dft(eta.shape, raw, +1);
  Spectrum out{eta.shape, std::vector<Complex>(raw.size())};
  for (std::uint64_t g = 0; g < raw.size(); ++g) out.values[g] = raw[eta.shape.reversed(g)];
  return out;
}

/// All frequencies through transform_at. O(P^2n).
inline Spectrum full_spectrum_naive(const GridFunction& eta) {
  Spectrum out{eta.shape, std::vector<Complex>(eta.shape.size())};
  for (std::uint64_t g = 0; g < eta.shape.size(); ++g) out.values[g] = transform_at(eta, g);
  return out;
}

/// eta(F) = P^-n sum_G eta-hat(T^-n G) e_P(-T^-n G F).
inline GridFunction invert(const Spectrum& spec) {
  std::vector<Complex> raw(spec.values.size());
  for (std::uint64_t g = 0; g < raw.size(); ++g) raw[spec.shape.reversed(g)] = spec.values[g];
  detail::tensor_dft(spec.shape, raw, -1);
  const double scale = 1.0 / static_cast<double>(spec.shape.size());
  for (auto& v : raw) v *= scale;
  return GridFunction(spec.shape, std::move(raw));
}

/// sum_G e_P(T^-n F G), exactly. P^n when every F_p = T^n, else 0.
inline BigInt verify_orthogonality(const GridShape& shape, std::uint64_t f_index) {
  const auto f = shape.digits(f_index);
  Cyclotomic<Rational> acc(shape.primes().product());
  for (std::uint64_t g = 0; g < shape.size(); ++g) acc.add_term(tuple_phase(shape, f, shape.digits(g)), Rational(1));
  auto v = acc.exact_value();
  if (!v) throw Error("orthogonality sum is not rational");
  return boost::multiprecision::numerator(*v);
}

struct ParsevalSides {
  double lhs = 0;
  Complex rhs = 0;
};

/// sum_F eta zeta versus P^-n sum_G eta-hat(T^-n G) zeta-hat(-T^-n G).
inline ParsevalSides parseval(const GridFunction& eta, const GridFunction& zeta) {
  if (!(eta.shape == zeta.shape)) throw DomainError("parseval needs functions on the same grid");
  ParsevalSides out;
  for (std::uint64_t i = 0; i < eta.values.size(); ++i) {
    if (std::abs(eta.values[i].imag()) > 0 || std::abs(zeta.values[i].imag()) > 0)
      throw DomainError("parseval is stated for real-valued functions");
    out.lhs += eta.values[i].real() * zeta.values[i].real();
  }
  auto a = full_spectrum(eta);
  auto b = full_spectrum(zeta);
  for (std::uint64_t g = 0; g < a.values.size(); ++g) out.rhs += a.values[g] * b.values[eta.shape.negated(g)];
  out.rhs /= static_cast<double>(eta.shape.size());
  return out;
}

// ---------------------------------------------------------------------------
// Moebius spectra

inline GridFunction moebius_grid(PrimeField field, unsigned n, std::uint64_t cap = kDefaultEnumerationCap) {
  GridShape shape(PrimeSet{field.p()}, n, cap);
  auto mu = moebius_table(field, n, cap);
  std::vector<double> v(mu.begin(), mu.end());
  return GridFunction::from_real(std::move(shape), v);
}

/// Exact mu-hat_p as integer counts: entry [G][k] = sum of mu(H) over H with
/// res_p(T^-n G H) = k.
inline std::vector<std::vector<std::int64_t>> moebius_spectrum_counts(PrimeField field, unsigned n,
                                                                      std::uint64_t cap = kDefaultEnumerationCap) {
  const std::uint64_t p = field.p();
  MonicPolys polys(field, n, cap);
  auto mu = moebius_table(field, n, cap);
  GridShape shape(PrimeSet{p}, n, cap);
  std::vector<std::vector<std::int64_t>> out(polys.size(), std::vector<std::int64_t>(p, 0));
  std::vector<std::vector<Residue>> digits(polys.size());
  for (std::uint64_t h = 0; h < polys.size(); ++h) digits[h] = shape.digits(h)[0];
  for (std::uint64_t g = 0; g < polys.size(); ++g)
    for (std::uint64_t h = 0; h < polys.size(); ++h)
      if (mu[h] != 0) out[g][pairing(digits[g], digits[h], p)] += mu[h];
  return out;
}

struct SpectrumReport {
  std::uint64_t p = 0;
  unsigned n = 0;
  double epsilon = 0;
  double max_abs = 0;
  /// log_p(max) / n
  double exponent = 0;
  /// p^((3/4 + epsilon) n)
  double bound = 0;
  bool bound_holds = false;
};

/// Observed sup-norm of mu-hat_p against p^((3/4+eps)n). Report only: the
/// bound is only guaranteed past an ineffective threshold in p.
inline SpectrumReport moebius_spectrum_report(const Spectrum& mu_hat, double epsilon) {
  if (!(epsilon > 0 && epsilon < 0.25)) throw DomainError("epsilon must lie in (0, 1/4)");
  SpectrumReport r;
  r.p = mu_hat.shape.primes()[0];
  r.n = mu_hat.shape.degree();
  r.epsilon = epsilon;
  r.max_abs = mu_hat.max_abs();
  const double logp = std::log(static_cast<double>(r.p));
  r.exponent = r.max_abs > 0 ? std::log(r.max_abs) / (logp * r.n) : -INFINITY;
  r.bound = std::pow(static_cast<double>(r.p), (0.75 + epsilon) * r.n);
  r.bound_holds = r.max_abs <= r.bound * (1 + 1e-12);
  return r;
}

// ---------------------------------------------------------------------------
// Spectrum CSV and the on-disk cache

inline std::string spectrum_csv_header(const GridShape& shape) {
  std::string h;
  for (auto p : shape.primes().primes()) h += "G_" + std::to_string(p) + ",";
  return h + "real,imag\n";
}

inline void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
  out << spectrum_csv_header(spec.shape);
  char buf[64];
  for (std::uint64_t g = 0; g < spec.values.size(); ++g) {
    for (const auto& f : spec.shape.polys(g)) out << to_string(f) << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", spec.values[g].real(), spec.values[g].imag());
    out << buf;
  }
}

inline Spectrum read_spectrum_csv(std::istream& in, const GridShape& shape) {
  std::string line;
  if (!std::getline(in, line) || line + "\n" != spectrum_csv_header(shape))
    throw Error("spectrum csv header does not match the expected grid");
  Spectrum spec{shape, std::vector<Complex>(shape.size())};
  std::uint64_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != shape.prime_count() + 2) throw Error("malformed spectrum csv row: " + line);
    std::vector<FFPoly> tuple;
    for (std::size_t s = 0; s < shape.prime_count(); ++s)
      tuple.push_back(parse_ffpoly(cells[s], PrimeField(shape.primes()[s])));
    spec.values[shape.index_of(tuple)] = Complex(std::stod(cells[shape.prime_count()]),
                                                 std::stod(cells[shape.prime_count() + 1]));
    ++rows;
  }
  if (rows != shape.size()) throw Error("spectrum csv has the wrong number of rows");
  return spec;
}

/// mu-hat_p over M_{p,n}, memoized in-process and, when BOXGAL_CACHE_DIR is
/// set, on disk as mu_<p>_<n>.csv.
inline Spectrum moebius_spectrum(PrimeField field, unsigned n, std::uint64_t cap = kDefaultEnumerationCap) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, Spectrum> memo;
  const auto key = std::make_pair(field.p(), n);
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  GridShape shape(PrimeSet{field.p()}, n, cap);
  std::filesystem::path file;
  if (const char* dir = std::getenv("BOXGAL_CACHE_DIR"); dir && *dir) {
    file = std::filesystem::path(dir) / ("mu_" + std::to_string(field.p()) + "_" + std::to_string(n) + ".csv");
  }
  std::optional<Spectrum> spec;
  if (!file.empty() && std::filesystem::exists(file)) {
    std::ifstream in(file);
    spec = read_spectrum_csv(in, shape);
  } else {
    spec = full_spectrum(moebius_grid(field, n, cap));
    if (!file.empty()) {
      std::filesystem::create_directories(file.parent_path());
      std::ofstream out(file);
      write_spectrum_csv(out, *spec);
    }
  }
  std::lock_guard lock(mu);
  return memo.emplace(key, std::move(*spec)).first->second;
}

}  // namespace boxgal
