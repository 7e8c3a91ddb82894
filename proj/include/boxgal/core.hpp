#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace boxgal {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated; the message names it.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public Error {
 public:
  FieldMismatch() : Error("operands live over different prime fields") {}
};

/// Default cap on the number of points any exhaustive enumeration may visit.
inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// base^exp, throwing CapExceeded when the result passes `cap`.
inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp, std::uint64_t cap = kDefaultEnumerationCap) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) {
      throw CapExceeded("enumeration of " + std::to_string(base) + "^" + std::to_string(exp) +
                        " points exceeds cap " + std::to_string(cap));
    }
    r *= base;
  }
  return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

/// Floor division for signed operands (C++ truncates toward zero).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Canonical residue of a signed value modulo m.
inline std::uint64_t mod_floor(std::int64_t a, std::uint64_t m) {
  auto r = static_cast<std::int64_t>(a % static_cast<std::int64_t>(m));
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

inline std::uint64_t mod_floor(const BigInt& a, std::uint64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// e(x) = exp(2 pi i x).
inline Complex unit_circle(double turns) {
  const double angle = 2.0 * std::numbers::pi * turns;
  return {std::cos(angle), std::sin(angle)};
}

/// exp(2 pi i k / n) with k reduced first, so large k loses no precision.
inline Complex root_of_unity(std::uint64_t k, std::uint64_t n) {
  return unit_circle(static_cast<double>(k % n) / static_cast<double>(n));
}

/// Scalar conversion used by templated code that runs in both float and exact mode.
template <class S>
S scalar_from_rational(const Rational& r) {
  if constexpr (std::is_same_v<S, Rational>) {
    return r;
  } else {
    return static_cast<S>(r);
  }
}

template <class S>
double to_double(const S& s) {
  if constexpr (std::is_same_v<S, double>) {
    return s;
  } else {
    return static_cast<double>(s);
  }
}

/// Parses "3", "-2/7", "0.125", "1e-3" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw DomainError("empty number");
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + text + "'");
    return num / den;
  }
  std::string mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mant = text.substr(0, e);
    exp10 = std::stol(text.substr(e + 1));
  }
  bool neg = false;
  std::size_t pos = 0;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    pos = 1;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (; pos < mant.size(); ++pos) {
    char c = mant[pos];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw DomainError("malformed number '" + text + "'");
    }
  }
  if (digits.empty()) throw DomainError("malformed number '" + text + "'");
  // cpp_int reads a leading 0 as an octal prefix
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  BigInt num(digits);
  if (neg) num = -num;
  long shift = exp10 - frac_digits;
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(shift)));
  return shift >= 0 ? Rational(num * scale) : Rational(num, scale);
}

}  // namespace boxgal
