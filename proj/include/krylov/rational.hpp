#pragma once

// Exact arithmetic used by the moment engine. Everything downstream of a
// moment table (Hankel determinants, quotient-difference, deformations)
// runs on rationals so that route cross-checks compare exact objects.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

#include "krylov/errors.hpp"

namespace krylov {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw domain_error("rat: zero denominator");
  return Rational(Integer(num), Integer(den));
}

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline Rational rat_pow(const Rational& q, unsigned k) {
  Rational out = 1;
  Rational base = q;
  for (unsigned e = k; e != 0; e >>= 1) {
    if (e & 1u) out *= base;
    base *= base;
  }
  return out;
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Canonical "num/den" rendering used by the CSV writer ("p" alone when den == 1).
inline std::string rat_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

inline Integer factorial_int(unsigned n) {
  Integer out = 1;
  for (unsigned k = 2; k <= n; ++k) out *= k;
  return out;
}

inline Integer binomial_int(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer out = 1;
  for (unsigned j = 0; j < k; ++j) {
    out *= n - j;
    out /= j + 1;  // divides exactly: out is a binomial prefix
  }
  return out;
}

// Exact complex rational, used where conjugate-parameter families feed the
// moment engine (Euler polynomials at complex arguments and the like).
struct RationalComplex {
  Rational re = 0;
  Rational im = 0;

  RationalComplex() = default;
  RationalComplex(Rational r) : re(std::move(r)) {}
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  friend RationalComplex operator+(const RationalComplex& x, const RationalComplex& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend RationalComplex operator-(const RationalComplex& x, const RationalComplex& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend RationalComplex operator*(const RationalComplex& x, const RationalComplex& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend RationalComplex operator/(const RationalComplex& x, const RationalComplex& y) {
    Rational n2 = y.re * y.re + y.im * y.im;
    if (n2 == 0) throw domain_error("RationalComplex: division by zero");
    return {(x.re * y.re + x.im * y.im) / n2, (x.im * y.re - x.re * y.im) / n2};
  }
  RationalComplex& operator+=(const RationalComplex& y) { return *this = *this + y; }
  RationalComplex& operator-=(const RationalComplex& y) { return *this = *this - y; }
  RationalComplex& operator*=(const RationalComplex& y) { return *this = *this * y; }
  RationalComplex operator-() const { return {-re, -im}; }
  bool operator==(const RationalComplex& y) const { return re == y.re && im == y.im; }
};

// Rising factorial (x)_k over the exact fields; the double and
// complex<double> overloads live with the other float-path special functions.
inline Rational pochhammer(const Rational& x, unsigned k) {
  Rational out = 1;
  for (unsigned j = 0; j < k; ++j) out *= x + j;
  return out;
}

inline RationalComplex pochhammer(const RationalComplex& x, unsigned k) {
  RationalComplex out{Rational(1)};
  for (unsigned j = 0; j < k; ++j) out *= x + RationalComplex(Rational(j));
  return out;
}

}  // namespace krylov
