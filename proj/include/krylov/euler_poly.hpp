#pragma once

// Euler polynomials E_n(x) over exact fields, via the defining recurrence
//   E_n(x) = x^n - (1/2) sum_{k<n} C(n,k) E_k(x).
// Evaluated at x = (1 + i*omega)/2 these generate the alternating-chain
// moment sequence, so both the real and the complex-rational field are
// instantiated.

#include <vector>

#include "krylov/rational.hpp"

namespace krylov {

// E_0(x) .. E_max_n(x) at an exact point. F is Rational or RationalComplex.
template <class F>
std::vector<F> euler_values(const F& x, unsigned max_n) {
  std::vector<F> e(max_n + 1);
  std::vector<F> xpow(max_n + 1);
  xpow[0] = F(Rational(1));
  for (unsigned n = 1; n <= max_n; ++n) xpow[n] = xpow[n - 1] * x;
  for (unsigned n = 0; n <= max_n; ++n) {
    F acc = F(Rational(0));
    for (unsigned k = 0; k < n; ++k) {
      acc += F(Rational(binomial_int(n, k))) * e[k];
    }
    e[n] = xpow[n] - F(Rational(1, 2)) * acc;
  }
  return e;
}

// Moment sequence of the alternating chain: mu_{2k} = (-4)^k E_{2k}((1+i w)/2).
// The imaginary parts cancel identically for rational w (E_{2k} is symmetric
// about x = 1/2 and the argument is conjugate-reflected), which we assert.
inline std::vector<Rational> alternating_moments(const Rational& omega, unsigned count) {
  const unsigned max_n = 2 * (count - 1);
  RationalComplex x(Rational(1, 2), omega / 2);
  auto e = euler_values(x, max_n);
  std::vector<Rational> mu(count);
  Rational pow4 = 1;
  for (unsigned k = 0; k < count; ++k) {
    const RationalComplex& v = e[2 * k];
    if (v.im != 0) throw domain_error("alternating_moments: nonreal Euler value");
    mu[k] = pow4 * v.re;
    pow4 *= -4;
  }
  return mu;
}

}  // namespace krylov
