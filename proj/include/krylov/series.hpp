#pragma once

// Exact Taylor series in t with rational coefficients, plus the closed-form
// autocorrelation providers built from them. A series of length M holds
// coefficients of t^0 .. t^{M-1}. The moment engine consumes these through
// moments_from_series: C(t) = sum_k mu_k (it)^k / k! with even real C, so
// mu_{2k} = (-1)^k (2k)! c_{2k}.

#include <cstddef>
#include <vector>

#include "krylov/rational.hpp"

namespace krylov {

using TaylorSeries = std::vector<Rational>;

inline TaylorSeries series_mul(const TaylorSeries& a, const TaylorSeries& b, std::size_t M) {
  TaylorSeries out(M, Rational(0));
  for (std::size_t i = 0; i < a.size() && i < M; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < M; ++j) {
      if (b[j] == 0) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

// 1 / a as a formal power series; requires a[0] != 0.
inline TaylorSeries series_inverse(const TaylorSeries& a, std::size_t M) {
  if (a.empty() || a[0] == 0) throw domain_error("series_inverse: zero constant term");
  TaylorSeries out(M, Rational(0));
  out[0] = Rational(1) / a[0];
  for (std::size_t n = 1; n < M; ++n) {
    Rational acc = 0;
    for (std::size_t k = 1; k <= n && k < a.size(); ++k) acc += a[k] * out[n - k];
    out[n] = -acc / a[0];
  }
  return out;
}

inline TaylorSeries series_pow(const TaylorSeries& a, unsigned p, std::size_t M) {
  TaylorSeries out(M, Rational(0));
  out[0] = 1;
  for (unsigned k = 0; k < p; ++k) out = series_mul(out, a, M);
  return out;
}

// cosh(s t) and cos(s t):  sum s^{2j} t^{2j} / (2j)!  (alternating for cos).
inline TaylorSeries series_cosh(const Rational& s, std::size_t M, bool alternating = false) {
  TaylorSeries out(M, Rational(0));
  Rational term = 1;
  const Rational s2 = s * s;
  for (std::size_t j = 0; 2 * j < M; ++j) {
    out[2 * j] = term;
    Rational denom = Rational((2 * j + 1) * (2 * j + 2));
    term = term * s2 / denom;
    if (alternating) term = -term;
  }
  return out;
}

inline TaylorSeries series_cos(const Rational& s, std::size_t M) { return series_cosh(s, M, true); }

// sinh(s t)/(s t) and sin(s t)/(s t):  sum s^{2j} t^{2j} / (2j+1)!.
inline TaylorSeries series_sinhc(const Rational& s, std::size_t M, bool alternating = false) {
  TaylorSeries out(M, Rational(0));
  Rational term = 1;
  const Rational s2 = s * s;
  for (std::size_t j = 0; 2 * j < M; ++j) {
    out[2 * j] = term;
    Rational denom = Rational((2 * j + 2) * (2 * j + 3));
    term = term * s2 / denom;
    if (alternating) term = -term;
  }
  return out;
}

inline TaylorSeries series_sinc(const Rational& s, std::size_t M) { return series_sinhc(s, M, true); }

// --- autocorrelation providers -------------------------------------------

// sech^eta(t) for integer eta >= 1 (Meixner–Pollaczek chains).
inline TaylorSeries autocorr_sech_power(unsigned eta, std::size_t M) {
  if (eta == 0) throw domain_error("autocorr_sech_power: eta must be >= 1");
  TaylorSeries sech = series_inverse(series_cosh(1, M), M);
  return series_pow(sech, eta, M);
}

// 2t / sinh(2t)  (the a = b = 1/2 chain).
inline TaylorSeries autocorr_t_over_sinh(std::size_t M) {
  return series_inverse(series_sinhc(2, M), M);
}

// cos(w t) sech(t)  (the alternating even/odd chain).
inline TaylorSeries autocorr_cos_sech(const Rational& w, std::size_t M) {
  TaylorSeries sech = series_inverse(series_cosh(1, M), M);
  return series_mul(series_cos(w, M), sech, M);
}

// sin(4 w t) / (2 w sinh(2t))  (conjugate-pair chain at r = 1/2); equals
// [sin(4wt)/(4wt)] * 2 * [2t/(2 sinh 2t)], all rational for rational w.
inline TaylorSeries autocorr_conjugate_half(const Rational& w, std::size_t M) {
  if (w == 0) throw domain_error("autocorr_conjugate_half: w must be nonzero");
  return series_mul(series_sinc(4 * w, M), autocorr_t_over_sinh(M), M);
}

// kappa + (1 - kappa) C(t): the deformed autocorrelation with a stationary
// plateau.
inline TaylorSeries autocorr_deformed(const TaylorSeries& c, const Rational& kappa) {
  TaylorSeries out = c;
  for (auto& q : out) q *= 1 - kappa;
  out[0] += kappa;
  return out;
}

// mu_{2k} = (-1)^k (2k)! c_{2k}, k = 0..count-1. Odd coefficients must
// vanish (even autocorrelation).
inline std::vector<Rational> moments_from_series(const TaylorSeries& c, std::size_t count) {
  if (c.size() < 2 * count - 1) throw domain_error("moments_from_series: series too short");
  std::vector<Rational> mu(count);
  Integer fact = 1;
  int sign = 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) {
      fact *= Integer(2 * k - 1) * Integer(2 * k);
      sign = -sign;
    }
    if (2 * k + 1 < c.size() && c[2 * k + 1] != 0) {
      throw domain_error("moments_from_series: odd coefficient present");
    }
    mu[k] = Rational(sign) * Rational(fact) * c[2 * k];
  }
  return mu;
}

}  // namespace krylov
