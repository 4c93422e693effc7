#pragma once

// Exact moment engine. Everything here is rational arithmetic end to end:
// moments in, Hankel determinants / quotient-difference tables / continued
// fractions out. Two independent routes recover the chain couplings from
// moments and must agree exactly; disagreement is a hard error, never
// papered over.

#include <complex>
#include <cstddef>
#include <vector>

#include "krylov/euler_poly.hpp"
#include "krylov/rational.hpp"

namespace krylov {

// Moments mu_0..mu_{2K} of the spectral measure from couplings b_1..: Dyck
// path transfer in the monic-polynomial basis, (Mv)(h) = v(h-1) +
// b_{h+1}^2 v(h+1). Needs b2[0..count/2]; b2[i] is b_{i+1}^2.
inline std::vector<Rational> moments_from_b(const std::vector<Rational>& b2, std::size_t count) {
  const std::size_t H = count / 2 + 2;
  if (b2.size() + 1 < H) throw domain_error("moments_from_b: not enough couplings");
  std::vector<Rational> v(H, Rational(0)), w(H, Rational(0));
  v[0] = 1;
  std::vector<Rational> mu(count);
  mu[0] = v[0];
  for (std::size_t k = 1; k < count; ++k) {
    for (std::size_t h = 0; h < H; ++h) {
      Rational acc = h > 0 ? v[h - 1] : Rational(0);
      if (h + 1 < H) acc += b2[h] * v[h + 1];
      w[h] = acc;
    }
    std::swap(v, w);
    mu[k] = v[0];
  }
  return mu;
}

// Fraction-free Gaussian elimination (Bareiss) over an exact field
// (Rational or RationalComplex). Destroys m.
template <class F>
F bareiss_det(std::vector<std::vector<F>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return F(Rational(1));
  const F zero{};
  F prev = F(Rational(1));
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == zero) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == zero) ++r;
      if (r == n) return zero;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = zero;
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

// det [ mu_{i+j+shift} ]_{i,j < n}
inline Rational hankel_det(const std::vector<Rational>& mu, std::size_t n, std::size_t shift = 0) {
  if (n == 0) return 1;
  if (mu.size() < 2 * n - 1 + shift) throw domain_error("hankel_det: moment table too short");
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = mu[i + j + shift];
  return bareiss_det(m);
}

// Hankel data of a symmetric moment table (odd moments all zero):
//   Z_n = det[mu_{i+j}]      (n x n),
//   A_n = det[mu_{2i+2j}], B_n = det[mu_{2i+2j+2}], C_n = det[mu_{2i+2j+4}]
// over the even subtable. The checkerboard split gives Z_{2n} = A_n B_n and
// Z_{2n+1} = A_{n+1} B_n, which is asserted here as a self-check.
struct HankelLedger {
  std::vector<Rational> Z;  // Z[0..n_max]
  std::vector<Rational> A;  // A[0..n_max/2 rounded up]
  std::vector<Rational> B;
  std::vector<Rational> C;
};

inline HankelLedger hankel_ledger(const std::vector<Rational>& mu, std::size_t n_max) {
  for (std::size_t k = 1; k < mu.size(); k += 2) {
    if (mu[k] != 0) throw domain_error("hankel_ledger: moment table is not symmetric");
  }
  // even subtable nu_k = mu_{2k}
  std::vector<Rational> nu((mu.size() + 1) / 2);
  for (std::size_t k = 0; k < nu.size(); ++k) nu[k] = mu[2 * k];

  HankelLedger led;
  const std::size_t m = n_max / 2 + 1;
  // an n x n determinant at shift s needs nu_0..nu_{2n-2+s}
  auto cap = [&](std::size_t s) { return std::min(m, (nu.size() + 1 - s) / 2); };
  led.Z.resize(n_max + 1);
  led.A.resize(cap(0) + 1);
  led.B.resize(cap(1) + 1);
  led.C.resize(cap(2) + 1);
  for (std::size_t n = 0; n <= n_max; ++n) led.Z[n] = hankel_det(mu, n);
  for (std::size_t n = 0; n < led.A.size(); ++n) led.A[n] = hankel_det(nu, n, 0);
  for (std::size_t n = 0; n < led.B.size(); ++n) led.B[n] = hankel_det(nu, n, 1);
  for (std::size_t n = 0; n < led.C.size(); ++n) led.C[n] = hankel_det(nu, n, 2);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::size_t h = n / 2;
    const std::size_t a_idx = (n % 2 == 0) ? h : h + 1;
    if (a_idx >= led.A.size() || h >= led.B.size()) break;
    const Rational split = led.A[a_idx] * led.B[h];
    if (led.Z[n] != split) throw route_mismatch_error("hankel_ledger: checkerboard split failed");
  }
  return led;
}

// Couplings from the Hankel route: b_n^2 = Z_{n+1} Z_{n-1} / Z_n^2.
inline std::vector<Rational> b2_from_hankel(const std::vector<Rational>& mu, std::size_t count) {
  HankelLedger led = hankel_ledger(mu, count + 1);
  std::vector<Rational> b2(count);
  for (std::size_t n = 1; n <= count; ++n) {
    if (led.Z[n] == 0) throw domain_error("b2_from_hankel: vanishing Hankel determinant");
    b2[n - 1] = led.Z[n + 1] * led.Z[n - 1] / (led.Z[n] * led.Z[n]);
  }
  return b2;
}

// Couplings via the Chebyshev quotient-difference table (independent of the
// determinant route). Symmetric measure: the alpha column must vanish.
// Works over any exact field; double instantiation documents the
// cancellation blow-up of this classic algorithm.
template <class F>
std::vector<F> b2_chebyshev(const std::vector<F>& mu, std::size_t count) {
  const std::size_t n = count + 1;
  if (mu.size() < 2 * n) throw domain_error("b2_chebyshev: moment table too short");
  std::vector<F> prev2(2 * n, F(0)), prev(mu.begin(), mu.begin() + 2 * n);
  std::vector<F> b2(count);
  F alpha_prev = mu[1] / mu[0];
  F beta_prev = mu[0];
  for (std::size_t k = 1; k <= count; ++k) {
    std::vector<F> cur(2 * n, F(0));
    for (std::size_t l = k; l <= 2 * n - k - 1; ++l) {
      cur[l] = prev[l + 1] - alpha_prev * prev[l] - beta_prev * prev2[l];
    }
    F alpha = cur[k + 1] / cur[k] - prev[k] / prev[k - 1];
    F beta = cur[k] / prev[k - 1];
    b2[k - 1] = beta;
    prev2 = std::move(prev);
    prev = std::move(cur);
    alpha_prev = alpha;
    beta_prev = beta;
  }
  return b2;
}

// Dual-route inversion: Hankel determinants vs quotient-difference, compared
// exactly. Returns b_1^2 .. b_count^2.
inline std::vector<Rational> b2_from_moments(const std::vector<Rational>& mu, std::size_t count) {
  std::vector<Rational> hk = b2_from_hankel(mu, count);
  std::vector<Rational> qd = b2_chebyshev(mu, count);
  for (std::size_t i = 0; i < count; ++i) {
    if (hk[i] != qd[i]) {
      throw route_mismatch_error("b2_from_moments: Hankel and quotient-difference routes disagree");
    }
  }
  return hk;
}

// Resolvent continued fraction G(z) = 1/(z - b_1^2/(z - b_2^2/(...))),
// evaluated bottom-up at fixed depth.
inline std::complex<double> continued_fraction_G(const std::vector<double>& b2, std::complex<double> z,
                                                 std::size_t depth) {
  if (depth > b2.size()) throw domain_error("continued_fraction_G: depth exceeds couplings");
  std::complex<double> u = z;
  for (std::size_t k = depth; k >= 1; --k) {
    u = z - b2[k - 1] / u;
  }
  return 1.0 / u;
}

// Laurent expansion of the depth-D continued fraction: G(z) = sum mu_k /
// z^{k+1}, exact. Depth D uses b_1..b_D and one trailing bare 1/z level,
// i.e. the resolvent of the chain truncated to sites 0..D; a Dyck path must
// reach site D+1 to notice the cut, so mu_0..mu_{2D+1} match the full
// measure and the first deviation sits at mu_{2D+2}.
inline std::vector<Rational> moments_from_continued_fraction(const std::vector<Rational>& b2,
                                                             std::size_t depth, std::size_t count) {
  if (depth > b2.size()) throw domain_error("moments_from_continued_fraction: depth exceeds couplings");
  const std::size_t M = count + 1;  // coefficients in w = 1/z
  // v_k(w) = 1 - b_k^2 w^2 / v_{k+1}(w), v_{D+1} = 1; G = w / v_1.
  std::vector<Rational> v(M, Rational(0));
  v[0] = 1;
  for (std::size_t k = depth; k >= 1; --k) {
    std::vector<Rational> inv_v(M, Rational(0));
    // power-series inverse of v
    inv_v[0] = Rational(1) / v[0];
    for (std::size_t n = 1; n < M; ++n) {
      Rational acc = 0;
      for (std::size_t j = 1; j <= n; ++j) acc += v[j] * inv_v[n - j];
      inv_v[n] = -acc / v[0];
    }
    std::vector<Rational> next(M, Rational(0));
    next[0] = 1;
    for (std::size_t n = 2; n < M; ++n) next[n] = -b2[k - 1] * inv_v[n - 2];
    v = std::move(next);
  }
  // G = w * inv(v_1): mu_k is the coefficient of w^{k+1}
  std::vector<Rational> inv_v(M, Rational(0));
  inv_v[0] = Rational(1) / v[0];
  for (std::size_t n = 1; n < M; ++n) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= n; ++j) acc += v[j] * inv_v[n - j];
    inv_v[n] = -acc / v[0];
  }
  std::vector<Rational> mu(count, Rational(0));
  for (std::size_t k = 0; k < count; ++k) mu[k] = inv_v[k];
  return mu;
}

// Hankel-of-Euler-polynomials identity: for any complex z,
//   det[E_{2i+2j+4}(z)]_{n x n} / det[E_{2i+2j}(z)]_{(n+1) x (n+1)}
//     = 1 + sum_{k=1}^n (z)_k (1-z)_k / (k!)^2.
// The gamma-function form of the right-hand side collapses to Pochhammer
// products through the reflection formula, so both sides are exact. Returns
// LHS - RHS; the contract is that it vanishes identically.
inline RationalComplex euler_hankel_identity_check(std::size_t n, const RationalComplex& z) {
  if (n == 0) throw domain_error("euler_hankel_identity_check: n must be positive");
  auto e = euler_values(z, 4 * static_cast<unsigned>(n));
  auto minor_det = [&](std::size_t dim, std::size_t shift) {
    std::vector<std::vector<RationalComplex>> m(dim, std::vector<RationalComplex>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m[i][j] = e[2 * i + 2 * j + shift];
    return bareiss_det(m);
  };
  const RationalComplex lhs = minor_det(n, 4) / minor_det(n + 1, 0);
  RationalComplex rhs{Rational(1)};
  const RationalComplex one{Rational(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    const unsigned ku = static_cast<unsigned>(k);
    const Rational kfac(factorial_int(ku));
    rhs += pochhammer(z, ku) * pochhammer(one - z, ku) / RationalComplex(kfac * kfac);
  }
  return lhs - rhs;
}

}  // namespace krylov
