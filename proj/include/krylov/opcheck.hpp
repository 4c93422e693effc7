#pragma once

// Orthogonal-polynomial verification toolkit. The chain couplings define
// orthonormal polynomials pi_n through the three-term recurrence; this header
// evaluates them (normalized and monic), integrates orthogonality residuals
// against the spectral measure, tests the evolution-operator expansion
//   e^{itA} = sum_n i^n phi_n(t) pi_n(A)
// on small symmetric matrices, and bridges the four-parameter continuous
// Hahn recurrence to the two-parameter couplings used everywhere else.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "krylov/errors.hpp"
#include "krylov/families.hpp"
#include "krylov/quadrature.hpp"
#include "krylov/rational.hpp"
#include "krylov/sequence.hpp"
#include "krylov/special.hpp"

namespace krylov {

// Normalized polynomial pi_n(x): pi_{-1} = 0, pi_0 = 1,
// x pi_n = b_{n+1} pi_{n+1} + b_n pi_{n-1}.
inline double eval_pi(const LanczosSequence& seq, std::size_t n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double bk = k > 0 ? seq.b(k) : 0.0;
    const double next = (x * cur - bk * prev) / seq.b(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

// Monic companion P_n(x) = pi_n(x) prod_{k<=n} b_k, from the square-free
// recurrence x P_n = P_{n+1} + b_n^2 P_{n-1}. The exact overload is the one
// the Favard cross-checks compare on, since the normalized values carry
// square roots; b2[i] is b_{i+1}^2.
inline double eval_monic(const LanczosSequence& seq, std::size_t n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double b2k = k > 0 ? seq.b(k) * seq.b(k) : 0.0;
    const double next = x * cur - b2k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline Rational eval_monic(const std::vector<Rational>& b2, std::size_t n, const Rational& x) {
  if (n > 0 && b2.size() + 1 < n) throw domain_error("eval_monic: not enough couplings");
  Rational prev = 0;
  Rational cur = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const Rational next = k > 0 ? Rational(x * cur - b2[k - 1] * prev) : Rational(x * cur);
    prev = cur;
    cur = next;
  }
  return cur;
}

// | integral rho pi_n pi_m - delta_{nm} | for the two-parameter measure.
// The measure decays like e^{-pi |x| / 2} against polynomial growth, so the
// cutoff X is pushed out until the integrand envelope at the edge is below
// 1e-16; the geometric tail beyond that is < 1e-15 and the truncation is
// certified rather than hoped for.
inline double orthogonality_residual(const HahnParams& p, std::size_t n, std::size_t m) {
  LanczosSequence seq = seq_hahn(p);
  auto integrand = [&](double x) {
    return hahn_measure(p, x) * eval_pi(seq, n, x) * eval_pi(seq, m, x);
  };
  // probe a few spread points so a zero of pi_n pi_m at the edge cannot fake
  // a decayed envelope
  auto edge = [&](double X) {
    double peak = 0.0;
    for (double f : {1.0, 1.07, 1.19, 1.31}) {
      peak = std::max(peak, std::abs(integrand(X * f)) + std::abs(integrand(-X * f)));
    }
    return peak;
  };
  double X = 16.0;
  while (edge(X) > 1e-16) {
    X *= 1.5;
    if (X > 4096.0) throw convergence_error("orthogonality_residual: cutoff search failed");
  }
  const double val = integrate(integrand, -X, X, 1e-12);
  const double target = (n == m) ? 1.0 : 0.0;
  return std::abs(val - target);
}

namespace detail {

// Cyclic Jacobi eigendecomposition of a small symmetric matrix; returns the
// eigenvalues and fills v with orthonormal eigenvectors as columns. Good to
// machine precision for the matrix sizes used here (the expansion oracle).
inline std::vector<double> jacobi_eigen(std::vector<std::vector<double>> a,
                                        std::vector<std::vector<double>>& v) {
  const std::size_t n = a.size();
  v.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i) lam[i] = a[i][i];
  return lam;
}

}  // namespace detail

// Max-entry error of the truncated expansion
//   sum_{n <= n_trunc} i^n phi(n) pi_n(A)  vs  exp(itA),
// where phi(n) supplies the wave-function values at the fixed time t and the
// exponential comes from an independent spectral decomposition. A must be
// real symmetric.
inline double evolution_expansion_residual(const std::vector<std::vector<double>>& a_mat,
                                           const LanczosSequence& seq,
                                           const std::function<double(std::size_t)>& phi,
                                           double t, std::size_t n_trunc) {
  using cd = std::complex<double>;
  const std::size_t dim = a_mat.size();
  for (const auto& row : a_mat) {
    if (row.size() != dim) throw domain_error("evolution_expansion_residual: matrix not square");
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      if (std::abs(a_mat[i][j] - a_mat[j][i]) > 1e-14) {
        throw domain_error("evolution_expansion_residual: matrix not symmetric");
      }

  // spectral oracle
  std::vector<std::vector<double>> v;
  const std::vector<double> lam = detail::jacobi_eigen(a_mat, v);
  std::vector<std::vector<cd>> oracle(dim, std::vector<cd>(dim, cd(0.0)));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k)
        oracle[i][j] += v[i][k] * std::exp(cd(0.0, t * lam[k])) * v[j][k];

  // polynomial side, pi_n(A) by the matrix three-term recurrence
  std::vector<std::vector<double>> prev(dim, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> cur(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) cur[i][i] = 1.0;
  std::vector<std::vector<cd>> sum(dim, std::vector<cd>(dim, cd(0.0)));
  cd ipow(1.0);
  for (std::size_t n = 0;; ++n) {
    const double phin = phi(n);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) sum[i][j] += ipow * phin * cur[i][j];
    if (n == n_trunc) break;
    const double bn = n > 0 ? seq.b(n) : 0.0;
    std::vector<std::vector<double>> next(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k) acc += a_mat[i][k] * cur[k][j];
        next[i][j] = (acc - bn * prev[i][j]) / seq.b(n + 1);
      }
    }
    prev = std::move(cur);
    cur = std::move(next);
    ipow *= cd(0.0, 1.0);
  }

  double err = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) err = std::max(err, std::abs(sum[i][j] - oracle[i][j]));
  return err;
}

// Four-parameter continuous Hahn data (a, b, c, d) with Re > 0, c = a*,
// d = b*. The chain correspondence needs the recurrence's diagonal term to
// vanish, which happens in exactly three parameter classes:
//   real_symmetric:     a = c > 0, b = d > 0 (all real)
//   conjugate_cross:    a = d = r + iw, b = c = r - iw
//   shifted_reflection: a = r + iw, b = 1 - a, with 0 < r < 1
struct ContinuousHahnParams {
  std::complex<double> a, b, c, d;

  static ContinuousHahnParams real_symmetric(double a, double b) {
    ContinuousHahnParams p{{a, 0.0}, {b, 0.0}, {a, 0.0}, {b, 0.0}};
    p.validate();
    return p;
  }
  static ContinuousHahnParams conjugate_cross(double r, double omega) {
    ContinuousHahnParams p{{r, omega}, {r, -omega}, {r, -omega}, {r, omega}};
    p.validate();
    return p;
  }
  static ContinuousHahnParams shifted_reflection(double r, double omega) {
    ContinuousHahnParams p{{r, omega}, {1.0 - r, -omega}, {r, -omega}, {1.0 - r, omega}};
    p.validate();
    return p;
  }

  // 0: real_symmetric, 1: conjugate_cross, 2: shifted_reflection
  int zero_diagonal_class() const {
    const double eps = 1e-12;
    if (std::abs(a.imag()) < eps && std::abs(b.imag()) < eps) return 0;
    if (std::abs(a - d) < eps && std::abs(b - c) < eps) return 1;
    if (std::abs(a + b - 1.0) < eps) return 2;
    throw domain_error("ContinuousHahnParams: diagonal term does not vanish for these parameters");
  }

  void validate() const {
    if (!(a.real() > 0.0 && b.real() > 0.0 && c.real() > 0.0 && d.real() > 0.0)) {
      throw domain_error("ContinuousHahnParams: needs positive real parts");
    }
    if (std::abs(c - std::conj(a)) > 1e-14 || std::abs(d - std::conj(b)) > 1e-14) {
      throw domain_error("ContinuousHahnParams: needs c = conj(a) and d = conj(b)");
    }
    zero_diagonal_class();
  }
};

namespace detail {

inline std::complex<double> hahn4_A(const ContinuousHahnParams& p, double n) {
  const std::complex<double> s = p.a + p.b + p.c + p.d;
  return -(n + s - 1.0) * (n + p.a + p.c) * (n + p.a + p.d) /
         ((2.0 * n + s - 1.0) * (2.0 * n + s));
}

inline std::complex<double> hahn4_B(const ContinuousHahnParams& p, double n) {
  return (n + p.a + p.c) * (n + p.a + p.d) / (n + 1.0);
}

inline std::complex<double> hahn4_C(const ContinuousHahnParams& p, double n) {
  const std::complex<double> s = p.a + p.b + p.c + p.d;
  if (n == 0.0) {
    // the shifted-reflection class sits at s = 2, where the raw n = 0
    // coefficient is 0/0; the continuous limit is what keeps the diagonal
    // term zero there. Away from s = 2 the n factor wins and C_0 = 0.
    if (std::abs(s - 2.0) < 1e-12) return (p.b + p.c - 1.0) * (p.b + p.d - 1.0) / 2.0;
    return 0.0;
  }
  return n * (n + p.b + p.c - 1.0) * (n + p.b + p.d - 1.0) /
         ((2.0 * n + s - 2.0) * (2.0 * n + s - 1.0));
}

}  // namespace detail

// Bridge from the four-parameter recurrence to the chain couplings: checks
// that the diagonal term a + A_n + C_n vanishes, and returns the off-diagonal
// coefficient both in the polynomial normalization (b_tilde) and in the
// rescaled time of the two-parameter family (b_main = 4 b_tilde, which must
// reproduce hahn_b of the matching parameter pair).
struct HahnBridge {
  double a_tilde;  // |a + A_n + C_n|, certified below 1e-12
  double b_tilde;  // sqrt(-A_{n-1} C_n); 0 at n = 0 where no coupling exists
  double b_main;   // 4 b_tilde
};

inline HahnBridge continuous_hahn_bridge(const ContinuousHahnParams& p, std::size_t n) {
  p.validate();
  const double nd = static_cast<double>(n);
  const std::complex<double> diag = p.a + detail::hahn4_A(p, nd) + detail::hahn4_C(p, nd);
  if (std::abs(diag) > 1e-12) {
    throw domain_error("continuous_hahn_bridge: diagonal term does not vanish");
  }
  HahnBridge out{std::abs(diag), 0.0, 0.0};
  if (n > 0) {
    const std::complex<double> prod = -detail::hahn4_A(p, nd - 1.0) * detail::hahn4_C(p, nd);
    if (std::abs(prod.imag()) > 1e-10 * (1.0 + std::abs(prod.real())) || prod.real() < 0.0) {
      throw domain_error("continuous_hahn_bridge: coupling square is not a positive real");
    }
    out.b_tilde = std::sqrt(prod.real());
    out.b_main = 4.0 * out.b_tilde;
  }
  return out;
}

// Finite-sum contraction of hypergeometric functions, s = 2a + 2b:
//   sum_{k=0}^n (-1)^k C(n,k) (s-1+n)_k / (s)_k F(a+b, 2b; s+k; z)
//     = (a+b)_n (2b)_n / (s)_{2n} z^n F(a+b+n, 2b+n; s+2n; z).
// Returns |LHS - RHS|; analytically zero, so the residual is pure roundoff.
inline double hypergeometric_sum_identity_check(std::size_t n, double a, double b, double z) {
  if (!(a > 0.0) || !(b > 0.0)) throw domain_error("hypergeometric_sum_identity_check: needs a, b > 0");
  if (!(std::abs(z) < 1.0)) throw domain_error("hypergeometric_sum_identity_check: needs |z| < 1");
  using cd = std::complex<double>;
  const double s = 2.0 * (a + b);
  double lhs = 0.0;
  double binom = 1.0;
  double sign = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const unsigned ku = static_cast<unsigned>(k);
    const double ratio = pochhammer(s - 1.0 + static_cast<double>(n), ku) / pochhammer(s, ku);
    lhs += sign * binom * ratio *
           gauss_2f1(cd(a + b), cd(2.0 * b), cd(s + static_cast<double>(k)), z).real();
    binom *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    sign = -sign;
  }
  const unsigned nu = static_cast<unsigned>(n);
  const double nd = static_cast<double>(n);
  const double rhs = pochhammer(a + b, nu) * pochhammer(2.0 * b, nu) / pochhammer(s, 2 * nu) *
                     std::pow(z, nd) *
                     gauss_2f1(cd(a + b + nd), cd(2.0 * b + nd), cd(s + 2.0 * nd), z).real();
  return std::abs(lhs - rhs);
}

}  // namespace krylov
