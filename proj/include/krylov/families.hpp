#pragma once

// Closed-form coupling families and their wave functions. Two groups:
//
//  * the two-parameter family
//      b_n^2 = 4n (n+2a-1)(n+2b-1)(n+2a+2b-2) / ((2n+2a+2b-3)(2n+2a+2b-1))
//    with either a real pair {a, b} or a conjugate pair {r + i w, r - i w},
//    whose wave functions close in a Gauss hypergeometric of tanh^2 t, and
//    whose autocorrelation has an explicit spectral density built from
//    |Gamma|^2 factors;
//
//  * the alternating family b_n^2 = n^2 (n even), n^2 + w^2 (n odd), whose
//    wave functions stay elementary: polynomials in tanh t times cos/sin
//    envelopes over sech t, generated here in exact rational arithmetic.
//
// This header is the analytic side of the library. The chain solver and the
// moment engine reproduce the same numbers by completely different routes,
// and the tests hold the routes against each other.

#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "krylov/errors.hpp"
#include "krylov/rational.hpp"
#include "krylov/sequence.hpp"
#include "krylov/special.hpp"

namespace krylov {

// Parameter pair of the two-parameter family. Either a real pair {a, b}
// with a, b > 0, or a conjugate pair {r + i w, r - i w} with r > 0. The
// coupling and wave formulas are shared; only the factories differ.
struct HahnParams {
  std::complex<double> a;
  std::complex<double> b;
  bool conjugate = false;

  static HahnParams real_pair(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw domain_error("HahnParams: real pair needs a > 0 and b > 0");
    }
    return {std::complex<double>(a), std::complex<double>(b), false};
  }

  static HahnParams conjugate_pair(double r, double omega) {
    if (!(r > 0.0)) throw domain_error("HahnParams: conjugate pair needs r > 0");
    return {{r, omega}, {r, -omega}, true};
  }

  double r() const { return a.real(); }
  double omega() const { return a.imag(); }
  double s() const { return a.real() + b.real(); }  // a + b is real either way
};

namespace detail {

inline std::string format_param(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace detail

inline std::string hahn_tag(const HahnParams& p) {
  if (p.conjugate) {
    return "conjugate(" + detail::format_param(p.r()) + "," +
           detail::format_param(p.omega()) + ")";
  }
  return "hahn(" + detail::format_param(p.a.real()) + "," +
         detail::format_param(p.b.real()) + ")";
}

// Squared coupling b_n^2, n >= 1. The factor (n+2a+2b-2)/(2n+2a+2b-3) is a
// 0/0 at n = 1 when a+b = 1/2; at n = 1 numerator and denominator are the
// same expression 2(a+b)-1, so the ratio is identically 1 and that slot is
// hardcoded rather than evaluated.
inline double hahn_b2(const HahnParams& p, std::size_t n) {
  if (n == 0) throw domain_error("hahn_b2: couplings are indexed from 1");
  const double nd = static_cast<double>(n);
  const double s = p.s();
  double middle;
  if (p.conjugate) {
    const double re = nd + 2.0 * p.r() - 1.0;
    const double w = p.omega();
    middle = re * re + 4.0 * w * w;
  } else {
    middle = (nd + 2.0 * p.a.real() - 1.0) * (nd + 2.0 * p.b.real() - 1.0);
  }
  const double ratio =
      (n == 1) ? 1.0 : (nd + 2.0 * s - 2.0) / (2.0 * nd + 2.0 * s - 3.0);
  return 4.0 * nd * middle * ratio / (2.0 * nd + 2.0 * s - 1.0);
}

inline double hahn_b(const HahnParams& p, std::size_t n) { return std::sqrt(hahn_b2(p, n)); }

// Exact rational b_n^2 for a rational real pair.
inline Rational hahn_b2_exact(const Rational& a, const Rational& b, std::size_t n) {
  if (n == 0) throw domain_error("hahn_b2_exact: couplings are indexed from 1");
  if (!(a > 0) || !(b > 0)) throw domain_error("hahn_b2_exact: needs a > 0 and b > 0");
  const Rational nq{Integer(n)};
  const Rational s = a + b;
  const Rational middle = (nq + Rational(2) * a - 1) * (nq + Rational(2) * b - 1);
  const Rational ratio = (n == 1) ? Rational(1)
                                  : (nq + Rational(2) * s - 2) /
                                        (Rational(2) * nq + Rational(2) * s - 3);
  return Rational(4) * nq * middle * ratio / (Rational(2) * nq + Rational(2) * s - 1);
}

// Exact rational b_n^2 for a conjugate pair r +- i w with rational r, w:
// the middle product collapses to (n+2r-1)^2 + 4 w^2.
inline Rational hahn_b2_exact_conjugate(const Rational& r, const Rational& omega,
                                        std::size_t n) {
  if (n == 0) throw domain_error("hahn_b2_exact_conjugate: couplings are indexed from 1");
  if (!(r > 0)) throw domain_error("hahn_b2_exact_conjugate: needs r > 0");
  const Rational nq{Integer(n)};
  const Rational s = Rational(2) * r;
  const Rational re = nq + Rational(2) * r - 1;
  const Rational middle = re * re + Rational(4) * omega * omega;
  const Rational ratio = (n == 1) ? Rational(1)
                                  : (nq + Rational(2) * s - 2) /
                                        (Rational(2) * nq + Rational(2) * s - 3);
  return Rational(4) * nq * middle * ratio / (Rational(2) * nq + Rational(2) * s - 1);
}

// The linear subfamily b_n^2 = n (n + eta - 1), eta > 0; it is the real pair
// (eta/4, eta/4 + 1/2) and the hypergeometric factor of its wave function
// terminates at the constant term.
inline double mp_b2(double eta, std::size_t n) {
  if (n == 0) throw domain_error("mp_b2: couplings are indexed from 1");
  if (!(eta > 0.0)) throw domain_error("mp_b2: needs eta > 0");
  const double nd = static_cast<double>(n);
  return nd * (nd + eta - 1.0);
}

inline HahnParams mp_params(double eta) {
  return HahnParams::real_pair(eta / 4.0, eta / 4.0 + 0.5);
}

// Wave function of the two-parameter family:
//   phi_n(t) = F_n tanh^n t cosh^{-(2a+2b-1)} t
//              * 2F1(a-b+1/2, b-a+1/2; a+b+n+1/2; -sinh^2 t),
// F_n = prod_{k<=n} (b_k / k). Odd parity in t for odd n. For a conjugate
// pair the hypergeometric parameters are complex conjugates, so the value is
// real up to roundoff; we assert that instead of trusting it.
inline double hahn_phi(const HahnParams& p, std::size_t n, double t) {
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double at = std::abs(t);
  const double sign = (t < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  const double th = std::tanh(at);
  const double sh = std::sinh(at);
  const double s = p.s();
  // Accumulate F_n tanh^n as prod (b_k tanh / k) to keep the magnitude flat.
  double pref = 1.0;
  for (std::size_t k = 1; k <= n; ++k) pref *= hahn_b(p, k) * th / static_cast<double>(k);
  const std::complex<double> alpha = p.a - p.b + 0.5;
  const std::complex<double> beta = p.b - p.a + 0.5;
  const std::complex<double> c = s + static_cast<double>(n) + 0.5;
  const std::complex<double> h = gauss_2f1(alpha, beta, c, -sh * sh);
  if (std::abs(h.imag()) > 1e-8 * (1.0 + std::abs(h.real()))) {
    throw convergence_error("hahn_phi: hypergeometric value came out non-real");
  }
  return sign * pref * std::pow(std::cosh(at), -(2.0 * s - 1.0)) * h.real();
}

// Independent closed form for the linear subfamily:
//   phi_n(t) = sqrt((eta)_n / n!) tanh^n t sech^eta t.
inline double mp_phi(double eta, std::size_t n, double t) {
  if (!(eta > 0.0)) throw domain_error("mp_phi: needs eta > 0");
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double at = std::abs(t);
  const double sign = (t < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  double pref = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    pref *= std::sqrt((eta + static_cast<double>(k) - 1.0) / static_cast<double>(k));
  }
  return sign * pref * std::pow(std::tanh(at), static_cast<double>(n)) *
         std::pow(1.0 / std::cosh(at), eta);
}

// phi_n(t) = t^n e^{-t^2/2} / sqrt(n!) for b_n = sqrt(n).
inline double hermite_phi(std::size_t n, double t) {
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double sign = (t < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  const double at = std::abs(t);
  const double nd = static_cast<double>(n);
  return sign * std::exp(nd * std::log(at) - 0.5 * t * t - 0.5 * std::lgamma(nd + 1.0));
}

// Spectral density of the two-parameter family's autocorrelation:
//   rho(x) = Gamma(2a+2b) / (8 pi Gamma(2a) Gamma(2b) Gamma(a+b)^2)
//            * exp(2 Re [log Gamma(a + ix/4) + log Gamma(b + ix/4)]).
// The 2 Re form covers both the real and the conjugate pair (there it
// regroups into the four-Gamma product over r +- i(w +- x/4)). Even in x,
// decays like e^{-pi |x| / 2}.
inline double hahn_measure(const HahnParams& p, double x) {
  using cd = std::complex<double>;
  const cd a = p.a;
  const cd b = p.b;
  const cd lognorm = log_gamma(2.0 * (a + b)) - log_gamma(2.0 * a) - log_gamma(2.0 * b) -
                     2.0 * log_gamma(a + b);
  const cd ix4(0.0, x / 4.0);
  const double body = 2.0 * (log_gamma(a + ix4) + log_gamma(b + ix4)).real();
  return std::exp(lognorm.real() + body) / (8.0 * kPi);
}

// Leading large-t form of the autocorrelation phi_0:
//   real pair, a < b:   Gamma(2a+2b) Gamma(b-a) / (Gamma(a+b) Gamma(2b)) e^{-4at}
//   real pair, a = b:   4 Gamma(4a) / Gamma(2a)^2 * t e^{-4at}
//   conjugate pair:     2^{4r}/sqrt(pi) Gamma(2r+1/2)
//                         * Re[Gamma(2iw) e^{4iwt} / Gamma(2r+2iw)] e^{-4rt}.
inline double hahn_asymptote(const HahnParams& p, double t) {
  using cd = std::complex<double>;
  if (p.conjugate && p.omega() != 0.0) {
    const double r = p.r();
    const double w = p.omega();
    const cd osc = gamma_c(cd(0.0, 2.0 * w)) * inv_gamma(cd(2.0 * r, 2.0 * w)) *
                   std::exp(cd(0.0, 4.0 * w * t));
    const double amp = std::pow(2.0, 4.0 * r) / std::sqrt(kPi) *
                       gamma_c(cd(2.0 * r + 0.5)).real();
    return amp * osc.real() * std::exp(-4.0 * r * t);
  }
  double a = p.a.real();
  double b = p.b.real();
  if (a > b) std::swap(a, b);
  if (a == b) {
    const double amp = 4.0 * (gamma_c(cd(4.0 * a)) * inv_gamma(cd(2.0 * a)) *
                              inv_gamma(cd(2.0 * a))).real();
    return amp * t * std::exp(-4.0 * a * t);
  }
  const double amp = (gamma_c(cd(2.0 * (a + b))) * gamma_c(cd(b - a)) *
                      inv_gamma(cd(a + b)) * inv_gamma(cd(2.0 * b))).real();
  return amp * std::exp(-4.0 * a * t);
}

// Two-term large-t form, valid when a - b is not an integer (the Gamma
// factors pole out otherwise; the a = b case belongs to the logarithmic
// branch above). For a conjugate pair the two terms are complex conjugates
// and the real part is the answer.
inline double hahn_asymptote_two_term(const HahnParams& p, double t) {
  using cd = std::complex<double>;
  const cd a = p.a;
  const cd b = p.b;
  const cd pref = gamma_c(2.0 * (a + b)) * inv_gamma(a + b);
  const cd term1 = gamma_c(b - a) * inv_gamma(2.0 * b) * std::exp(-4.0 * a * t);
  const cd term2 = gamma_c(a - b) * inv_gamma(2.0 * a) * std::exp(-4.0 * b * t);
  return (pref * (term1 + term2)).real();
}

// Zeros of the leading oscillatory factor for a conjugate pair:
//   t_k = (pi/2 + k pi - theta) / (4 w),
//   theta = arg Gamma(2iw) - arg Gamma(2r + 2iw).
// For r = 1/2 this collapses to t_k = (k+1) pi / (4w).
inline double conjugate_zero_time(double r, double omega, int k) {
  using cd = std::complex<double>;
  if (!(r > 0.0) || omega == 0.0) {
    throw domain_error("conjugate_zero_time: needs r > 0 and omega != 0");
  }
  const double theta = std::arg(gamma_c(cd(0.0, 2.0 * omega))) -
                       std::arg(gamma_c(cd(2.0 * r, 2.0 * omega)));
  return (kPi / 2.0 + static_cast<double>(k) * kPi - theta) / (4.0 * omega);
}

// Subleading expansion b_n = n + b1 + b2/n + O(1/n^2):
//   b1 = a + b - 1,
//   b2 = -[(a+b-1)^2 + (a-b)^2 - 1/4] / 2,
// with (a-b)^2 = -4 w^2 for a conjugate pair. The combination
// 1/8 - b1^2/2 - b2 equals (a-b)^2 / 2 and is what separates real pairs
// (positive) from conjugate pairs (negative).
struct SubleadingCoeffs {
  double b1;
  double b2;
};

inline SubleadingCoeffs hahn_subleading(const HahnParams& p) {
  const double s = p.s();
  double gap2;  // (a - b)^2
  if (p.conjugate) {
    gap2 = -4.0 * p.omega() * p.omega();
  } else {
    const double d = p.a.real() - p.b.real();
    gap2 = d * d;
  }
  const double b1 = s - 1.0;
  return {b1, -0.5 * (b1 * b1 + gap2 - 0.25)};
}

// Least-squares fit of b_n - n against {1, 1/n, 1/n^2, 1/n^3} over n in
// [n_lo, n_hi]; recovers b1 and b2 from samples alone. The two extra slots
// absorb the next corrections so the b2 estimate stays clean.
struct SubleadingFit {
  double b1;
  double b2;
  double c2;
  double c3;
};

template <class F>
SubleadingFit fit_subleading(F&& b_of_n, std::size_t n_lo = 64, std::size_t n_hi = 1024) {
  if (n_lo < 1 || n_hi <= n_lo + 3) throw domain_error("fit_subleading: bad sample range");
  constexpr int kDim = 4;
  double g[kDim][kDim] = {};
  double rhs[kDim] = {};
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const double nd = static_cast<double>(n);
    double x[kDim];
    x[0] = 1.0;
    for (int i = 1; i < kDim; ++i) x[i] = x[i - 1] / nd;
    const double y = b_of_n(n) - nd;
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) g[i][j] += x[i] * x[j];
      rhs[i] += x[i] * y;
    }
  }
  // Gaussian elimination with partial pivoting on the normal equations.
  int perm[kDim] = {0, 1, 2, 3};
  for (int col = 0; col < kDim - 1; ++col) {
    int piv = col;
    for (int row = col + 1; row < kDim; ++row) {
      if (std::abs(g[perm[row]][col]) > std::abs(g[perm[piv]][col])) piv = row;
    }
    std::swap(perm[col], perm[piv]);
    for (int row = col + 1; row < kDim; ++row) {
      const double f = g[perm[row]][col] / g[perm[col]][col];
      for (int j = col; j < kDim; ++j) g[perm[row]][j] -= f * g[perm[col]][j];
      rhs[perm[row]] -= f * rhs[perm[col]];
    }
  }
  double sol[kDim];
  for (int i = kDim - 1; i >= 0; --i) {
    double acc = rhs[perm[i]];
    for (int j = i + 1; j < kDim; ++j) acc -= g[perm[i]][j] * sol[j];
    sol[i] = acc / g[perm[i]][i];
  }
  return {sol[0], sol[1], sol[2], sol[3]};
}

// Prefactor of the exponential complexity growth K(t) ~ k e^{2t}:
//   k = Gamma(2a+1/2) Gamma(2b+1/2) Gamma(a+b+1/2)^2
//       / (2 Gamma(2a) Gamma(2b) Gamma(a+b) Gamma(a+b+1)).
// Real for both parameter kinds (conjugate factors pair up).
inline double complexity_prefactor(const HahnParams& p) {
  using cd = std::complex<double>;
  const cd a = p.a;
  const cd b = p.b;
  const cd s = a + b;
  const cd v = gamma_c(2.0 * a + 0.5) * gamma_c(2.0 * b + 0.5) * gamma_c(s + 0.5) *
               gamma_c(s + 0.5) * inv_gamma(2.0 * a) * inv_gamma(2.0 * b) * inv_gamma(s) *
               inv_gamma(s + 1.0) / 2.0;
  return v.real();
}

// Exact complexity of the linear subfamily: the site distribution is
// negative binomial in tanh^2 t, so the first two moments are elementary.
inline double mp_complexity(double eta, double t) {
  const double sh = std::sinh(t);
  return eta * sh * sh;
}

inline double mp_complexity_second(double eta, double t) {
  const double s2 = std::sinh(t) * std::sinh(t);
  return eta * s2 + eta * (eta + 1.0) * s2 * s2;
}

// Alternating family b_n^2 = n^2 + (n odd) w^2.
inline double alternating_b2(double omega, std::size_t n) {
  if (n == 0) throw domain_error("alternating_b2: couplings are indexed from 1");
  const double nd = static_cast<double>(n);
  return nd * nd + (n % 2 == 1 ? omega * omega : 0.0);
}

inline Rational alternating_b2_exact(const Rational& omega, std::size_t n) {
  if (n == 0) throw domain_error("alternating_b2_exact: couplings are indexed from 1");
  const Rational nq{Integer(n)};
  Rational out = nq * nq;
  if (n % 2 == 1) out += omega * omega;
  return out;
}

namespace detail {

inline std::vector<Rational> poly_derivative(const std::vector<Rational>& p) {
  std::vector<Rational> d(p.size() > 1 ? p.size() - 1 : 1, Rational(0));
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = Rational(Integer(i)) * p[i];
  return d;
}

inline void poly_acc(std::vector<Rational>& dest, const std::vector<Rational>& src,
                     const Rational& scale, std::size_t shift = 0) {
  if (dest.size() < src.size() + shift) dest.resize(src.size() + shift, Rational(0));
  for (std::size_t i = 0; i < src.size(); ++i) dest[i + shift] += scale * src[i];
}

inline void poly_trim(std::vector<Rational>& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline double poly_eval(const std::vector<Rational>& p, double x) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + to_double(p[i]);
  return acc;
}

}  // namespace detail

// Exact wave functions of the alternating family. Writing
//   psi_n = phi_n * prod_{k<=n} b_k,
// the chain recurrence psi_{n+1} = b_n^2 psi_{n-1} - psi_n' closes over
//   psi_n(t) = sech t [ P_n(T) cos(wt) + Q_n(T) sin(wt)/w ],  T = tanh t,
// with rational polynomial recurrences
//   P_{n+1} = b_n^2 P_{n-1} + T P_n - (1-T^2) P_n' - Q_n,
//   Q_{n+1} = b_n^2 Q_{n-1} + T Q_n - (1-T^2) Q_n' + w^2 P_n.
// Everything up to the final evaluation is exact, which makes this the
// reference oracle the numerical solver is checked against.
class AlternatingWave {
 public:
  AlternatingWave(const Rational& omega, std::size_t n_max)
      : omega_(to_double(omega)) {
    if (n_max > 120) {
      throw domain_error("AlternatingWave: coefficients overflow double past n = 120");
    }
    const Rational w2 = omega * omega;
    p_.resize(n_max + 1);
    q_.resize(n_max + 1);
    prod_b_.resize(n_max + 1, 1.0);
    p_[0] = {Rational(1)};
    q_[0] = {Rational(0)};
    for (std::size_t n = 0; n < n_max; ++n) {
      std::vector<Rational> np;
      std::vector<Rational> nq;
      if (n >= 1) {
        const Rational b2 = alternating_b2_exact(omega, n);
        detail::poly_acc(np, p_[n - 1], b2);
        detail::poly_acc(nq, q_[n - 1], b2);
      }
      detail::poly_acc(np, p_[n], Rational(1), 1);
      detail::poly_acc(nq, q_[n], Rational(1), 1);
      const auto dp = detail::poly_derivative(p_[n]);
      const auto dq = detail::poly_derivative(q_[n]);
      detail::poly_acc(np, dp, Rational(-1));
      detail::poly_acc(np, dp, Rational(1), 2);
      detail::poly_acc(nq, dq, Rational(-1));
      detail::poly_acc(nq, dq, Rational(1), 2);
      detail::poly_acc(np, q_[n], Rational(-1));
      detail::poly_acc(nq, p_[n], w2);
      detail::poly_trim(np);
      detail::poly_trim(nq);
      p_[n + 1] = std::move(np);
      q_[n + 1] = std::move(nq);
      prod_b_[n + 1] =
          prod_b_[n] * std::sqrt(to_double(alternating_b2_exact(omega, n + 1)));
    }
  }

  std::size_t size() const { return p_.size() - 1; }
  const std::vector<Rational>& P(std::size_t n) const { return p_.at(n); }
  const std::vector<Rational>& Q(std::size_t n) const { return q_.at(n); }

  double phi(std::size_t n, double t) const {
    if (n >= p_.size()) throw domain_error("AlternatingWave: index beyond n_max");
    const double T = std::tanh(t);
    const double pv = detail::poly_eval(p_[n], T);
    const double qv = detail::poly_eval(q_[n], T);
    const double osc = omega_ == 0.0 ? t : std::sin(omega_ * t) / omega_;
    return (pv * std::cos(omega_ * t) + qv * osc) / (std::cosh(t) * prod_b_[n]);
  }

 private:
  double omega_;
  std::vector<std::vector<Rational>> p_;
  std::vector<std::vector<Rational>> q_;
  std::vector<double> prod_b_;
};

inline LanczosSequence seq_hahn(const HahnParams& p) {
  LanczosSequence s;
  s.tag = hahn_tag(p);
  s.b = [p](std::size_t n) { return hahn_b(p, n); };
  return s;
}

inline LanczosSequence seq_hahn_exact(const Rational& a, const Rational& b) {
  LanczosSequence s;
  s.tag = "hahn(" + rat_string(a) + "," + rat_string(b) + ")";
  s.b2_exact = [a, b](std::size_t n) { return hahn_b2_exact(a, b, n); };
  s.b = [a, b](std::size_t n) { return std::sqrt(to_double(hahn_b2_exact(a, b, n))); };
  return s;
}

inline LanczosSequence seq_conjugate_exact(const Rational& r, const Rational& omega) {
  LanczosSequence s;
  s.tag = "conjugate(" + rat_string(r) + "," + rat_string(omega) + ")";
  s.b2_exact = [r, omega](std::size_t n) { return hahn_b2_exact_conjugate(r, omega, n); };
  s.b = [r, omega](std::size_t n) {
    return std::sqrt(to_double(hahn_b2_exact_conjugate(r, omega, n)));
  };
  return s;
}

inline LanczosSequence seq_mp(const Rational& eta) {
  if (!(eta > 0)) throw domain_error("seq_mp: needs eta > 0");
  LanczosSequence s;
  s.tag = "mp(" + rat_string(eta) + ")";
  s.b2_exact = [eta](std::size_t n) -> Rational {
    if (n == 0) throw domain_error("seq_mp: couplings are indexed from 1");
    const Rational nq{Integer(n)};
    return nq * (nq + eta - 1);
  };
  s.b = [eta](std::size_t n) {
    const double e = to_double(eta);
    const double nd = static_cast<double>(n);
    return std::sqrt(nd * (nd + e - 1.0));
  };
  return s;
}

inline LanczosSequence seq_alternating(const Rational& omega) {
  LanczosSequence s;
  s.tag = "alternating(" + rat_string(omega) + ")";
  s.b2_exact = [omega](std::size_t n) { return alternating_b2_exact(omega, n); };
  s.b = [omega](std::size_t n) { return std::sqrt(to_double(alternating_b2_exact(omega, n))); };
  return s;
}

}  // namespace krylov
