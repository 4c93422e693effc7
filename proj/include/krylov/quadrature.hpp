#pragma once

// Adaptive Gauss–Kronrod 15(7) quadrature. Used for measure normalization,
// Fourier transforms of the spectral density and orthogonality integrals;
// the embedded 7-point rule drives bisection.

#include <cmath>
#include <cstddef>

#include "krylov/errors.hpp"

namespace krylov {

namespace detail {

// Kronrod-15 abscissae on [0, 1] side (symmetric rule) and weights; the
// embedded Gauss-7 rule sits on the odd-indexed nodes.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

template <class F>
void gk15(const F& f, double lo, double hi, double& kron, double& gauss) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  kron = 0.0;
  gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double x = h * kGK15Nodes[i];
    const double fv = (i == 7) ? f(c) : f(c - x) + f(c + x);
    kron += kGK15WeightsK[i] * fv;
    if (i % 2 == 1) gauss += kGK15WeightsG[i / 2] * fv;
  }
  kron *= h;
  gauss *= h;
}

template <class F>
double integrate_rec(const F& f, double lo, double hi, double tol, int depth) {
  double kron, gauss;
  gk15(f, lo, hi, kron, gauss);
  const double err = std::abs(kron - gauss);
  if (err <= tol || depth >= 48) {
    if (depth >= 48 && err > tol) {
      throw convergence_error("integrate: bisection depth exhausted");
    }
    return kron;
  }
  const double mid = 0.5 * (lo + hi);
  return integrate_rec(f, lo, mid, 0.5 * tol, depth + 1) +
         integrate_rec(f, mid, hi, 0.5 * tol, depth + 1);
}

}  // namespace detail

template <class F>
double integrate(const F& f, double lo, double hi, double abs_tol = 1e-12) {
  if (!(lo < hi)) throw domain_error("integrate: empty interval");
  return detail::integrate_rec(f, lo, hi, abs_tol, 0);
}

}  // namespace krylov
