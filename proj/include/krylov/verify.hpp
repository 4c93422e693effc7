#pragma once

// Cross-module self-checks. Each check re-derives a quantity along two
// independent routes (closed form vs solver, exact arithmetic vs float,
// series vs determinant) and reports the worst deviation it saw. The CLI
// `verify` subcommand runs the whole registry and turns any failure into a
// nonzero exit, so the suite doubles as an installation smoke test.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "krylov/chain.hpp"
#include "krylov/deform.hpp"
#include "krylov/euler_poly.hpp"
#include "krylov/families.hpp"
#include "krylov/moments.hpp"
#include "krylov/opcheck.hpp"
#include "krylov/rational.hpp"
#include "krylov/series.hpp"
#include "krylov/special.hpp"

namespace krylov {

struct CheckResult {
  bool pass = false;
  std::string detail;
};

struct NamedCheck {
  std::string name;
  std::function<CheckResult()> run;
};

namespace detail {

inline CheckResult residual_check(double worst, double tol) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "residual %.3g, tolerance %.3g", worst, tol);
  return {worst <= tol, buf};
}

inline CheckResult exact_check(bool ok, const std::string& what) {
  return {ok, ok ? what : "mismatch: " + what};
}

}  // namespace detail

// Runs one check, folding any exception into a failure so a single broken
// check cannot take down the rest of the registry.
inline CheckResult run_check(const NamedCheck& check) {
  try {
    return check.run();
  } catch (const std::exception& e) {
    return {false, std::string("threw: ") + e.what()};
  }
}

inline std::vector<NamedCheck> verification_suite() {
  using cd = std::complex<double>;
  std::vector<NamedCheck> checks;

  checks.push_back({"special.log_gamma_reflection", [] {
    // Gamma(z) Gamma(1-z) sin(pi z) / pi = 1 away from the integers.
    const cd zs[] = {{0.3, 0.7}, {-1.4, 2.2}, {0.5, 0.0}, {3.25, -0.4}};
    double worst = 0.0;
    for (const cd& z : zs) {
      const cd prod = gamma_c(z) * gamma_c(1.0 - z) * std::sin(kPi * z) / kPi;
      worst = std::max(worst, std::abs(prod - 1.0));
    }
    return detail::residual_check(worst, 1e-12);
  }});

  checks.push_back({"special.euler_transformation", [] {
    // 2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a,c-b;c;z).
    double worst = 0.0;
    {
      const cd a = 0.35, b = 0.8, c = 1.3;
      const double z = 0.45;
      const cd lhs = gauss_2f1(a, b, c, z);
      const cd rhs = std::pow(cd(1.0 - z), c - a - b) * gauss_2f1(c - a, c - b, c, z);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    {
      const cd a{0.5, 0.5}, b{0.5, -0.5}, c{1.2, 0.0};
      const double z = -0.6;
      const cd lhs = gauss_2f1(a, b, c, z);
      const cd rhs = std::pow(cd(1.0 - z), c - a - b) * gauss_2f1(c - a, c - b, c, z);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return detail::residual_check(worst, 1e-11);
  }});

  checks.push_back({"families.coupling_pins", [] {
    // Exact rational pins of the coefficient families.
    for (std::size_t n = 1; n <= 6; ++n) {
      const Rational nq{Integer(n)};
      if (hahn_b2_exact(rat(1, 4), rat(3, 4), n) != nq * nq) {
        return detail::exact_check(false, "two-parameter (1/4,3/4) pin at n = " + std::to_string(n));
      }
      if (seq_mp(Rational(1)).b2_exact(n) != nq * nq) {
        return detail::exact_check(false, "unit-index pin at n = " + std::to_string(n));
      }
      const Rational conj = hahn_b2_exact_conjugate(rat(1, 2), rat(1, 2), n);
      const Rational want = 4 * nq * nq * (nq * nq + 1) / (4 * nq * nq - 1);
      if (conj != want) {
        return detail::exact_check(false, "conjugate (1/2,1/2) pin at n = " + std::to_string(n));
      }
      const Rational alt = alternating_b2_exact(Rational(1), n);
      if (alt != (n % 2 ? Rational(nq * nq + 1) : Rational(nq * nq))) {
        return detail::exact_check(false, "alternating pin at n = " + std::to_string(n));
      }
    }
    if (hahn_b2_exact(rat(1, 2), rat(1, 2), 1) != rat(4, 3)) {
      return detail::exact_check(false, "symmetric (1/2,1/2) pin at n = 1");
    }
    return detail::exact_check(true, "rational coupling pins hold through n = 6");
  }});

  checks.push_back({"families.wave_sum_rule", [] {
    // Closed-form wave functions carry unit total weight at every time.
    double worst = 0.0;
    const HahnParams p = HahnParams::real_pair(0.3, 0.7);
    for (double t : {0.6, 1.2}) {
      double sum = 0.0;
      for (std::size_t n = 0; n <= 120; ++n) {
        const double v = hahn_phi(p, n, t);
        sum += v * v;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    double sum = 0.0;
    for (std::size_t n = 0; n <= 120; ++n) {
      const double v = mp_phi(2.0, n, 1.0);
      sum += v * v;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
    return detail::residual_check(worst, 1e-11);
  }});

  checks.push_back({"families.alternating_wave_oracle", [] {
    // The site-0 wave of the alternating chain is cos(wt) sech(t).
    const AlternatingWave wave(Rational(1), 4);
    double worst = 0.0;
    for (double t : {0.3, 1.1, 2.4}) {
      worst = std::max(worst, std::abs(wave.phi(0, t) - std::cos(t) / std::cosh(t)));
    }
    return detail::residual_check(worst, 1e-13);
  }});

  checks.push_back({"chain.closed_form_autocorrelation", [] {
    // Numerical chain evolution against the sech closed form.
    SolverConfig cfg;
    cfg.method = StepMethod::cayley4;
    const auto res = evolve_chain(seq_mp(Rational(1)), {0.5, 1.0, 2.0}, cfg);
    double worst = 0.0;
    double defect = 0.0;
    for (const auto& s : res.samples) {
      worst = std::max(worst, std::abs(s.c - 1.0 / std::cosh(s.t)));
      defect = std::max(defect, std::abs(s.norm_defect));
    }
    if (defect > 1e-12) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "norm defect %.3g exceeds 1e-12", defect);
      return CheckResult{false, buf};
    }
    return detail::residual_check(worst, 1e-8);
  }});

  checks.push_back({"chain.cross_method_agreement", [] {
    // Both steppers and the exact oracle agree on the alternating chain.
    const auto seq = seq_alternating(Rational(1));
    SolverConfig a;
    a.method = StepMethod::dopri54;
    SolverConfig b;
    b.method = StepMethod::cayley4;
    const std::vector<double> times = {1.5};
    const double ca = evolve_chain(seq, times, a).samples[0].c;
    const double cb = evolve_chain(seq, times, b).samples[0].c;
    const double oracle = AlternatingWave(Rational(1), 2).phi(0, 1.5);
    const double worst = std::max(std::abs(ca - cb),
                                  std::max(std::abs(ca - oracle), std::abs(cb - oracle)));
    return detail::residual_check(worst, 1e-8);
  }});

  checks.push_back({"moments.dual_route_inversion", [] {
    // Series moments -> couplings along the Hankel and quotient-difference
    // routes; b2_from_moments throws if the two routes ever disagree.
    const auto even = moments_from_series(autocorr_sech_power(3, 26), 13);
    std::vector<Rational> mu;
    for (const auto& m : even) {
      mu.push_back(m);
      mu.push_back(Rational(0));
    }
    mu.pop_back();
    const auto b2 = b2_from_moments(mu, 10);
    for (std::size_t n = 1; n <= 10; ++n) {
      const Rational nq{Integer(n)};
      if (b2[n - 1] != nq * (nq + 2)) {
        return detail::exact_check(false, "coupling " + std::to_string(n) + " off closed form");
      }
    }
    return detail::exact_check(true, "both inversion routes exact through n = 10");
  }});

  checks.push_back({"moments.continued_fraction_closure", [] {
    // Depth-D resolvent reproduces the measure through mu_{2D+1} exactly.
    std::vector<Rational> b2;
    for (std::size_t n = 1; n <= 8; ++n) b2.push_back(hahn_b2_exact(rat(1, 2), rat(1, 2), n));
    const auto direct = moments_from_b(b2, 12);
    const auto cf = moments_from_continued_fraction(b2, 5, 12);
    for (std::size_t k = 0; k < 12; ++k) {
      if (cf[k] != direct[k]) {
        return detail::exact_check(false, "moment " + std::to_string(k) + " deviates before 2D+2");
      }
    }
    return detail::exact_check(true, "depth-5 expansion exact through order 11");
  }});

  checks.push_back({"moments.euler_hankel_identity", [] {
    // Hankel determinant ratio of Euler polynomials vs the Pochhammer sum.
    const RationalComplex zs[] = {{rat(1, 2), Rational(0)}, {rat(1, 2), rat(1, 2)}};
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& z : zs) {
        if (!(euler_hankel_identity_check(n, z) == RationalComplex{})) {
          return detail::exact_check(false, "identity broken at order " + std::to_string(n));
        }
      }
    }
    return detail::exact_check(true, "determinant ratio matches the sum exactly through n = 3");
  }});

  checks.push_back({"deform.forward_consistency", [] {
    // Deformed chain autocorrelation against kappa + (1-kappa) sech t.
    SolverConfig cfg;
    cfg.method = StepMethod::cayley4;
    const auto seq = seq_deformed(seq_mp(Rational(1)), rat(1, 2));
    const auto res = evolve_chain(seq, {0.8, 1.6}, cfg);
    double worst = 0.0;
    for (const auto& s : res.samples) {
      worst = std::max(worst, std::abs(s.c - (0.5 + 0.5 / std::cosh(s.t))));
    }
    return detail::residual_check(worst, 1e-8);
  }});

  checks.push_back({"deform.exact_inversion", [] {
    // Deforming the couplings and deforming the moments commute, and the
    // telescoped estimator recovers kappa exactly.
    const auto base = seq_mp(Rational(1));
    const Rational kappa = rat(1, 3);
    std::vector<Rational> base_b2;
    for (std::size_t n = 1; n <= 10; ++n) base_b2.push_back(base.b2_exact(n));
    const auto dmu = deform_moments(moments_from_b(base_b2, 18), kappa);
    const auto via_moments = b2_from_moments(dmu, 8);
    for (std::size_t n = 1; n <= 8; ++n) {
      if (via_moments[n - 1] != deform_b2_exact(base, kappa, n)) {
        return detail::exact_check(false, "deformed coupling " + std::to_string(n));
      }
    }
    const auto est = stationary_kappa(seq_deformed(base, kappa), base, 40);
    if (!est.has_telescoped || est.telescoped != kappa) {
      return detail::exact_check(false, "telescoped estimate " + rat_string(est.telescoped));
    }
    return detail::exact_check(true, "moment route and telescoped recovery exact at kappa = 1/3");
  }});

  checks.push_back({"deform.composition", [] {
    // Two deformations compose as kappa1 + kappa2 - kappa1 kappa2.
    const auto base = seq_mp(Rational(2));
    const Rational k1 = rat(1, 4);
    const Rational k2 = rat(2, 5);
    const auto twice = seq_deformed(seq_deformed(base, k1), k2);
    const auto once = seq_deformed(base, k1 + k2 - k1 * k2);
    for (std::size_t n = 1; n <= 10; ++n) {
      if (twice.b2_exact(n) != once.b2_exact(n)) {
        return detail::exact_check(false, "composition at n = " + std::to_string(n));
      }
    }
    return detail::exact_check(true, "1/4 then 2/5 equals 11/20 through n = 10");
  }});

  checks.push_back({"opcheck.orthonormality", [] {
    // Recurrence polynomials against the spectral measure by quadrature.
    const HahnParams p = HahnParams::real_pair(0.25, 0.75);
    double worst = 0.0;
    worst = std::max(worst, orthogonality_residual(p, 0, 0));
    worst = std::max(worst, orthogonality_residual(p, 2, 3));
    return detail::residual_check(worst, 1e-9);
  }});

  checks.push_back({"opcheck.recurrence_bridge", [] {
    // Four-parameter recurrence collapses to the two-parameter couplings.
    double worst = 0.0;
    {
      const auto q = ContinuousHahnParams::real_symmetric(0.3, 0.7);
      const HahnParams p = HahnParams::real_pair(0.3, 0.7);
      for (std::size_t n = 1; n <= 12; ++n) {
        const auto bridge = continuous_hahn_bridge(q, n);
        worst = std::max(worst, std::abs(bridge.b_main - hahn_b(p, n)));
      }
    }
    {
      const auto q = ContinuousHahnParams::conjugate_cross(0.6, 0.9);
      const HahnParams p = HahnParams::conjugate_pair(0.6, 0.9);
      for (std::size_t n = 1; n <= 12; ++n) {
        const auto bridge = continuous_hahn_bridge(q, n);
        worst = std::max(worst, std::abs(bridge.b_main - hahn_b(p, n)));
      }
    }
    return detail::residual_check(worst, 1e-12);
  }});

  checks.push_back({"opcheck.evolution_expansion", [] {
    // exp(itA) reconstructed from wave functions and recurrence polynomials.
    const std::vector<std::vector<double>> a = {
        {0.31, -0.12, 0.05, 0.0},
        {-0.12, -0.44, 0.21, -0.07},
        {0.05, 0.21, 0.18, 0.09},
        {0.0, -0.07, 0.09, -0.26},
    };
    const double r = evolution_expansion_residual(
        a, seq_hermite(), [](std::size_t n) { return hermite_phi(n, 1.0); }, 1.0, 48);
    return detail::residual_check(r, 1e-10);
  }});

  checks.push_back({"opcheck.hypergeometric_sum", [] {
    // Finite-difference summation identity for the Gauss function.
    double worst = 0.0;
    for (std::size_t n : {std::size_t(1), std::size_t(3)}) {
      worst = std::max(worst, hypergeometric_sum_identity_check(n, 0.35, 0.8, -0.55));
      worst = std::max(worst, hypergeometric_sum_identity_check(n, 0.5, 0.5, 0.3));
    }
    return detail::residual_check(worst, 1e-10);
  }});

  return checks;
}

}  // namespace krylov
