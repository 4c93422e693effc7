#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "krylov/chain.hpp"
#include "krylov/families.hpp"
#include "krylov/rational.hpp"
#include "krylov/sequence.hpp"

using namespace krylov;
using Catch::Approx;

namespace {

SolverConfig with_method(StepMethod m) {
  SolverConfig cfg;
  cfg.method = m;
  return cfg;
}

}  // namespace

TEST_CASE("two-site rotation matches the closed form") {
  // b_1 = 1 and nothing beyond: phi = (cos t, sin t) exactly. Exercises the
  // raw stepping algebra of both methods without any truncation question.
  const auto seq = seq_explicit({1.0, 0.0});
  for (StepMethod m : {StepMethod::dopri54, StepMethod::cayley4}) {
    SolverConfig cfg = with_method(m);
    cfg.fixed_n = 2;
    cfg.guard_band = 0;  // the pair is the whole system, nothing to police
    cfg.store_sites = 2;
    cfg.rel_tol = 1e-12;
    const auto res = evolve_chain(seq, {0.3, 0.9, 2.0}, cfg);
    REQUIRE(res.samples.size() == 3);
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
      const double t = res.samples[i].t;
      CHECK(res.samples[i].c == Approx(std::cos(t)).margin(1e-10));
      CHECK(res.stored[i][1] == Approx(std::sin(t)).margin(1e-10));
      CHECK(res.samples[i].complexity ==
            Approx(std::sin(t) * std::sin(t)).margin(1e-10));
      const double norm_cap = m == StepMethod::cayley4 ? 1e-13 : 1e-11;
      CHECK(std::abs(res.samples[i].norm_defect) < norm_cap);
    }
    CHECK_FALSE(res.truncation_limited);
  }
}

TEST_CASE("gaussian autocorrelation chain") {
  // b_n = sqrt(n): C(t) = exp(-t^2/2), K(t) = t^2, and the site amplitudes
  // have the closed Poisson form used by hermite_phi.
  const auto seq = seq_hermite();
  SolverConfig cfg;
  cfg.store_sites = 8;
  const auto res = evolve_chain(seq, {0.5, 1.5, 3.0}, cfg);
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const double t = res.samples[i].t;
    CHECK(res.samples[i].c == Approx(std::exp(-0.5 * t * t)).margin(1e-9));
    CHECK(res.samples[i].complexity == Approx(t * t).epsilon(1e-8));
    // Explicit stepping drifts the norm at the controller tolerance; only
    // the rational stepper holds it near machine precision.
    CHECK(std::abs(res.samples[i].norm_defect) < 1e-9);
    for (std::size_t n = 0; n < 8; ++n) {
      CHECK(res.stored[i][n] == Approx(hermite_phi(n, t)).margin(1e-9));
    }
  }
}

TEST_CASE("sech chain agrees with the closed forms under both steppers") {
  const auto seq = seq_mp(rat(1));
  const std::vector<double> times{0.8, 1.6, 2.5};

  for (StepMethod m : {StepMethod::dopri54, StepMethod::cayley4}) {
    SolverConfig cfg = with_method(m);
    cfg.store_sites = 13;
    const auto res = evolve_chain(seq, times, cfg);
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
      const double t = res.samples[i].t;
      const double sech = 1.0 / std::cosh(t);
      const double sh = std::sinh(t);
      CHECK(res.samples[i].c == Approx(sech).margin(1e-8));
      CHECK(res.samples[i].complexity == Approx(sh * sh).epsilon(1e-6));
      CHECK(std::abs(res.samples[i].norm_defect) < 1e-11);
      for (std::size_t n = 0; n < 13; ++n) {
        const double exact = std::pow(std::tanh(t), double(n)) * sech;
        CHECK(res.stored[i][n] == Approx(exact).margin(1e-8));
      }
    }
  }

  // The two integrators must agree with each other well inside both error
  // budgets, site by site.
  SolverConfig ca = with_method(StepMethod::dopri54);
  SolverConfig cb = with_method(StepMethod::cayley4);
  ca.store_sites = cb.store_sites = 40;
  const auto ra = evolve_chain(seq, {2.0}, ca);
  const auto rb = evolve_chain(seq, {2.0}, cb);
  for (std::size_t n = 0; n < 40; ++n) {
    CHECK(ra.stored[0][n] == Approx(rb.stored[0][n]).margin(1e-8));
  }
}

TEST_CASE("squared-sech chain invariants") {
  // eta = 2: C = sech^2, K = 2 sinh^2, and the second moment follows the
  // negative binomial form.
  const auto seq = seq_mp(rat(2));
  const auto res = evolve_chain(seq, {0.6, 1.2, 2.0}, SolverConfig{});
  for (const auto& s : res.samples) {
    const double sech = 1.0 / std::cosh(s.t);
    CHECK(s.c == Approx(sech * sech).margin(1e-9));
    CHECK(s.complexity == Approx(mp_complexity(2.0, s.t)).epsilon(1e-7));
    CHECK(s.complexity_second == Approx(mp_complexity_second(2.0, s.t)).epsilon(1e-6));
  }
}

TEST_CASE("oscillating conjugate chain") {
  const auto params = HahnParams::conjugate_pair(0.5, 0.5);
  const auto seq = seq_conjugate_exact(rat(1, 2), rat(1, 2));
  for (StepMethod m : {StepMethod::dopri54, StepMethod::cayley4}) {
    SolverConfig cfg = with_method(m);
    cfg.store_sites = 4;
    const auto res = evolve_chain(seq, {0.7, 1.3, 2.0}, cfg);
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
      const double t = res.samples[i].t;
      CHECK(res.samples[i].c == Approx(std::sin(2 * t) / std::sinh(2 * t)).margin(1e-8));
      CHECK(res.stored[i][2] == Approx(hahn_phi(params, 2, t)).margin(1e-8));
    }
  }
}

TEST_CASE("alternating chain against the polynomial oracle") {
  const Rational omega = rat(2, 3);
  const auto seq = seq_alternating(omega);
  AlternatingWave wave(omega, 24);
  SolverConfig cfg;
  cfg.store_sites = 21;
  const auto res = evolve_chain(seq, {1.5}, cfg);
  for (std::size_t n = 0; n <= 20; ++n) {
    CHECK(res.stored[0][n] == Approx(wave.phi(n, 1.5)).margin(1e-9));
  }
}

TEST_CASE("long horizon stays unitary under the rational stepper") {
  const auto seq = seq_mp(rat(1));
  SolverConfig cfg = with_method(StepMethod::cayley4);
  cfg.rel_tol = 1e-8;
  const auto res = evolve_chain(seq, {5.0}, cfg);
  CHECK(std::abs(res.samples[0].norm_defect) < 1e-11);
  CHECK(res.samples[0].c == Approx(1.0 / std::cosh(5.0)).margin(1e-7));
  // The 1e-12 amplitude contour sits past 3e5 sites at t = 5; the ladder
  // must have grown well beyond its 256-site start to hold the guard.
  CHECK(res.n_final > 100000);
}

TEST_CASE("pinned walls report truncation honestly") {
  const auto seq = seq_mp(rat(1));

  SolverConfig strict;
  strict.fixed_n = 64;
  CHECK_THROWS_AS(evolve_chain(seq, {5.0}, strict), truncation_limit_error);

  SolverConfig lax;
  lax.fixed_n = 64;
  lax.allow_truncation_limited = true;
  const auto res = evolve_chain(seq, {5.0}, lax);
  CHECK(res.truncation_limited);
  CHECK(res.n_final == 64);
  // Truncation itself cannot leak norm (the cut generator stays skew);
  // what remains is ordinary integrator drift.
  CHECK(std::abs(res.samples[0].norm_defect) < 1e-9);

  SolverConfig growing;
  growing.n_initial = 32;
  const auto ok = evolve_chain(seq, {2.0}, growing);
  CHECK_FALSE(ok.truncation_limited);
  CHECK(ok.n_final > 32);
  CHECK(ok.samples[0].c == Approx(1.0 / std::cosh(2.0)).margin(1e-8));
}

TEST_CASE("runs are deterministic") {
  const auto seq = seq_mp(rat(1));
  for (StepMethod m : {StepMethod::dopri54, StepMethod::cayley4}) {
    SolverConfig cfg = with_method(m);
    cfg.store_sites = 16;
    const auto r1 = evolve_chain(seq, {1.0, 2.0}, cfg);
    const auto r2 = evolve_chain(seq, {1.0, 2.0}, cfg);
    REQUIRE(r1.samples.size() == r2.samples.size());
    for (std::size_t i = 0; i < r1.samples.size(); ++i) {
      CHECK(r1.samples[i].c == r2.samples[i].c);
      CHECK(r1.samples[i].norm_defect == r2.samples[i].norm_defect);
      CHECK(r1.samples[i].complexity == r2.samples[i].complexity);
      CHECK(r1.stored[i] == r2.stored[i]);
    }
    CHECK(r1.steps == r2.steps);

    // The chunked loops are written so the thread count cannot change any
    // result bit; spot-check the contract.
    SolverConfig threaded = cfg;
    threaded.threads = 3;
    const auto r3 = evolve_chain(seq, {1.0, 2.0}, threaded);
    CHECK(r3.samples[1].c == r1.samples[1].c);
    CHECK(r3.samples[1].complexity == r1.samples[1].complexity);
  }
}

TEST_CASE("input validation") {
  const auto seq = seq_hermite();
  CHECK_THROWS_AS(evolve_chain(seq, {1.0, 1.0}), domain_error);
  CHECK_THROWS_AS(evolve_chain(seq, {-0.5}), domain_error);
  const auto empty = evolve_chain(seq, {});
  CHECK(empty.samples.empty());
}
