#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "krylov/moments.hpp"
#include "krylov/opcheck.hpp"

using namespace krylov;
using Catch::Approx;

namespace {

using cd = std::complex<double>;

// Four-parameter continuous Hahn polynomial from its terminating series,
//   p_n(x) = i^n (a+c)_n (a+d)_n / n! * sum_k [(-n)_k (n+s-1)_k (a+ix)_k]
//            / [(a+c)_k (a+d)_k k!],
// used as an independent oracle for the recurrence coefficients.
cd hahn4_poly(const ContinuousHahnParams& p, unsigned n, double x) {
  const cd s = p.a + p.b + p.c + p.d;
  cd sum(0.0);
  cd term(1.0);
  for (unsigned k = 0; k <= n; ++k) {
    sum += term;
    const double kd = static_cast<double>(k);
    term *= (cd(-static_cast<double>(n)) + kd) * (s + static_cast<double>(n) - 1.0 + kd) *
            (p.a + cd(0.0, x) + kd);
    term /= (p.a + p.c + kd) * (p.a + p.d + kd) * (kd + 1.0);
  }
  cd pref(1.0);
  for (unsigned k = 0; k < n; ++k) pref *= cd(0.0, 1.0);
  pref *= pochhammer(p.a + p.c, n) * pochhammer(p.a + p.d, n);
  double nfac = 1.0;
  for (unsigned k = 2; k <= n; ++k) nfac *= k;
  return pref * sum / nfac;
}

// deterministic symmetric 6x6 with spectral norm at most 1
std::vector<std::vector<double>> test_matrix() {
  std::uint64_t state = 0x2545f4914f6cdd1dULL;
  auto uniform = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  };
  std::vector<std::vector<double>> a(6, std::vector<double>(6));
  for (auto& row : a)
    for (auto& x : row) x = uniform();
  double norm = 0.0;
  for (int i = 0; i < 6; ++i) {
    double row = 0.0;
    for (int j = 0; j < 6; ++j) {
      a[i][j] = 0.5 * (a[i][j] + a[j][i]);
      a[j][i] = a[i][j];
      row += std::abs(a[i][j]);
    }
    norm = std::max(norm, row);
  }
  for (auto& row : a)
    for (auto& x : row) x /= norm;
  return a;
}

}  // namespace

TEST_CASE("normalized recurrence values") {
  auto linear = seq_mp(rat(1));  // b_n = n
  REQUIRE(eval_pi(linear, 0, 0.37) == 1.0);
  // pi_2 = (x^2 - 1)/2 for b_n = n
  REQUIRE(eval_pi(linear, 2, 2.0) == Approx(1.5).margin(1e-14));
  // Hermite pi_2 = (x^2 - 1)/sqrt(2)
  REQUIRE(eval_pi(seq_hermite(), 2, 0.0) == Approx(-1.0 / std::sqrt(2.0)).margin(1e-14));
}

TEST_CASE("monic and normalized values stay proportional") {
  for (const auto& seq : {seq_hahn(HahnParams::real_pair(0.3, 0.7)), seq_hermite()}) {
    for (double x : {0.4, -1.3, 2.7}) {
      double prod = 1.0;
      for (std::size_t n = 1; n <= 15; ++n) {
        prod *= seq.b(n);
        const double monic = eval_monic(seq, n, x);
        const double scaled = eval_pi(seq, n, x) * prod;
        REQUIRE(monic == Approx(scaled).margin(1e-12 * (1.0 + std::abs(monic))));
      }
    }
  }
}

TEST_CASE("Favard loop through the moment engine stays exact") {
  // closed-form couplings -> moments -> dual-route inversion -> monic
  // polynomial values, compared in exact arithmetic against the monic values
  // from the original couplings
  auto seq = seq_mp(rat(3));
  std::vector<Rational> b2_family;
  for (std::size_t n = 1; n <= 11; ++n) b2_family.push_back(seq.b2_exact(n));
  auto mu = moments_from_b(b2_family, 20);
  auto b2_back = b2_from_moments(mu, 9);
  const Rational x = rat(3, 7);
  for (std::size_t n = 1; n <= 10; ++n) {
    REQUIRE(eval_monic(b2_back, n, x) == eval_monic(b2_family, n, x));
  }
  REQUIRE_THROWS_AS(eval_monic(b2_back, 11, x), domain_error);
}

TEST_CASE("orthogonality residuals under the spectral measure") {
  const auto even = HahnParams::real_pair(0.5, 0.5);
  REQUIRE(orthogonality_residual(even, 0, 0) <= 1e-10);
  REQUIRE(orthogonality_residual(even, 1, 1) <= 1e-9);
  REQUIRE(orthogonality_residual(even, 12, 12) <= 1e-9);

  const auto skew = HahnParams::real_pair(0.25, 0.75);
  REQUIRE(orthogonality_residual(skew, 3, 5) <= 1e-9);
  REQUIRE(orthogonality_residual(skew, 3, 3) <= 1e-9);

  const auto conj = HahnParams::conjugate_pair(0.5, 0.5);
  REQUIRE(orthogonality_residual(conj, 2, 2) <= 1e-9);
  REQUIRE(orthogonality_residual(conj, 1, 3) <= 1e-9);
}

TEST_CASE("evolution operator expansion") {
  auto hermite = seq_hermite();

  SECTION("scalar chain against the bare exponential") {
    const double t = 1.2;
    auto phi = [t](std::size_t n) { return hermite_phi(n, t); };
    REQUIRE(evolution_expansion_residual({{0.7}}, hermite, phi, t, 50) <= 1e-12);
  }

  SECTION("zero matrix") {
    const double t = 0.9;
    auto phi = [t](std::size_t n) { return hermite_phi(n, t); };
    std::vector<std::vector<double>> zero(2, std::vector<double>(2, 0.0));
    REQUIRE(evolution_expansion_residual(zero, hermite, phi, t, 40) <= 1e-12);
  }

  SECTION("symmetric matrix against the spectral oracle") {
    const double t = 1.5;
    auto phi = [t](std::size_t n) { return hermite_phi(n, t); };
    const auto a = test_matrix();
    const double r12 = evolution_expansion_residual(a, hermite, phi, t, 12);
    const double r18 = evolution_expansion_residual(a, hermite, phi, t, 18);
    const double r24 = evolution_expansion_residual(a, hermite, phi, t, 24);
    const double r60 = evolution_expansion_residual(a, hermite, phi, t, 60);
    REQUIRE(r60 <= 1e-8);
    // truncation error shrinks with depth, down to the roundoff floor
    REQUIRE(r18 <= r12 + 1e-13);
    REQUIRE(r24 <= r18 + 1e-13);
    REQUIRE(r60 <= r24 + 1e-13);
  }

  SECTION("input validation") {
    auto phi = [](std::size_t) { return 0.0; };
    std::vector<std::vector<double>> skewed = {{0.0, 1.0}, {-1.0, 0.0}};
    REQUIRE_THROWS_AS(evolution_expansion_residual(skewed, hermite, phi, 1.0, 4), domain_error);
    std::vector<std::vector<double>> ragged = {{0.0, 1.0}, {1.0}};
    REQUIRE_THROWS_AS(evolution_expansion_residual(ragged, hermite, phi, 1.0, 4), domain_error);
  }
}

TEST_CASE("four-parameter recurrence collapses to the two-parameter couplings") {
  SECTION("pinned values at the all-half point") {
    const auto p = ContinuousHahnParams::real_symmetric(0.5, 0.5);
    const auto at0 = continuous_hahn_bridge(p, 0);
    REQUIRE(at0.a_tilde <= 1e-15);
    REQUIRE(at0.b_main == 0.0);
    const auto at1 = continuous_hahn_bridge(p, 1);
    REQUIRE(at1.b_tilde * at1.b_tilde == Approx(1.0 / 12.0).margin(1e-15));
    REQUIRE(at1.b_main * at1.b_main == Approx(4.0 / 3.0).margin(1e-14));
  }

  SECTION("real pairs reproduce the family couplings") {
    const double pairs[][2] = {{0.5, 0.5}, {0.3, 0.7}, {0.25, 0.75}, {1.0, 0.35}};
    for (const auto& ab : pairs) {
      const auto p = ContinuousHahnParams::real_symmetric(ab[0], ab[1]);
      const auto main = HahnParams::real_pair(ab[0], ab[1]);
      for (std::size_t n = 1; n <= 20; ++n) {
        const auto bridge = continuous_hahn_bridge(p, n);
        REQUIRE(bridge.a_tilde <= 1e-12);
        REQUIRE(bridge.b_main == Approx(hahn_b(main, n)).margin(1e-12));
      }
    }
  }

  SECTION("conjugate pairs reproduce the oscillatory couplings") {
    const auto at1 = continuous_hahn_bridge(ContinuousHahnParams::conjugate_cross(0.5, 0.5), 1);
    REQUIRE(at1.b_main * at1.b_main == Approx(8.0 / 3.0).margin(1e-13));
    const double pairs[][2] = {{0.5, 0.5}, {0.6, 0.9}};
    for (const auto& rw : pairs) {
      const auto p = ContinuousHahnParams::conjugate_cross(rw[0], rw[1]);
      const auto main = HahnParams::conjugate_pair(rw[0], rw[1]);
      for (std::size_t n = 1; n <= 20; ++n) {
        REQUIRE(continuous_hahn_bridge(p, n).b_main == Approx(hahn_b(main, n)).margin(1e-12));
      }
    }
  }

  SECTION("shifted reflection keeps the diagonal clean") {
    // r != 1/2 exercises the 0/0 limit in the n = 0 coefficient: dropping it
    // would leave a diagonal residue of size w (1 - 2r)
    for (const auto& rw : {std::pair{0.5, 0.5}, std::pair{0.3, 0.8}}) {
      const auto p = ContinuousHahnParams::shifted_reflection(rw.first, rw.second);
      for (std::size_t n = 0; n <= 10; ++n) {
        REQUIRE(continuous_hahn_bridge(p, n).a_tilde <= 1e-12);
      }
    }
  }

  SECTION("recurrence oracle from the terminating series") {
    const auto p = ContinuousHahnParams::real_symmetric(0.3, 0.7);
    for (double x : {0.3, 1.1}) {
      for (unsigned n = 1; n <= 4; ++n) {
        const double nd = n;
        const cd A = detail::hahn4_A(p, nd);
        const cd B = detail::hahn4_B(p, nd);
        const cd C = detail::hahn4_C(p, nd);
        const cd Bm = detail::hahn4_B(p, nd - 1.0);
        const cd rhs = (B / A) * (cd(-x) + cd(0.0, 1.0) * (A + C + p.a)) * hahn4_poly(p, n, x) +
                       (Bm * B * C / A) * hahn4_poly(p, n - 1, x);
        const cd lhs = hahn4_poly(p, n + 1, x);
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
      }
    }
  }

  SECTION("rejects parameters outside the admissible classes") {
    REQUIRE_THROWS_AS(ContinuousHahnParams::real_symmetric(0.0, 0.5), domain_error);
    REQUIRE_THROWS_AS(ContinuousHahnParams::shifted_reflection(1.2, 0.5), domain_error);
    ContinuousHahnParams generic{{0.4, 0.2}, {0.7, -0.1}, {0.4, -0.2}, {0.7, 0.1}};
    REQUIRE_THROWS_AS(generic.validate(), domain_error);
    ContinuousHahnParams broken{{0.4, 0.2}, {0.7, -0.2}, {0.4, 0.2}, {0.7, -0.2}};
    REQUIRE_THROWS_AS(broken.validate(), domain_error);
  }
}

TEST_CASE("hypergeometric summation identity") {
  // n = 0 degenerates to the same expression on both sides
  REQUIRE(hypergeometric_sum_identity_check(0, 0.4, 1.1, 0.3) == 0.0);

  // n = 1 at the symmetric point: F(1,1;2;z) - F(1,1;3;z) = (z/6) F(2,2;4;z)
  REQUIRE(hypergeometric_sum_identity_check(1, 0.5, 0.5, 0.5) <= 1e-12);
  {
    const double z = 0.5;
    const double direct = gauss_2f1(cd(1.0), cd(1.0), cd(2.0), z).real() -
                          gauss_2f1(cd(1.0), cd(1.0), cd(3.0), z).real();
    REQUIRE(direct == Approx(z / 6.0 * gauss_2f1(cd(2.0), cd(2.0), cd(4.0), z).real())
                          .margin(1e-13));
  }

  REQUIRE(hypergeometric_sum_identity_check(3, 0.3, 0.9, 0.4) <= 1e-10);
  for (std::size_t n : {2, 4, 5}) {
    REQUIRE(hypergeometric_sum_identity_check(n, 0.35, 0.8, -0.55) <= 1e-10);
  }

  REQUIRE_THROWS_AS(hypergeometric_sum_identity_check(2, 0.4, 0.8, 1.2), domain_error);
  REQUIRE_THROWS_AS(hypergeometric_sum_identity_check(2, -0.1, 0.8, 0.5), domain_error);
}
