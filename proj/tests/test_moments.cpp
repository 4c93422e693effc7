#include <catch2/catch_amalgamated.hpp>
#include <vector>

#include "krylov/euler_poly.hpp"
#include "krylov/families.hpp"
#include "krylov/moments.hpp"
#include "krylov/series.hpp"

using namespace krylov;

namespace {

// interleave zeros for the odd moments of a symmetric measure
std::vector<Rational> symmetrize(const std::vector<Rational>& mu_even) {
  std::vector<Rational> mu;
  for (const auto& m : mu_even) {
    mu.push_back(m);
    mu.push_back(0);
  }
  mu.pop_back();
  return mu;
}

}  // namespace

TEST_CASE("sech powers round-trip through the moment engine") {
  // C(t) = sech^eta(t) has couplings b_n^2 = n (n + eta - 1); recovering
  // them from the Taylor moments exercises both inversion routes on tables
  // whose entries grow factorially.
  for (int eta : {2, 3, 4}) {
    auto mu = symmetrize(moments_from_series(autocorr_sech_power(eta, 28), 14));
    auto b2 = b2_from_moments(mu, 12);
    for (long long n = 1; n <= 12; ++n) {
      REQUIRE(b2[n - 1] == rat(n) * rat(n + eta - 1));
    }
  }
}

TEST_CASE("alternating couplings round-trip at rational frequency") {
  auto mu = symmetrize(alternating_moments(rat(2, 3), 14));
  auto b2 = b2_from_moments(mu, 12);
  for (long long n = 1; n <= 12; ++n) {
    Rational expect = rat(n * n);
    if (n % 2 == 1) expect += rat(4, 9);
    REQUIRE(b2[n - 1] == expect);
  }
}

TEST_CASE("two-parameter couplings survive a moment round trip") {
  // Dyck-path transfer turns exact couplings into moments; the Hankel and
  // quotient-difference routes must then restore them. Unlike the cases
  // above there is no closed moment formula to lean on, so this is a pure
  // internal-consistency loop on gnarly rationals.
  for (const auto& seq :
       {seq_hahn_exact(rat(3, 10), rat(7, 10)), seq_conjugate_exact(rat(1, 2), rat(1, 2))}) {
    std::vector<Rational> b2_in;
    for (std::size_t n = 1; n <= 8; ++n) b2_in.push_back(seq.b2_exact(n));
    auto mu = moments_from_b(b2_in, 14);
    auto back = b2_from_moments(mu, 6);
    for (std::size_t n = 1; n <= 6; ++n) REQUIRE(back[n - 1] == b2_in[n - 1]);
  }
}

TEST_CASE("Euler-polynomial Hankel ratio identity") {
  const RationalComplex zero{};
  // real point z = 1/2: pinned value first, then the residual family
  {
    auto e = euler_values(rat(1, 2), 4);
    REQUIRE(e[4] / (e[0] * e[4] - e[2] * e[2]) == rat(5, 4));
  }
  for (std::size_t n = 1; n <= 5; ++n) {
    REQUIRE(euler_hankel_identity_check(n, RationalComplex(rat(1, 2))) == zero);
  }
  // z = (1 + i)/2 is the alternating-chain point at unit frequency
  for (std::size_t n = 1; n <= 4; ++n) {
    REQUIRE(euler_hankel_identity_check(n, RationalComplex(rat(1, 2), rat(1, 2))) == zero);
  }
  // an unstructured complex point, since the identity claims all of C
  REQUIRE(euler_hankel_identity_check(3, RationalComplex(rat(2, 7), rat(-3, 4))) == zero);
  REQUIRE_THROWS_AS(euler_hankel_identity_check(0, RationalComplex(rat(1, 2))), domain_error);
}

TEST_CASE("even Euler-Hankel determinant matches the closed product") {
  // det[E_{2i+2j}(z)] over 0 <= i,j <= n has a known evaluation,
  //   (-1)^{n(n+1)/2} prod_{l=0}^{n} ((l+1)^2 (z+l)(z-l-1))^{n-l},
  // which pins the denominator of the ratio identity independently.
  auto closed = [](const RationalComplex& z, std::size_t n) {
    RationalComplex prod{Rational(1)};
    for (std::size_t l = 0; l <= n; ++l) {
      const Rational l1{Integer(l + 1)};
      const RationalComplex factor = RationalComplex(l1 * l1) *
                                     (z + RationalComplex(Rational(Integer(l)))) *
                                     (z - RationalComplex(Rational(Integer(l + 1))));
      for (std::size_t p = 0; p < n - l; ++p) prod *= factor;
    }
    return (n * (n + 1) / 2) % 2 == 1 ? -prod : prod;
  };
  for (const RationalComplex& z : {RationalComplex(rat(1, 2)), RationalComplex(rat(1, 2), rat(1, 2)),
                                   RationalComplex(rat(2, 3), rat(-1, 5))}) {
    auto e = euler_values(z, 16);
    for (std::size_t n = 0; n <= 4; ++n) {
      std::vector<std::vector<RationalComplex>> m(n + 1, std::vector<RationalComplex>(n + 1));
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) m[i][j] = e[2 * i + 2 * j];
      REQUIRE(bareiss_det(m) == closed(z, n));
    }
  }
}

TEST_CASE("alternating Hankel ratios telescope into closed products") {
  // A_{k+1}/A_k = prod_{l<=k} c_{0,l} and B_{k+1}/B_k = (1+w^2) prod c_{1,l}
  // with c_{eta,l} = 4 l^2 [w^2 + (2l+2eta-1)^2]. The even couplings then
  // collapse to b_{2k} = 2k independently of the frequency.
  for (Rational w : {rat(1), rat(2, 5)}) {
    const Rational w2 = w * w;
    auto c = [&](long long eta, long long l) {
      const Rational odd = rat(2 * l + 2 * eta - 1);
      return rat(4 * l * l) * (w2 + odd * odd);
    };
    auto led = hankel_ledger(symmetrize(alternating_moments(w, 11)), 8);
    Rational prod_a = 1, prod_b = 1;
    for (long long k = 0; k <= 4; ++k) {
      if (k > 0) {
        prod_a *= c(0, k);
        prod_b *= c(1, k);
      }
      REQUIRE(led.A[k + 1] == led.A[k] * prod_a);
      REQUIRE(led.B[k + 1] == led.B[k] * (1 + w2) * prod_b);
    }
    for (long long k = 1; k <= 4; ++k) {
      REQUIRE(led.A[k + 1] * led.B[k - 1] / (led.A[k] * led.B[k]) == rat(4 * k * k));
    }
  }
}
