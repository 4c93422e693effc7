#pragma once

// kappa-deformation machinery: the convex mixture
//   C -> kappa + (1 - kappa) C,   0 < kappa < 1,
// realizes an autocorrelation with a nonzero late-time plateau; on the
// measure side it adds a point mass kappa at the origin, and on the moment
// side it rescales every even moment above mu_0 by (1 - kappa). The coupling
// transform and the recovery of kappa both run through the delta ledger
//   delta_0 = 0,  delta_1 = 1,  delta_n = 1 + sum_{k<n} y_k,
//   y_k = prod_{j<=k} (b_{2j-1}/b_{2j})^2,
// with the even/odd dispatch
//   (b^k_{2m}/b_{2m})^2 = D_{m+1}/D_m,  (b^k_{2m+1}/b_{2m+1})^2 = D_m/D_{m+1},
//   D_m = 1 + kappa/(1-kappa) * delta_m.
// Everything has an exact rational lane (for the moment engine and identity
// tests) and a double lane (for chain runs, where site indices reach 10^5+
// and exact products would blow up factorially).

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "krylov/errors.hpp"
#include "krylov/rational.hpp"
#include "krylov/sequence.hpp"

namespace krylov {

inline void check_kappa(const Rational& kappa) {
  if (!(kappa > 0 && kappa < 1)) {
    throw domain_error("kappa must lie strictly between 0 and 1");
  }
}

// Lazily grown exact ledger of y_k and delta_n for a coupling sequence.
// Rationals here grow about one digit per index, so keep indices moderate
// (hundreds); large-index work belongs on the double ledger.
class DeltaLedger {
 public:
  explicit DeltaLedger(std::function<Rational(std::size_t)> b2) : b2_(std::move(b2)) {
    if (!b2_) throw domain_error("DeltaLedger needs exact couplings");
    y_.push_back(Rational(1));      // empty product
    delta_.push_back(Rational(0));  // delta_0
    delta_.push_back(Rational(1));  // delta_1
  }

  Rational b2(std::size_t n) const { return b2_(n); }

  const Rational& y(std::size_t k) {
    while (y_.size() <= k) {
      const std::size_t j = y_.size();
      y_.push_back(y_.back() * b2_(2 * j - 1) / b2_(2 * j));
    }
    return y_[k];
  }

  const Rational& delta(std::size_t n) {
    while (delta_.size() <= n) {
      const std::size_t m = delta_.size();  // building delta_m
      delta_.push_back(delta_.back() + y(m - 1));
    }
    return delta_[n];
  }

 private:
  std::function<Rational(std::size_t)> b2_;
  std::vector<Rational> y_;
  std::vector<Rational> delta_;
};

// Double mirror of the ledger; y_k decays like 1/k and delta_n grows like
// log n for linear couplings, both well inside double range.
class DeltaLedgerD {
 public:
  explicit DeltaLedgerD(std::function<double(std::size_t)> b) : b_(std::move(b)) {
    y_.push_back(1.0);
    delta_.push_back(0.0);
    delta_.push_back(1.0);
  }

  double b2(std::size_t n) const {
    const double v = b_(n);
    return v * v;
  }

  double y(std::size_t k) {
    while (y_.size() <= k) {
      const std::size_t j = y_.size();
      y_.push_back(y_.back() * b2(2 * j - 1) / b2(2 * j));
    }
    return y_[k];
  }

  double delta(std::size_t n) {
    while (delta_.size() <= n) {
      const std::size_t m = delta_.size();
      delta_.push_back(delta_.back() + y(m - 1));
    }
    return delta_[n];
  }

 private:
  std::function<double(std::size_t)> b_;
  std::vector<double> y_;
  std::vector<double> delta_;
};

// One deformed squared coupling; even indices pull the ledger a slot deeper.
inline Rational deformed_b2(DeltaLedger& led, const Rational& kappa, std::size_t n) {
  check_kappa(kappa);
  if (n == 0) throw domain_error("couplings are indexed from 1");
  const Rational u = kappa / (1 - kappa);
  const std::size_t m = n / 2;
  const Rational dm = 1 + u * led.delta(m);
  const Rational dm1 = 1 + u * led.delta(m + 1);
  return n % 2 == 0 ? led.b2(n) * dm1 / dm : led.b2(n) * dm / dm1;
}

inline double deformed_b2(DeltaLedgerD& led, double kappa, std::size_t n) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw domain_error("kappa must lie strictly between 0 and 1");
  }
  if (n == 0) throw domain_error("couplings are indexed from 1");
  const double u = kappa / (1.0 - kappa);
  const std::size_t m = n / 2;
  const double dm = 1.0 + u * led.delta(m);
  const double dm1 = 1.0 + u * led.delta(m + 1);
  return n % 2 == 0 ? led.b2(n) * dm1 / dm : led.b2(n) * dm / dm1;
}

// mu_0 stays 1, every higher even moment is scaled by (1 - kappa). The
// derivation assumes a symmetric measure, so nonzero odd moments are
// rejected rather than silently mangled.
inline std::vector<Rational> deform_moments(std::vector<Rational> mu, const Rational& kappa) {
  check_kappa(kappa);
  if (mu.empty() || mu[0] != 1) {
    throw domain_error("deform_moments expects a normalized table, mu_0 = 1");
  }
  for (std::size_t k = 1; k < mu.size(); ++k) {
    if (k % 2 == 1) {
      if (mu[k] != 0) {
        throw domain_error("deform_moments requires a symmetric measure (odd moments zero)");
      }
    } else {
      mu[k] *= 1 - kappa;
    }
  }
  return mu;
}

// Deformed sequence built on top of a base family. The double lane drives
// chain runs from an incrementally grown double ledger; the exact lane (only
// when the base has one) feeds the moment engine. The shared ledgers make
// the lambdas stateful, so a given sequence object is single-threaded.
inline LanczosSequence seq_deformed(const LanczosSequence& base, const Rational& kappa) {
  check_kappa(kappa);
  struct State {
    DeltaLedgerD led_d;
    std::unique_ptr<DeltaLedger> led_x;
    double kappa_d;
    Rational kappa;
    State(const LanczosSequence& b, const Rational& k)
        : led_d(b.b), kappa_d(to_double(k)), kappa(k) {
      if (b.b2_exact) led_x = std::make_unique<DeltaLedger>(b.b2_exact);
    }
  };
  auto st = std::make_shared<State>(base, kappa);

  LanczosSequence out;
  std::ostringstream tag;
  tag << "deformed(" << base.tag << "," << rat_string(kappa) << ")";
  out.tag = tag.str();
  out.b = [st](std::size_t n) { return std::sqrt(deformed_b2(st->led_d, st->kappa_d, n)); };
  if (st->led_x) {
    out.b2_exact = [st](std::size_t n) -> Rational {
      return deformed_b2(*st->led_x, st->kappa, n);
    };
  }
  return out;
}

// Single-coupling conveniences (each call rebuilds the ledger, so keep the
// index small; loops should hold a seq_deformed or a ledger instead).
inline double deform_b(const LanczosSequence& base, double kappa, std::size_t n) {
  DeltaLedgerD led(base.b);
  return std::sqrt(deformed_b2(led, kappa, n));
}

inline Rational deform_b2_exact(const LanczosSequence& base, const Rational& kappa,
                                std::size_t n) {
  if (!base.b2_exact) throw domain_error("base sequence has no exact couplings");
  DeltaLedger led(base.b2_exact);
  return deformed_b2(led, kappa, n);
}

// Recovery of the stationary value from the deformed couplings.
//  raw:        (1 + sum_{k<=K} y^(k)_k)^{-1}; provably converges to kappa,
//              but only logarithmically, which is why it is reported as-is.
//  telescoped: solves the telescoping identity for kappa using the
//              undeformed ledger; exact at any finite K.
struct KappaEstimate {
  Rational raw;
  Rational telescoped;
  bool has_telescoped = false;
};

struct KappaEstimateD {
  double raw = 0.0;
  double telescoped = 0.0;
  bool has_telescoped = false;
};

namespace detail {

// kappa from S = sum_{k<=K} y^(k)_k and the undeformed d = delta_{K+1}:
// the telescoped sum obeys S = (1/kappa)((1-kappa) - 1/(1 + u d)), whose
// solution is the ratio below.
template <class T>
T kappa_from_partial(const T& s, const T& d) {
  return (d - 1 - s) / ((d - 1) * (s + 1));
}

}  // namespace detail

inline KappaEstimate stationary_kappa(const LanczosSequence& deformed, std::size_t k_max) {
  if (k_max == 0) throw domain_error("stationary_kappa needs k_max >= 1");
  if (!deformed.b2_exact) {
    throw domain_error("exact stationary_kappa needs exact couplings; use the double form");
  }
  DeltaLedger led(deformed.b2_exact);
  KappaEstimate est;
  est.raw = 1 / led.delta(k_max + 1);
  return est;
}

inline KappaEstimate stationary_kappa(const LanczosSequence& deformed,
                                      const LanczosSequence& base, std::size_t k_max) {
  KappaEstimate est = stationary_kappa(deformed, k_max);
  if (!base.b2_exact) {
    throw domain_error("exact stationary_kappa needs exact couplings; use the double form");
  }
  DeltaLedger base_led(base.b2_exact);
  const Rational s = 1 / est.raw - 1;
  est.telescoped = detail::kappa_from_partial(s, base_led.delta(k_max + 1));
  est.has_telescoped = true;
  return est;
}

inline KappaEstimateD stationary_kappa_d(const LanczosSequence& deformed, std::size_t k_max) {
  if (k_max == 0) throw domain_error("stationary_kappa needs k_max >= 1");
  DeltaLedgerD led(deformed.b);
  KappaEstimateD est;
  est.raw = 1.0 / led.delta(k_max + 1);
  return est;
}

inline KappaEstimateD stationary_kappa_d(const LanczosSequence& deformed,
                                         const LanczosSequence& base, std::size_t k_max) {
  KappaEstimateD est = stationary_kappa_d(deformed, k_max);
  DeltaLedgerD base_led(base.b);
  const double s = 1.0 / est.raw - 1.0;
  est.telescoped = detail::kappa_from_partial(s, base_led.delta(k_max + 1));
  est.has_telescoped = true;
  return est;
}

// Closed-form prediction for the raw partial estimate: with kappa known and
// the undeformed ledger in hand, the partial sum telescopes, so the raw
// estimate at depth K must equal this exactly. Used to report convergence
// against the true kappa without pretending the raw estimate is better than
// it is.
inline Rational kappa_partial_oracle(const Rational& kappa, DeltaLedger& base_led,
                                     std::size_t k_max) {
  check_kappa(kappa);
  const Rational u = kappa / (1 - kappa);
  const Rational s = (1 / kappa) * ((1 - kappa) - 1 / (1 + u * base_led.delta(k_max + 1)));
  return 1 / (1 + s);
}

}  // namespace krylov
