#pragma once

// A Lanczos sequence is the off-diagonal of a semi-infinite Jacobi matrix
// with zero diagonal: the data every solver and check in this library runs
// on. b(n) is b_n for n >= 1; b2_exact is non-null when the squared
// couplings are rational, which unlocks the exact moment engine.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "krylov/errors.hpp"
#include "krylov/rational.hpp"

namespace krylov {

struct LanczosSequence {
  std::string tag;
  std::function<double(std::size_t)> b;
  std::function<Rational(std::size_t)> b2_exact;  // may be empty

  std::vector<double> prefix(std::size_t count) const {
    std::vector<double> out(count);
    for (std::size_t n = 1; n <= count; ++n) out[n - 1] = b(n);
    return out;
  }
};

inline LanczosSequence seq_explicit(std::vector<double> bs, std::string tag = "explicit") {
  auto data = std::make_shared<std::vector<double>>(std::move(bs));
  LanczosSequence s;
  s.tag = std::move(tag);
  s.b = [data](std::size_t n) {
    if (n == 0 || n > data->size()) throw domain_error("seq_explicit: index out of range");
    return (*data)[n - 1];
  };
  return s;
}

inline LanczosSequence seq_hermite() {
  LanczosSequence s;
  s.tag = "hermite";
  s.b = [](std::size_t n) { return std::sqrt(static_cast<double>(n)); };
  s.b2_exact = [](std::size_t n) { return Rational(static_cast<long long>(n)); };
  return s;
}

}  // namespace krylov
