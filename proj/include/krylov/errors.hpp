#pragma once

#include <stdexcept>
#include <string>

namespace krylov {

// Common base so callers can catch everything from this library in one clause.
struct krylov_error : std::runtime_error {
  explicit krylov_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the contract of the routine (bad parameter range, pole hit, ...).
struct domain_error : krylov_error {
  explicit domain_error(const std::string& msg) : krylov_error(msg) {}
};

// An iteration failed to reach its target accuracy within its budget.
struct convergence_error : krylov_error {
  explicit convergence_error(const std::string& msg) : krylov_error(msg) {}
};

// The two independent moment-inversion routes disagree beyond tolerance.
struct route_mismatch_error : krylov_error {
  explicit route_mismatch_error(const std::string& msg) : krylov_error(msg) {}
};

// The chain hit its site ceiling while the wavefront was still hot.
struct truncation_limit_error : krylov_error {
  explicit truncation_limit_error(const std::string& msg) : krylov_error(msg) {}
};

}  // namespace krylov
