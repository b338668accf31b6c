#include "covq/logical_qubit.hpp"

#include <cmath>

#include "covq/errors.hpp"

namespace covq {

namespace {
constexpr double kQubitTol = 1e-12;
}

void LogicalQubit::validate() const {
  require(std::isfinite(alpha_sq) && std::isfinite(beta_sq) && std::isfinite(gamma.real()) &&
              std::isfinite(gamma.imag()),
          ErrorKind::domain, "logical qubit entries must be finite");
  require(alpha_sq >= -kQubitTol && beta_sq >= -kQubitTol, ErrorKind::domain,
          "logical qubit populations must be non-negative");
  require(std::abs(alpha_sq + beta_sq - 1.0) <= kQubitTol, ErrorKind::domain,
          "logical qubit populations must sum to 1");
  require(std::norm(gamma) <= alpha_sq * beta_sq + kQubitTol, ErrorKind::domain,
          "logical qubit coherence violates |gamma|^2 <= alpha_sq * beta_sq");
}

bool LogicalQubit::is_pure(double tol) const {
  return std::abs(std::norm(gamma) - alpha_sq * beta_sq) <= tol;
}

Eigen::Matrix2cd LogicalQubit::logical_matrix() const {
  Eigen::Matrix2cd m;
  m << alpha_sq, gamma, std::conj(gamma), beta_sq;
  return m;
}

LogicalQubit LogicalQubit::pure(std::complex<double> alpha, std::complex<double> beta) {
  const double norm = std::norm(alpha) + std::norm(beta);
  require(norm > 0.0 && std::isfinite(norm), ErrorKind::domain,
          "pure qubit amplitudes must not both vanish");
  alpha /= std::sqrt(norm);
  beta /= std::sqrt(norm);
  LogicalQubit q{std::norm(alpha), std::norm(beta), alpha * std::conj(beta)};
  q.validate();
  return q;
}

LogicalQubit LogicalQubit::make(double alpha_sq, std::complex<double> gamma) {
  LogicalQubit q{alpha_sq, 1.0 - alpha_sq, gamma};
  q.validate();
  return q;
}

}  // namespace covq
