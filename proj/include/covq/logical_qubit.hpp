#pragma once

#include <complex>

#include <Eigen/Core>

namespace covq {

/// Alice's (possibly mixed) dual-rail qubit in the logical basis
/// |0>_L = |01>, |1>_L = |10>:
///
///     [ alpha_sq   gamma   ]
///     [ gamma*     beta_sq ]
struct LogicalQubit {
  double alpha_sq{1.0};
  double beta_sq{0.0};
  std::complex<double> gamma{0.0, 0.0};

  /// Throws Error(domain) unless alpha_sq + beta_sq = 1 (tol 1e-12) and
  /// |gamma|^2 <= alpha_sq * beta_sq.
  void validate() const;

  bool is_pure(double tol = 1e-12) const;
  Eigen::Matrix2cd logical_matrix() const;

  static LogicalQubit pure(std::complex<double> alpha, std::complex<double> beta);
  /// Mixed state with the given populations and coherence.
  static LogicalQubit make(double alpha_sq, std::complex<double> gamma);
  static LogicalQubit balanced_mixture() { return {0.5, 0.5, {0.0, 0.0}}; }
};

}  // namespace covq
