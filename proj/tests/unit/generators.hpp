#pragma once

// Seeded generators for property tests.

#include <complex>
#include <random>

#include "covq/channel.hpp"
#include "covq/fock_core.hpp"
#include "covq/logical_qubit.hpp"

namespace covq::testing {

inline ComplexMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = {normal(rng), normal(rng)};
  return m;
}

/// Random single-mode state of the given rank (full rank when rank > levels).
inline DensityOperator random_state(std::mt19937_64& rng, FockCutoff cutoff, int rank) {
  const Eigen::Index d = cutoff.levels();
  const ComplexMatrix g = random_complex(rng, d, std::min<Eigen::Index>(rank, d));
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return {1, cutoff, rho};
}

inline ChannelParams random_channel(std::mt19937_64& rng, double nbar_max = 0.5) {
  std::uniform_real_distribution<double> eta(0.0, 1.0);
  std::uniform_real_distribution<double> nbar(0.0, nbar_max);
  const double e = eta(rng);
  return {e, nbar(rng)};
}

inline LogicalQubit random_logical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a2 = unit(rng);
  const double mag = std::sqrt(a2 * (1.0 - a2)) * unit(rng);
  return LogicalQubit::make(a2, std::polar(mag, 6.283185307179586 * unit(rng)));
}

inline double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace covq::testing
