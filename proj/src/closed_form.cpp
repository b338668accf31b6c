#include "covq/closed_form.hpp"

#include <algorithm>

namespace covq {

namespace {

TriDiagonalWillieState tri_diagonal_state(const LogicalQubit& qubit, const ChannelParams& params,
                                          FockCutoff cutoff) {
  validate(params);
  qubit.validate();
  require(cutoff.max_photons >= 0, ErrorKind::domain, "Fock cutoff must be non-negative");
  const int levels = cutoff.levels();
  TriDiagonalWillieState s{cutoff, Eigen::MatrixXd::Zero(levels, levels),
                           Eigen::MatrixXcd::Zero(levels, levels),
                           Eigen::MatrixXcd::Zero(levels, levels)};
  for (int f = 0; f < levels; ++f) {
    for (int g = 0; g < levels; ++g) {
      s.diag(f, g) = qubit.alpha_sq * w1_coeff(f, g, params) + qubit.beta_sq * w1_coeff(g, f, params);
      if (g >= 1 && f + 1 < levels) s.upper(f, g) = qubit.gamma * w2_coeff(g, f, params);
      if (f >= 1 && g + 1 < levels) s.lower(f, g) = std::conj(qubit.gamma) * w2_coeff(f, g, params);
    }
  }
  return s;
}

}  // namespace

std::vector<TriDiagonalWillieState::Entry> TriDiagonalWillieState::entries() const {
  std::vector<Entry> out;
  const auto levels = static_cast<int>(diag.rows());
  for (int f = 0; f < levels; ++f) {
    for (int g = 0; g < levels; ++g) {
      if (diag(f, g) != 0.0) out.push_back({f, g, f, g, diag(f, g)});
      if (upper(f, g) != 0.0) out.push_back({f, g, f + 1, g - 1, upper(f, g)});
      if (lower(f, g) != 0.0) out.push_back({f, g, f - 1, g + 1, lower(f, g)});
    }
  }
  return out;
}

DensityOperator TriDiagonalWillieState::to_density() const {
  const Eigen::Index levels = diag.rows();
  ComplexMatrix m = ComplexMatrix::Zero(levels * levels, levels * levels);
  for (Eigen::Index f = 0; f < levels; ++f) {
    for (Eigen::Index g = 0; g < levels; ++g) {
      const Eigen::Index row = f * levels + g;
      m(row, row) = diag(f, g);
      if (g >= 1 && f + 1 < levels) m(row, (f + 1) * levels + g - 1) = upper(f, g);
      if (f >= 1 && g + 1 < levels) m(row, (f - 1) * levels + g + 1) = lower(f, g);
    }
  }
  const double leak = std::clamp(1.0 - diag.sum(), 0.0, 1.0);
  return {2, cutoff, std::move(m), leak};
}

TriDiagonalWillieState willie_state_closed(const LogicalQubit& qubit, const ChannelParams& params,
                                           FockCutoff cutoff) {
  return tri_diagonal_state(qubit, params, cutoff);
}

TriDiagonalWillieState bob_state_closed(const LogicalQubit& qubit, const ChannelParams& params,
                                        FockCutoff cutoff) {
  validate(params);
  return tri_diagonal_state(qubit, {1.0 - params.eta, params.nbar_b}, cutoff);
}

std::complex<double> char_fn_closed(const LogicalQubit& qubit, double reflectance,
                                    double occupancy, std::complex<double> zeta1,
                                    std::complex<double> zeta2) {
  qubit.validate();
  const double r1 = std::norm(zeta1);
  const double r2 = std::norm(zeta2);
  const std::complex<double> coherence = qubit.gamma * zeta1 * std::conj(zeta2);
  const double signal = qubit.alpha_sq * r2 + qubit.beta_sq * r1 + 2.0 * coherence.real();
  return std::exp(-(1.0 + occupancy) * (r1 + r2)) * (1.0 - reflectance * signal);
}

std::complex<double> willie_char_fn_closed(const LogicalQubit& qubit, const ChannelParams& params,
                                           std::complex<double> zeta1,
                                           std::complex<double> zeta2) {
  validate(params);
  return char_fn_closed(qubit, 1.0 - params.eta, params.willie_occupancy(), zeta1, zeta2);
}

double chi2_closed(const LogicalQubit& qubit, const ChannelParams& params) {
  qubit.validate();
  const double bound = chi2_bound(params);
  // With a2 + b2 = 1 the full expression collapses to bound * weight.
  const double weight = qubit.alpha_sq * qubit.alpha_sq + qubit.beta_sq * qubit.beta_sq +
                        2.0 * std::norm(qubit.gamma);
  return bound * weight;
}

}  // namespace covq
