#pragma once

// Analytic per-round output states and divergences for a dual-rail qubit sent
// through the lossy thermal-noise channel.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "covq/channel.hpp"
#include "covq/errors.hpp"
#include "covq/fock_core.hpp"
#include "covq/logical_qubit.hpp"

namespace covq {

/// W1(f, g): diagonal weight of |fg><fg| when the photon enters mode 2.
/// The g = 0 term x^(g-1) (x - g) is evaluated in its simplified form 1.
template <typename Scalar>
Scalar w1_coeff(int f, int g, const ChannelParamsT<Scalar>& params) {
  using std::pow;
  require(f >= 0 && g >= 0, ErrorKind::domain, "photon numbers must be non-negative");
  const Scalar x = params.willie_occupancy();
  const Scalar one(1);
  const Scalar t_f = pow(x, f) / pow(one + x, f + 1);
  const Scalar t_g = pow(x, g) / pow(one + x, g + 1);
  const Scalar shifted = g == 0 ? one : pow(x, g - 1) * (x - Scalar(g));
  const Scalar loss_term = (one - params.eta) * shifted / pow(one + x, g + 2);
  return (t_g - loss_term) * t_f;
}

/// W2(f, g) = (1 - eta) x^(f+g-1) / (1 + x)^(f+g+3) sqrt(f (g + 1)); zero at f = 0.
template <typename Scalar>
Scalar w2_coeff(int f, int g, const ChannelParamsT<Scalar>& params) {
  using std::pow;
  using std::sqrt;
  require(f >= 0 && g >= 0, ErrorKind::domain, "photon numbers must be non-negative");
  if (f == 0) return Scalar(0);
  const Scalar x = params.willie_occupancy();
  const Scalar one(1);
  return (one - params.eta) * pow(x, f + g - 1) / pow(one + x, f + g + 3) *
         sqrt(Scalar(f) * Scalar(g + 1));
}

/// Two-mode state supported on the photon-number-conserving tri-diagonal:
///   diag(f, g)  = <fg|rho|fg>
///   upper(f, g) = <fg|rho|f+1, g-1>   (zero where g = 0 or f = N)
///   lower(f, g) = <fg|rho|f-1, g+1>   (zero where f = 0 or g = N)
struct TriDiagonalWillieState {
  FockCutoff cutoff;
  Eigen::MatrixXd diag;
  Eigen::MatrixXcd upper;
  Eigen::MatrixXcd lower;

  struct Entry {
    int f, g, f_prime, g_prime;
    std::complex<double> value;
  };

  /// Nonzero-pattern listing, row-major in (f, g), each row as diag, upper, lower.
  std::vector<Entry> entries() const;
  /// Dense operator; the truncation leak is the missing diagonal mass.
  DensityOperator to_density() const;
  double trace() const { return diag.sum(); }
};

TriDiagonalWillieState willie_state_closed(const LogicalQubit& qubit, const ChannelParams& params,
                                           FockCutoff cutoff);

/// Bob's state: Willie's form under eta <-> 1 - eta.
TriDiagonalWillieState bob_state_closed(const LogicalQubit& qubit, const ChannelParams& params,
                                        FockCutoff cutoff);

/// Anti-normal characteristic function of Willie's state for a single
/// beamsplitter of reflectance `reflectance` and thermal occupancy `occupancy`
/// at Willie's port:
///   e^{-(1+N)(|z1|^2+|z2|^2)} [1 - R (a2|z2|^2 + b2|z1|^2 + g z1 z2* + g* z1* z2)].
std::complex<double> char_fn_closed(const LogicalQubit& qubit, double reflectance,
                                    double occupancy, std::complex<double> zeta1,
                                    std::complex<double> zeta2);

std::complex<double> willie_char_fn_closed(const LogicalQubit& qubit, const ChannelParams& params,
                                           std::complex<double> zeta1,
                                           std::complex<double> zeta2);

/// (1 - eta)^2 / (x (1 + x)) with x = eta nbar_b. Zero at eta = 1; throws
/// infinite_divergence at nbar_b = 0 otherwise.
template <typename Scalar>
Scalar chi2_bound(const ChannelParamsT<Scalar>& params) {
  validate(params);
  if (params.eta == Scalar(1)) return Scalar(0);
  const Scalar x = params.willie_occupancy();
  require(x > Scalar(0), ErrorKind::infinite_divergence,
          "chi^2 divergence is infinite: Willie's reference state is the vacuum");
  const Scalar loss = Scalar(1) - params.eta;
  return loss * loss / (x * (Scalar(1) + x));
}

/// chi^2 divergence of Willie's two-mode state from the thermal product:
///   (1 - eta)^2 (a2^2 + b2^2 + 2 |gamma|^2) / (x (1 + x)).
/// Equal to chi2_bound for pure qubits and half of it for the balanced mixture.
double chi2_closed(const LogicalQubit& qubit, const ChannelParams& params);

/// Probability that the projection onto the one-photon dual-rail subspace fails.
template <typename Scalar>
Scalar p_fail(const ChannelParamsT<Scalar>& params) {
  validate(params);
  const Scalar one(1);
  const Scalar loss = one - params.eta;
  const Scalar n = params.nbar_b;
  const Scalar denom = one + loss * n;
  return one - (Scalar(2) * n * (one + n) * loss * loss + params.eta) /
                   (denom * denom * denom * denom);
}

/// Depolarizing parameter of the successfully projected state.
template <typename Scalar>
Scalar p_prime(const ChannelParamsT<Scalar>& params) {
  validate(params);
  const Scalar one(1);
  const Scalar loss = one - params.eta;
  const Scalar noise = Scalar(2) * loss * loss * params.nbar_b * (one + params.nbar_b);
  const Scalar denom = params.eta + noise;
  // eta = nbar_b = 0: nothing ever arrives and p_fail = 1 makes p' irrelevant.
  if (denom == Scalar(0)) return Scalar(0);
  return noise / denom;
}

/// Overall depolarizing parameter p = p' + (1 - p') p_fail = 1 - eta / (1 + (1 - eta) nbar_b)^4.
template <typename Scalar>
Scalar p_total(const ChannelParamsT<Scalar>& params) {
  validate(params);
  const Scalar one(1);
  const Scalar denom = one + (one - params.eta) * params.nbar_b;
  return one - params.eta / (denom * denom * denom * denom);
}

}  // namespace covq
