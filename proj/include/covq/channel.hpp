#pragma once

#include <cmath>
#include <string>

#include "covq/errors.hpp"

namespace covq {

/// Lossy thermal-noise bosonic channel: a beamsplitter of transmittance `eta`
/// mixing the input with a thermal state of mean photon number `nbar_b`.
template <typename Scalar>
struct ChannelParamsT {
  Scalar eta{1};
  Scalar nbar_b{0};

  /// Thermal occupancy Willie sees from the environment, eta * nbar_b.
  Scalar willie_occupancy() const { return eta * nbar_b; }
  /// Thermal occupancy Bob sees from the environment, (1 - eta) * nbar_b.
  Scalar bob_occupancy() const { return (Scalar(1) - eta) * nbar_b; }
};

using ChannelParams = ChannelParamsT<double>;

template <typename Scalar>
void validate(const ChannelParamsT<Scalar>& params) {
  require(std::isfinite(static_cast<double>(params.eta)) && params.eta >= Scalar(0) &&
              params.eta <= Scalar(1),
          ErrorKind::domain, "channel transmittance eta must lie in [0, 1]");
  require(std::isfinite(static_cast<double>(params.nbar_b)) && params.nbar_b >= Scalar(0),
          ErrorKind::domain, "thermal mean photon number nbar_b must be finite and >= 0");
}

template <typename Scalar>
ChannelParamsT<Scalar> make_channel(Scalar eta, Scalar nbar_b) {
  ChannelParamsT<Scalar> params{eta, nbar_b};
  validate(params);
  return params;
}

}  // namespace covq
