#pragma once

// Covertness constant, achievable (hashing) and converse (capacity) bounds on
// the number of qubits sent covertly in n rounds. Logarithms are base 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "covq/channel.hpp"
#include "covq/closed_form.hpp"
#include "covq/errors.hpp"

namespace covq {

/// Per-round budget: covertness delta, rounds n, transmission probability q.
/// n is real-valued so that sweeps can reach 1e14 and beyond without overflow.
template <typename Scalar>
struct CovertBudgetT {
  Scalar delta{0};
  Scalar n{1};
  Scalar q{0};
};
using CovertBudget = CovertBudgetT<double>;

/// Pauli error probabilities [p_I, p_X, p_Y, p_Z].
template <typename Scalar>
struct PauliVectorT {
  std::array<Scalar, 4> p{Scalar(1), Scalar(0), Scalar(0), Scalar(0)};

  void validate() const {
    Scalar sum(0);
    for (Scalar v : p) {
      require(std::isfinite(static_cast<double>(v)) && v >= Scalar(0), ErrorKind::domain,
              "Pauli probabilities must be finite and non-negative");
      sum += v;
    }
    using std::abs;
    require(abs(sum - Scalar(1)) <= Scalar(1e-12), ErrorKind::domain,
            "Pauli probabilities must sum to 1");
  }

  /// [1 - 3p/4, p/4, p/4, p/4].
  static PauliVectorT depolarizing(Scalar prob) {
    require(prob >= Scalar(0) && prob <= Scalar(1), ErrorKind::domain,
            "depolarizing probability must lie in [0, 1]");
    const Scalar quarter = prob / Scalar(4);
    return {{Scalar(1) - Scalar(3) * quarter, quarter, quarter, quarter}};
  }
};
using PauliVector = PauliVectorT<double>;

/// sqrt(2 x (1 + x)) / (1 - eta), x = eta nbar_b. +inf at eta = 1, 0 at nbar_b = 0.
template <typename Scalar>
Scalar c_cov(const ChannelParamsT<Scalar>& params) {
  using std::sqrt;
  validate(params);
  if (params.eta == Scalar(1)) return std::numeric_limits<Scalar>::infinity();
  const Scalar x = params.willie_occupancy();
  return sqrt(Scalar(2) * x * (Scalar(1) + x)) / (Scalar(1) - params.eta);
}

template <typename Scalar>
void require_budget(Scalar delta, Scalar n) {
  require(std::isfinite(static_cast<double>(delta)) && delta >= Scalar(0), ErrorKind::domain,
          "covertness parameter delta must be finite and >= 0");
  require(std::isfinite(static_cast<double>(n)) && n >= Scalar(1), ErrorKind::domain,
          "number of rounds n must be finite and >= 1");
}

/// Unclamped 2 c_cov delta / sqrt(n): the largest mean photon number per
/// mode (and transmission probability) compatible with covertness.
template <typename Scalar>
Scalar nbar_s_max(const ChannelParamsT<Scalar>& params, Scalar delta, Scalar n) {
  using std::sqrt;
  require_budget(delta, n);
  if (delta == Scalar(0)) return Scalar(0);
  return Scalar(2) * c_cov(params) * delta / sqrt(n);
}

/// min(1, 2 c_cov delta / sqrt(n)).
template <typename Scalar>
Scalar q_max(const ChannelParamsT<Scalar>& params, Scalar delta, Scalar n) {
  return std::min(Scalar(1), nbar_s_max(params, delta, n));
}

template <typename Scalar>
CovertBudgetT<Scalar> make_budget(const ChannelParamsT<Scalar>& params, Scalar delta, Scalar n) {
  return {delta, n, q_max(params, delta, n)};
}

/// q (1 - eta) sqrt(n) / (2 sqrt(2 x (1 + x))) = q sqrt(n) / (2 c_cov), the
/// bound on sqrt(D/8) after n rounds. Zero at eta = 1.
template <typename Scalar>
Scalar qre_bound(const ChannelParamsT<Scalar>& params, Scalar q, Scalar n) {
  using std::sqrt;
  validate(params);
  require(q >= Scalar(0) && q <= Scalar(1), ErrorKind::domain, "q must lie in [0, 1]");
  require_budget(Scalar(0), n);
  if (params.eta == Scalar(1)) return Scalar(0);
  const Scalar x = params.willie_occupancy();
  require(x > Scalar(0), ErrorKind::infinite_divergence,
          "relative entropy bound is infinite: Willie's reference state is the vacuum");
  return q * (Scalar(1) - params.eta) * sqrt(n) / (Scalar(2) * sqrt(Scalar(2) * x * (Scalar(1) + x)));
}

/// Shannon entropy in bits with 0 log 0 = 0.
template <typename Scalar>
Scalar shannon_entropy(const PauliVectorT<Scalar>& pv) {
  using std::log2;
  pv.validate();
  Scalar h(0);
  for (Scalar v : pv.p)
    if (v > Scalar(0)) h -= v * log2(v);
  return h;
}

/// [1 - H(p)]+ for the depolarizing vector with p = p_total(params).
template <typename Scalar>
Scalar hashing_rate(const ChannelParamsT<Scalar>& params) {
  const Scalar h = shannon_entropy(PauliVectorT<Scalar>::depolarizing(p_total(params)));
  return std::max(Scalar(0), Scalar(1) - h);
}

/// (1 - p_fail) [1 - H(p')]+, the rate with entanglement distillation on the
/// heralded successes.
template <typename Scalar>
Scalar assisted_rate(const ChannelParamsT<Scalar>& params) {
  const Scalar h = shannon_entropy(PauliVectorT<Scalar>::depolarizing(p_prime(params)));
  return (Scalar(1) - p_fail(params)) * std::max(Scalar(0), Scalar(1) - h);
}

namespace detail {
// q n R for covertness constant c, written as 2 sqrt(n) c delta R when q is
// not clamped so that the result divided by sqrt(n) is constant in n.
template <typename Scalar>
Scalar covert_qubits(Scalar c, Scalar delta, Scalar n, Scalar rate) {
  using std::sqrt;
  if (delta == Scalar(0) || rate == Scalar(0) || c == Scalar(0)) return Scalar(0);
  if (Scalar(2) * c * delta / sqrt(n) >= Scalar(1)) return n * rate;
  return Scalar(2) * sqrt(n) * c * delta * rate;
}
}  // namespace detail

/// E[M(n)] >= q n R with q = q_max.
template <typename Scalar>
Scalar lower_bound_qubits(const ChannelParamsT<Scalar>& params, Scalar delta, Scalar n) {
  require_budget(delta, n);
  return detail::covert_qubits(c_cov(params), delta, n, hashing_rate(params));
}

/// q n R' with the assisted rate R'.
template <typename Scalar>
Scalar assisted_lower_bound_qubits(const ChannelParamsT<Scalar>& params, Scalar delta, Scalar n) {
  require_budget(delta, n);
  return detail::covert_qubits(c_cov(params), delta, n, assisted_rate(params));
}

template <typename Scalar>
struct ConverseGainT {
  Scalar gain;      // G
  Scalar gain_bar;  // G - 1
};
using ConverseGain = ConverseGainT<double>;

/// G = eta / (eta - (1 - eta) nbar_b / 2) of the amplifier decomposition used
/// by the converse. Throws decomposition_invalid if the denominator is <= 0.
template <typename Scalar>
ConverseGainT<Scalar> converse_gain(const ChannelParamsT<Scalar>& params) {
  validate(params);
  const Scalar denom = params.eta - (Scalar(1) - params.eta) * params.nbar_b / Scalar(2);
  require(denom > Scalar(0), ErrorKind::decomposition_invalid,
          "channel does not decompose into loss followed by a quantum-limited amplifier "
          "(eta - (1 - eta) nbar_b / 2 <= 0)");
  const Scalar gain = params.eta / denom;
  return {gain, (Scalar(1) - params.eta) * params.nbar_b / Scalar(2) / denom};
}

/// g(x) = (1 + x) log2(1 + x) - x log2(x), g(0) = 0.
template <typename Scalar>
Scalar g_func(Scalar x) {
  using std::log;
  using std::log1p;
  require(!(x < Scalar(0)), ErrorKind::domain, "g(x) needs x >= 0");
  if (x == Scalar(0)) return Scalar(0);
  if (std::isinf(static_cast<double>(x))) return x;
  return ((Scalar(1) + x) * log1p(x) - x * log(x)) / log(Scalar(2));
}

/// [g(((G + 1) nbar_s + Gbar) / 2) - g(Gbar (1 + nbar_s) / 2)]+, qubits per mode.
template <typename Scalar>
Scalar converse_capacity(const ChannelParamsT<Scalar>& params, Scalar nbar_s) {
  require(!(nbar_s < Scalar(0)), ErrorKind::domain, "signal photon number must be >= 0");
  const auto [gain, gain_bar] = converse_gain(params);
  if (nbar_s == Scalar(0)) return Scalar(0);
  if (std::isinf(static_cast<double>(nbar_s))) return nbar_s;
  const Scalar high = g_func(((gain + Scalar(1)) * nbar_s + gain_bar) / Scalar(2));
  const Scalar low = g_func(gain_bar * (Scalar(1) + nbar_s) / Scalar(2));
  return std::max(Scalar(0), high - low);
}

/// M(n) <= 2 n C(nbar_s_max).
template <typename Scalar>
Scalar upper_bound_qubits(const ChannelParamsT<Scalar>& params, Scalar delta, Scalar n) {
  require_budget(delta, n);
  if (delta == Scalar(0)) return Scalar(0);
  return Scalar(2) * n * converse_capacity(params, nbar_s_max(params, delta, n));
}

/// Large-n limit of upper_bound_qubits / sqrt(n): 4 c_cov delta log2(1 + 2 / Gbar).
template <typename Scalar>
Scalar upper_bound_sqrt_n_limit(const ChannelParamsT<Scalar>& params, Scalar delta) {
  using std::log2;
  require_budget(delta, Scalar(1));
  const Scalar gain_bar = converse_gain(params).gain_bar;
  if (delta == Scalar(0)) return Scalar(0);
  if (gain_bar == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
  return Scalar(4) * c_cov(params) * delta * log2(Scalar(1) + Scalar(2) / gain_bar);
}

/// One sample of the bound curves.
struct BoundsPoint {
  double n{1};
  std::optional<double> seconds;  // 2 n / modes_per_second when a rate is given
  double lower_qubits{0};
  double upper_qubits{0};
  double assisted_lower_qubits{0};
  double rate_R{0};
  double capacity_C{0};
  double q{0};
  double nbar_s{0};
};

/// Bounds at each n (strictly increasing, >= 1). Rows are independent and
/// returned in input order.
std::vector<BoundsPoint> bounds_curve(const ChannelParams& params, double delta,
                                      std::span<const double> n_values,
                                      std::optional<double> modes_per_second = std::nullopt);

}  // namespace covq
