#include "covq/covert_bounds.hpp"

namespace covq {

std::vector<BoundsPoint> bounds_curve(const ChannelParams& params, double delta,
                                      std::span<const double> n_values,
                                      std::optional<double> modes_per_second) {
  validate(params);
  require_budget(delta, 1.0);
  if (modes_per_second) {
    require(std::isfinite(*modes_per_second) && *modes_per_second > 0.0, ErrorKind::domain,
            "modes per second must be finite and positive");
  }
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    require_budget(delta, n_values[i]);
    require(i == 0 || n_values[i] > n_values[i - 1], ErrorKind::domain,
            "n values must be strictly increasing");
  }

  const double rate = hashing_rate(params);
  const double assisted = assisted_rate(params);
  const double c = c_cov(params);
  std::vector<BoundsPoint> out;
  out.reserve(n_values.size());
  for (double n : n_values) {
    BoundsPoint pt;
    pt.n = n;
    if (modes_per_second) pt.seconds = 2.0 * n / *modes_per_second;
    pt.nbar_s = nbar_s_max(params, delta, n);
    pt.q = q_max(params, delta, n);
    pt.rate_R = rate;
    pt.capacity_C = converse_capacity(params, pt.nbar_s);
    pt.lower_qubits = detail::covert_qubits(c, delta, n, rate);
    pt.assisted_lower_qubits = detail::covert_qubits(c, delta, n, assisted);
    pt.upper_qubits = delta == 0.0 ? 0.0 : 2.0 * n * pt.capacity_C;
    out.push_back(pt);
  }
  return out;
}

}  // namespace covq
