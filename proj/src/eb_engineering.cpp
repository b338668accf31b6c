#include "covq/eb_engineering.hpp"

#include <algorithm>
#include <cmath>

#include "covq/covert_bounds.hpp"
#include "covq/errors.hpp"

namespace covq {

namespace {

EbPlan none_needed(const ChannelParams& params) {
  EbPlan plan;
  plan.effective_covert_params = params;
  plan.effective_rate_params = params;
  return plan;
}

}  // namespace

bool is_entanglement_breaking(const ChannelParams& params) {
  validate(params);
  return params.eta * params.nbar_b > 1.0 - params.eta;
}

std::string_view to_string(EbMechanism mechanism) {
  switch (mechanism) {
    case EbMechanism::none_needed: return "none_needed";
    case EbMechanism::attenuate: return "attenuate";
    case EbMechanism::amplify: return "amplify";
  }
  return "unknown";
}

EbPlan plan_lemma1(const ChannelParams& params, double margin) {
  validate(params);
  require(std::isfinite(margin) && margin > 0.0 && margin < 1.0, ErrorKind::domain,
          "margin must lie in (0, 1)");
  if (is_entanglement_breaking(params)) return none_needed(params);
  const double x = params.willie_occupancy();
  require(x > 0.0, ErrorKind::condition_unmet,
          "no positive loss makes the channel entanglement breaking when eta nbar_b = 0");
  const double loss = 1.0 - params.eta;

  EbPlan plan;
  plan.mechanism = EbMechanism::attenuate;
  plan.tau = std::min(1.0, margin * x / loss);
  const double eta_eff = 1.0 - plan.tau * loss;
  plan.effective_covert_params = {eta_eff, x / eta_eff};
  plan.effective_rate_params = {eta_eff, params.nbar_b};
  return plan;
}

double lemma2_nbar_prime_bound(const ChannelParams& params) {
  validate(params);
  require(params.eta > 0.0, ErrorKind::condition_unmet,
          "added thermal noise cannot make an eta = 0 channel entanglement breaking");
  return (1.0 - params.eta) / params.eta - params.nbar_b;
}

double lemma2_gain_as_stated(const ChannelParams& params, double nbar_prime) {
  validate(params);
  const double loss = 1.0 - params.eta;
  const double denom = 2.0 * loss - params.eta * nbar_prime;
  require(denom > 0.0, ErrorKind::infeasible_gain, "amplifier gain denominator is not positive");
  return 2.0 * loss / denom;
}

double lemma2_gain_from_proof(const ChannelParams& params, double nbar_prime) {
  validate(params);
  const double loss = 1.0 - params.eta;
  const double denom = loss - params.eta * nbar_prime / 2.0;
  require(denom > 0.0, ErrorKind::infeasible_gain, "amplifier gain denominator is not positive");
  return loss / denom;
}

double lemma2_gain_physical(const ChannelParams& params, double nbar_prime) {
  validate(params);
  const double loss = 1.0 - params.eta;
  const double denom = loss - params.eta * nbar_prime;
  require(denom > 0.0, ErrorKind::infeasible_gain,
          "no amplifier gain adds this much noise: (1 - eta) - eta nbar' <= 0");
  return loss / denom;
}

EbPlan plan_lemma2(const ChannelParams& params, std::optional<double> nbar_prime) {
  validate(params);
  if (is_entanglement_breaking(params)) return none_needed(params);
  const double bound = lemma2_nbar_prime_bound(params);
  const double added = nbar_prime.value_or(kDefaultNbarPrimeFactor * bound);
  require(std::isfinite(added) && added > bound, ErrorKind::condition_unmet,
          "added thermal photons must exceed (1 - eta) / eta - nbar_b");

  EbPlan plan;
  plan.mechanism = EbMechanism::amplify;
  plan.nbar_prime = added;
  plan.gain_eb = lemma2_gain_physical(params, added);
  plan.gain_as_stated = lemma2_gain_as_stated(params, added);
  plan.tau = 1.0 / plan.gain_eb;
  plan.nbar_double_prime =
      2.0 * (1.0 - 1.0 / plan.gain_as_stated) * params.eta / (1.0 - params.eta);
  plan.effective_covert_params = {params.eta, params.nbar_b + added};
  plan.effective_rate_params = {params.eta, params.nbar_b + plan.nbar_double_prime};
  return plan;
}

WillieCharParams effective_willie_char_params(const EbPlan& plan, const ChannelParams& params) {
  validate(params);
  const double loss = 1.0 - params.eta;
  switch (plan.mechanism) {
    case EbMechanism::none_needed: return {loss, params.willie_occupancy()};
    case EbMechanism::attenuate: return {plan.tau * loss, params.willie_occupancy()};
    case EbMechanism::amplify: return {loss, params.eta * (params.nbar_b + plan.nbar_prime)};
  }
  return {loss, params.willie_occupancy()};
}

double eb_lower_bound_qubits(const EbPlan& plan, double delta, double n) {
  require_budget(delta, n);
  return detail::covert_qubits(c_cov(plan.effective_covert_params), delta, n,
                               hashing_rate(plan.effective_rate_params));
}

}  // namespace covq
