#pragma once

// Entanglement-breaking condition for the Alice-to-Willie channel and the two
// ways of enforcing it: extra pure loss before the channel, or a
// quantum-limited amplifier followed by loss.

#include <optional>
#include <string_view>

#include "covq/channel.hpp"

namespace covq {

/// eta nbar_b > 1 - eta (strict).
bool is_entanglement_breaking(const ChannelParams& params);

enum class EbMechanism { none_needed, attenuate, amplify };

std::string_view to_string(EbMechanism mechanism);

struct EbPlan {
  EbMechanism mechanism{EbMechanism::none_needed};
  double tau{1.0};              // transmittance of the added loss
  double gain_eb{1.0};          // amplifier gain realizing the plan
  double gain_as_stated{1.0};   // 2(1-eta) / (2(1-eta) - eta nbar'), see lemma2_gain_as_stated
  double nbar_prime{0.0};       // thermal photons added at Willie's port (per unit eta)
  double nbar_double_prime{0.0};  // thermal photons added at Bob's port (per unit 1-eta)
  ChannelParams effective_covert_params{};  // substitute into c_cov
  ChannelParams effective_rate_params{};    // substitute into the hashing rate
};

inline constexpr double kDefaultEbMargin = 0.9;
inline constexpr double kDefaultNbarPrimeFactor = 1.1;

/// Pure loss tau = margin * eta nbar_b / (1 - eta) ahead of the channel.
/// Effective covert channel: (1 - eta) -> tau (1 - eta) with Willie's
/// occupancy eta nbar_b unchanged. Effective rate channel: eta -> 1 - tau (1 - eta).
/// Throws condition_unmet when no positive tau works (eta nbar_b = 0).
EbPlan plan_lemma1(const ChannelParams& params, double margin = kDefaultEbMargin);

/// Smallest nbar' making the channel breaking: (1 - eta) / eta - nbar_b.
double lemma2_nbar_prime_bound(const ChannelParams& params);

/// Amplifier of gain G followed by loss 1/G ahead of the channel, adding
/// nbar' thermal photons (scaled by eta) at Willie's port. The realizing gain
/// is G = (1 - eta) / ((1 - eta) - eta nbar'). Default nbar' is 1.1x the bound.
/// Throws condition_unmet if nbar' <= bound, infeasible_gain if the gain
/// denominator is <= 0.
EbPlan plan_lemma2(const ChannelParams& params, std::optional<double> nbar_prime = std::nullopt);

/// 2(1 - eta) / (2(1 - eta) - eta nbar') as given with the construction.
double lemma2_gain_as_stated(const ChannelParams& params, double nbar_prime);
/// (1 - eta) / ((1 - eta) - eta nbar' / 2), the same quantity in the form
/// obtained from the added-noise equation.
double lemma2_gain_from_proof(const ChannelParams& params, double nbar_prime);
/// Gain whose amplify-then-attenuate stage adds exactly eta nbar' photons at
/// Willie's port: (1 - eta) / ((1 - eta) - eta nbar').
double lemma2_gain_physical(const ChannelParams& params, double nbar_prime);

struct WillieCharParams {
  double reflectance;
  double added_noise;
};

/// Single-beamsplitter-equivalent parameters of the engineered Alice-to-Willie
/// channel: none (1-eta, eta nbar_b), attenuate (tau(1-eta), eta nbar_b),
/// amplify (1-eta, eta (nbar_b + nbar')).
WillieCharParams effective_willie_char_params(const EbPlan& plan, const ChannelParams& params);

/// Lower bound on covert qubits recomputed with the plan's substitutions.
double eb_lower_bound_qubits(const EbPlan& plan, double delta, double n);

}  // namespace covq
