#include <doctest.h>

#include <cmath>

#include "covq/closed_form.hpp"
#include "covq/covert_bounds.hpp"
#include "covq/eb_engineering.hpp"
#include "covq/oracle.hpp"

using namespace covq;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::domain;
}

}  // namespace

TEST_CASE("entanglement-breaking condition") {
  CHECK(is_entanglement_breaking(ChannelParams{0.9, 0.12}));
  CHECK_FALSE(is_entanglement_breaking(ChannelParams{0.5, 0.5}));
  CHECK_FALSE(is_entanglement_breaking(ChannelParams{0.5, 1.0}));
  CHECK(is_entanglement_breaking(ChannelParams{0.5, 1.0 + 1e-12}));
}

TEST_CASE("added-loss plan") {
  const auto none = plan_lemma1(ChannelParams{0.9, 0.12});
  CHECK(none.mechanism == EbMechanism::none_needed);
  CHECK(none.tau == 1.0);
  CHECK(none.effective_covert_params.eta == 0.9);

  const ChannelParams weak{0.5, 0.5};
  const auto plan = plan_lemma1(weak, 0.9);
  CHECK(plan.mechanism == EbMechanism::attenuate);
  CHECK(plan.tau == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(0.25 > plan.tau * 0.5);
  CHECK(plan.effective_covert_params.eta == doctest::Approx(1 - 0.45 * 0.5).epsilon(1e-15));
  CHECK(plan.effective_covert_params.willie_occupancy() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(plan.effective_rate_params.nbar_b == 0.5);
  CHECK(is_entanglement_breaking(plan.effective_covert_params));

  CHECK(kind_of([] { plan_lemma1(ChannelParams{0.5, 0.0}); }) == ErrorKind::condition_unmet);
  CHECK(kind_of([] { plan_lemma1(ChannelParams{0.5, 0.5}, 1.0); }) == ErrorKind::domain);
}

TEST_CASE("amplifier plan") {
  const ChannelParams weak{0.5, 0.5};
  CHECK(lemma2_nbar_prime_bound(weak) == doctest::Approx(0.5));
  const auto just_above = plan_lemma2(weak, 0.5 + 1e-9);
  CHECK(is_entanglement_breaking(just_above.effective_covert_params));
  CHECK(kind_of([&] { plan_lemma2(weak, 0.5); }) == ErrorKind::condition_unmet);

  const auto plan = plan_lemma2(weak, 0.6);
  CHECK(plan.mechanism == EbMechanism::amplify);
  CHECK(plan.gain_as_stated == doctest::Approx(1.0 / (1.0 - 0.3)).epsilon(1e-15));
  CHECK(plan.gain_eb == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(plan.tau == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(plan.effective_covert_params.nbar_b == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(plan.nbar_double_prime == doctest::Approx(0.25 * 0.6 / 0.25).epsilon(1e-14));

  const auto none = plan_lemma2(ChannelParams{0.9, 0.12}, 0.0);
  CHECK(none.mechanism == EbMechanism::none_needed);

  // Added noise beyond what any gain can produce.
  CHECK(kind_of([&] { plan_lemma2(weak, 1.2); }) == ErrorKind::infeasible_gain);
  CHECK(kind_of([] { lemma2_nbar_prime_bound(ChannelParams{0.0, 0.5}); }) == ErrorKind::condition_unmet);
}

TEST_CASE("stated and proof gain forms agree") {
  for (double eta = 0.05; eta < 0.95; eta += 0.1)
    for (double frac = 0.05; frac < 1.0; frac += 0.1) {
      const ChannelParams params{eta, 0.0};
      const double nbar_prime = frac * 2 * (1 - eta) / eta;
      CHECK(lemma2_gain_as_stated(params, nbar_prime) ==
            doctest::Approx(lemma2_gain_from_proof(params, nbar_prime)).epsilon(1e-14));
    }
}

TEST_CASE("effective Willie parameters") {
  const ChannelParams weak{0.5, 0.5};
  const auto none = effective_willie_char_params(plan_lemma1(ChannelParams{0.9, 0.12}), {0.9, 0.12});
  CHECK(none.reflectance == doctest::Approx(0.1));
  CHECK(none.added_noise == doctest::Approx(0.108));
  const auto loss = effective_willie_char_params(plan_lemma1(weak), weak);
  CHECK(loss.reflectance == doctest::Approx(0.45 * 0.5));
  CHECK(loss.added_noise == doctest::Approx(0.25));
  const auto amp = effective_willie_char_params(plan_lemma2(weak, 0.6), weak);
  CHECK(amp.reflectance == doctest::Approx(0.5));
  CHECK(amp.added_noise == doctest::Approx(0.5 * 1.1));
}

TEST_CASE("printed amplifier gain adds only half the requested noise") {
  const ChannelParams weak{0.5, 0.5};
  EbPlan plan = plan_lemma2(weak, 0.6);
  plan.gain_eb = plan.gain_as_stated;
  plan.tau = 1.0 / plan.gain_eb;
  const auto qubit = LogicalQubit::make(0.5, 0.5);
  const auto state = engineered_willie_state(plan, weak, qubit, FockCutoff{30});
  const double half_noise = weak.eta * (weak.nbar_b + plan.nbar_prime / 2);
  const double full_noise = weak.eta * (weak.nbar_b + plan.nbar_prime);
  for (const auto& [z1, z2] : sample_zetas(8, 1.5)) {
    const auto numeric = anti_normal_char_fn(state, z1, z2);
    CHECK_FALSE(numeric.flagged);
    CHECK(std::abs(numeric.value - char_fn_closed(qubit, 0.5, half_noise, z1, z2)) < 1e-8);
    if (std::abs(z1) + std::abs(z2) > 0.5)
      CHECK(std::abs(numeric.value - char_fn_closed(qubit, 0.5, full_noise, z1, z2)) > 1e-4);
  }
}

TEST_CASE("engineered lower bounds") {
  const ChannelParams weak{0.5, 0.5};
  const auto plan = plan_lemma1(weak);
  const double n = 1e10;
  CHECK(eb_lower_bound_qubits(plan, 0.05, n) ==
        doctest::Approx(2 * std::sqrt(n) * c_cov(plan.effective_covert_params) * 0.05 *
                        hashing_rate(plan.effective_rate_params)).epsilon(1e-14));
  const auto none = plan_lemma1(ChannelParams{0.9, 0.12});
  CHECK(eb_lower_bound_qubits(none, 0.05, n) == lower_bound_qubits(ChannelParams{0.9, 0.12}, 0.05, n));
}
