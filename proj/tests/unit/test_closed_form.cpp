#include <doctest.h>

#include <cmath>

#include "covq/closed_form.hpp"
#include "covq/errors.hpp"
#include "covq/oracle.hpp"
#include "generators.hpp"

using namespace covq;
using covq::testing::max_abs;

namespace {

double t(int k, double x) { return std::pow(x, k) / std::pow(1.0 + x, k + 1); }

}  // namespace

TEST_CASE("LogicalQubit validation") {
  CHECK_NOTHROW(LogicalQubit::make(0.3, std::polar(std::sqrt(0.21), 1.0)).validate());
  CHECK_THROWS_AS(LogicalQubit::make(0.3, 0.5).validate(), Error);
  CHECK_THROWS_AS((LogicalQubit{0.6, 0.6, 0.0}).validate(), Error);
  CHECK_THROWS_AS(LogicalQubit::make(-0.1, 0.0).validate(), Error);
  const auto p = LogicalQubit::pure({3.0, 0.0}, {0.0, 4.0});
  CHECK(p.alpha_sq == doctest::Approx(0.36));
  CHECK(p.is_pure());
  CHECK_FALSE(LogicalQubit::balanced_mixture().is_pure());
}

TEST_CASE("w1_coeff examples") {
  CHECK(w1_coeff(0, 0, ChannelParams{1.0, 0.12}) == doctest::Approx(t(0, 0.12) * t(0, 0.12)).epsilon(1e-15));

  const ChannelParams reference{0.9, 0.12};
  const double x = 0.108;
  const double expected = (t(0, x) - 0.1 / std::pow(1.0 + x, 2)) * t(0, x);
  CHECK(w1_coeff(0, 0, reference) == doctest::Approx(expected).epsilon(1e-15));
  const double w13 = (t(3, x) - 0.1 * x * x * (x - 3.0) / std::pow(1.0 + x, 5)) * t(1, x);
  CHECK(w1_coeff(1, 3, reference) == doctest::Approx(w13).epsilon(1e-14));

  // Noiseless limit: the photon reaches Willie with probability 1 - eta.
  const ChannelParams pure_loss{0.7, 0.0};
  CHECK(w1_coeff(0, 0, pure_loss) == doctest::Approx(0.7));
  CHECK(w1_coeff(0, 1, pure_loss) == doctest::Approx(0.3));
  CHECK(w1_coeff(1, 0, pure_loss) == 0.0);
  CHECK(w1_coeff(0, 2, pure_loss) == 0.0);
  CHECK(w1_coeff(0, 0, ChannelParams{0.7, 1e-8}) == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("w2_coeff examples") {
  const ChannelParams reference{0.9, 0.12};
  for (int g = 0; g < 5; ++g) CHECK(w2_coeff(0, g, reference) == 0.0);
  CHECK(w2_coeff(2, 3, ChannelParams{1.0, 0.12}) == 0.0);
  CHECK(w2_coeff(1, 0, reference) == doctest::Approx(0.1 / std::pow(1.108, 4)).epsilon(1e-15));
  CHECK(w2_coeff(2, 1, reference) ==
        doctest::Approx(0.1 * 0.108 * 0.108 / std::pow(1.108, 6) * 2.0).epsilon(1e-14));
}

TEST_CASE("willie_state_closed examples") {
  const FockCutoff c{10};
  const auto thermal_only = willie_state_closed(LogicalQubit::make(0.5, 0.5), {1.0, 0.12}, c);
  for (int f = 0; f <= 10; ++f)
    for (int g = 0; g <= 10; ++g)
      CHECK(thermal_only.diag(f, g) == doctest::Approx(t(f, 0.12) * t(g, 0.12)).epsilon(1e-14));
  CHECK(thermal_only.upper.cwiseAbs().maxCoeff() == 0.0);
  CHECK(thermal_only.lower.cwiseAbs().maxCoeff() == 0.0);

  const ChannelParams reference{0.9, 0.12};
  const auto logical_zero = willie_state_closed(LogicalQubit::make(1.0, 0.0), reference, c);
  CHECK(logical_zero.upper.cwiseAbs().maxCoeff() == 0.0);
  CHECK(logical_zero.diag(2, 3) == w1_coeff(2, 3, reference));

  const auto plus = willie_state_closed(LogicalQubit::make(0.5, 0.5), reference, c);
  CHECK(plus.upper(2, 3) == Complex(0.5 * w2_coeff(3, 2, reference)));
  CHECK(plus.lower(2, 3) == Complex(0.5 * w2_coeff(2, 3, reference)));
  for (const auto& e : plus.entries()) CHECK(e.f + e.g == e.f_prime + e.g_prime);
}

TEST_CASE("willie_state_closed properties") {
  std::mt19937_64 rng(0xc105ed);
  const FockCutoff c{25};
  for (int trial = 0; trial < 30; ++trial) {
    const ChannelParams params = covq::testing::random_channel(rng);
    const LogicalQubit qubit = covq::testing::random_logical(rng);
    const auto state = willie_state_closed(qubit, params, c).to_density();
    CHECK_NOTHROW(state.validate());
    CHECK(state.trace().real() + state.truncation_leak() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(state.truncation_leak() < 1e-6);
  }
}

TEST_CASE("char_fn_closed examples") {
  const ChannelParams reference{0.9, 0.12};
  const auto q = LogicalQubit::make(0.3, std::polar(0.2, 0.4));
  CHECK(willie_char_fn_closed(q, reference, 0.0, 0.0) == Complex(1.0));
  const Complex z1(0.4, 0.1), z2(-0.2, 0.5);
  const double r = std::norm(z1) + std::norm(z2);
  CHECK(std::abs(willie_char_fn_closed(q, {1.0, 0.12}, z1, z2) - std::exp(-1.12 * r)) < 1e-15);
}

TEST_CASE("bob_state_closed limits") {
  const FockCutoff c{8};
  const auto q = LogicalQubit::make(0.3, std::polar(0.2, 0.4));
  const auto bob_zero = bob_state_closed(q, {0.0, 0.12}, c);
  for (int f = 0; f <= 8; ++f)
    CHECK(bob_zero.diag(f, 8 - f) == doctest::Approx(t(f, 0.12) * t(8 - f, 0.12)).epsilon(1e-14));

  const auto lossless = bob_state_closed(q, {1.0, 0.0}, c).to_density();
  CHECK(max_abs(lossless.matrix() - dual_rail_density(q, c).matrix()) < 1e-15);

  // Against the brute-force Bob state on a few generic channels.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const ChannelParams params = covq::testing::random_channel(rng, 0.2);
    const auto closed = bob_state_closed(q, params, FockCutoff{20}).to_density();
    const auto numeric = bob_state_numeric(q, params, FockCutoff{20});
    CHECK(max_abs(closed.matrix() - numeric.matrix()) < 1e-10);
  }
}

TEST_CASE("chi2 examples") {
  CHECK(chi2_bound(ChannelParams{1.0, 0.3}) == 0.0);
  CHECK(chi2_bound(ChannelParams{0.9, 0.12}) == doctest::Approx(0.01 / (0.108 * 1.108)).epsilon(1e-14));
  CHECK(chi2_bound(ChannelParams{0.9, 0.12}) == doctest::Approx(0.0836).epsilon(1e-3));
  CHECK(chi2_bound(ChannelParams{0.5, 1.0}) == doctest::Approx(0.25 / (0.5 * 1.5)).epsilon(1e-14));
  try {
    chi2_bound(ChannelParams{0.5, 0.0});
    FAIL("expected an infinite divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::infinite_divergence);
  }

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const ChannelParams params = covq::testing::random_channel(rng);
    if (params.nbar_b == 0.0) continue;
    const auto q = covq::testing::random_logical(rng);
    const double bound = chi2_bound(params);
    CHECK(chi2_closed(q, params) <= bound * (1.0 + 1e-14));
    CHECK(chi2_closed(LogicalQubit::balanced_mixture(), params) == doctest::Approx(0.5 * bound).epsilon(1e-14));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double a2 = unit(rng);
    const auto pure = LogicalQubit::make(a2, std::polar(std::sqrt(a2 * (1.0 - a2)), 6.0 * unit(rng)));
    CHECK(chi2_closed(pure, params) == doctest::Approx(bound).epsilon(1e-13));
  }
}

TEST_CASE("depolarizing parameters") {
  for (double eta : {0.0, 0.3, 0.9, 1.0}) {
    const ChannelParams pure_loss{eta, 0.0};
    CHECK(p_fail(pure_loss) == doctest::Approx(1.0 - eta).epsilon(1e-15));
    CHECK(p_prime(pure_loss) == 0.0);
    CHECK(p_total(pure_loss) == doctest::Approx(1.0 - eta).epsilon(1e-15));
  }
  const ChannelParams reference{0.9, 0.12};
  CHECK(p_total(reference) == doctest::Approx(1.0 - 0.9 / std::pow(1.012, 4)).epsilon(1e-15));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelParams params = covq::testing::random_channel(rng, 2.0);
    const double pp = p_prime(params), pf = p_fail(params);
    CHECK(p_total(params) == doctest::Approx(pp + (1.0 - pp) * pf).epsilon(1e-13));
    CHECK(pf >= 0.0);
    CHECK(pf <= 1.0);
  }

  // p_fail from the diagonal of the closed-form Bob state.
  const FockCutoff c{4};
  const auto bob = bob_state_closed(LogicalQubit::make(0.4, 0.1), reference, c);
  CHECK(1.0 - bob.diag(0, 1) - bob.diag(1, 0) == doctest::Approx(p_fail(reference)).epsilon(1e-10));
}
