#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covq/errors.hpp"
#include "covq/fock_core.hpp"
#include "generators.hpp"

using namespace covq;
using covq::testing::max_abs;

namespace {

Eigen::Index idx(std::initializer_list<int> occ, FockCutoff cutoff) {
  return fock_index(std::span<const int>(occ.begin(), occ.size()), cutoff);
}

int total_photons(Eigen::Index index, int modes, FockCutoff cutoff) {
  int total = 0;
  for (int n : fock_occupations(index, modes, cutoff)) total += n;
  return total;
}

}  // namespace

TEST_CASE("fock indexing is row-major with mode 0 most significant") {
  const FockCutoff c{3};
  CHECK(fock_dimension(2, c) == 16);
  CHECK(idx({0, 1}, c) == 1);
  CHECK(idx({1, 0}, c) == 4);
  CHECK(idx({2, 3}, c) == 11);
  CHECK(fock_occupations(11, 2, c) == std::vector<int>{2, 3});
  CHECK_THROWS_AS(idx({4, 0}, c), Error);
}

TEST_CASE("thermal_state examples") {
  const auto vac = thermal_state(0.0, FockCutoff{5});
  CHECK(vac(0, 0) == Complex(1.0));
  CHECK(max_abs(vac.matrix() - vacuum_state(1, FockCutoff{5}).matrix()) == 0.0);
  CHECK(vac.truncation_leak() == 0.0);

  const auto n0 = thermal_state(0.12, FockCutoff{0});
  CHECK(n0.dimension() == 1);
  CHECK(n0(0, 0).real() == doctest::Approx(1.0 / 1.12).epsilon(1e-15));
  CHECK(n0.truncation_leak() == doctest::Approx(1.0 - 1.0 / 1.12).epsilon(1e-14));

  const auto one = thermal_state(1.0, FockCutoff{30});
  CHECK(one(0, 0).real() == 0.5);
  CHECK(one(1, 1).real() == 0.25);
  CHECK(one.trace().real() + one.truncation_leak() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(thermal_state(-0.1, FockCutoff{3}), Error);
}

TEST_CASE("dual_rail_density examples") {
  const FockCutoff c{2};
  const auto zero = dual_rail_density(LogicalQubit::make(1.0, 0.0), c);
  CHECK(zero(idx({0, 1}, c), idx({0, 1}, c)) == Complex(1.0));
  CHECK(zero.trace() == Complex(1.0));

  const auto plus = dual_rail_density(LogicalQubit::make(0.5, 0.5), c);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> plus_eig(plus.matrix());
  CHECK(plus_eig.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(plus(idx({0, 1}, c), idx({1, 0}, c)) == Complex(0.5));

  const auto mixed = dual_rail_density(LogicalQubit::balanced_mixture(), c);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> mixed_eig(mixed.matrix());
  CHECK(mixed_eig.eigenvalues().maxCoeff() == doctest::Approx(0.5));
  CHECK((mixed_eig.eigenvalues().array() > 0.25).count() == 2);

  CHECK_THROWS_AS(dual_rail_density(LogicalQubit::make(1.0, 0.0), FockCutoff{0}), Error);
}

TEST_CASE("DensityOperator rejects malformed entries") {
  const FockCutoff c{1};
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2) * 0.5;
  bad(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(DensityOperator(1, c, bad), Error);
  CHECK_THROWS_AS(DensityOperator(2, c, ComplexMatrix::Identity(2, 2) * 0.5), Error);

  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  const DensityOperator not_psd(1, c, negative);
  try {
    not_psd.validate();
    FAIL("expected a PSD violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_positive_semidefinite);
  }
}

TEST_CASE("tensor and partial_trace") {
  const FockCutoff c{4};
  const auto vv = tensor(vacuum_state(2, c), vacuum_state(2, c));
  CHECK(vv.num_modes() == 4);
  CHECK(vv(0, 0) == Complex(1.0));

  const auto th = thermal_state(0.12, c);
  const auto prod = tensor(th, th);
  for (int f = 0; f <= 4; ++f)
    for (int g = 0; g <= 4; ++g)
      CHECK(prod(idx({f, g}, c), idx({f, g}, c)).real() ==
            doctest::Approx(thermal_weight(f, 0.12) * thermal_weight(g, 0.12)).epsilon(1e-15));

  std::mt19937_64 rng(11);
  const auto a = covq::testing::random_state(rng, c, 3);
  const auto b = covq::testing::random_state(rng, c, 5);
  const int keep0[] = {0};
  const int keep1[] = {1};
  CHECK(max_abs(partial_trace(tensor(a, b), keep0).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(tensor(a, b), keep1).matrix() - b.matrix()) < 1e-14);

  const auto bell = dual_rail_density(LogicalQubit::make(0.5, 0.5), FockCutoff{1});
  const auto marginal = partial_trace(bell, keep0);
  CHECK(max_abs(marginal.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);

  const int none[] = {0, 0};
  CHECK_THROWS_AS(partial_trace(bell, std::span<const int>(none, 0)), Error);
}

TEST_CASE("beamsplitter examples and invariants") {
  const FockCutoff c{3};
  CHECK(max_abs(beamsplitter_unitary(1.0, 0, 1, 2, c).dense() - ComplexMatrix::Identity(16, 16)) == 0.0);

  const ComplexMatrix swap = beamsplitter_unitary(0.0, 0, 1, 2, c).dense();
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m + n <= 3; ++m)
      CHECK(std::abs(swap(idx({m, n}, c), idx({n, m}, c))) == doctest::Approx(1.0).epsilon(1e-14));

  const ComplexMatrix half = beamsplitter_unitary(0.5, 0, 1, 2, c).dense();
  CHECK(half(idx({1, 0}, c), idx({1, 0}, c)).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-14));
  CHECK(half(idx({0, 1}, c), idx({1, 0}, c)).real() == doctest::Approx(-M_SQRT1_2).epsilon(1e-14));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto bs = beamsplitter_unitary(unit(rng), 0, 1, 2, c);
    const ComplexMatrix u = bs.dense();
    CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(16, 16)) < 1e-13);
    for (Eigen::Index r = 0; r < 16; ++r)
      for (Eigen::Index col = 0; col < 16; ++col)
        if (total_photons(r, 2, c) != total_photons(col, 2, c)) CHECK(u(r, col) == Complex(0.0));

    // A state with at most N photons in total is mapped exactly.
    ComplexMatrix low = ComplexMatrix::Zero(16, 16);
    const auto g = covq::testing::random_complex(rng, 4, 4);
    const Eigen::Index support[] = {idx({0, 0}, c), idx({1, 0}, c), idx({1, 2}, c), idx({0, 3}, c)};
    ComplexMatrix small = g * g.adjoint();
    small /= small.trace().real();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) low(support[i], support[j]) = small(i, j);
    const DensityOperator in(2, c, 0.5 * (low + low.adjoint()));
    const auto out = apply_unitary(bs, in);
    CHECK(out.trace().real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(max_abs(out.matrix() - u * in.matrix() * u.adjoint()) < 1e-14);
  }
}

TEST_CASE("amplifier examples") {
  const FockCutoff c{40};
  CHECK(max_abs(two_mode_amplifier_unitary(1.0, 0, 1, 2, FockCutoff{3}).dense() -
                ComplexMatrix::Identity(16, 16)) == 0.0);
  CHECK_THROWS_AS(two_mode_amplifier_unitary(0.9, 0, 1, 2, c), Error);

  const double gain = 1.5;
  const auto amp = two_mode_amplifier_unitary(gain, 0, 1, 2, c);
  CHECK(amp.truncation_error() == doctest::Approx(std::pow((gain - 1.0) / gain, 41)).epsilon(1e-10));
  const auto out = apply_unitary(amp, vacuum_state(2, c));
  const int keep1[] = {1};
  const auto idler = partial_trace(out, keep1);
  for (int k = 0; k <= 10; ++k)
    CHECK(std::abs(idler(k, k).real() - thermal_weight(k, gain - 1.0)) < 1e-12);
  CHECK(max_abs(idler.matrix() - ComplexMatrix(idler.matrix().diagonal().asDiagonal())) < 1e-14);

  // Gain G then loss 1/G leaves a thermal state with (G - 1)/G photons.
  const int keep0[] = {0};
  const auto signal = partial_trace(out, keep0);
  const auto loss = beamsplitter_unitary(1.0 / gain, 0, 1, 2, c);
  const auto attenuated = partial_trace(apply_unitary(loss, tensor(signal, vacuum_state(1, c))), keep0);
  for (int k = 0; k <= 10; ++k)
    CHECK(std::abs(attenuated(k, k).real() - thermal_weight(k, (gain - 1.0) / gain)) < 1e-12);
}

TEST_CASE("anti-normal characteristic function on Gaussian states") {
  const FockCutoff c{30};
  const Complex z1(0.3, -0.4), z2(-0.7, 0.2);
  const double r = std::norm(z1) + std::norm(z2);
  const auto vac = anti_normal_char_fn(vacuum_state(2, c), z1, z2);
  CHECK(std::abs(vac.value - std::exp(-r)) < 1e-14);
  CHECK_FALSE(vac.flagged);

  const double nbar = 0.12;
  const auto th = tensor(thermal_state(nbar, c), thermal_state(nbar, c));
  const auto val = anti_normal_char_fn(th, z1, z2);
  CHECK(std::abs(val.value - std::exp(-(1.0 + nbar) * r)) < 1e-12);

  const auto at_origin = anti_normal_char_fn(th, Complex(0.0), Complex(0.0));
  CHECK(std::abs(at_origin.value - th.trace()) < 1e-15);

  const auto coarse = tensor(thermal_state(0.5, FockCutoff{4}), thermal_state(0.5, FockCutoff{4}));
  CHECK(anti_normal_char_fn(coarse, Complex(2.0), Complex(2.0)).flagged);
}

TEST_CASE("divergences: examples") {
  const FockCutoff c{3};
  std::mt19937_64 rng(21);
  const auto a = covq::testing::random_state(rng, c, 10);
  CHECK(trace_distance(a, a) < 1e-14);
  CHECK(std::abs(qre(a, a)) < 1e-12);
  CHECK(std::abs(chi2_numeric(a, a)) < 1e-12);

  const int zero[] = {0};
  const int two[] = {2};
  CHECK(trace_distance(fock_state(zero, c), fock_state(two, c)) == doctest::Approx(1.0).epsilon(1e-14));

  try {
    qre(a, fock_state(zero, c));
    FAIL("expected rank deficiency");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::rank_deficient);
  }
  CHECK_THROWS_AS(chi2_numeric(a, covq::testing::random_state(rng, c, 2)), Error);

  // Diagonal and dense reference paths agree: a unitary rotation of both
  // arguments leaves the divergences unchanged.
  const auto th = thermal_state(0.3, c);
  const ComplexMatrix u =
      Eigen::HouseholderQR<ComplexMatrix>(covq::testing::random_complex(rng, 4, 4)).householderQ();
  const DensityOperator ra(1, c, u * a.matrix() * u.adjoint());
  const DensityOperator rth(1, c, u * th.matrix() * u.adjoint(), th.truncation_leak());
  CHECK(std::abs(qre(a, th) - qre(ra, rth)) < 1e-12);
  CHECK(std::abs(chi2_numeric(a, th) - chi2_numeric(ra, rth)) < 1e-10);
  CHECK(qre(a, th) > 0.0);
}

TEST_CASE("divergences: properties on random states") {
  std::mt19937_64 rng(0xd1ce);
  const FockCutoff c{4};
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = covq::testing::random_state(rng, c, 1 + trial % 6);
    const auto b = covq::testing::random_state(rng, c, 5);
    const auto d = covq::testing::random_state(rng, c, 2);
    CHECK(trace_distance(a, d) <= trace_distance(a, b) + trace_distance(b, d) + 1e-10);

    const double nats = detail::qre_nats(a, b);
    CHECK(nats >= -1e-9);
    CHECK(qre(a, b) == doctest::Approx(nats / std::numbers::ln2).epsilon(1e-12));
    // Pinsker: (1/4)||a - b||_1 <= sqrt(D/8), in nats and therefore in bits.
    CHECK(0.5 * trace_distance(a, b) <= std::sqrt(nats / 8.0) + 1e-12);
    CHECK(0.5 * trace_distance(a, b) <= std::sqrt(qre(a, b) / 8.0) + 1e-12);
    // D <= log(1 + chi^2) <= chi^2.
    CHECK(nats <= chi2_numeric(a, b) + 1e-10);
  }
}
