#include "covq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "covq/closed_form.hpp"
#include "covq/covert_bounds.hpp"

namespace covq {

namespace {

using Inputs = std::vector<std::pair<std::string, double>>;

constexpr double kWillieTol = 1e-8;
constexpr double kZeroPatternTol = 1e-10;
constexpr double kChi2RelTol = 1e-6;
constexpr double kChi2BoundTol = 1e-9;
constexpr double kChainTol = 1e-12;
constexpr double kDepolarizingTol = 1e-8;
constexpr double kPfailTol = 1e-10;
constexpr double kIdentityTol = 1e-12;
constexpr double kQuadratureTol = 1e-8;
constexpr double kGainIdentityTol = 1e-14;
constexpr double kMaxEnvLeak = 1e-6;

// Running maximum of errors with the inputs of the worst case.
class ErrorTracker {
 public:
  ErrorTracker(std::string name, double tolerance, ErrorMetric metric)
      : name_(std::move(name)), tolerance_(tolerance), metric_(metric) {}

  // `reference` scales the relative error; a zero reference makes any nonzero
  // error infinitely large relatively.
  void add(double abs_error, double reference, const Inputs& inputs) {
    double rel_error = 0.0;
    if (abs_error != 0.0)
      rel_error = reference != 0.0 ? abs_error / std::abs(reference)
                                   : std::numeric_limits<double>::infinity();
    if (std::isnan(abs_error)) rel_error = abs_error;
    ++count_;
    const double key = metric_ == ErrorMetric::abs ? abs_error : rel_error;
    const bool worse = !has_worst_ || (!std::isnan(worst_key_) && (std::isnan(key) || key > worst_key_));
    if (worse) {
      has_worst_ = true;
      worst_key_ = key;
      worst_ = inputs;
    }
    max_abs_ = nan_max(max_abs_, abs_error);
    max_rel_ = nan_max(max_rel_, rel_error);
  }

  VerificationReport report() const {
    VerificationReport r;
    r.check_name = name_;
    r.grid_size = count_;
    r.max_abs_error = max_abs_;
    r.max_rel_error = max_rel_;
    r.tolerance = tolerance_;
    r.metric = metric_;
    r.worst_case_inputs = worst_;
    return rescore(std::move(r), tolerance_);
  }

 private:
  static double nan_max(double a, double b) { return std::isnan(a) || std::isnan(b) ? NAN : std::max(a, b); }

  std::string name_;
  double tolerance_;
  ErrorMetric metric_;
  long count_{0};
  double max_abs_{0.0};
  double max_rel_{0.0};
  double worst_key_{0.0};
  bool has_worst_{false};
  Inputs worst_;
};

Inputs channel_inputs(const ChannelParams& params) {
  return {{"eta", params.eta}, {"nbar_b", params.nbar_b}};
}

Inputs with_qubit(Inputs inputs, const LogicalQubit& q) {
  inputs.emplace_back("alpha_sq", q.alpha_sq);
  inputs.emplace_back("gamma_re", q.gamma.real());
  inputs.emplace_back("gamma_im", q.gamma.imag());
  return inputs;
}

Inputs with(Inputs inputs, const std::string& key, double value) {
  inputs.emplace_back(key, value);
  return inputs;
}

// Thermal state whose top level is empty, so that |0> or |1> times it stays
// inside each fixed-total-photon beamsplitter block.
DensityOperator padded_thermal(double nbar, FockCutoff cutoff) {
  ComplexMatrix m = ComplexMatrix::Zero(cutoff.levels(), cutoff.levels());
  for (int k = 0; k < cutoff.max_photons; ++k) m(k, k) = thermal_weight(k, nbar);
  const double leak = nbar == 0.0 ? 0.0 : std::pow(nbar / (1.0 + nbar), cutoff.max_photons);
  return {1, cutoff, std::move(m), leak};
}

ComplexMatrix ket_bra(int i, int k, FockCutoff cutoff) {
  ComplexMatrix m = ComplexMatrix::Zero(cutoff.levels(), cutoff.levels());
  m(i, k) = 1.0;
  return m;
}

constexpr int kWillieSlot = 1;
constexpr int kBobSlot = 0;

// Lossy thermal channel on a single-mode operator; returns the output at `slot`.
ComplexMatrix lossy_thermal(const ComplexMatrix& op, FockCutoff cutoff, int slot,
                            const BlockUnitary& bs, const DensityOperator& env) {
  const ComplexMatrix joint = apply_unitary(bs, kronecker(op, env.matrix()));
  const int keep[] = {slot};
  return partial_trace(joint, 2, cutoff, keep);
}

double product_leak(double single) { return std::clamp(1.0 - (1.0 - single) * (1.0 - single), 0.0, 1.0); }

// Single-mode stage ahead of the channel for an engineered plan.
ComplexMatrix engineered_stage(const ComplexMatrix& op, const EbPlan& plan, FockCutoff cutoff,
                               double& leak) {
  const int keep_a[] = {0};
  switch (plan.mechanism) {
    case EbMechanism::none_needed: return op;
    case EbMechanism::attenuate: {
      const auto loss = beamsplitter_unitary(plan.tau, 0, 1, 2, cutoff);
      const ComplexMatrix joint =
          apply_unitary(loss, kronecker(op, vacuum_state(1, cutoff).matrix()));
      return partial_trace(joint, 2, cutoff, keep_a);
    }
    case EbMechanism::amplify: {
      const FockCutoff high{std::max(cutoff.max_photons, amplifier_cutoff(plan.gain_eb))};
      ComplexMatrix padded = ComplexMatrix::Zero(high.levels(), high.levels());
      padded.topLeftCorner(op.rows(), op.cols()) = op;
      const auto amp = two_mode_amplifier_unitary(plan.gain_eb, 0, 1, 2, high);
      const ComplexMatrix vac = vacuum_state(1, high).matrix();
      ComplexMatrix amplified = partial_trace(apply_unitary(amp, kronecker(padded, vac)), 2, high, keep_a);
      const auto loss = beamsplitter_unitary(1.0 / plan.gain_eb, 0, 1, 2, high);
      ComplexMatrix attenuated =
          partial_trace(apply_unitary(loss, kronecker(amplified, vac)), 2, high, keep_a);
      const ComplexMatrix kept = truncate(attenuated, 1, high, cutoff);
      leak = std::max(leak, amp.truncation_error() +
                                std::abs(attenuated.trace() - kept.trace()));
      return kept;
    }
  }
  return op;
}

ComplexMatrix channel_matrix(const ComplexMatrix (&images)[2][2], const LogicalQubit& qubit) {
  return qubit.alpha_sq * kronecker(images[0][0], images[1][1]) +
         qubit.beta_sq * kronecker(images[1][1], images[0][0]) +
         qubit.gamma * kronecker(images[0][1], images[1][0]) +
         std::conj(qubit.gamma) * kronecker(images[1][0], images[0][1]);
}

LogicalQubit plus_state() { return LogicalQubit::pure({M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}); }

std::vector<ChannelParams> suite_channels(const SuiteOptions& options) {
  if (options.eta_override.empty() && options.nbar_override.empty()) return default_channels();
  std::vector<double> etas = options.eta_override;
  std::vector<double> nbars = options.nbar_override;
  if (etas.empty()) etas = {0.1, 0.5, 0.9, 0.99};
  if (nbars.empty()) nbars = {0.01, 0.12, 0.5};
  std::vector<ChannelParams> out;
  for (double eta : etas)
    for (double nbar : nbars) out.push_back(make_channel(eta, nbar));
  return out;
}

// Combines two runs of the same check; the worst case follows the larger error.
VerificationReport merge(const VerificationReport& a, const VerificationReport& b) {
  const bool b_worse = std::isnan(b.metric_error()) || b.metric_error() > a.metric_error();
  VerificationReport r = b_worse ? b : a;
  r.grid_size = a.grid_size + b.grid_size;
  r.max_abs_error = std::max(a.max_abs_error, b.max_abs_error);
  r.max_rel_error = std::max(a.max_rel_error, b.max_rel_error);
  return rescore(std::move(r), a.tolerance);
}

void append(std::vector<VerificationReport>& into, std::vector<VerificationReport> more) {
  for (auto& r : more) into.push_back(std::move(r));
}

}  // namespace

VerificationReport rescore(VerificationReport report, double tolerance) {
  report.tolerance = tolerance;
  const double err = report.metric_error();
  report.passed = !std::isnan(err) && err <= tolerance;
  return report;
}

// --- grids --------------------------------------------------------------------

std::vector<ChannelParams> design_channels() {
  std::vector<ChannelParams> out;
  for (double eta : {0.1, 0.5, 0.9, 0.99})
    for (double nbar : {0.01, 0.12, 0.5}) out.push_back({eta, nbar});
  return out;
}

std::vector<ChannelParams> default_channels(int random_points, std::uint64_t seed) {
  std::vector<ChannelParams> out = design_channels();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eta(0.05, 0.995);
  std::uniform_real_distribution<double> nbar(0.005, 0.5);
  for (int i = 0; i < random_points; ++i) {
    const double e = eta(rng);
    out.push_back({e, nbar(rng)});
  }
  return out;
}

LogicalQubit random_qubit(std::mt19937_64& rng, bool pure) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double radius = pure ? 1.0 : std::cbrt(unit(rng));
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double bx = radius * s * std::cos(phi);
  const double by = radius * s * std::sin(phi);
  const double bz = radius * z;
  // rho = (I + b.sigma) / 2 in the logical basis.
  LogicalQubit q{0.5 * (1.0 + bz), 0.5 * (1.0 - bz), {0.5 * bx, -0.5 * by}};
  if (pure) q.gamma *= std::sqrt(q.alpha_sq * q.beta_sq) / std::max(std::abs(q.gamma), 1e-300);
  if (pure && q.alpha_sq * q.beta_sq == 0.0) q.gamma = 0.0;
  q.validate();
  return q;
}

std::vector<LogicalQubit> default_qubits(std::uint64_t seed) {
  using std::numbers::pi;
  auto pure_at = [](double a2, double phase) {
    return LogicalQubit::make(a2, std::polar(std::sqrt(a2 * (1.0 - a2)), phase));
  };
  std::vector<LogicalQubit> out{LogicalQubit::make(1.0, 0.0), LogicalQubit::make(0.0, 0.0)};
  for (double phase : {0.0, pi / 2, pi, 3 * pi / 2}) out.push_back(pure_at(0.5, phase));
  for (double phase : {pi / 4, 5 * pi / 4}) out.push_back(pure_at(0.25, phase));
  for (double phase : {pi / 3, 4 * pi / 3}) out.push_back(pure_at(0.75, phase));
  out.push_back(LogicalQubit::balanced_mixture());
  out.push_back(LogicalQubit::make(0.5, std::polar(0.25, 0.7)));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < 4; ++i) out.push_back(random_qubit(rng, false));
  return out;
}

OracleGrid default_grid() { return {default_channels(), default_qubits(), FockCutoff{kOracleCutoff}}; }

std::vector<ZetaPair> sample_zetas(int count, double radius, std::uint64_t seed) {
  std::vector<ZetaPair> out;
  if (count <= 0) return out;
  out.emplace_back(0.0, 0.0);
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    const double rad = radius * std::sqrt(unit(rng));
    return std::polar(rad, 2.0 * std::numbers::pi * unit(rng));
  };
  while (static_cast<int>(out.size()) < count) {
    const auto z1 = draw();
    out.emplace_back(z1, draw());
  }
  return out;
}

// --- numeric channel outputs ------------------------------------------------------

ChannelImages channel_images(const ChannelParams& params, FockCutoff cutoff) {
  validate(params);
  require(cutoff.max_photons >= 2, ErrorKind::domain, "oracle cutoff must be at least 2");
  const DensityOperator env = padded_thermal(params.nbar_b, cutoff);
  const auto bs = beamsplitter_unitary(params.eta, 0, 1, 2, cutoff);
  ChannelImages images;
  images.cutoff = cutoff;
  images.env_leak = env.truncation_leak();
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      if (i == 1 && k == 0) continue;
      const ComplexMatrix op = ket_bra(i, k, cutoff);
      images.willie[i][k] = lossy_thermal(op, cutoff, kWillieSlot, bs, env);
      images.bob[i][k] = lossy_thermal(op, cutoff, kBobSlot, bs, env);
    }
  }
  images.willie[1][0] = images.willie[0][1].adjoint();
  images.bob[1][0] = images.bob[0][1].adjoint();
  return images;
}

DensityOperator combine_dual_rail(const LogicalQubit& qubit, const ComplexMatrix (&images)[2][2],
                                  FockCutoff cutoff, double leak) {
  qubit.validate();
  ComplexMatrix rho = channel_matrix(images, qubit);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return {2, cutoff, std::move(rho), product_leak(leak)};
}

DensityOperator willie_state_numeric(const LogicalQubit& qubit, const ChannelParams& params,
                                     FockCutoff cutoff) {
  const ChannelImages images = channel_images(params, cutoff);
  require(images.env_leak <= kMaxEnvLeak, ErrorKind::truncation,
          "environment truncation leak exceeds 1e-6; raise the cutoff");
  return combine_dual_rail(qubit, images.willie, cutoff, images.env_leak);
}

DensityOperator bob_state_numeric(const LogicalQubit& qubit, const ChannelParams& params,
                                  FockCutoff cutoff) {
  const ChannelImages images = channel_images(params, cutoff);
  require(images.env_leak <= kMaxEnvLeak, ErrorKind::truncation,
          "environment truncation leak exceeds 1e-6; raise the cutoff");
  return combine_dual_rail(qubit, images.bob, cutoff, images.env_leak);
}

DensityOperator willie_state_dilation(const LogicalQubit& qubit, const ChannelParams& params,
                                      FockCutoff cutoff) {
  validate(params);
  const DensityOperator env = padded_thermal(params.nbar_b, cutoff);
  const DensityOperator input = tensor(dual_rail_density(qubit, cutoff), tensor(env, env));
  const auto bs1 = beamsplitter_unitary(params.eta, 0, 2, 4, cutoff);
  const auto bs2 = beamsplitter_unitary(params.eta, 1, 3, 4, cutoff);
  const DensityOperator out = apply_unitary(bs2, apply_unitary(bs1, input));
  const int keep[] = {2, 3};
  return partial_trace(out, keep);
}

int amplifier_cutoff(double gain) {
  require(std::isfinite(gain) && gain >= 1.0, ErrorKind::domain, "amplifier gain must be >= 1");
  const double ratio = (gain - 1.0) / gain;
  int n = 1;
  while (std::pow(ratio, n) * n > 1e-12) ++n;
  return n;
}

DensityOperator engineered_willie_state(const EbPlan& plan, const ChannelParams& params,
                                        const LogicalQubit& qubit, FockCutoff cutoff) {
  validate(params);
  require(cutoff.max_photons >= 2, ErrorKind::domain, "oracle cutoff must be at least 2");
  const DensityOperator env = padded_thermal(params.nbar_b, cutoff);
  const auto bs = beamsplitter_unitary(params.eta, 0, 1, 2, cutoff);
  double stage_leak = 0.0;
  ComplexMatrix images[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      if (i == 1 && k == 0) continue;
      const ComplexMatrix staged = engineered_stage(ket_bra(i, k, cutoff), plan, cutoff, stage_leak);
      images[i][k] = lossy_thermal(staged, cutoff, kWillieSlot, bs, env);
    }
  }
  images[1][0] = images[0][1].adjoint();
  const double single = std::clamp(env.truncation_leak() + stage_leak, 0.0, 1.0);
  return combine_dual_rail(qubit, images, cutoff, single);
}

// --- Willie state ---------------------------------------------------------------------

std::vector<VerificationReport> verify_willie_state(const OracleGrid& grid) {
  ErrorTracker entrywise("willie_state.entrywise", kWillieTol, ErrorMetric::abs);
  ErrorTracker pattern("willie_state.zero_pattern", kZeroPatternTol, ErrorMetric::abs);
  const int levels = grid.cutoff.levels();
  for (const auto& params : grid.channels) {
    const ChannelImages images = channel_images(params, grid.cutoff);
    require(images.env_leak <= kMaxEnvLeak, ErrorKind::truncation,
            "environment truncation leak exceeds 1e-6; raise the cutoff");
    for (const auto& qubit : grid.qubits) {
      const ComplexMatrix numeric = channel_matrix(images.willie, qubit);
      const ComplexMatrix closed = willie_state_closed(qubit, params, grid.cutoff).to_density().matrix();
      double worst = 0.0, worst_ref = 0.0, off = 0.0;
      for (Eigen::Index c = 0; c < numeric.cols(); ++c) {
        const int fc = static_cast<int>(c / levels), gc = static_cast<int>(c % levels);
        for (Eigen::Index r = 0; r < numeric.rows(); ++r) {
          const double err = std::abs(numeric(r, c) - closed(r, c));
          if (err > worst) {
            worst = err;
            worst_ref = std::abs(closed(r, c));
          }
          const int fr = static_cast<int>(r / levels), gr = static_cast<int>(r % levels);
          const bool on_pattern = fr + gr == fc + gc && std::abs(fr - fc) <= 1;
          if (!on_pattern) off = std::max(off, std::abs(numeric(r, c)));
        }
      }
      const Inputs inputs = with_qubit(channel_inputs(params), qubit);
      entrywise.add(worst, worst_ref, inputs);
      pattern.add(off, 0.0, inputs);
    }
  }
  return {entrywise.report(), pattern.report()};
}

// --- chi^2 ----------------------------------------------------------------------------

std::vector<VerificationReport> verify_chi2(const OracleGrid& grid, int sampled_qubits,
                                            std::uint64_t seed) {
  ErrorTracker closed_vs_numeric("chi2.closed_vs_numeric", kChi2RelTol, ErrorMetric::rel);
  ErrorTracker below_bound("chi2.sampled_below_bound", kChi2BoundTol, ErrorMetric::rel);
  ErrorTracker pure_equality("chi2.pure_state_equality", kChi2BoundTol, ErrorMetric::rel);
  ErrorTracker half_bound("chi2.balanced_mixture_half", kChi2BoundTol, ErrorMetric::rel);
  std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);

  for (const auto& params : grid.channels) {
    const ChannelImages images = channel_images(params, grid.cutoff);
    require(images.env_leak <= kMaxEnvLeak, ErrorKind::truncation,
            "environment truncation leak exceeds 1e-6; raise the cutoff");
    const DensityOperator reference =
        tensor(thermal_state(params.willie_occupancy(), grid.cutoff),
               thermal_state(params.willie_occupancy(), grid.cutoff));
    const double bound = chi2_bound(params);
    const Inputs base = channel_inputs(params);

    for (const auto& qubit : grid.qubits) {
      const DensityOperator numeric =
          combine_dual_rail(qubit, images.willie, grid.cutoff, images.env_leak);
      const double num = chi2_numeric(numeric, reference);
      const double closed = chi2_closed(qubit, params);
      closed_vs_numeric.add(std::abs(num - closed), closed, with_qubit(base, qubit));
    }

    // chi^2 is a quadratic form in (alpha_sq, beta_sq, gamma, gamma*) over the
    // numeric basis outputs; its Gram matrix makes dense qubit sampling cheap.
    const ComplexMatrix basis[4] = {
        kronecker(images.willie[0][0], images.willie[1][1]),
        kronecker(images.willie[1][1], images.willie[0][0]),
        kronecker(images.willie[0][1], images.willie[1][0]),
        kronecker(images.willie[1][0], images.willie[0][1])};
    const Eigen::VectorXd inv_ref = reference.matrix().diagonal().real().cwiseInverse();
    Eigen::Matrix4cd gram;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        gram(i, j) = (basis[i].cwiseProduct(basis[j].transpose()).rowwise().sum().array() *
                      inv_ref.array().cast<Complex>())
                         .sum();
    auto chi2_of = [&](const LogicalQubit& q) {
      const Eigen::Vector4cd c(q.alpha_sq, q.beta_sq, q.gamma, std::conj(q.gamma));
      return (c.transpose() * gram * c).value().real() - 1.0;
    };

    for (int s = 0; s < sampled_qubits; ++s) {
      const bool pure = s % 2 == 0;
      const LogicalQubit q = random_qubit(rng, pure);
      const double value = chi2_of(q);
      const Inputs inputs = with_qubit(base, q);
      below_bound.add(std::max(0.0, value - bound), bound, inputs);
      below_bound.add(std::max(0.0, chi2_closed(q, params) - bound), bound, inputs);
      if (pure) pure_equality.add(std::abs(value - bound), bound, inputs);
    }
    for (const auto& q : grid.qubits)
      if (q.is_pure()) pure_equality.add(std::abs(chi2_of(q) - bound), bound, with_qubit(base, q));
    const auto mixture = LogicalQubit::balanced_mixture();
    half_bound.add(std::abs(chi2_of(mixture) - 0.5 * bound), 0.5 * bound, with_qubit(base, mixture));
  }
  return {closed_vs_numeric.report(), below_bound.report(), pure_equality.report(),
          half_bound.report()};
}

// --- characteristic function --------------------------------------------------------------

std::vector<VerificationReport> verify_char_fn(const OracleGrid& grid,
                                               std::span<const ZetaPair> zetas) {
  ErrorTracker tracker("char_fn.closed_vs_numeric", kWillieTol, ErrorMetric::abs);
  for (const auto& params : grid.channels) {
    const ChannelImages images = channel_images(params, grid.cutoff);
    for (const auto& qubit : grid.qubits) {
      const DensityOperator numeric =
          combine_dual_rail(qubit, images.willie, grid.cutoff, images.env_leak);
      for (const auto& [z1, z2] : zetas) {
        const CharFnValue num = anti_normal_char_fn(numeric, z1, z2);
        const std::complex<double> closed = willie_char_fn_closed(qubit, params, z1, z2);
        // A flagged evaluation counts as failing by its own error estimate.
        const double err = std::max(std::abs(num.value - closed),
                                    num.flagged ? num.truncation_error : 0.0);
        Inputs inputs = with_qubit(channel_inputs(params), qubit);
        inputs = with(with(with(with(std::move(inputs), "zeta1_re", z1.real()), "zeta1_im", z1.imag()),
                           "zeta2_re", z2.real()),
                      "zeta2_im", z2.imag());
        tracker.add(err, std::abs(closed), inputs);
      }
    }
  }
  return {tracker.report()};
}

// --- covertness chain ---------------------------------------------------------------------

std::vector<VerificationReport> verify_pinsker_and_detector(const ChannelParams& params,
                                                            const LogicalQubit& qubit,
                                                            std::span<const double> q_values,
                                                            FockCutoff cutoff) {
  ErrorTracker pinsker("pinsker.trace_distance_vs_qre", kChainTol, ErrorMetric::abs);
  ErrorTracker chi2_chain("pinsker.qre_vs_chi2", kChainTol, ErrorMetric::abs);
  const DensityOperator willie = willie_state_numeric(qubit, params, cutoff);
  const double x = params.willie_occupancy();
  const DensityOperator rho0 = tensor(thermal_state(x, cutoff), thermal_state(x, cutoff));
  const double chi2 = chi2_closed(qubit, params);
  for (double q : q_values) {
    require(q >= 0.0 && q <= 1.0, ErrorKind::domain, "q must lie in [0, 1]");
    const DensityOperator rho1(2, cutoff, (1.0 - q) * rho0.matrix() + q * willie.matrix(),
                               std::max(rho0.truncation_leak(), willie.truncation_leak()));
    // 1/4 ||rho1 - rho0||_1 = trace_distance / 2.
    const double detector = 0.5 * trace_distance(rho1, rho0);
    const double qre_term = std::sqrt(std::max(0.0, detail::qre_nats(rho1, rho0)) / 8.0);
    const double chi2_term = q * std::sqrt(chi2) / std::sqrt(8.0);
    const Inputs inputs = with(with_qubit(channel_inputs(params), qubit), "q", q);
    pinsker.add(std::max(0.0, detector - qre_term), qre_term, inputs);
    chi2_chain.add(std::max(0.0, qre_term - chi2_term), chi2_term, inputs);
  }
  return {pinsker.report(), chi2_chain.report()};
}

VerificationReport verify_qre_bound_inversion(const ChannelParams& params, double delta,
                                              std::span<const double> n_values) {
  ErrorTracker tracker("pinsker.qre_bound_inversion", kChainTol, ErrorMetric::abs);
  for (double n : n_values) {
    const double q = q_max(params, delta, n);
    const double value = qre_bound(params, q, n);
    tracker.add(std::abs(value - delta), delta,
                with(with(channel_inputs(params), "delta", delta), "n", n));
  }
  return tracker.report();
}

// --- depolarizing reduction -------------------------------------------------------------------

std::vector<VerificationReport> verify_depolarizing_reduction(const OracleGrid& grid) {
  ErrorTracker logical("depolarizing.logical_state", kDepolarizingTol, ErrorMetric::abs);
  ErrorTracker fail("depolarizing.p_fail", kPfailTol, ErrorMetric::abs);
  ErrorTracker identity("depolarizing.p_identity", kIdentityTol, ErrorMetric::abs);
  ErrorTracker pure_loss("depolarizing.pure_loss_limit", 0.0, ErrorMetric::abs);

  std::vector<ChannelParams> channels = grid.channels;
  for (double eta : {0.1, 0.5, 0.9, 0.99}) channels.push_back({eta, 0.0});
  const int zero_l[] = {0, 1};
  const int one_l[] = {1, 0};
  const Eigen::Index i01 = fock_index(zero_l, grid.cutoff);
  const Eigen::Index i10 = fock_index(one_l, grid.cutoff);

  for (const auto& params : channels) {
    const ChannelImages images = channel_images(params, grid.cutoff);
    require(images.env_leak <= kMaxEnvLeak, ErrorKind::truncation,
            "environment truncation leak exceeds 1e-6; raise the cutoff");
    const double p = p_total(params);
    const double pf = p_fail(params);
    const double pp = p_prime(params);
    const Inputs base = channel_inputs(params);
    identity.add(std::abs(p - (pp + (1.0 - pp) * pf)), p, base);
    if (params.nbar_b == 0.0) pure_loss.add(std::abs(p - (1.0 - params.eta)), 1.0 - params.eta, base);

    for (const auto& qubit : grid.qubits) {
      const ComplexMatrix bob = channel_matrix(images.bob, qubit);
      Eigen::Matrix2cd projected;
      projected << bob(i01, i01), bob(i01, i10), bob(i10, i01), bob(i10, i10);
      const double fail_numeric = 1.0 - projected.trace().real();
      const Eigen::Matrix2cd logical_state =
          projected + 0.5 * fail_numeric * Eigen::Matrix2cd::Identity();
      const Eigen::Matrix2cd expected =
          (1.0 - p) * qubit.logical_matrix() + 0.5 * p * Eigen::Matrix2cd::Identity();
      const Inputs inputs = with_qubit(base, qubit);
      logical.add((logical_state - expected).cwiseAbs().maxCoeff(), expected.cwiseAbs().maxCoeff(),
                  inputs);
      fail.add(std::abs(fail_numeric - pf), pf, inputs);
    }
  }
  return {logical.report(), fail.report(), identity.report(), pure_loss.report()};
}

// --- angular integrals -------------------------------------------------------------------------

QuadratureResult angular_integral(int bra, int ket, double r, bool phase_weight) {
  require(bra >= 0 && ket >= 0, ErrorKind::domain, "Fock indices must be non-negative");
  require(std::isfinite(r) && r >= 0.0, ErrorKind::domain, "radius must be finite and >= 0");
  const FockCutoff cutoff{std::max({bra, ket, 1})};
  const ComplexMatrix c = annihilation_operator(cutoff);
  auto element = [&](double theta) {
    const std::complex<double> z = std::polar(r, theta);
    const ComplexMatrix op = nilpotent_exp(z * c.adjoint()) * nilpotent_exp(-std::conj(z) * c);
    std::complex<double> value = op(bra, ket);
    if (phase_weight) value *= std::polar(1.0, -theta);
    return value;
  };
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr unsigned kMaxDepth = 12;
  constexpr double kRelTol = 1e-13;
  const double two_pi = 2.0 * std::numbers::pi;
  double err_re = 0.0, err_im = 0.0;
  const double re = Integrator::integrate([&](double t) { return element(t).real(); }, 0.0, two_pi,
                                          kMaxDepth, kRelTol, &err_re);
  const double im = Integrator::integrate([&](double t) { return element(t).imag(); }, 0.0, two_pi,
                                          kMaxDepth, kRelTol, &err_im);
  return {{re, im}, std::hypot(err_re, err_im)};
}

std::vector<VerificationReport> verify_laguerre_lemma5(int m_max, std::span<const double> r_grid) {
  require(m_max >= 0, ErrorKind::domain, "m_max must be non-negative");
  ErrorTracker diagonal("laguerre5.diagonal", kQuadratureTol, ErrorMetric::abs);
  ErrorTracker off("laguerre5.off_diagonal", kQuadratureTol, ErrorMetric::abs);
  ErrorTracker root("laguerre5.L1_root", kQuadratureTol, ErrorMetric::abs);
  const double two_pi = 2.0 * std::numbers::pi;
  for (double r : r_grid) {
    for (int m = 0; m <= m_max; ++m) {
      for (int mp = 0; mp <= m_max; ++mp) {
        const QuadratureResult q = angular_integral(m, mp, r, false);
        const Inputs inputs{{"m", double(m)}, {"m_prime", double(mp)}, {"r", r}};
        if (m == mp) {
          const double expected = two_pi * std::laguerre(static_cast<unsigned>(m), r * r);
          diagonal.add(std::abs(q.value - expected), expected, inputs);
        } else {
          off.add(std::abs(q.value), 0.0, inputs);
        }
      }
    }
  }
  const QuadratureResult at_root = angular_integral(1, 1, 1.0, false);
  root.add(std::abs(at_root.value), 0.0, {{"m", 1.0}, {"r", 1.0}});
  return {diagonal.report(), off.report(), root.report()};
}

double lemma6_closed(int m, double r) {
  require(m >= 0, ErrorKind::domain, "m must be non-negative");
  if (m == 0) return 0.0;
  double sum = 0.0;
  double binom = 1.0;     // C(m-1, k)
  double power = 1.0;     // (-r^2)^k / k!
  for (int k = 0; k <= m - 1; ++k) {
    sum += power * binom / double(k + 1);
    binom *= double(m - 1 - k) / double(k + 1);
    power *= -r * r / double(k + 1);
  }
  return 2.0 * std::numbers::pi * r * std::sqrt(double(m)) * sum;
}

std::vector<VerificationReport> verify_laguerre_lemma6(int m_max, std::span<const double> r_grid) {
  require(m_max >= 0, ErrorKind::domain, "m_max must be non-negative");
  ErrorTracker paired("laguerre6.paired", kQuadratureTol, ErrorMetric::abs);
  ErrorTracker others("laguerre6.other_pairings", kQuadratureTol, ErrorMetric::abs);
  ErrorTracker assoc("laguerre6.assoc_laguerre_form", kQuadratureTol, ErrorMetric::abs);
  for (double r : r_grid) {
    for (int m = 0; m <= m_max; ++m) {
      for (int mp = 0; mp <= m_max; ++mp) {
        const QuadratureResult q = angular_integral(m, mp, r, true);
        const Inputs inputs{{"m", double(m)}, {"m_prime", double(mp)}, {"r", r}};
        if (mp == m - 1) {
          const double expected = lemma6_closed(m, r);
          paired.add(std::abs(q.value - expected), expected, inputs);
          // Same value through the generalized Laguerre polynomial L^(1)_{m-1}.
          const double via_assoc = 2.0 * std::numbers::pi * r *
                                   std::assoc_laguerre(static_cast<unsigned>(m - 1), 1u, r * r) /
                                   std::sqrt(double(m));
          assoc.add(std::abs(via_assoc - expected), expected, inputs);
        } else {
          others.add(std::abs(q.value), 0.0, inputs);
        }
      }
      if (m == 0) paired.add(std::abs(lemma6_closed(0, r)), 0.0, {{"m", 0.0}, {"r", r}});
    }
  }
  return {paired.report(), others.report(), assoc.report()};
}

// --- entanglement-breaking pipelines -----------------------------------------------------------

std::vector<EbCase> default_eb_cases() {
  const ChannelParams reference{0.9, 0.12};
  const ChannelParams weak{0.5, 0.5};
  const ChannelParams low{0.3, 0.2};
  std::mt19937_64 rng(kOracleSeed ^ 0x165667b19e3779f9ULL);
  const LogicalQubit mixed = random_qubit(rng, false);
  return {
      {reference, plan_lemma1(reference), plus_state()},
      {weak, plan_lemma1(weak), plus_state()},
      {low, plan_lemma1(low), mixed},
      {weak, plan_lemma2(weak, 0.6), plus_state()},
      {weak, plan_lemma2(weak), mixed},
  };
}

std::vector<VerificationReport> verify_eb_pipelines(std::span<const EbCase> cases,
                                                    std::span<const ZetaPair> zetas,
                                                    FockCutoff cutoff) {
  ErrorTracker char_fn("eb_pipelines.char_fn", kWillieTol, ErrorMetric::abs);
  ErrorTracker breaking("eb_pipelines.effective_channel_breaking", 0.0, ErrorMetric::abs);
  ErrorTracker gain("eb_pipelines.gain_identity", kGainIdentityTol, ErrorMetric::rel);

  for (const auto& c : cases) {
    const DensityOperator state = engineered_willie_state(c.plan, c.params, c.qubit, cutoff);
    const WillieCharParams eff = effective_willie_char_params(c.plan, c.params);
    Inputs base = with_qubit(channel_inputs(c.params), c.qubit);
    base = with(with(with(std::move(base), "mechanism", double(static_cast<int>(c.plan.mechanism))),
                     "tau", c.plan.tau),
                "gain", c.plan.gain_eb);
    for (const auto& [z1, z2] : zetas) {
      const CharFnValue num = anti_normal_char_fn(state, z1, z2);
      const std::complex<double> closed =
          char_fn_closed(c.qubit, eff.reflectance, eff.added_noise, z1, z2);
      const double err =
          std::max(std::abs(num.value - closed), num.flagged ? num.truncation_error : 0.0);
      char_fn.add(err, std::abs(closed),
                  with(with(with(with(base, "zeta1_re", z1.real()), "zeta1_im", z1.imag()),
                            "zeta2_re", z2.real()),
                       "zeta2_im", z2.imag()));
    }
    breaking.add(is_entanglement_breaking(c.plan.effective_covert_params) ? 0.0 : 1.0, 1.0, base);
  }

  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const ChannelParams params{0.05 + 0.09 * i, 0.0};
      // nbar' spread over the feasible range (0, 2(1-eta)/eta).
      const double nbar_prime = (j + 0.5) / 10.0 * 2.0 * (1.0 - params.eta) / params.eta;
      const double stated = lemma2_gain_as_stated(params, nbar_prime);
      const double proof = lemma2_gain_from_proof(params, nbar_prime);
      gain.add(std::abs(stated - proof), stated,
               {{"eta", params.eta}, {"nbar_prime", nbar_prime}});
    }
  }
  return {char_fn.report(), breaking.report(), gain.report()};
}

// --- suite ----------------------------------------------------------------------------------

std::vector<std::string> suite_check_names() {
  return {"willie_state", "chi2", "char_fn", "pinsker", "depolarizing", "laguerre5", "laguerre6",
          "eb_pipelines"};
}

std::vector<VerificationReport> run_suite(const SuiteOptions& options) {
  const auto names = suite_check_names();
  for (const auto& c : options.checks)
    require(std::find(names.begin(), names.end(), c) != names.end(), ErrorKind::domain,
            "unknown check: " + c);
  auto selected = [&](const std::string& name) {
    return options.checks.empty() ||
           std::find(options.checks.begin(), options.checks.end(), name) != options.checks.end();
  };

  const FockCutoff cutoff{options.cutoff.value_or(kOracleCutoff)};
  OracleGrid grid{suite_channels(options), default_qubits(), cutoff};
  const bool overridden = !options.eta_override.empty() || !options.nbar_override.empty();
  const double r_grid[] = {0.25, 0.5, 1.0, 2.0};
  const ChannelParams reference{0.9, 0.12};

  std::vector<VerificationReport> out;
  if (selected("willie_state")) append(out, verify_willie_state(grid));
  if (selected("chi2")) append(out, verify_chi2(grid));
  if (selected("char_fn")) {
    const OracleGrid char_grid{overridden ? grid.channels : design_channels(), grid.qubits, cutoff};
    append(out, verify_char_fn(char_grid, sample_zetas(6)));
  }
  if (selected("pinsker")) {
    const double qs[] = {0.01, 0.1, 1.0};
    std::vector<VerificationReport> chain;
    for (const auto& qubit : {plus_state(), LogicalQubit::make(1.0, 0.0)}) {
      auto part = verify_pinsker_and_detector(reference, qubit, qs, cutoff);
      if (chain.empty()) chain = std::move(part);
      else
        for (std::size_t i = 0; i < chain.size(); ++i) chain[i] = merge(chain[i], part[i]);
    }
    append(out, std::move(chain));
    const double ns[] = {1e6, 1e10};
    out.push_back(verify_qre_bound_inversion(reference, 0.05, ns));
  }
  if (selected("depolarizing")) append(out, verify_depolarizing_reduction(grid));
  if (selected("laguerre5")) append(out, verify_laguerre_lemma5(5, r_grid));
  if (selected("laguerre6")) append(out, verify_laguerre_lemma6(5, r_grid));
  if (selected("eb_pipelines")) {
    const auto cases = default_eb_cases();
    append(out, verify_eb_pipelines(cases, sample_zetas(25),
                                    FockCutoff{options.cutoff.value_or(kEbCutoff)}));
  }
  return out;
}

}  // namespace covq
