#pragma once

// Brute-force cross-checks of the analytic results. Everything numeric here is
// built from fock_core primitives only (states, beamsplitter and amplifier
// unitaries, partial traces); closed_form is used solely as the thing being
// checked.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covq/channel.hpp"
#include "covq/eb_engineering.hpp"
#include "covq/fock_core.hpp"
#include "covq/logical_qubit.hpp"

namespace covq {

enum class ErrorMetric { abs, rel };

struct VerificationReport {
  std::string check_name;
  long grid_size{0};
  double max_abs_error{0.0};
  double max_rel_error{0.0};
  double tolerance{0.0};
  ErrorMetric metric{ErrorMetric::abs};
  bool passed{false};
  std::vector<std::pair<std::string, double>> worst_case_inputs;

  double metric_error() const { return metric == ErrorMetric::abs ? max_abs_error : max_rel_error; }
};

/// Re-evaluates `passed` against a new tolerance.
VerificationReport rescore(VerificationReport report, double tolerance);

inline constexpr std::uint64_t kOracleSeed = 0x5eed2024;
inline constexpr int kOracleCutoff = 30;
inline constexpr int kEbCutoff = 40;

struct OracleGrid {
  std::vector<ChannelParams> channels;
  std::vector<LogicalQubit> qubits;
  FockCutoff cutoff{kOracleCutoff};
};

/// 12 design points eta in {0.1, 0.5, 0.9, 0.99} x nbar_b in {0.01, 0.12, 0.5}.
std::vector<ChannelParams> design_channels();
/// Design points followed by `random_points` seeded draws with nbar_b <= 0.5.
std::vector<ChannelParams> default_channels(int random_points = 36,
                                            std::uint64_t seed = kOracleSeed);
/// Poles, pure states at three latitudes and several phases, the balanced
/// mixture, a partially coherent state and four seeded random mixed states.
std::vector<LogicalQubit> default_qubits(std::uint64_t seed = kOracleSeed);
OracleGrid default_grid();

/// Qubit with a uniformly distributed Bloch vector on the sphere (pure) or
/// in the ball (mixed).
LogicalQubit random_qubit(std::mt19937_64& rng, bool pure);

// --- numeric channel outputs --------------------------------------------------

/// Images of |i><k| (i, k in {0, 1}) under the single-mode lossy thermal
/// channel, at Willie's and Bob's ports. The environment is truncated one
/// level below the cutoff so every beamsplitter block acts exactly.
struct ChannelImages {
  FockCutoff cutoff;
  ComplexMatrix willie[2][2];
  ComplexMatrix bob[2][2];
  double env_leak{0.0};
};

ChannelImages channel_images(const ChannelParams& params, FockCutoff cutoff);

/// Two-mode output from single-mode images by linearity of the product channel.
DensityOperator combine_dual_rail(const LogicalQubit& qubit, const ComplexMatrix (&images)[2][2],
                                  FockCutoff cutoff, double leak);

/// Willie's two-mode state. Throws truncation if the environment leak
/// exceeds 1e-6 at this cutoff.
DensityOperator willie_state_numeric(const LogicalQubit& qubit, const ChannelParams& params,
                                     FockCutoff cutoff);
DensityOperator bob_state_numeric(const LogicalQubit& qubit, const ChannelParams& params,
                                  FockCutoff cutoff);

/// Willie's state from the literal four-mode dilation (A1, A2, E1, E2) with
/// two beamsplitters and a partial trace. Small cutoffs only.
DensityOperator willie_state_dilation(const LogicalQubit& qubit, const ChannelParams& params,
                                      FockCutoff cutoff);

/// Willie's state after the engineered pipeline of `plan` (extra loss, or
/// amplifier plus loss, on each rail) followed by the channel.
DensityOperator engineered_willie_state(const EbPlan& plan, const ChannelParams& params,
                                        const LogicalQubit& qubit, FockCutoff cutoff);

/// Smallest cutoff N with ((G-1)/G)^N N <= 1e-12 for the amplifier stage.
int amplifier_cutoff(double gain);

// --- checks -----------------------------------------------------------------------

using ZetaPair = std::pair<std::complex<double>, std::complex<double>>;

/// Seeded pairs with |zeta_i| <= radius; the first pair is (0, 0).
std::vector<ZetaPair> sample_zetas(int count, double radius = 2.0,
                                   std::uint64_t seed = kOracleSeed);

std::vector<VerificationReport> verify_willie_state(const OracleGrid& grid);

std::vector<VerificationReport> verify_chi2(const OracleGrid& grid, int sampled_qubits = 10000,
                                            std::uint64_t seed = kOracleSeed);

std::vector<VerificationReport> verify_char_fn(const OracleGrid& grid,
                                               std::span<const ZetaPair> zetas);

std::vector<VerificationReport> verify_pinsker_and_detector(const ChannelParams& params,
                                                            const LogicalQubit& qubit,
                                                            std::span<const double> q_values,
                                                            FockCutoff cutoff);

/// qre_bound(q_max(delta, n)) against delta.
VerificationReport verify_qre_bound_inversion(const ChannelParams& params, double delta,
                                              std::span<const double> n_values);

std::vector<VerificationReport> verify_depolarizing_reduction(const OracleGrid& grid);

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate;
};

/// Integral over [0, 2 pi] of weight(theta) <bra| e^{z c^dag} e^{-z* c} |ket>,
/// z = r e^{i theta}, weight = 1 or e^{-i theta}.
QuadratureResult angular_integral(int bra, int ket, double r, bool phase_weight);

/// 2 pi L_m(r^2) pairing and vanishing off-diagonal pairings.
std::vector<VerificationReport> verify_laguerre_lemma5(int m_max, std::span<const double> r_grid);
/// e^{-i theta}-weighted integral: nonzero only for bra m, ket m-1, where it
/// equals 2 pi r sqrt(m) sum_k (-r^2)^k C(m-1, k) / (k! (k+1)).
std::vector<VerificationReport> verify_laguerre_lemma6(int m_max, std::span<const double> r_grid);

/// Closed form of the weighted integral for bra m, ket m - 1 (0 for m = 0).
double lemma6_closed(int m, double r);

struct EbCase {
  ChannelParams params;
  EbPlan plan;
  LogicalQubit qubit;
};

/// Engineered-pipeline characteristic function against the single-channel
/// closed form with effective parameters, plus the gain identity on a grid.
std::vector<VerificationReport> verify_eb_pipelines(std::span<const EbCase> cases,
                                                    std::span<const ZetaPair> zetas,
                                                    FockCutoff cutoff);

std::vector<EbCase> default_eb_cases();

/// Names accepted by run_suite, in execution order.
std::vector<std::string> suite_check_names();

struct SuiteOptions {
  std::vector<std::string> checks;         // empty: all
  std::vector<double> eta_override;        // replaces the grid channels when set
  std::vector<double> nbar_override;
  std::optional<int> cutoff;               // oracle cutoff override
};

/// Runs the selected checks on the default grid; reports ordered by check name
/// then sub-check.
std::vector<VerificationReport> run_suite(const SuiteOptions& options);

}  // namespace covq
