#pragma once

// Truncated Fock-space linear algebra. A multi-mode basis state |n_0 n_1 ...>
// is stored at index sum_i n_i (N+1)^(M-1-i): row-major in mode order, mode 0
// most significant.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "covq/channel.hpp"
#include "covq/errors.hpp"
#include "covq/logical_qubit.hpp"

namespace covq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Per-mode truncation: basis states |0> ... |max_photons>.
struct FockCutoff {
  int max_photons{20};

  int levels() const { return max_photons + 1; }
  friend bool operator==(FockCutoff, FockCutoff) = default;
};

inline constexpr int kDefaultCutoff = 20;

Eigen::Index fock_dimension(int num_modes, FockCutoff cutoff);
Eigen::Index fock_index(std::span<const int> occupations, FockCutoff cutoff);
std::vector<int> fock_occupations(Eigen::Index index, int num_modes, FockCutoff cutoff);

/// Hermitian, trace-one (up to `truncation_leak`) operator on a truncated
/// multi-mode Fock space. Construction checks shape, Hermiticity and trace;
/// positivity needs an eigendecomposition and is only checked by validate().
class DensityOperator {
 public:
  DensityOperator(int num_modes, FockCutoff cutoff, ComplexMatrix entries,
                  double truncation_leak = 0.0);

  int num_modes() const { return num_modes_; }
  FockCutoff cutoff() const { return cutoff_; }
  const ComplexMatrix& matrix() const { return entries_; }
  Eigen::Index dimension() const { return entries_.rows(); }
  double truncation_leak() const { return truncation_leak_; }
  Complex trace() const { return entries_.trace(); }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  /// Full invariant check: Hermitian (1e-12), eigenvalues >= -1e-10,
  /// trace in [1 - leak - 1e-12, 1 + 1e-12]. Throws Error.
  void validate() const;

 private:
  int num_modes_;
  FockCutoff cutoff_;
  ComplexMatrix entries_;
  double truncation_leak_;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// --- states ---------------------------------------------------------------

/// Thermal weight t_k(nbar) = nbar^k / (1 + nbar)^(k+1).
double thermal_weight(int k, double nbar);

DensityOperator thermal_state(double nbar, FockCutoff cutoff);
DensityOperator vacuum_state(int num_modes, FockCutoff cutoff);
DensityOperator fock_state(std::span<const int> occupations, FockCutoff cutoff);
DensityOperator dual_rail_density(const LogicalQubit& qubit, FockCutoff cutoff);

// --- structural operations ------------------------------------------------

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Partial trace of a raw operator (need not be Hermitian or positive).
ComplexMatrix partial_trace(const ComplexMatrix& op, int num_modes, FockCutoff cutoff,
                            std::span<const int> keep);
DensityOperator partial_trace(const DensityOperator& state, std::span<const int> keep);

/// Drops every basis state with more than `cutoff.max_photons` photons in
/// some mode; the discarded trace is added to the truncation leak.
DensityOperator truncate(const DensityOperator& state, FockCutoff cutoff);
ComplexMatrix truncate(const ComplexMatrix& op, int num_modes, FockCutoff from, FockCutoff to);

// --- unitaries ------------------------------------------------------------

/// Unitary that is block diagonal in a conserved quantity. Stored blockwise;
/// `dense()` materializes the full matrix.
class BlockUnitary {
 public:
  struct Block {
    std::vector<Eigen::Index> indices;
    ComplexMatrix matrix;
  };

  BlockUnitary(int num_modes, FockCutoff cutoff, std::vector<Block> blocks,
               double truncation_error);

  int num_modes() const { return num_modes_; }
  FockCutoff cutoff() const { return cutoff_; }
  Eigen::Index dimension() const { return dimension_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  /// Population the exact (untruncated) transform would push above the
  /// cutoff when acting on the vacuum. Zero for passive transforms.
  double truncation_error() const { return truncation_error_; }

  ComplexMatrix dense() const;

 private:
  int num_modes_;
  FockCutoff cutoff_;
  Eigen::Index dimension_;
  std::vector<Block> blocks_;
  double truncation_error_;
};

/// exp(theta (a^dag b - a b^dag)) with cos(theta) = sqrt(eta). In the
/// Heisenberg picture mode_a carries sqrt(eta) a + sqrt(1-eta) b (Bob's port)
/// and mode_b carries -(sqrt(1-eta) a - sqrt(eta) b), Willie's port up to a
/// parity that no photon-number-conserving observable can see.
BlockUnitary beamsplitter_unitary(double eta, int mode_a, int mode_b, int num_modes,
                                  FockCutoff cutoff);

/// Two-mode squeezer exp(r (a^dag b^dag - a b)) with cosh(r) = sqrt(gain):
/// a -> sqrt(G) a + sqrt(G-1) b^dag, the quantum-limited amplifier with idler b.
BlockUnitary two_mode_amplifier_unitary(double gain, int mode_a, int mode_b, int num_modes,
                                        FockCutoff cutoff);

ComplexMatrix apply_unitary(const BlockUnitary& unitary, const ComplexMatrix& op);
DensityOperator apply_unitary(const BlockUnitary& unitary, const DensityOperator& state);

// --- ladder operators and characteristic functions -------------------------

ComplexMatrix annihilation_operator(FockCutoff cutoff);

/// exp(M) for a nilpotent M, summed exactly as a finite power series.
ComplexMatrix nilpotent_exp(const ComplexMatrix& m);

/// Single-mode factor e^{-z* a} e^{z a^dag} of the anti-normally ordered
/// characteristic function, evaluated as e^{-|z|^2} e^{z a^dag} e^{-z* a}
/// from exact truncated exponentials of the ladder operators.
ComplexMatrix anti_normal_displacement(Complex zeta, FockCutoff cutoff);

struct CharFnValue {
  Complex value;
  double truncation_error;
  bool flagged;  // truncation_error > kCharFnTruncationTol
};

inline constexpr double kCharFnTruncationTol = 1e-6;

/// tr[rho prod_i e^{-z_i* a_i} e^{z_i a_i^dag}], one zeta per mode.
CharFnValue anti_normal_char_fn(const DensityOperator& state, std::span<const Complex> zetas);
CharFnValue anti_normal_char_fn(const DensityOperator& state, Complex zeta1, Complex zeta2);

// --- information quantities (base-2 logarithms) ----------------------------

/// (1/2) ||a - b||_1.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

/// D(a||b) = tr[a log2 a - a log2 b]. Throws rank_deficient if b is singular.
double qre(const DensityOperator& a, const DensityOperator& b);

/// tr[a^2 b^-1] - 1. Throws rank_deficient if b is singular.
double chi2_numeric(const DensityOperator& a, const DensityOperator& b);

namespace detail {
/// Natural-log relative entropy; the Pinsker and chi^2 covertness chain is
/// stated in nats.
double qre_nats(const DensityOperator& a, const DensityOperator& b);
}  // namespace detail

}  // namespace covq
