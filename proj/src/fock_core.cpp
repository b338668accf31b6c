#include "covq/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace covq {

namespace {

void require_modes(int num_modes) {
  require(num_modes >= 1, ErrorKind::domain, "number of modes must be positive");
}

void require_cutoff(FockCutoff cutoff) {
  require(cutoff.max_photons >= 0, ErrorKind::domain, "Fock cutoff must be non-negative");
}

void require_single_photon(FockCutoff cutoff, const char* what) {
  require(cutoff.max_photons >= 1, ErrorKind::domain,
          std::string(what) + " needs a cutoff of at least one photon per mode");
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0.0)) return false;
  return true;
}

// Eigenvalues of a Hermitian operator with the PSD check applied.
Eigen::VectorXd checked_spectrum(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& solver,
                                 const char* which) {
  require(solver.info() == Eigen::Success, ErrorKind::not_positive_semidefinite,
          std::string("eigendecomposition of ") + which + " failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();
  require(evals.size() == 0 || evals.minCoeff() >= -kPsdTol, ErrorKind::not_positive_semidefinite,
          std::string(which) + " has an eigenvalue below -1e-10");
  return evals;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_same_space(const DensityOperator& a, const DensityOperator& b) {
  require(a.num_modes() == b.num_modes() && a.cutoff() == b.cutoff(), ErrorKind::domain,
          "operators live on different truncated spaces");
}

// Spectrum of the second argument of a divergence; zero eigenvalues make it
// undefined on the truncated support.
void require_full_rank(double eigenvalue) {
  require(eigenvalue > 0.0, ErrorKind::rank_deficient,
          "reference state is singular on the truncated support");
}

std::vector<int> sorted_modes(std::span<const int> keep, int num_modes) {
  std::vector<int> modes(keep.begin(), keep.end());
  require(!modes.empty(), ErrorKind::domain, "partial trace needs at least one kept mode");
  std::sort(modes.begin(), modes.end());
  require(std::adjacent_find(modes.begin(), modes.end()) == modes.end(), ErrorKind::domain,
          "kept modes must be distinct");
  require(modes.front() >= 0 && modes.back() < num_modes, ErrorKind::domain,
          "kept mode index out of range");
  return modes;
}

// Index of the basis vector obtained by placing `sub` occupations on `modes`
// and `rest` occupations on the complement, both in ascending mode order.
Eigen::Index merge_index(int num_modes, int levels, const std::vector<int>& modes,
                         Eigen::Index sub, Eigen::Index rest) {
  std::vector<int> occ(num_modes);
  std::vector<bool> kept(num_modes, false);
  for (int m : modes) kept[m] = true;
  for (int m = num_modes - 1; m >= 0; --m) {
    if (kept[m]) {
      occ[m] = static_cast<int>(sub % levels);
      sub /= levels;
    } else {
      occ[m] = static_cast<int>(rest % levels);
      rest /= levels;
    }
  }
  Eigen::Index idx = 0;
  for (int m = 0; m < num_modes; ++m) idx = idx * levels + occ[m];
  return idx;
}

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// exp(G) for a real antisymmetric generator via the spectrum of iG.
ComplexMatrix exp_antihermitian(const ComplexMatrix& generator) {
  if (generator.rows() == 0) return generator;
  const ComplexMatrix h = Complex(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  require(solver.info() == Eigen::Success, ErrorKind::domain,
          "generator eigendecomposition failed");
  const Eigen::VectorXcd phases =
      (solver.eigenvalues().cast<Complex>() * Complex(0.0, -1.0)).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// Lifts the invariant two-mode blocks of a gate on (mode_a, mode_b) to the
// full space, one copy per spectator configuration. Each entry of
// `block_members` lists the (na, nb) pairs of a block in generator order.
template <typename BlockGenerator>
std::vector<BlockUnitary::Block> lift_two_mode_blocks(
    int mode_a, int mode_b, int num_modes, FockCutoff cutoff,
    const std::vector<std::vector<std::pair<int, int>>>& block_members,
    BlockGenerator&& make_block) {
  const int levels = cutoff.levels();
  const int spectators = num_modes - 2;
  const Eigen::Index spectator_count = ipow(levels, spectators);
  std::vector<int> pair_modes{std::min(mode_a, mode_b), std::max(mode_a, mode_b)};
  const bool swapped = mode_a > mode_b;

  std::vector<BlockUnitary::Block> blocks;
  blocks.reserve(block_members.size() * static_cast<std::size_t>(spectator_count));
  for (const auto& members : block_members) {
    const ComplexMatrix local = make_block(members);
    for (Eigen::Index s = 0; s < spectator_count; ++s) {
      BlockUnitary::Block block;
      block.matrix = local;
      block.indices.reserve(members.size());
      for (auto [na, nb] : members) {
        const Eigen::Index sub = swapped ? Eigen::Index(nb) * levels + na
                                         : Eigen::Index(na) * levels + nb;
        block.indices.push_back(merge_index(num_modes, levels, pair_modes, sub, s));
      }
      blocks.push_back(std::move(block));
    }
  }
  return blocks;
}

void require_mode_pair(int mode_a, int mode_b, int num_modes) {
  require_modes(num_modes);
  require(num_modes >= 2, ErrorKind::domain, "two-mode gate needs at least two modes");
  require(mode_a >= 0 && mode_a < num_modes && mode_b >= 0 && mode_b < num_modes &&
              mode_a != mode_b,
          ErrorKind::domain, "gate modes must be distinct valid indices");
}

}  // namespace

// --- indexing ---------------------------------------------------------------

Eigen::Index fock_dimension(int num_modes, FockCutoff cutoff) {
  require_modes(num_modes);
  require_cutoff(cutoff);
  return ipow(cutoff.levels(), num_modes);
}

Eigen::Index fock_index(std::span<const int> occupations, FockCutoff cutoff) {
  require_cutoff(cutoff);
  Eigen::Index idx = 0;
  for (int n : occupations) {
    require(n >= 0 && n <= cutoff.max_photons, ErrorKind::truncation,
            "occupation exceeds the Fock cutoff");
    idx = idx * cutoff.levels() + n;
  }
  return idx;
}

std::vector<int> fock_occupations(Eigen::Index index, int num_modes, FockCutoff cutoff) {
  require(index >= 0 && index < fock_dimension(num_modes, cutoff), ErrorKind::domain,
          "Fock index out of range");
  std::vector<int> occ(num_modes);
  for (int m = num_modes - 1; m >= 0; --m) {
    occ[m] = static_cast<int>(index % cutoff.levels());
    index /= cutoff.levels();
  }
  return occ;
}

// --- DensityOperator ----------------------------------------------------------

DensityOperator::DensityOperator(int num_modes, FockCutoff cutoff, ComplexMatrix entries,
                                 double truncation_leak)
    : num_modes_(num_modes),
      cutoff_(cutoff),
      entries_(std::move(entries)),
      truncation_leak_(truncation_leak) {
  const Eigen::Index dim = fock_dimension(num_modes, cutoff);
  require(entries_.rows() == dim && entries_.cols() == dim, ErrorKind::domain,
          "density matrix dimension does not match modes and cutoff");
  require(std::isfinite(truncation_leak_) && truncation_leak_ >= 0.0 && truncation_leak_ <= 1.0,
          ErrorKind::domain, "truncation leak must lie in [0, 1]");
  require(entries_.allFinite(), ErrorKind::domain, "density matrix has non-finite entries");
  require(hermitian_defect(entries_) <= kHermitianTol, ErrorKind::domain,
          "density matrix is not Hermitian");
  const Complex tr = entries_.trace();
  require(std::abs(tr.imag()) <= kHermitianTol && tr.real() <= 1.0 + kHermitianTol &&
              tr.real() >= 1.0 - truncation_leak_ - kHermitianTol,
          ErrorKind::truncation, "density matrix trace outside [1 - leak, 1]");
}

void DensityOperator::validate() const {
  require(hermitian_defect(entries_) <= kHermitianTol, ErrorKind::domain,
          "density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  checked_spectrum(solver, "density matrix");
  const Complex tr = entries_.trace();
  require(tr.real() <= 1.0 + kHermitianTol &&
              tr.real() >= 1.0 - truncation_leak_ - kHermitianTol,
          ErrorKind::truncation, "density matrix trace outside [1 - leak, 1]");
}

// --- states -------------------------------------------------------------------

double thermal_weight(int k, double nbar) {
  require(std::isfinite(nbar) && nbar >= 0.0, ErrorKind::domain,
          "thermal mean photon number must be finite and >= 0");
  if (k < 0) return 0.0;
  if (nbar == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::pow(nbar / (1.0 + nbar), k) / (1.0 + nbar);
}

DensityOperator thermal_state(double nbar, FockCutoff cutoff) {
  require_cutoff(cutoff);
  require(std::isfinite(nbar) && nbar >= 0.0, ErrorKind::domain,
          "thermal mean photon number must be finite and >= 0");
  Eigen::VectorXd diag(cutoff.levels());
  for (int k = 0; k <= cutoff.max_photons; ++k) diag(k) = thermal_weight(k, nbar);
  // Closed-form tail: the weights beyond N sum to (nbar / (1 + nbar))^(N+1).
  const double leak = nbar == 0.0 ? 0.0 : std::pow(nbar / (1.0 + nbar), cutoff.levels());
  return {1, cutoff, diag.cast<Complex>().asDiagonal().toDenseMatrix(), leak};
}

DensityOperator vacuum_state(int num_modes, FockCutoff cutoff) {
  const Eigen::Index dim = fock_dimension(num_modes, cutoff);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(0, 0) = 1.0;
  return {num_modes, cutoff, std::move(m)};
}

DensityOperator fock_state(std::span<const int> occupations, FockCutoff cutoff) {
  const int modes = static_cast<int>(occupations.size());
  const Eigen::Index dim = fock_dimension(modes, cutoff);
  const Eigen::Index idx = fock_index(occupations, cutoff);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(idx, idx) = 1.0;
  return {modes, cutoff, std::move(m)};
}

DensityOperator dual_rail_density(const LogicalQubit& qubit, FockCutoff cutoff) {
  require_cutoff(cutoff);
  require_single_photon(cutoff, "dual-rail encoding");
  qubit.validate();
  const int zero_l[] = {0, 1};
  const int one_l[] = {1, 0};
  const Eigen::Index i01 = fock_index(zero_l, cutoff);
  const Eigen::Index i10 = fock_index(one_l, cutoff);
  const Eigen::Index dim = fock_dimension(2, cutoff);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i01, i01) = qubit.alpha_sq;
  m(i10, i10) = qubit.beta_sq;
  m(i01, i10) = qubit.gamma;
  m(i10, i01) = std::conj(qubit.gamma);
  return {2, cutoff, std::move(m)};
}

// --- structural operations ------------------------------------------------------

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  require(a.cutoff() == b.cutoff(), ErrorKind::domain, "tensor factors need the same cutoff");
  // Missing mass of a product of sub-normalized factors.
  const double kept = (1.0 - a.truncation_leak()) * (1.0 - b.truncation_leak());
  return {a.num_modes() + b.num_modes(), a.cutoff(), kronecker(a.matrix(), b.matrix()),
          std::clamp(1.0 - kept, 0.0, 1.0)};
}

ComplexMatrix partial_trace(const ComplexMatrix& op, int num_modes, FockCutoff cutoff,
                            std::span<const int> keep) {
  const Eigen::Index dim = fock_dimension(num_modes, cutoff);
  require(op.rows() == dim && op.cols() == dim, ErrorKind::domain,
          "operator dimension does not match modes and cutoff");
  const std::vector<int> modes = sorted_modes(keep, num_modes);
  const int levels = cutoff.levels();
  const Eigen::Index kept_dim = ipow(levels, static_cast<int>(modes.size()));
  const Eigen::Index traced_dim = dim / kept_dim;

  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> full(kept_dim, traced_dim);
  for (Eigen::Index k = 0; k < kept_dim; ++k)
    for (Eigen::Index t = 0; t < traced_dim; ++t)
      full(k, t) = merge_index(num_modes, levels, modes, k, t);

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index c = 0; c < kept_dim; ++c)
    for (Eigen::Index r = 0; r < kept_dim; ++r) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < traced_dim; ++t) acc += op(full(r, t), full(c, t));
      out(r, c) = acc;
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& state, std::span<const int> keep) {
  ComplexMatrix reduced = partial_trace(state.matrix(), state.num_modes(), state.cutoff(), keep);
  return {static_cast<int>(keep.size()), state.cutoff(), std::move(reduced),
          state.truncation_leak()};
}

ComplexMatrix truncate(const ComplexMatrix& op, int num_modes, FockCutoff from, FockCutoff to) {
  require(to.max_photons >= 0 && to.max_photons <= from.max_photons, ErrorKind::domain,
          "truncation target cutoff must not exceed the source cutoff");
  const Eigen::Index dim = fock_dimension(num_modes, from);
  require(op.rows() == dim && op.cols() == dim, ErrorKind::domain,
          "operator dimension does not match modes and cutoff");
  std::vector<Eigen::Index> kept;
  kept.reserve(static_cast<std::size_t>(fock_dimension(num_modes, to)));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto occ = fock_occupations(i, num_modes, from);
    if (std::all_of(occ.begin(), occ.end(), [&](int n) { return n <= to.max_photons; }))
      kept.push_back(i);
  }
  return op(kept, kept);
}

DensityOperator truncate(const DensityOperator& state, FockCutoff cutoff) {
  ComplexMatrix kept = truncate(state.matrix(), state.num_modes(), state.cutoff(), cutoff);
  const double dropped = state.trace().real() - kept.trace().real();
  const double leak = std::clamp(state.truncation_leak() + std::max(dropped, 0.0), 0.0, 1.0);
  return {state.num_modes(), cutoff, std::move(kept), leak};
}

// --- unitaries -------------------------------------------------------------------

BlockUnitary::BlockUnitary(int num_modes, FockCutoff cutoff, std::vector<Block> blocks,
                           double truncation_error)
    : num_modes_(num_modes),
      cutoff_(cutoff),
      dimension_(fock_dimension(num_modes, cutoff)),
      blocks_(std::move(blocks)),
      truncation_error_(truncation_error) {
  std::vector<bool> seen(static_cast<std::size_t>(dimension_), false);
  for (const auto& b : blocks_) {
    require(b.matrix.rows() == static_cast<Eigen::Index>(b.indices.size()) &&
                b.matrix.cols() == b.matrix.rows(),
            ErrorKind::domain, "block matrix does not match its index set");
    for (Eigen::Index i : b.indices) {
      require(i >= 0 && i < dimension_ && !seen[static_cast<std::size_t>(i)], ErrorKind::domain,
              "blocks must partition the basis");
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  require(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }), ErrorKind::domain,
          "blocks must partition the basis");
}

ComplexMatrix BlockUnitary::dense() const {
  ComplexMatrix u = ComplexMatrix::Zero(dimension_, dimension_);
  for (const auto& b : blocks_) u(b.indices, b.indices) = b.matrix;
  return u;
}

BlockUnitary beamsplitter_unitary(double eta, int mode_a, int mode_b, int num_modes,
                                  FockCutoff cutoff) {
  require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, ErrorKind::domain,
          "beamsplitter transmittance must lie in [0, 1]");
  require_mode_pair(mode_a, mode_b, num_modes);
  require_single_photon(cutoff, "beamsplitter");
  const int n_max = cutoff.max_photons;
  const double theta = std::acos(std::sqrt(eta));

  // Fixed total photon number n = na + nb.
  std::vector<std::vector<std::pair<int, int>>> members;
  for (int n = 0; n <= 2 * n_max; ++n) {
    std::vector<std::pair<int, int>> block;
    for (int na = std::max(0, n - n_max); na <= std::min(n, n_max); ++na)
      block.emplace_back(na, n - na);
    members.push_back(std::move(block));
  }

  auto make = [&](const std::vector<std::pair<int, int>>& block) {
    const auto size = static_cast<Eigen::Index>(block.size());
    ComplexMatrix gen = ComplexMatrix::Zero(size, size);
    // a^dag b |na, nb> = sqrt((na+1) nb) |na+1, nb-1>; members are ordered by na.
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
      const auto [na, nb] = block[static_cast<std::size_t>(i)];
      const double amp = theta * std::sqrt(double(na + 1) * double(nb));
      gen(i + 1, i) += amp;
      gen(i, i + 1) -= amp;
    }
    if (eta == 1.0) return ComplexMatrix::Identity(size, size).eval();
    return exp_antihermitian(gen);
  };
  return {num_modes, cutoff, lift_two_mode_blocks(mode_a, mode_b, num_modes, cutoff, members, make),
          0.0};
}

BlockUnitary two_mode_amplifier_unitary(double gain, int mode_a, int mode_b, int num_modes,
                                        FockCutoff cutoff) {
  require(std::isfinite(gain) && gain >= 1.0, ErrorKind::domain, "amplifier gain must be >= 1");
  require_mode_pair(mode_a, mode_b, num_modes);
  require_single_photon(cutoff, "amplifier");
  const int n_max = cutoff.max_photons;
  const double r = std::acosh(std::sqrt(gain));

  // Fixed difference d = na - nb.
  std::vector<std::vector<std::pair<int, int>>> members;
  for (int d = -n_max; d <= n_max; ++d) {
    std::vector<std::pair<int, int>> block;
    for (int nb = std::max(0, -d); nb + d <= n_max && nb <= n_max; ++nb)
      block.emplace_back(nb + d, nb);
    members.push_back(std::move(block));
  }

  auto make = [&](const std::vector<std::pair<int, int>>& block) {
    const auto size = static_cast<Eigen::Index>(block.size());
    ComplexMatrix gen = ComplexMatrix::Zero(size, size);
    // a^dag b^dag |na, nb> = sqrt((na+1)(nb+1)) |na+1, nb+1>.
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
      const auto [na, nb] = block[static_cast<std::size_t>(i)];
      const double amp = r * std::sqrt(double(na + 1) * double(nb + 1));
      gen(i + 1, i) += amp;
      gen(i, i + 1) -= amp;
    }
    if (gain == 1.0) return ComplexMatrix::Identity(size, size).eval();
    return exp_antihermitian(gen);
  };
  // Two-mode squeezed vacuum has weights (1/G)((G-1)/G)^k; mass beyond N is lost.
  const double leak = std::pow((gain - 1.0) / gain, n_max + 1);
  return {num_modes, cutoff, lift_two_mode_blocks(mode_a, mode_b, num_modes, cutoff, members, make),
          leak};
}

ComplexMatrix apply_unitary(const BlockUnitary& unitary, const ComplexMatrix& op) {
  require(op.rows() == unitary.dimension() && op.cols() == unitary.dimension(), ErrorKind::domain,
          "operator dimension does not match the unitary");
  const auto& blocks = unitary.blocks();
  ComplexMatrix out = ComplexMatrix::Zero(op.rows(), op.cols());
  for (const auto& row : blocks) {
    for (const auto& col : blocks) {
      const ComplexMatrix sub = op(row.indices, col.indices);
      if (sub.isZero(0.0)) continue;
      out(row.indices, col.indices) = row.matrix * sub * col.matrix.adjoint();
    }
  }
  return out;
}

DensityOperator apply_unitary(const BlockUnitary& unitary, const DensityOperator& state) {
  require(unitary.num_modes() == state.num_modes() && unitary.cutoff() == state.cutoff(),
          ErrorKind::domain, "unitary and state live on different truncated spaces");
  ComplexMatrix out = apply_unitary(unitary, state.matrix());
  // Re-symmetrize rounding so the Hermiticity invariant is exact.
  out = (0.5 * (out + out.adjoint())).eval();
  const double leak = std::clamp(state.truncation_leak() + unitary.truncation_error(), 0.0, 1.0);
  return {state.num_modes(), state.cutoff(), std::move(out), leak};
}

// --- characteristic functions -------------------------------------------------------

ComplexMatrix annihilation_operator(FockCutoff cutoff) {
  require_cutoff(cutoff);
  ComplexMatrix a = ComplexMatrix::Zero(cutoff.levels(), cutoff.levels());
  for (int n = 1; n <= cutoff.max_photons; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

ComplexMatrix nilpotent_exp(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), ErrorKind::domain, "matrix exponential needs a square matrix");
  ComplexMatrix sum = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix term = sum;
  for (Eigen::Index k = 1; k <= m.rows(); ++k) {
    term = (term * m / double(k)).eval();
    if (term.isZero(0.0)) return sum;
    sum += term;
  }
  require(term.isZero(0.0), ErrorKind::domain, "matrix is not nilpotent");
  return sum;
}

ComplexMatrix anti_normal_displacement(Complex zeta, FockCutoff cutoff) {
  const ComplexMatrix a = annihilation_operator(cutoff);
  // Creation powers never leave the truncated space before annihilation acts,
  // so every matrix element below is exact.
  return std::exp(-std::norm(zeta)) * nilpotent_exp(zeta * a.adjoint()) *
         nilpotent_exp(-std::conj(zeta) * a);
}

CharFnValue anti_normal_char_fn(const DensityOperator& state, std::span<const Complex> zetas) {
  require(static_cast<int>(zetas.size()) == state.num_modes(), ErrorKind::domain,
          "need one zeta per mode");
  ComplexMatrix op = ComplexMatrix::Identity(1, 1);
  double op_norm = 1.0;
  for (Complex z : zetas) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::domain,
            "zeta must be finite");
    op = kronecker(op, anti_normal_displacement(z, state.cutoff()));
    // The untruncated operator is e^{-|z|^2/2} D(z), of operator norm e^{-|z|^2/2}.
    op_norm *= std::exp(-0.5 * std::norm(z));
  }
  const ComplexMatrix& rho = state.matrix();
  const ComplexMatrix terms = rho.cwiseProduct(op.transpose());
  const Complex value = terms.sum();
  // Missing-tail bound (diagonal tail plus coherences to it) and the
  // cancellation error of summing large alternating terms.
  const double leak = state.truncation_leak();
  const double error = (leak + 2.0 * std::sqrt(leak)) * op_norm +
                       64.0 * std::numeric_limits<double>::epsilon() * terms.cwiseAbs().sum();
  return {value, error, error > kCharFnTruncationTol};
}

CharFnValue anti_normal_char_fn(const DensityOperator& state, Complex zeta1, Complex zeta2) {
  const Complex zetas[] = {zeta1, zeta2};
  return anti_normal_char_fn(state, zetas);
}

// --- information quantities ---------------------------------------------------------

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  require_same_space(a, b);
  const ComplexMatrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorKind::domain, "eigendecomposition failed");
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

namespace detail {

double qre_nats(const DensityOperator& a, const DensityOperator& b) {
  require_same_space(a, b);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> sa(a.matrix());
  const Eigen::VectorXd la = checked_spectrum(sa, "first argument");
  double entropy_term = 0.0;
  for (Eigen::Index i = 0; i < la.size(); ++i) entropy_term += xlogx(la(i));

  double cross_term = 0.0;
  const ComplexMatrix& bm = b.matrix();
  if (is_diagonal(bm)) {
    // tr[a log b] only needs the diagonal of a; avoids resolving tiny
    // eigenvalues of b through a dense solver.
    for (Eigen::Index j = 0; j < bm.rows(); ++j) {
      const double bj = bm(j, j).real();
      require(bj >= -kPsdTol, ErrorKind::not_positive_semidefinite,
              "second argument has an eigenvalue below -1e-10");
      require_full_rank(bj);
      cross_term += a.matrix()(j, j).real() * std::log(bj);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> sb(bm);
    const Eigen::VectorXd lb = checked_spectrum(sb, "second argument");
    const Eigen::VectorXd weights =
        (sb.eigenvectors().adjoint() * a.matrix() * sb.eigenvectors()).diagonal().real();
    for (Eigen::Index j = 0; j < lb.size(); ++j) {
      require_full_rank(lb(j));
      cross_term += weights(j) * std::log(lb(j));
    }
  }
  return entropy_term - cross_term;
}

}  // namespace detail

double qre(const DensityOperator& a, const DensityOperator& b) {
  return detail::qre_nats(a, b) / std::log(2.0);
}

double chi2_numeric(const DensityOperator& a, const DensityOperator& b) {
  require_same_space(a, b);
  const ComplexMatrix& am = a.matrix();
  const ComplexMatrix& bm = b.matrix();
  double total = 0.0;
  if (is_diagonal(bm)) {
    // tr[a^2 b^-1] = sum_j ||a e_j||^2 / b_jj for Hermitian a.
    for (Eigen::Index j = 0; j < bm.rows(); ++j) {
      const double bj = bm(j, j).real();
      require(bj >= -kPsdTol, ErrorKind::not_positive_semidefinite,
              "second argument has an eigenvalue below -1e-10");
      require_full_rank(bj);
      total += am.col(j).squaredNorm() / bj;
    }
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> sb(bm);
    const Eigen::VectorXd lb = checked_spectrum(sb, "second argument");
    const ComplexMatrix av = am * sb.eigenvectors();
    for (Eigen::Index j = 0; j < lb.size(); ++j) {
      require_full_rank(lb(j));
      total += av.col(j).squaredNorm() / lb(j);
    }
  }
  return total - 1.0;
}

}  // namespace covq
