#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "llz/rng.hpp"
#include "llz/symmetry.hpp"
#include "llz/testfn.hpp"

namespace llz {

/// Eigenangles of one Haar-random matrix, sorted ascending in (-pi, pi].
struct EnsembleSample {
  Group group = Group::kU;
  int dimension = 0;
  std::vector<double> eigenangles;
};

/// Residuals measured while sampling, for invariant checks.
struct HaarDiagnostics {
  double orthonormality_residual = 0.0;  // max |Q*Q - I| entry
  double modulus_residual = 0.0;         // max ||lambda| - 1|
};

/// Throws InvalidParameter on M < 2 or a parity mismatch (SO(even)/Sp need
/// even M, SO(odd) odd M).
void check_dimension(Group g, int M);

/// Haar matrices. Sp(2N) is the compact group USp(2N) in its 2N x 2N complex
/// representation; `dimension` always means the matrix size.
Eigen::MatrixXcd haar_unitary(int M, CounterRng& rng);
Eigen::MatrixXd haar_orthogonal(int M, CounterRng& rng);
Eigen::MatrixXd haar_special_orthogonal(int M, CounterRng& rng);
Eigen::MatrixXcd haar_symplectic(int M, CounterRng& rng);

/// Samples a matrix and extracts its eigenangles with a general eigensolver.
EnsembleSample sample_haar(Group g, int M, CounterRng& rng, HaarDiagnostics* diag = nullptr);

/// cos(theta_j) for the M eigenangles of a fresh Haar sample, from the
/// Hermitian part (g + g*)/2. Cheaper than sample_haar and enough for any
/// even statistic.
std::vector<double> sample_eigen_cosines(Group g, int M, CounterRng& rng);

/// sum_j phi(theta_j M / (2 pi)).
double one_level_statistic(const EnsembleSample& sample, const TestFunction& phi);

/// Effective number of eigenangles per 2 pi used as the unfolding scale L:
/// M for U, M + 1 for Sp, M - 1 for the orthogonal groups (the forced
/// eigenvalues +-1 do not take part in the repulsion).
int effective_dimension(Group g, int M);

/// Periodized statistic sum_j sum_{m in Z} phi(L (theta_j / (2 pi) + m)),
/// evaluated on the Fourier side as
///   (1/L) [M phi_hat(0) + 2 sum_{k >= 1} phi_hat(k / L) sum_j cos(k theta_j)].
double periodized_statistic(std::span<const double> cosines, const TestFunction& phi, double L);

enum class RmtStatistic {
  kPeriodized,  // periodized_statistic at L = effective_dimension
  kDirect,      // one_level_statistic, phi(theta M / 2 pi)
};

struct DensityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// Monte Carlo mean of the one-level statistic over n_samples Haar draws.
/// Sample i uses the stream keyed by (seed, i, group), so the result does not
/// depend on `workers`.
DensityEstimate ensemble_density(Group g, int M, const TestFunction& phi, std::size_t n_samples,
                                 std::uint64_t seed, unsigned workers = 1,
                                 RmtStatistic statistic = RmtStatistic::kPeriodized);

/// Same draws, several test functions at once.
std::vector<DensityEstimate> ensemble_density(Group g, int M, std::span<const TestFunction> phis,
                                              std::size_t n_samples, std::uint64_t seed,
                                              unsigned workers = 1,
                                              RmtStatistic statistic = RmtStatistic::kPeriodized);

/// Per-sample results of one pass over the ensemble.
struct EnsembleRun {
  std::vector<std::vector<double>> statistics;  // [phi][sample], periodized
  std::vector<double> near_zero;                // [sample], as in ensemble_density_near_zero
};

/// Evaluates every phi and the near-zero count on the same draws as
/// ensemble_density, keeping the per-sample values in sample order.
EnsembleRun ensemble_run(Group g, int M, std::span<const TestFunction> phis, std::size_t n_samples,
                         std::uint64_t seed, unsigned workers = 1, double near_zero_radius = 0.1);

/// Mean number of unfolded angles |theta| L / (2 pi) < radius, divided by
/// 2 radius: the empirical density of W_G near 0, atoms included.
DensityEstimate ensemble_density_near_zero(Group g, int M, double radius, std::size_t n_samples,
                                           std::uint64_t seed, unsigned workers = 1);

}  // namespace llz
