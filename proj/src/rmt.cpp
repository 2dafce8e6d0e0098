#include "llz/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "llz/accumulator.hpp"
#include "llz/errors.hpp"
#include "llz/parallel.hpp"

namespace llz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t group_tag(Group g) { return 0x4d00 + static_cast<std::uint64_t>(g); }

double unit_phase_fix(double x) { return x < 0.0 ? -1.0 : 1.0; }

std::complex<double> unit_phase_fix(std::complex<double> z) {
  const double r = std::abs(z);
  return r == 0.0 ? std::complex<double>(1.0, 0.0) : z / r;
}

template <class Matrix>
double orthonormality_residual(const Matrix& Q) {
  const auto n = Q.cols();
  return (Q.adjoint() * Q - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

// Q from the QR factorization with the diagonal of R made positive.
template <class Matrix>
Matrix haar_from_gaussian(const Matrix& Z) {
  Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ();
  const auto& R = qr.matrixQR();
  for (Eigen::Index j = 0; j < Q.cols(); ++j) Q.col(j) *= unit_phase_fix(R(j, j));
  return Q;
}

double normalized_angle(std::complex<double> z) {
  const double a = std::atan2(z.imag(), z.real());
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

}  // namespace

void check_dimension(Group g, int M) {
  if (M < 2) throw InvalidParameter("matrix dimension must be >= 2, got " + std::to_string(M));
  const bool even = M % 2 == 0;
  if ((g == Group::kSOeven || g == Group::kSp) && !even)
    throw InvalidParameter(std::string(to_string(g)) + " needs an even dimension, got " +
                           std::to_string(M));
  if (g == Group::kSOodd && even)
    throw InvalidParameter("SO(odd) needs an odd dimension, got " + std::to_string(M));
}

Eigen::MatrixXcd haar_unitary(int M, CounterRng& rng) {
  Eigen::MatrixXcd Z(M, M);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) Z(i, j) = {s * rng.normal(), s * rng.normal()};
  return haar_from_gaussian(Z);
}

Eigen::MatrixXd haar_orthogonal(int M, CounterRng& rng) {
  Eigen::MatrixXd Z(M, M);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) Z(i, j) = rng.normal();
  return haar_from_gaussian(Z);
}

Eigen::MatrixXd haar_special_orthogonal(int M, CounterRng& rng) {
  Eigen::MatrixXd Q = haar_orthogonal(M, rng);
  // Right multiplication by diag(-1, 1, ..., 1) maps the det -1 coset onto SO(M).
  if (Q.determinant() < 0.0) Q.col(0) *= -1.0;
  return Q;
}

Eigen::MatrixXcd haar_symplectic(int M, CounterRng& rng) {
  if (M % 2) throw InvalidParameter("symplectic dimension must be even");
  const int N = M / 2;
  // T(v) = -J conj(v) with J = [[0, I], [-I, 0]]; u and T(u) are orthogonal
  // for every u, and [u_1..u_N, T(u_1)..T(u_N)] is unitary symplectic.
  auto T = [N](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd w(2 * N);
    w.head(N) = -v.tail(N).conjugate();
    w.tail(N) = v.head(N).conjugate();
    return w;
  };
  Eigen::MatrixXcd Q(M, M);
  const double s = std::sqrt(0.5);
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXcd v(M);
    for (int r = 0; r < M; ++r) v(r) = {s * rng.normal(), s * rng.normal()};
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        v -= Q.col(j) * Q.col(j).dot(v);
        v -= Q.col(N + j) * Q.col(N + j).dot(v);
      }
    }
    v.normalize();
    Q.col(i) = v;
    Q.col(N + i) = T(v);
  }
  return Q;
}

EnsembleSample sample_haar(Group g, int M, CounterRng& rng, HaarDiagnostics* diag) {
  check_dimension(g, M);
  Eigen::VectorXcd eig;
  double ortho = 0.0;
  if (g == Group::kU || g == Group::kSp) {
    const Eigen::MatrixXcd Q = g == Group::kU ? haar_unitary(M, rng) : haar_symplectic(M, rng);
    ortho = orthonormality_residual(Q);
    eig = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(Q, false).eigenvalues();
  } else {
    const Eigen::MatrixXd Q = g == Group::kO ? haar_orthogonal(M, rng) : haar_special_orthogonal(M, rng);
    ortho = orthonormality_residual(Q);
    eig = Eigen::EigenSolver<Eigen::MatrixXd>(Q, false).eigenvalues();
  }
  EnsembleSample out{g, M, {}};
  out.eigenangles.reserve(static_cast<std::size_t>(M));
  double modulus = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    modulus = std::max(modulus, std::abs(std::abs(eig(i)) - 1.0));
    out.eigenangles.push_back(normalized_angle(eig(i)));
  }
  std::sort(out.eigenangles.begin(), out.eigenangles.end());
  if (diag) *diag = {ortho, modulus};
  return out;
}

std::vector<double> sample_eigen_cosines(Group g, int M, CounterRng& rng) {
  check_dimension(g, M);
  Eigen::VectorXd ev;
  if (g == Group::kU || g == Group::kSp) {
    const Eigen::MatrixXcd Q = g == Group::kU ? haar_unitary(M, rng) : haar_symplectic(M, rng);
    const Eigen::MatrixXcd H = 0.5 * (Q + Q.adjoint());
    ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H, Eigen::EigenvaluesOnly).eigenvalues();
  } else {
    const Eigen::MatrixXd Q = g == Group::kO ? haar_orthogonal(M, rng) : haar_special_orthogonal(M, rng);
    const Eigen::MatrixXd H = 0.5 * (Q + Q.transpose());
    ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
  }
  std::vector<double> out(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) out[static_cast<std::size_t>(i)] = std::clamp(ev(i), -1.0, 1.0);
  return out;
}

double one_level_statistic(const EnsembleSample& sample, const TestFunction& phi) {
  const double scale = static_cast<double>(sample.dimension) / kTwoPi;
  double acc = 0.0;
  for (double t : sample.eigenangles) acc += phi.eval(t * scale);
  return acc;
}

int effective_dimension(Group g, int M) {
  switch (g) {
    case Group::kU: return M;
    case Group::kSp: return M + 1;
    default: return M - 1;
  }
}

double periodized_statistic(std::span<const double> cosines, const TestFunction& phi, double L) {
  if (!(L > 0.0)) throw InvalidParameter("unfolding scale must be positive");
  const auto k_max = static_cast<long>(std::ceil(phi.support() * L));
  std::vector<double> t_prev(cosines.size(), 1.0);
  std::vector<double> t_cur(cosines.begin(), cosines.end());
  double acc = static_cast<double>(cosines.size()) * phi.eval_hat(0.0);
  for (long k = 1; k <= k_max; ++k) {
    const double w = phi.eval_hat(static_cast<double>(k) / L);
    if (w != 0.0) {
      double s = 0.0;
      for (double v : t_cur) s += v;
      acc += 2.0 * w * s;
    }
    // Chebyshev step: cos((k+1) t) = 2 cos t cos(k t) - cos((k-1) t).
    for (std::size_t j = 0; j < cosines.size(); ++j) {
      const double next = 2.0 * cosines[j] * t_cur[j] - t_prev[j];
      t_prev[j] = t_cur[j];
      t_cur[j] = next;
    }
  }
  return acc / L;
}

std::vector<DensityEstimate> ensemble_density(Group g, int M, std::span<const TestFunction> phis,
                                              std::size_t n_samples, std::uint64_t seed,
                                              unsigned workers, RmtStatistic statistic) {
  check_dimension(g, M);
  if (n_samples < 100) throw InvalidParameter("ensemble_density needs at least 100 samples");
  const double L = effective_dimension(g, M);
  const std::vector<MonteCarloAccumulator> init(phis.size(), MonteCarloAccumulator(2));
  auto fold = [&](std::vector<MonteCarloAccumulator>& acc, std::size_t i) {
    CounterRng rng(seed, i, group_tag(g));
    if (statistic == RmtStatistic::kPeriodized) {
      const auto c = sample_eigen_cosines(g, M, rng);
      for (std::size_t f = 0; f < phis.size(); ++f) acc[f].add(periodized_statistic(c, phis[f], L));
    } else {
      const auto s = sample_haar(g, M, rng);
      for (std::size_t f = 0; f < phis.size(); ++f) acc[f].add(one_level_statistic(s, phis[f]));
    }
  };
  auto merge = [](std::vector<MonteCarloAccumulator>& a, const std::vector<MonteCarloAccumulator>& b) {
    for (std::size_t f = 0; f < a.size(); ++f) a[f].merge(b[f]);
  };
  const auto acc = parallel_reduce(n_samples, workers, init, fold, merge);
  std::vector<DensityEstimate> out;
  for (const auto& a : acc) out.push_back({a.mean(), a.std_error(), a.count()});
  return out;
}

DensityEstimate ensemble_density(Group g, int M, const TestFunction& phi, std::size_t n_samples,
                                 std::uint64_t seed, unsigned workers, RmtStatistic statistic) {
  return ensemble_density(g, M, std::span<const TestFunction>(&phi, 1), n_samples, seed, workers,
                          statistic)
      .front();
}

EnsembleRun ensemble_run(Group g, int M, std::span<const TestFunction> phis, std::size_t n_samples,
                         std::uint64_t seed, unsigned workers, double near_zero_radius) {
  check_dimension(g, M);
  if (!(near_zero_radius > 0.0)) throw InvalidParameter("radius must be positive");
  const double L = effective_dimension(g, M);
  const double cut = kTwoPi * near_zero_radius / L;
  EnsembleRun run;
  run.statistics.assign(phis.size(), std::vector<double>(n_samples));
  run.near_zero.resize(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    CounterRng rng(seed, i, group_tag(g));
    const auto c = sample_eigen_cosines(g, M, rng);
    for (std::size_t f = 0; f < phis.size(); ++f) run.statistics[f][i] = periodized_statistic(c, phis[f], L);
    std::size_t n = 0;
    for (double v : c) n += std::acos(v) < cut;
    run.near_zero[i] = static_cast<double>(n) / (2.0 * near_zero_radius);
  });
  return run;
}

DensityEstimate ensemble_density_near_zero(Group g, int M, double radius, std::size_t n_samples,
                                           std::uint64_t seed, unsigned workers) {
  check_dimension(g, M);
  if (!(radius > 0.0)) throw InvalidParameter("radius must be positive");
  if (n_samples < 100) throw InvalidParameter("need at least 100 samples");
  const double L = effective_dimension(g, M);
  const double cut = kTwoPi * radius / L;
  auto fold = [&](MonteCarloAccumulator& acc, std::size_t i) {
    CounterRng rng(seed, i, group_tag(g));
    const auto c = sample_eigen_cosines(g, M, rng);
    std::size_t n = 0;
    for (double v : c) n += std::acos(v) < cut;
    acc.add(static_cast<double>(n) / (2.0 * radius));
  };
  auto merge = [](MonteCarloAccumulator& a, const MonteCarloAccumulator& b) { a.merge(b); };
  const auto acc = parallel_reduce(n_samples, workers, MonteCarloAccumulator(2), fold, merge);
  return {acc.mean(), acc.std_error(), acc.count()};
}

}  // namespace llz
