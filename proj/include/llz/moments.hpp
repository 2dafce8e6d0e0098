#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "llz/explicit_formula.hpp"
#include "llz/families.hpp"
#include "llz/symmetry.hpp"
#include "llz/testfn.hpp"
#include "llz/zeros.hpp"

namespace llz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// E[Z^k] for a standard Gaussian: (k-1)!! for even k, 0 for odd k. Exact
/// integer arithmetic; k > 40 throws UnsupportedArgument.
double gaussian_moment(int k);

/// M(alpha, beta) = P(alpha < Z < beta); infinite endpoints allowed.
double gaussian_mass(double alpha, double beta);

/// x = c^{1 / log log log c}, the default prime-sum length for conductor c.
double default_prime_cutoff(double c);

/// Number of batches used for moment standard errors.
inline constexpr std::size_t kMomentBatches = 20;

struct MomentReport {
  int k_max = 0;
  double x = 0.0;
  double variance_scale = 0.0;      // n_F log log x
  double prime_reciprocal_sum = 0.0;  // sum_{p < x} 1/p, the exact finite-size variance for |a(p)| = 1
  double weight_factor = 1.0;       // predicted k = 0 value
  std::size_t family_size = 0;
  std::vector<std::pair<std::string, std::string>> family;
  std::vector<double> empirical;  // k = 0..k_max
  std::vector<double> std_error;  // batched
  std::vector<double> predicted;  // M_k (n_F log log x)^{k/2} * weight_factor
  std::vector<double> ratio;      // empirical / predicted, NaN where predicted is 0
};

/// Batched moments of values^k (times weights when given).
MomentReport moments_from_values(std::span<const double> values,
                                 std::span<const double> weights, int k_max, double variance_scale,
                                 double weight_factor);

/// |F|^-1 sum_L P_L(x)^k for k = 0..k_max (k_max <= 10).
MomentReport empirical_moments(const Family& family, double x, int k_max, const PrimeTable& primes,
                               unsigned workers = 1);

/// |F|^-1 sum_L P_L(x)^k D(L, phi) with the prime-side D.
MomentReport weighted_moments(const Family& family, double x, int k_max, const TestFunction& phi,
                              double log_cF, const PrimeTable& primes, unsigned workers = 1,
                              TruncationPolicy policy = TruncationPolicy::kError);

/// Share of the total D(L, phi) mass carried by members whose standardized
/// P_L(x) / sqrt(n_F log log x) lies in (alpha, beta).
double interval_weighted_density(const Family& family, double x, double alpha, double beta,
                                 const TestFunction& phi, double log_cF, const PrimeTable& primes,
                                 unsigned workers = 1,
                                 TruncationPolicy policy = TruncationPolicy::kError);

/// Same for consecutive intervals (edges[i], edges[i+1]); the shares sum to 1.
std::vector<double> interval_weighted_partition(const Family& family, double x,
                                                std::span<const double> edges,
                                                const TestFunction& phi, double log_cF,
                                                const PrimeTable& primes, unsigned workers = 1,
                                                TruncationPolicy policy = TruncationPolicy::kError);

struct AmplifiedCount {
  std::size_t count = 0;           // in the interval and without small zeros
  std::size_t interval_count = 0;  // in the interval
  double lower_bound = 0.0;        // eta(type, delta) M(alpha, beta) |F|
  bool zero_filter_applied = false;
  std::size_t members_without_zero_data = 0;
};

AmplifiedCount amplified_count(const Family& family, double x, double alpha, double beta,
                               const TestFunction& phi, SymmetryType type, double zero_threshold,
                               const std::vector<ZeroList>* zero_lists, const PrimeTable& primes,
                               unsigned workers = 1);

enum class Centering {
  kTheorem,    // M_F = gamma_F n_F log log c / 2, V_F = sqrt(n_F log log c)
  kPrimeSum,   // M = gamma_F log log x / 2, V = sqrt(n_F log log x)
  kEmpirical,  // sample mean and standard deviation
};

struct CltOptions {
  Centering centering = Centering::kTheorem;
  bool include_n_F_in_mean = true;  // kTheorem only
  double x = 0.0;                   // kPrimeSum only
  std::vector<double> bin_edges;    // default: -4..4 in steps of 0.5
  std::vector<std::pair<double, double>> intervals;  // default: (0,inf), (-inf,0), (0,1), (-1,1)
  std::optional<double> eta;        // proportion used for the lower bounds
};

struct IntervalMass {
  double alpha = 0.0, beta = 0.0;
  double empirical = 0.0;    // share of |F| (excluded members count in |F|)
  double gaussian = 0.0;     // M(alpha, beta)
  double lower_bound = 0.0;  // eta M(alpha, beta), 0 without eta
};

struct CltReport {
  double mean_used = 0.0, scale_used = 0.0;
  double theorem_mean = 0.0, theorem_mean_without_n_F = 0.0, theorem_scale = 0.0;
  std::size_t family_size = 0;
  std::size_t excluded = 0;  // -inf or NaN values
  std::vector<double> standardized;
  std::vector<double> bin_edges;
  std::vector<std::size_t> histogram;  // bins plus underflow (front) and overflow (back)
  std::vector<IntervalMass> masses;
  std::vector<double> moments;            // k = 1..4 of the standardized sample
  std::vector<double> moment_std_errors;  // batched
};

/// `values` are log L(1/2) per member; -inf (vanishing) and NaN (missing) are
/// excluded from the sample but kept in |F|.
CltReport clt_report(std::span<const double> values, double gamma_F, double n_F, double log_cF,
                     const CltOptions& options = {});

}  // namespace llz
