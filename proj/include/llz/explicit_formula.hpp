#pragma once

#include <cstdint>
#include <vector>

#include "llz/families.hpp"
#include "llz/primes.hpp"
#include "llz/testfn.hpp"

namespace llz {

/// Meissel-Mertens constant B in sum_{p <= x} 1/p = log log x + B + o(1).
inline constexpr double kMertensConstant = 0.26149721284764278;

enum class TruncationPolicy { kError, kWarn };

/// Prime side of the explicit formula for one member:
///   value = phi_hat(0) - (2 / log c) (k1 + k2 + k_high),
/// where k_j = sum_p Lambda(p^j) p^{-j/2} phi_hat(j log p / log c).
struct PrimeSideTerms {
  double phi_hat_0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k_high = 0.0;
  double value = 0.0;
  bool truncated = false;
  double missing_mass_bound = 0.0;
};

/// Throws TruncationError when the table stops short of c^delta, unless the
/// policy is kWarn, in which case the result is flagged and carries a bound
/// on the omitted contribution.
PrimeSideTerms one_level_prime_side(const Family& family, std::size_t member,
                                    const TestFunction& phi, double log_cF,
                                    const PrimeTable& primes,
                                    TruncationPolicy policy = TruncationPolicy::kError);

struct OneLevelReport {
  std::vector<double> values;  // D(L, phi) per member
  double mean = 0.0;
  double std_error = 0.0;
  PrimeSideTerms mean_terms;   // member average of each term
  double max_abs_k_high = 0.0;
  bool truncated = false;
  double missing_mass_bound = 0.0;
};

/// one_level_prime_side over the whole family. With per_member_scaling each
/// member uses its own log c(L) instead of log_cF.
OneLevelReport one_level_family(const Family& family, const TestFunction& phi, double log_cF,
                                const PrimeTable& primes, unsigned workers = 1,
                                TruncationPolicy policy = TruncationPolicy::kError,
                                bool per_member_scaling = false);

/// P_L(x) = sum_{p < x} a_L(p) / sqrt(p).
double p_l_statistic(const Family& family, std::size_t member, double x, const PrimeTable& primes);
std::vector<double> p_l_family(const Family& family, double x, const PrimeTable& primes,
                               unsigned workers = 1);

/// Pieces of the truncated expansion of log L(1/2),
///   sum_{n <= x} Lambda(n) / (n^{1/2} log n) * log(x/n) / log x,
/// split by prime power.
struct CentralValueTerms {
  double square_term = 0.0;      // p^2 <= x
  double prime_term = 0.0;       // p <= x
  double high_power_term = 0.0;  // p^k <= x, k >= 3
};

CentralValueTerms central_value_prime_expansion(const Family& family, std::size_t member, double x,
                                                const PrimeTable& primes);
std::vector<CentralValueTerms> central_value_family(const Family& family, double x,
                                                    const PrimeTable& primes, unsigned workers = 1);

/// sum_{p <= X} a_L(p) a_M(p) / p for member i of `fl` and member j of `fm`.
double selberg_orthogonality_stat(const Family& fl, std::size_t i, const Family& fm, std::size_t j,
                                  double X, const PrimeTable& primes);

/// |F|^-1 sum_L a_L(n) a_L(m).
double family_orthogonality_stat(const Family& family, std::uint64_t n, std::uint64_t m,
                                 const PrimeTable& primes, unsigned workers = 1);

/// (2/|F|) sum_L sum_p c_L(p) p^{-k/2} phi_hat(k log p / log c) log p / log c, with
/// c_L(p) = a_L(p) for k = 1 and the oscillating part a~(p^2) for k = 2.
double beyond_orthogonality_stat(const Family& family, const TestFunction& phi, int k,
                                 double log_cF, const PrimeTable& primes, unsigned workers = 1,
                                 TruncationPolicy policy = TruncationPolicy::kError);

struct RankinSelbergReport {
  double value = 0.0;       // |F|^-1 sum_L sum_{p < x} Lambda_L(p^2) / (p log p)
  double prediction = 0.0;  // gamma_F log log x
};

RankinSelbergReport rankin_selberg_average(const Family& family, double x, const PrimeTable& primes,
                                           unsigned workers = 1);

struct MeanValueReport {
  double lhs = 0.0;  // |F|^-1 sum_L (sum_{n<x} a_L(n))^2
  double rhs = 0.0;  // |F|^-1 sum_L sum_{n<x} a_L(n)^2
  double difference() const noexcept { return lhs - rhs; }
};

/// With primes_only the inner sums run over prime n < x only.
MeanValueReport mean_value_check(const Family& family, double x, const PrimeTable& primes,
                                 bool primes_only = false, unsigned workers = 1);

}  // namespace llz
