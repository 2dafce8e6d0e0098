#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace llz {

inline constexpr std::uint64_t kDefaultSieveCap = 100'000'000;

/// All primes up to `limit` with their natural logarithms.
class PrimeTable {
 public:
  /// 2 <= limit <= cap.
  static PrimeTable sieve(std::uint64_t limit, std::uint64_t cap = kDefaultSieveCap);

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::span<const double> log_primes() const noexcept { return logs_; }
  std::size_t size() const noexcept { return primes_.size(); }

  /// Number of tabulated primes p <= x.
  std::size_t count_upto(double x) const;
  /// Number of primes p < x.
  std::size_t count_below(double x) const;
  /// Index of p in the table, or -1 when p is not a tabulated prime.
  std::ptrdiff_t index_of(std::uint64_t p) const noexcept;
  bool is_prime(std::uint64_t n) const;

  /// Prime factorization as (p, exponent) pairs. Requires n <= limit^2,
  /// otherwise throws UnsupportedArgument.
  std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
  std::vector<double> logs_;
};

}  // namespace llz
