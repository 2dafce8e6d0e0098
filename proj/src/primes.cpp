#include "llz/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "llz/errors.hpp"

namespace llz {

PrimeTable PrimeTable::sieve(std::uint64_t limit, std::uint64_t cap) {
  if (limit < 2 || limit > cap)
    throw InvalidParameter("sieve limit must lie in [2, " + std::to_string(cap) + "], got " +
                           std::to_string(limit));
  PrimeTable t;
  t.limit_ = limit;
  // Odd-only sieve: index i stands for 2i + 1.
  const std::uint64_t n_odd = (limit + 1) / 2;
  std::vector<std::uint8_t> composite(n_odd, 0);
  composite[0] = 1;
  for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t j = (p * p) / 2; j < n_odd; j += p) composite[j] = 1;
  }
  const double est = 1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit) + 2.0);
  t.primes_.reserve(static_cast<std::size_t>(est) + 8);
  t.primes_.push_back(2);
  for (std::uint64_t i = 1; i < n_odd; ++i)
    if (!composite[i]) t.primes_.push_back(static_cast<std::uint32_t>(2 * i + 1));
  t.logs_.resize(t.primes_.size());
  for (std::size_t i = 0; i < t.primes_.size(); ++i) t.logs_[i] = std::log(static_cast<double>(t.primes_[i]));
  return t;
}

std::size_t PrimeTable::count_upto(double x) const {
  if (x < 2.0) return 0;
  const double xf = std::floor(x);
  return static_cast<std::size_t>(
      std::upper_bound(primes_.begin(), primes_.end(), xf,
                       [](double v, std::uint32_t p) { return v < static_cast<double>(p); }) -
      primes_.begin());
}

std::size_t PrimeTable::count_below(double x) const {
  return static_cast<std::size_t>(
      std::lower_bound(primes_.begin(), primes_.end(), x,
                       [](std::uint32_t p, double v) { return static_cast<double>(p) < v; }) -
      primes_.begin());
}

std::ptrdiff_t PrimeTable::index_of(std::uint64_t p) const noexcept {
  if (p > limit_) return -1;
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return -1;
  return it - primes_.begin();
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n <= limit_) return index_of(n) >= 0;
  if (n > limit_ * limit_) throw UnsupportedArgument("primality query beyond limit^2");
  for (std::uint32_t p : primes_) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, int>> PrimeTable::factor(std::uint64_t n) const {
  if (n == 0) throw InvalidParameter("cannot factor 0");
  if (n > limit_ * limit_)
    throw UnsupportedArgument("cannot factor " + std::to_string(n) + ": above sieve limit squared");
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint32_t p : primes_) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace llz
