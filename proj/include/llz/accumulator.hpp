#pragma once

#include <cstddef>
#include <vector>

namespace llz {

/// Mergeable running statistics: count, mean and M2 (Chan et al. update) plus
/// raw power sums up to a fixed order. Merging is exact-order dependent in
/// floating point, so callers merge in a fixed order for reproducibility.
class MonteCarloAccumulator {
 public:
  explicit MonteCarloAccumulator(int max_order = 2);

  void add(double x);
  void merge(const MonteCarloAccumulator& other);

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  double std_error() const noexcept;
  /// (1/n) sum x^k for 0 <= k <= max_order.
  double raw_moment(int k) const;
  int max_order() const noexcept { return static_cast<int>(power_sums_.size()) - 1; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::vector<double> power_sums_;
};

}  // namespace llz
