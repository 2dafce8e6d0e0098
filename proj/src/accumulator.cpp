#include "llz/accumulator.hpp"

#include <cmath>

#include "llz/errors.hpp"

namespace llz {

MonteCarloAccumulator::MonteCarloAccumulator(int max_order) {
  if (max_order < 0) throw InvalidParameter("accumulator order must be non-negative");
  power_sums_.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
}

void MonteCarloAccumulator::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
  double p = 1.0;
  for (double& s : power_sums_) {
    s += p;
    p *= x;
  }
}

void MonteCarloAccumulator::merge(const MonteCarloAccumulator& other) {
  if (other.power_sums_.size() != power_sums_.size())
    throw InvalidParameter("cannot merge accumulators of different order");
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
  for (std::size_t k = 0; k < power_sums_.size(); ++k) power_sums_[k] += other.power_sums_[k];
}

double MonteCarloAccumulator::variance() const noexcept {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double MonteCarloAccumulator::std_error() const noexcept {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double MonteCarloAccumulator::raw_moment(int k) const {
  if (k < 0 || k > max_order()) throw InvalidParameter("moment order out of range");
  return n_ == 0 ? 0.0 : power_sums_[static_cast<std::size_t>(k)] / static_cast<double>(n_);
}

}  // namespace llz
