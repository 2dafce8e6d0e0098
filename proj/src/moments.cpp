#include "llz/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "llz/errors.hpp"
#include "llz/predictions.hpp"

namespace llz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_log(double x) {
  if (!(x > std::numbers::e)) throw InvalidParameter("log log x needs x > e");
  return std::log(std::log(x));
}

// Mean of f(i) within each of `batches` contiguous blocks, then the standard
// error of the overall mean from the spread of the block means.
template <class F>
std::pair<double, double> batched_mean(std::size_t n, F f) {
  const std::size_t b = std::min(kMomentBatches, n);
  std::vector<double> means(b, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < b; ++j) {
    const std::size_t lo = j * n / b, hi = (j + 1) * n / b;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    total += s;
    means[j] = s / static_cast<double>(hi - lo);
  }
  const double mean = total / static_cast<double>(n);
  if (b < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  return {mean, std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b))};
}

double prime_reciprocal_sum(double x, const PrimeTable& primes) {
  double s = 0.0;
  for (auto p : primes.primes().first(primes.count_below(x))) s += 1.0 / p;
  return s;
}

void check_k_max(int k_max) {
  if (k_max < 0 || k_max > 10) throw InvalidParameter("k_max must lie in [0, 10]");
}

std::vector<double> standardized_p_l(const Family& family, double x, const PrimeTable& primes,
                                     unsigned workers) {
  auto p = p_l_family(family, x, primes, workers);
  const double v = std::sqrt(family.params().n_F * log_log(x));
  for (double& t : p) t /= v;
  return p;
}

}  // namespace

double gaussian_moment(int k) {
  if (k < 0) throw InvalidParameter("moment order must be non-negative");
  if (k > 40) throw UnsupportedArgument("gaussian_moment is exact only for k <= 40");
  if (k % 2) return 0.0;
  unsigned __int128 acc = 1;
  for (int j = k - 1; j > 1; j -= 2) acc *= static_cast<unsigned>(j);
  return static_cast<double>(acc);
}

double gaussian_mass(double alpha, double beta) {
  if (std::isnan(alpha) || std::isnan(beta) || !(alpha < beta))
    throw InvalidParameter("gaussian_mass needs alpha < beta");
  // Use the tail that avoids cancellation.
  const double r = std::numbers::sqrt2;
  if (alpha >= 0.0) return 0.5 * (std::erfc(alpha / r) - std::erfc(beta / r));
  if (beta <= 0.0) return 0.5 * (std::erfc(-beta / r) - std::erfc(-alpha / r));
  return 1.0 - 0.5 * (std::erfc(-alpha / r) + std::erfc(beta / r));
}

double default_prime_cutoff(double c) {
  if (!(c > std::exp(std::numbers::e))) throw InvalidParameter("default cutoff needs c > e^e");
  return std::pow(c, 1.0 / std::log(std::log(std::log(c))));
}

MomentReport moments_from_values(std::span<const double> values, std::span<const double> weights,
                                 int k_max, double variance_scale, double weight_factor) {
  check_k_max(k_max);
  if (values.empty()) throw EmptyFamily("no values");
  if (!weights.empty() && weights.size() != values.size())
    throw InvalidParameter("weights and values differ in length");
  MomentReport r;
  r.k_max = k_max;
  r.variance_scale = variance_scale;
  r.weight_factor = weight_factor;
  r.family_size = values.size();
  for (int k = 0; k <= k_max; ++k) {
    const auto [m, se] = batched_mean(values.size(), [&](std::size_t i) {
      const double w = weights.empty() ? 1.0 : weights[i];
      return std::pow(values[i], k) * w;
    });
    r.empirical.push_back(m);
    r.std_error.push_back(se);
    const double pred = gaussian_moment(k) * std::pow(variance_scale, 0.5 * k) * weight_factor;
    r.predicted.push_back(pred);
    r.ratio.push_back(pred == 0.0 ? kNaN : m / pred);
  }
  return r;
}

MomentReport empirical_moments(const Family& family, double x, int k_max, const PrimeTable& primes,
                               unsigned workers) {
  check_k_max(k_max);
  const auto p = p_l_family(family, x, primes, workers);
  auto r = moments_from_values(p, {}, k_max, family.params().n_F * log_log(x), 1.0);
  r.x = x;
  r.prime_reciprocal_sum = prime_reciprocal_sum(x, primes);
  r.family = family.describe();
  return r;
}

MomentReport weighted_moments(const Family& family, double x, int k_max, const TestFunction& phi,
                              double log_cF, const PrimeTable& primes, unsigned workers,
                              TruncationPolicy policy) {
  check_k_max(k_max);
  const auto p = p_l_family(family, x, primes, workers);
  const auto d = one_level_family(family, phi, log_cF, primes, workers, policy);
  const auto fp = family.params();
  const double w = family_density_integral({fp.gamma_F, std::nullopt, fp.n_F}, phi);
  auto r = moments_from_values(p, d.values, k_max, fp.n_F * log_log(x), w);
  r.x = x;
  r.prime_reciprocal_sum = prime_reciprocal_sum(x, primes);
  r.family = family.describe();
  return r;
}

std::vector<double> interval_weighted_partition(const Family& family, double x,
                                                std::span<const double> edges,
                                                const TestFunction& phi, double log_cF,
                                                const PrimeTable& primes, unsigned workers,
                                                TruncationPolicy policy) {
  if (edges.size() < 2) throw InvalidParameter("need at least two interval edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i])) throw InvalidParameter("interval edges must increase");
  const auto z = standardized_p_l(family, x, primes, workers);
  const auto d = one_level_family(family, phi, log_cF, primes, workers, policy);
  std::vector<double> num(edges.size() - 1, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    total += d.values[i];
    // Open intervals; a value on an interior edge belongs to neither side.
    auto it = std::upper_bound(edges.begin(), edges.end(), z[i]);
    if (it == edges.begin() || it == edges.end()) continue;
    const auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (z[i] > edges[bin]) num[bin] += d.values[i];
  }
  if (total == 0.0) throw InvalidParameter("total one-level weight is zero");
  for (double& v : num) v /= total;
  return num;
}

double interval_weighted_density(const Family& family, double x, double alpha, double beta,
                                 const TestFunction& phi, double log_cF, const PrimeTable& primes,
                                 unsigned workers, TruncationPolicy policy) {
  const double edges[] = {alpha, beta};
  return interval_weighted_partition(family, x, edges, phi, log_cF, primes, workers, policy).front();
}

AmplifiedCount amplified_count(const Family& family, double x, double alpha, double beta,
                               const TestFunction& phi, SymmetryType type, double zero_threshold,
                               const std::vector<ZeroList>* zero_lists, const PrimeTable& primes,
                               unsigned workers) {
  if (!(alpha < beta)) throw InvalidParameter("amplified_count needs alpha < beta");
  if (!(zero_threshold > 0.0)) throw InvalidParameter("zero threshold must be positive");
  const auto z = standardized_p_l(family, x, primes, workers);
  std::unordered_map<std::string, const ZeroList*> by_id;
  if (zero_lists)
    for (const auto& zl : *zero_lists) by_id[zl.member_id] = &zl;
  AmplifiedCount r;
  r.zero_filter_applied = zero_lists != nullptr;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > alpha && z[i] < beta)) continue;
    ++r.interval_count;
    bool keep = true;
    if (zero_lists) {
      auto it = by_id.find(family.member_id(i));
      if (it == by_id.end()) {
        ++r.members_without_zero_data;
      } else {
        keep = zero_sum_terms(*it->second, std::max(x, 2.0), zero_threshold).below_threshold_count == 0;
      }
    }
    r.count += keep;
  }
  const double e = eta(type, Support(phi.support())).eta;
  r.lower_bound = e * gaussian_mass(alpha, beta) * static_cast<double>(family.size());
  return r;
}

CltReport clt_report(std::span<const double> values, double gamma_F, double n_F, double log_cF,
                     const CltOptions& options) {
  if (values.empty()) throw EmptyFamily("no central values");
  if (!(n_F > 0.0)) throw InvalidParameter("n_F must be positive");
  CltReport r;
  r.family_size = values.size();
  if (!(log_cF > 1.0)) throw InvalidParameter("log c(F) must exceed 1");
  const double llc = std::log(log_cF);
  r.theorem_mean = 0.5 * gamma_F * n_F * llc;
  r.theorem_mean_without_n_F = 0.5 * gamma_F * llc;
  r.theorem_scale = std::sqrt(n_F * llc);

  std::vector<double> kept;
  for (double v : values) {
    if (std::isnan(v) || v == -kInf) {
      ++r.excluded;
      continue;
    }
    kept.push_back(v);
  }
  switch (options.centering) {
    case Centering::kTheorem:
      r.mean_used = options.include_n_F_in_mean ? r.theorem_mean : r.theorem_mean_without_n_F;
      r.scale_used = r.theorem_scale;
      break;
    case Centering::kPrimeSum: {
      const double llx = log_log(options.x);
      r.mean_used = 0.5 * gamma_F * llx;
      r.scale_used = std::sqrt(n_F * llx);
      break;
    }
    case Centering::kEmpirical: {
      if (kept.size() < 2) throw EmptyFamily("empirical centering needs two finite values");
      const double m = std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
      double ss = 0.0;
      for (double v : kept) ss += (v - m) * (v - m);
      r.mean_used = m;
      r.scale_used = std::sqrt(ss / static_cast<double>(kept.size() - 1));
      break;
    }
  }
  if (!(r.scale_used > 0.0)) throw InvalidParameter("standardization scale is not positive");
  r.standardized.reserve(kept.size());
  for (double v : kept) r.standardized.push_back((v - r.mean_used) / r.scale_used);

  r.bin_edges = options.bin_edges;
  if (r.bin_edges.empty())
    for (int i = -8; i <= 8; ++i) r.bin_edges.push_back(0.5 * i);
  r.histogram.assign(r.bin_edges.size() + 1, 0);
  for (double s : r.standardized) {
    const auto it = std::upper_bound(r.bin_edges.begin(), r.bin_edges.end(), s);
    ++r.histogram[static_cast<std::size_t>(it - r.bin_edges.begin())];
  }

  auto intervals = options.intervals;
  if (intervals.empty()) intervals = {{0.0, kInf}, {-kInf, 0.0}, {0.0, 1.0}, {-1.0, 1.0}};
  for (const auto& [a, b] : intervals) {
    IntervalMass m{a, b, 0.0, gaussian_mass(a, b), 0.0};
    std::size_t n = 0;
    for (double s : r.standardized) n += (s > a && s < b);
    m.empirical = static_cast<double>(n) / static_cast<double>(r.family_size);
    if (options.eta) m.lower_bound = *options.eta * m.gaussian;
    r.masses.push_back(m);
  }

  if (!r.standardized.empty()) {
    for (int k = 1; k <= 4; ++k) {
      const auto [m, se] = batched_mean(r.standardized.size(),
                                        [&](std::size_t i) { return std::pow(r.standardized[i], k); });
      r.moments.push_back(m);
      r.moment_std_errors.push_back(se);
    }
  }
  return r;
}

}  // namespace llz
