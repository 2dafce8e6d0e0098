#include "llz/explicit_formula.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "llz/errors.hpp"
#include "llz/parallel.hpp"

namespace llz {

namespace {

// Chebyshev-type bound theta(t) < 1.01624 t (Rosser-Schoenfeld).
constexpr double kThetaBound = 1.01624;

struct PrimeSidePlan {
  double phi_hat_0 = 0.0;
  std::vector<std::uint32_t> p1, p2;
  std::vector<double> w1, w2;
  std::vector<std::tuple<std::uint32_t, int, double>> high;
  bool truncated = false;
  double missing_mass_bound = 0.0;
};

// Weights Lambda(p^k)/lambda(p,k) * p^{-k/2} * phi_hat(k log p / log c) = log p p^{-k/2} phi_hat(.).
PrimeSidePlan make_plan(const TestFunction& phi, double log_c, const PrimeTable& primes,
                        int degree, TruncationPolicy policy) {
  if (!(log_c > 0.0)) throw InvalidParameter("log c(F) must be positive");
  PrimeSidePlan plan;
  plan.phi_hat_0 = phi.eval_hat(0.0);
  const double reach = phi.support() * log_c;  // need log p^k < reach
  const auto ps = primes.primes();
  const auto ls = primes.log_primes();
  for (std::size_t j = 0; j < ps.size() && ls[j] < reach; ++j) {
    const double p = ps[j], lp = ls[j];
    if (const double w = phi.eval_hat(lp / log_c); w != 0.0) {
      plan.p1.push_back(ps[j]);
      plan.w1.push_back(lp / std::sqrt(p) * w);
    }
    if (2.0 * lp < reach) {
      if (const double w = phi.eval_hat(2.0 * lp / log_c); w != 0.0) {
        plan.p2.push_back(ps[j]);
        plan.w2.push_back(lp / p * w);
      }
    }
    for (int k = 3; k * lp < reach; ++k) {
      if (const double w = phi.eval_hat(k * lp / log_c); w != 0.0)
        plan.high.emplace_back(ps[j], k, lp * std::pow(p, -0.5 * k) * w);
    }
  }
  const double log_limit_next = std::log(static_cast<double>(primes.limit()) + 1.0);
  if (log_limit_next < reach) {
    const double sqrt_y = std::exp(0.5 * reach);
    const double sqrt_lim = std::sqrt(static_cast<double>(primes.limit()));
    double bound = kThetaBound * (2.0 * sqrt_y - sqrt_lim);
    if (2.0 * log_limit_next < reach) bound += 0.5 * reach + 2.0;
    bound *= 2.0 / log_c * degree * std::abs(plan.phi_hat_0);
    plan.truncated = true;
    plan.missing_mass_bound = bound;
    if (policy == TruncationPolicy::kError)
      throw TruncationError("prime table limit " + std::to_string(primes.limit()) +
                                " is below c^delta = " + std::to_string(std::exp(reach)),
                            bound);
  }
  return plan;
}

PrimeSideTerms apply_plan(const PrimeSidePlan& plan, const Family& family, std::size_t i,
                          double log_c) {
  PrimeSideTerms t;
  t.phi_hat_0 = plan.phi_hat_0;
  t.k1 = family.weighted_lambda_sum(i, 1, plan.p1, plan.w1);
  t.k2 = family.weighted_lambda_sum(i, 2, plan.p2, plan.w2);
  for (const auto& [p, k, w] : plan.high) t.k_high += w * family.lambda(i, p, k);
  t.value = t.phi_hat_0 - 2.0 / log_c * (t.k1 + t.k2 + t.k_high);
  t.truncated = plan.truncated;
  t.missing_mass_bound = plan.missing_mass_bound;
  return t;
}

void require_within_table(double x, const PrimeTable& primes) {
  if (x > static_cast<double>(primes.limit()) + 1.0)
    throw UnsupportedArgument("x = " + std::to_string(x) + " exceeds the prime table limit " +
                              std::to_string(primes.limit()));
}

double ordered_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<std::vector<std::pair<std::uint64_t, int>>> factor_range(std::uint64_t upto,
                                                                     const PrimeTable& primes) {
  std::vector<std::vector<std::pair<std::uint64_t, int>>> f(upto + 1);
  for (std::uint64_t n = 1; n <= upto; ++n) f[n] = primes.factor(n);
  return f;
}

double coefficient_from(const Family& family, std::size_t i,
                        const std::vector<std::pair<std::uint64_t, int>>& fac) {
  double a = 1.0;
  for (const auto& [p, e] : fac) {
    a *= family.coeff(i, p, e);
    if (a == 0.0) break;
  }
  return a;
}

}  // namespace

PrimeSideTerms one_level_prime_side(const Family& family, std::size_t member,
                                    const TestFunction& phi, double log_cF,
                                    const PrimeTable& primes, TruncationPolicy policy) {
  const auto plan = make_plan(phi, log_cF, primes, family.degree(), policy);
  return apply_plan(plan, family, member, log_cF);
}

OneLevelReport one_level_family(const Family& family, const TestFunction& phi, double log_cF,
                                const PrimeTable& primes, unsigned workers,
                                TruncationPolicy policy, bool per_member_scaling) {
  const std::size_t n = family.size();
  std::vector<PrimeSideTerms> terms(n);
  if (per_member_scaling) {
    parallel_for(n, workers, [&](std::size_t i) {
      const double lc = std::log(family.conductor(i));
      terms[i] = apply_plan(make_plan(phi, lc, primes, family.degree(), policy), family, i, lc);
    });
  } else {
    const auto plan = make_plan(phi, log_cF, primes, family.degree(), policy);
    parallel_for(n, workers, [&](std::size_t i) { terms[i] = apply_plan(plan, family, i, log_cF); });
  }
  OneLevelReport r;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = terms[i];
    r.values[i] = t.value;
    r.mean_terms.phi_hat_0 += t.phi_hat_0;
    r.mean_terms.k1 += t.k1;
    r.mean_terms.k2 += t.k2;
    r.mean_terms.k_high += t.k_high;
    r.max_abs_k_high = std::max(r.max_abs_k_high, std::abs(t.k_high));
    r.truncated = r.truncated || t.truncated;
    r.missing_mass_bound = std::max(r.missing_mass_bound, t.missing_mass_bound);
  }
  const double dn = static_cast<double>(n);
  r.mean = ordered_mean(r.values);
  r.mean_terms.phi_hat_0 /= dn;
  r.mean_terms.k1 /= dn;
  r.mean_terms.k2 /= dn;
  r.mean_terms.k_high /= dn;
  r.mean_terms.value = r.mean;
  r.mean_terms.truncated = r.truncated;
  r.mean_terms.missing_mass_bound = r.missing_mass_bound;
  if (n > 1) {
    double ss = 0.0;
    for (double v : r.values) ss += (v - r.mean) * (v - r.mean);
    r.std_error = std::sqrt(ss / (dn - 1.0) / dn);
  }
  return r;
}

double p_l_statistic(const Family& family, std::size_t member, double x, const PrimeTable& primes) {
  require_within_table(x, primes);
  const auto ps = primes.primes().first(primes.count_below(x));
  std::vector<double> a(ps.size());
  family.coeff_row(member, 1, ps, a);
  double acc = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) acc += a[j] / std::sqrt(static_cast<double>(ps[j]));
  return acc;
}

std::vector<double> p_l_family(const Family& family, double x, const PrimeTable& primes,
                               unsigned workers) {
  require_within_table(x, primes);
  const auto ps = primes.primes().first(primes.count_below(x));
  std::vector<double> inv_sqrt(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) inv_sqrt[j] = 1.0 / std::sqrt(static_cast<double>(ps[j]));
  std::vector<double> out(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    std::vector<double> a(ps.size());
    family.coeff_row(i, 1, ps, a);
    double acc = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) acc += a[j] * inv_sqrt[j];
    out[i] = acc;
  });
  return out;
}

CentralValueTerms central_value_prime_expansion(const Family& family, std::size_t member, double x,
                                                const PrimeTable& primes) {
  require_within_table(x, primes);
  if (!(x > 1.0)) throw InvalidParameter("x must exceed 1");
  const double lx = std::log(x);
  const auto ps = primes.primes().first(primes.count_upto(x));
  const auto ls = primes.log_primes();
  CentralValueTerms t;
  std::vector<double> a(ps.size());
  family.coeff_row(member, 1, ps, a);
  std::vector<std::uint32_t> sq_p;
  std::vector<double> sq_w;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const double p = ps[j], lp = ls[j];
    t.prime_term += a[j] * (lx - lp) / (std::sqrt(p) * lx);
    if (2.0 * lp <= lx) {
      sq_p.push_back(ps[j]);
      sq_w.push_back((lx - 2.0 * lp) / (2.0 * p * lx));
    }
    for (int k = 3; k * lp <= lx; ++k)
      t.high_power_term += family.lambda(member, ps[j], k) * (lx - k * lp) /
                           (k * std::pow(p, 0.5 * k) * lx);
  }
  t.square_term = family.weighted_lambda_sum(member, 2, sq_p, sq_w);
  return t;
}

std::vector<CentralValueTerms> central_value_family(const Family& family, double x,
                                                    const PrimeTable& primes, unsigned workers) {
  std::vector<CentralValueTerms> out(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    out[i] = central_value_prime_expansion(family, i, x, primes);
  });
  return out;
}

double selberg_orthogonality_stat(const Family& fl, std::size_t i, const Family& fm, std::size_t j,
                                  double X, const PrimeTable& primes) {
  require_within_table(X, primes);
  const auto ps = primes.primes().first(primes.count_upto(X));
  std::vector<double> a(ps.size()), b(ps.size());
  fl.coeff_row(i, 1, ps, a);
  fm.coeff_row(j, 1, ps, b);
  double acc = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) acc += a[k] * b[k] / static_cast<double>(ps[k]);
  return acc;
}

double family_orthogonality_stat(const Family& family, std::uint64_t n, std::uint64_t m,
                                 const PrimeTable& primes, unsigned workers) {
  if (n == 0 || m == 0) throw InvalidParameter("n and m must be positive");
  const auto fn = primes.factor(n), fmf = primes.factor(m);
  std::vector<double> v(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    v[i] = coefficient_from(family, i, fn) * coefficient_from(family, i, fmf);
  });
  return ordered_mean(v);
}

double beyond_orthogonality_stat(const Family& family, const TestFunction& phi, int k,
                                 double log_cF, const PrimeTable& primes, unsigned workers,
                                 TruncationPolicy policy) {
  if (k != 1 && k != 2) throw InvalidParameter("beyond-orthogonality statistic needs k = 1 or 2");
  // Reuse the plan for coverage checks; weights differ by log p / log c.
  const auto plan = make_plan(phi, log_cF, primes, family.degree(), policy);
  const auto& ps = k == 1 ? plan.p1 : plan.p2;
  std::vector<double> w(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const double p = ps[j], lp = std::log(p);
    w[j] = std::pow(p, -0.5 * k) * phi.eval_hat(k * lp / log_cF) * lp / log_cF;
  }
  std::vector<double> v(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    double acc = 0.0;
    if (k == 1) {
      std::vector<double> a(ps.size());
      family.coeff_row(i, 1, ps, a);
      for (std::size_t j = 0; j < ps.size(); ++j) acc += a[j] * w[j];
    } else {
      for (std::size_t j = 0; j < ps.size(); ++j) acc += family.oscillating_square(i, ps[j]) * w[j];
    }
    v[i] = acc;
  });
  return 2.0 * ordered_mean(v);
}

RankinSelbergReport rankin_selberg_average(const Family& family, double x, const PrimeTable& primes,
                                           unsigned workers) {
  require_within_table(x, primes);
  const auto ps = primes.primes().first(primes.count_below(x));
  std::vector<double> w(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) w[j] = 1.0 / static_cast<double>(ps[j]);
  std::vector<double> v(family.size());
  parallel_for(family.size(), workers,
               [&](std::size_t i) { v[i] = family.weighted_lambda_sum(i, 2, ps, w); });
  return {ordered_mean(v), family.params().gamma_F * std::log(std::log(x))};
}

MeanValueReport mean_value_check(const Family& family, double x, const PrimeTable& primes,
                                 bool primes_only, unsigned workers) {
  if (!(x > 1.0)) throw InvalidParameter("x must exceed 1");
  require_within_table(x, primes);
  const auto upto = static_cast<std::uint64_t>(std::ceil(x) - 1.0);
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n <= upto; ++n)
    if (!primes_only || (n >= 2 && primes.is_prime(n))) ns.push_back(n);
  const auto fac = factor_range(upto, primes);
  std::vector<double> lhs(family.size()), rhs(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    double s = 0.0, q = 0.0;
    for (std::uint64_t n : ns) {
      const double a = coefficient_from(family, i, fac[n]);
      s += a;
      q += a * a;
    }
    lhs[i] = s * s;
    rhs[i] = q;
  });
  return {ordered_mean(lhs), ordered_mean(rhs)};
}

}  // namespace llz
