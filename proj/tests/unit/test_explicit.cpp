#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "llz/errors.hpp"
#include "llz/explicit_formula.hpp"
#include "llz/zeros.hpp"

using llz::TestFunction;

namespace {

// Straight double loop over prime powers, no precomputed weights.
double brute_one_level(const llz::Family& f, std::size_t i, const TestFunction& phi, double log_c,
                       const llz::PrimeTable& primes) {
  double s = 0.0;
  for (auto p : primes.primes()) {
    const double lp = std::log(double(p));
    for (int k = 1; k * lp < phi.support() * log_c; ++k)
      s += lp * f.lambda(i, p, k) * std::pow(double(p), -0.5 * k) * phi.eval_hat(k * lp / log_c);
  }
  return phi.eval_hat(0.0) - 2.0 / log_c * s;
}

double brute_central(const llz::Family& f, std::size_t i, double x, const llz::PrimeTable& primes) {
  double s = 0.0;
  for (auto p : primes.primes()) {
    double pk = p;
    for (int k = 1; pk <= x; ++k, pk *= p) s += f.lambda(i, p, k) / (k * std::sqrt(pk)) * std::log(x / pk) / std::log(x);
  }
  return s;
}

double reciprocal_sum_below(const llz::PrimeTable& primes, double x) {
  double s = 0.0;
  for (auto p : primes.primes())
    if (p < x) s += 1.0 / p;
  return s;
}

}  // namespace

TEST(ExplicitFormula, NullFamilyGivesPhiHatZero) {
  const auto primes = llz::PrimeTable::sieve(10'000);
  const llz::NullFamily null(3, 1e4);
  const auto phi = TestFunction::fejer(0.8);
  const auto r = llz::one_level_family(null, phi, std::log(1e4), primes);
  EXPECT_EQ(r.mean, phi.eval_hat(0.0));
  EXPECT_EQ(r.std_error, 0.0);
}

TEST(ExplicitFormula, MatchesBruteForceForQuadratic) {
  const auto primes = llz::PrimeTable::sieve(20'000);
  const llz::QuadraticFamily f(200);
  for (double d : {0.5, 1.0}) {
    const auto phi = TestFunction::fejer(d);
    const double lc = std::log(1e4);
    for (std::size_t i : {std::size_t{0}, std::size_t{2}, std::size_t{30}}) {
      const auto t = llz::one_level_prime_side(f, i, phi, lc, primes);
      EXPECT_NEAR(t.value, brute_one_level(f, i, phi, lc, primes), 1e-12);
      EXPECT_NEAR(t.value, t.phi_hat_0 - 2.0 / lc * (t.k1 + t.k2 + t.k_high), 1e-14);
      EXPECT_FALSE(t.truncated);
    }
  }
}

TEST(ExplicitFormula, SatoTateMatchesBruteForce) {
  const auto primes = llz::PrimeTable::sieve(20'000);
  const llz::SyntheticFamily f(5, llz::SyntheticModel::kSatoTateOrthogonal, 1e4, 4);
  const auto phi = TestFunction::fejer(1.0);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_NEAR(llz::one_level_prime_side(f, i, phi, std::log(1e4), primes).value,
                brute_one_level(f, i, phi, std::log(1e4), primes), 1e-12);
}

TEST(ExplicitFormula, LinearInPhi) {
  const auto primes = llz::PrimeTable::sieve(100'000);
  const llz::QuadraticFamily f(300);
  const auto a = TestFunction::fejer(0.6), b = TestFunction::fejer(1.0);
  const auto c = TestFunction::linear_combination(0.7, a, 0.3, b);
  const double lc = std::log(1e5);
  for (std::size_t i : {std::size_t{1}, std::size_t{77}}) {
    const double va = llz::one_level_prime_side(f, i, a, lc, primes).value;
    const double vb = llz::one_level_prime_side(f, i, b, lc, primes).value;
    EXPECT_NEAR(llz::one_level_prime_side(f, i, c, lc, primes).value, 0.7 * va + 0.3 * vb, 1e-12);
  }
}

TEST(ExplicitFormula, HighPowersAreSmall) {
  const auto primes = llz::PrimeTable::sieve(100'000);
  const llz::QuadraticFamily f(1000);
  const auto r = llz::one_level_family(f, TestFunction::fejer(1.0), std::log(1e5), primes);
  EXPECT_LT(r.max_abs_k_high, 3.0 * f.degree());
}

TEST(ExplicitFormula, TruncationPolicy) {
  const auto primes = llz::PrimeTable::sieve(100);
  const llz::QuadraticFamily f(100);
  const auto phi = TestFunction::fejer(1.0);
  EXPECT_THROW(llz::one_level_prime_side(f, 0, phi, std::log(1e6), primes), llz::TruncationError);
  try {
    llz::one_level_prime_side(f, 0, phi, std::log(1e6), primes);
  } catch (const llz::TruncationError& e) {
    EXPECT_GT(e.missing_mass_bound(), 0.0);
  }
  const auto t = llz::one_level_prime_side(f, 0, phi, std::log(1e6), primes, llz::TruncationPolicy::kWarn);
  EXPECT_TRUE(t.truncated);
  EXPECT_GT(t.missing_mass_bound, 0.0);
  EXPECT_NO_THROW(llz::one_level_prime_side(f, 0, phi, std::log(100.0), primes));
  EXPECT_THROW(llz::one_level_prime_side(f, 0, phi, 0.0, primes), llz::InvalidParameter);
}

TEST(ExplicitFormula, PerMemberScaling) {
  const auto primes = llz::PrimeTable::sieve(10'000);
  const llz::QuadraticFamily f(50);
  const auto phi = TestFunction::fejer(1.0);
  const auto r = llz::one_level_family(f, phi, std::log(50.0), primes, 1, llz::TruncationPolicy::kError, true);
  for (std::size_t i = 0; i < f.size(); ++i)
    EXPECT_NEAR(r.values[i], brute_one_level(f, i, phi, std::log(f.conductor(i)), primes), 1e-12);
}

TEST(PlStatistic, Examples) {
  const auto primes = llz::PrimeTable::sieve(1000);
  const llz::QuadraticFamily f(20);
  ASSERT_EQ(f.discriminant(2), 5);
  EXPECT_EQ(llz::p_l_statistic(f, 2, 2.0, primes), 0.0);
  EXPECT_NEAR(llz::p_l_statistic(f, 2, 10.0, primes),
              -(1 / std::sqrt(2.0) + 1 / std::sqrt(3.0) + 1 / std::sqrt(7.0)), 1e-14);
  EXPECT_NEAR(llz::p_l_statistic(f, 2, 10.0, primes), -1.6624, 1e-4);
  const auto all = llz::p_l_family(f, 500.0, primes, 3);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(all[i], llz::p_l_statistic(f, i, 500.0, primes));
  EXPECT_THROW(llz::p_l_statistic(f, 0, 1e5, primes), llz::UnsupportedArgument);
}

TEST(CentralValueExpansion, MatchesBruteForce) {
  const auto primes = llz::PrimeTable::sieve(10'000);
  const llz::QuadraticFamily q(100);
  const llz::SyntheticFamily st(3, llz::SyntheticModel::kSatoTateOrthogonal, 1e6, 1);
  const llz::Family* fams[] = {&q, &st};
  for (const auto* f : fams)
    for (std::size_t i = 0; i < 3; ++i) {
      const auto t = llz::central_value_prime_expansion(*f, i, 5000.0, primes);
      EXPECT_NEAR(t.prime_term + t.square_term + t.high_power_term, brute_central(*f, i, 5000.0, primes), 1e-12);
    }
  const auto z = llz::central_value_prime_expansion(llz::NullFamily(1), 0, 5000.0, primes);
  EXPECT_EQ(z.prime_term, 0.0);
  EXPECT_EQ(z.square_term, 0.0);
  EXPECT_EQ(z.high_power_term, 0.0);
}

TEST(CentralValueExpansion, RandomSignSquareTerm) {
  const auto primes = llz::PrimeTable::sieve(1'000'000);
  const llz::SyntheticFamily rs(4, llz::SyntheticModel::kRandomSignSymplectic, 1e6, 1);
  const double x = 1e6;
  // a(p^2) = 1: sum_{p <= sqrt x} (1 - 2 log p / log x) / (2p).
  double expected = 0.0;
  for (auto p : primes.primes())
    if (double(p) * p <= x) expected += (1 - 2 * std::log(double(p)) / std::log(x)) / (2.0 * p);
  const auto t = llz::central_value_prime_expansion(rs, 2, x, primes);
  EXPECT_NEAR(t.square_term, expected, 1e-12);
  EXPECT_GT(t.square_term, 0.5);
  EXPECT_LT(t.square_term, 1.5);
}

TEST(Orthogonality, SelbergDiagonalAndOffDiagonal) {
  const auto primes = llz::PrimeTable::sieve(100'000);
  const llz::QuadraticFamily f(100);
  ASSERT_EQ(f.discriminant(2), 5);
  EXPECT_NEAR(llz::selberg_orthogonality_stat(f, 2, f, 2, 1e5, primes),
              reciprocal_sum_below(primes, 1e5 + 1) - 0.2, 1e-12);
  EXPECT_LT(std::abs(llz::selberg_orthogonality_stat(f, 2, f, 3, 1e5, primes)), 3.0);
  const double loglog = std::log(std::log(1e5));
  EXPECT_NEAR(llz::selberg_orthogonality_stat(f, 0, f, 0, 1e5, primes), loglog + llz::kMertensConstant, 0.5);
}

TEST(Orthogonality, FamilyAverages) {
  const auto primes = llz::PrimeTable::sieve(1000);
  const llz::SyntheticFamily rs(4000, llz::SyntheticModel::kRandomSignSymplectic, 1e6, 2);
  EXPECT_EQ(llz::family_orthogonality_stat(rs, 7, 7, primes), 1.0);
  EXPECT_EQ(llz::family_orthogonality_stat(rs, 1, 1, primes), 1.0);
  // Independent signs: mean of a product of two, sd 1/sqrt(4000).
  EXPECT_LT(std::abs(llz::family_orthogonality_stat(rs, 2, 3, primes)), 4.0 / std::sqrt(4000.0));
  EXPECT_EQ(llz::family_orthogonality_stat(rs, 2, 3, primes, 1), llz::family_orthogonality_stat(rs, 2, 3, primes, 4));
  EXPECT_THROW(llz::family_orthogonality_stat(rs, 0, 3, primes), llz::InvalidParameter);
}

TEST(Orthogonality, BeyondOrthogonality) {
  const auto primes = llz::PrimeTable::sieve(100'000);
  const auto phi = TestFunction::fejer(1.0);
  const double lc = std::log(1e5);
  const llz::SyntheticFamily rs(100, llz::SyntheticModel::kRandomSignSymplectic, 1e5, 3);
  EXPECT_EQ(llz::beyond_orthogonality_stat(rs, phi, 2, lc, primes), 0.0);
  EXPECT_EQ(llz::beyond_orthogonality_stat(llz::NullFamily(3, 1e5), phi, 1, lc, primes), 0.0);
  EXPECT_LT(std::abs(llz::beyond_orthogonality_stat(rs, phi, 1, lc, primes)), 0.2);
  EXPECT_THROW(llz::beyond_orthogonality_stat(rs, phi, 3, lc, primes), llz::InvalidParameter);
  // One member: the k = 1 sum is the same weights times chi(p).
  const llz::QuadraticFamily q(10, llz::QuadraticFamily::Signs::kPositive);
  ASSERT_EQ(q.size(), 2u);
  double expected = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (auto p : primes.primes()) {
      const double lp = std::log(double(p));
      if (lp >= lc) break;
      expected += q.coeff(i, p, 1) / std::sqrt(double(p)) * phi.eval_hat(lp / lc) * lp / lc;
    }
  EXPECT_NEAR(llz::beyond_orthogonality_stat(q, phi, 1, lc, primes), expected, 1e-12);
}

TEST(RankinSelberg, Examples) {
  const auto primes = llz::PrimeTable::sieve(1'000'000);
  const llz::SyntheticFamily rs(10, llz::SyntheticModel::kRandomSignSymplectic, 1e6, 1);
  const auto r = llz::rankin_selberg_average(rs, 1e6, primes);
  EXPECT_NEAR(r.value, reciprocal_sum_below(primes, 1e6), 1e-12);
  EXPECT_NEAR(r.value, 2.89, 0.1);
  EXPECT_NEAR(r.prediction, std::log(std::log(1e6)), 1e-15);
  const llz::SyntheticFamily st(50, llz::SyntheticModel::kSatoTateOrthogonal, 1e6, 1);
  const auto s = llz::rankin_selberg_average(st, 1e6, primes);
  EXPECT_GT(s.value, -3.4);
  EXPECT_LT(s.value, -1.9);
  EXPECT_EQ(llz::rankin_selberg_average(llz::NullFamily(2), 1e6, primes).value, 0.0);
}

TEST(MeanValue, Examples) {
  const auto primes = llz::PrimeTable::sieve(1000);
  const auto null = llz::mean_value_check(llz::NullFamily(3), 100.0, primes);
  EXPECT_EQ(null.lhs, 1.0);
  EXPECT_EQ(null.rhs, 1.0);
  EXPECT_EQ(null.difference(), 0.0);
  const llz::SyntheticFamily rs(2000, llz::SyntheticModel::kRandomSignSymplectic, 1e6, 5);
  const auto r = llz::mean_value_check(rs, 100.0, primes, true);
  EXPECT_EQ(r.rhs, 25.0);
  // (sum of 25 signs)^2 - 25 has sd about sqrt(2) * 25.
  EXPECT_LT(std::abs(r.difference()), 4.0 * std::sqrt(2.0) * 25.0 / std::sqrt(2000.0));
  EXPECT_THROW(llz::mean_value_check(rs, 1.0, primes), llz::InvalidParameter);
}

TEST(Zeros, ParseAndEvaluate) {
  std::istringstream in(
      "# plain comment\n"
      "# member=-3 symmetric=1\n"
      "0.5\n1.5\n"
      "# member=a symmetric=0\n"
      "-2\n0\n2\n");
  const auto lists = llz::read_zero_lists(in);
  ASSERT_EQ(lists.size(), 2u);
  EXPECT_EQ(lists[0].member_id, "-3");
  EXPECT_TRUE(lists[0].symmetric);
  EXPECT_EQ(lists[1].ordinates.size(), 3u);
  const auto phi = TestFunction::fejer(1.0);
  const double lc = 2 * std::numbers::pi;
  EXPECT_NEAR(llz::one_level_zero_side(lists[0], phi, lc), 2 * (phi.eval(0.5) + phi.eval(1.5)), 1e-15);
  EXPECT_NEAR(llz::one_level_zero_side(lists[1], phi, lc), 1.0 + 2 * phi.eval(2.0), 1e-15);
  std::ostringstream out;
  llz::write_zero_list(out, lists[0]);
  std::istringstream back(out.str());
  EXPECT_EQ(llz::read_zero_lists(back)[0].ordinates, lists[0].ordinates);
}

TEST(Zeros, SumTerms) {
  llz::ZeroList z{"x", true, {0.01, 1.0}};
  const auto t = llz::zero_sum_terms(z, std::exp(1.0), 0.1);
  EXPECT_EQ(t.below_threshold_count, 2u);
  EXPECT_NEAR(t.surrogate_sum, 2 * std::log(2.0), 1e-15);
  EXPECT_THROW(llz::zero_sum_terms(z, 10.0, 0.0), llz::InvalidParameter);
}

TEST(Zeros, RejectsMalformedInput) {
  auto parse = [](const char* s) {
    std::istringstream in(s);
    return llz::read_zero_lists(in);
  };
  EXPECT_THROW(parse("1.0\n"), llz::ParseError);
  EXPECT_THROW(parse("# member=a symmetric=2\n"), llz::ParseError);
  EXPECT_THROW(parse("# member=a symmetric=1\n-1\n"), llz::ParseError);
  EXPECT_THROW(parse("# member=a\n2\n1\n"), llz::ParseError);
  EXPECT_THROW(parse("# member=a\nabc\n"), llz::ParseError);
  EXPECT_THROW(llz::read_zero_lists_file("/nonexistent/zeros.txt"), llz::ParseError);
}
