#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "llz/errors.hpp"
#include "llz/testfn.hpp"

using llz::TestFunction;

namespace {

constexpr double kPi = std::numbers::pi;

// 2 \int_a^b phi_hat(y) cos(2 pi x y) dy by composite Simpson; phi_hat must be
// smooth on [a, b].
double inversion_segment(const TestFunction& f, double x, double a, double b, int n) {
  const double h = (b - a) / n;
  auto g = [&](double y) { return f.eval_hat(y) * std::cos(2.0 * kPi * x * y); };
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return 2.0 * s * h / 3.0;
}

double numerical_inversion(const TestFunction& f, double x) {
  double acc = 0.0;
  const auto knots = f.fourier_knots();
  for (std::size_t i = 1; i < knots.size(); ++i)
    acc += inversion_segment(f, x, knots[i - 1].y, knots[i].y, 20000);
  return acc;
}

}  // namespace

TEST(Fejer, PointValues) {
  EXPECT_DOUBLE_EQ(TestFunction::fejer(1).eval(0.0), 1.0);
  EXPECT_DOUBLE_EQ(TestFunction::fejer(2).eval_hat(0.0), 0.5);
  EXPECT_EQ(TestFunction::fejer(0.5).eval_hat(0.5), 0.0);
  EXPECT_NEAR(TestFunction::fejer(1).eval(0.5), 4.0 / (kPi * kPi), 1e-15);
  EXPECT_NEAR(TestFunction::fejer(1).eval(1.0), 0.0, 1e-30);
  EXPECT_NEAR(TestFunction::fejer(1).eval(1e-12), 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(TestFunction::fejer(1).eval_hat(0.0), 1.0);
  EXPECT_EQ(TestFunction::fejer(3).eval_hat(5.0), 0.0);
}

TEST(Fejer, RejectsNonPositiveSupport) {
  EXPECT_THROW(TestFunction::fejer(0.0), llz::InvalidParameter);
  EXPECT_THROW(TestFunction::fejer(-1.0), llz::InvalidParameter);
  EXPECT_THROW(TestFunction::fejer(std::nan("")), llz::InvalidParameter);
}

TEST(Fejer, EvenFourierSide) {
  const auto f = TestFunction::fejer(1.0);
  for (double y : {0.01, 0.25, 0.5, 0.99, 1.5})
    EXPECT_EQ(f.eval_hat(-y), f.eval_hat(y)) << y;
}

TEST(Fejer, SupportIsSharp) {
  for (double d : {0.3, 0.7, 1.0, 1.5, 2.0, 3.0}) {
    const auto f = TestFunction::fejer(d);
    EXPECT_EQ(f.eval_hat(d * (1 + 1e-9)), 0.0);
    EXPECT_GT(f.eval_hat(d * (1 - 1e-3)), 0.0);
    EXPECT_DOUBLE_EQ(f.support(), d);
  }
}

TEST(Fejer, NonNegativeOnGrid) {
  for (double d : {0.3, 1.0, 2.0}) {
    const auto f = TestFunction::fejer(d);
    EXPECT_TRUE(f.known_nonnegative());
    for (int i = 0; i <= 4000; ++i) EXPECT_GE(f.eval(-20.0 + i * 0.01), 0.0);
  }
}

TEST(Fejer, MatchesClosedFormSincSquared) {
  for (double d : {0.5, 1.3}) {
    const auto f = TestFunction::fejer(d);
    for (double x : {-7.3, -0.2, 0.001, 0.9, 4.4}) {
      const double t = kPi * d * x;
      EXPECT_NEAR(f.eval(x), std::pow(std::sin(t) / t, 2), 1e-13) << d << " " << x;
    }
  }
}

TEST(Fejer, FourierInversionOnGrid) {
  for (double d : {0.3, 0.7, 1.0, 1.5, 2.0, 3.0}) {
    const auto f = TestFunction::fejer(d);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = -20.0 + 40.0 * i / 999.0;
      worst = std::max(worst, std::abs(f.eval(x) - numerical_inversion(f, x)));
    }
    EXPECT_LT(worst, 1e-6) << "delta=" << d;
  }
}

TEST(Fejer, ValueAtZeroIsHatIntegral) {
  for (double d : {0.3, 1.0, 2.5}) {
    const auto f = TestFunction::fejer(d);
    EXPECT_NEAR(f.hat_integral(d), f.eval(0.0), 1e-14);
    EXPECT_NEAR(f.hat_integral(10 * d), 1.0, 1e-14);
  }
  EXPECT_NEAR(TestFunction::fejer(2).hat_integral(1.0), 0.75, 1e-15);
}

TEST(PiecewiseLinear, InversionAndInvariants) {
  const auto f = TestFunction::piecewise_linear({{0.0, 1.0}, {0.4, 0.3}, {1.2, 0.0}});
  EXPECT_EQ(f.kind(), llz::TestFunctionKind::kPiecewiseLinearFourier);
  EXPECT_DOUBLE_EQ(f.support(), 1.2);
  EXPECT_DOUBLE_EQ(f.eval_hat(0.2), 0.65);
  EXPECT_DOUBLE_EQ(f.eval_hat(-0.8), f.eval_hat(0.8));
  for (double x : {0.0, 0.37, 1.0, 2.9, 11.0})
    EXPECT_NEAR(f.eval(x), numerical_inversion(f, x), 1e-9) << x;
  // Convex phi_hat on (0, support) gives phi >= 0.
  EXPECT_TRUE(f.known_nonnegative());
  const auto g = TestFunction::piecewise_linear({{0.0, 1.0}, {0.5, 0.0}, {1.0, 0.0}});
  EXPECT_TRUE(g.known_nonnegative());
  const auto h = TestFunction::piecewise_linear({{0.0, 0.2}, {0.5, 1.0}, {1.0, 0.0}});
  EXPECT_FALSE(h.known_nonnegative());
}

TEST(PiecewiseLinear, RejectsMalformedKnots) {
  using K = std::vector<llz::FourierKnot>;
  EXPECT_THROW(TestFunction::piecewise_linear(K{{0.1, 1.0}, {1.0, 0.0}}), llz::InvalidParameter);
  EXPECT_THROW(TestFunction::piecewise_linear(K{{0.0, 1.0}, {0.5, 0.5}, {0.5, 0.0}}),
               llz::InvalidParameter);
  EXPECT_THROW(TestFunction::piecewise_linear(K{{0.0, 1.0}, {1.0, 0.2}}), llz::InvalidParameter);
  EXPECT_THROW(TestFunction::piecewise_linear(K{{0.0, 1.0}}), llz::InvalidParameter);
}

TEST(PiecewiseLinear, LinearCombinationIsPointwise) {
  const auto a = TestFunction::fejer(0.5);
  const auto b = TestFunction::fejer(1.7);
  const auto c = TestFunction::linear_combination(2.0, a, -0.3, b);
  EXPECT_DOUBLE_EQ(c.support(), 1.7);
  for (double x : {0.0, 0.3, 1.1, 6.2}) EXPECT_NEAR(c.eval(x), 2.0 * a.eval(x) - 0.3 * b.eval(x), 1e-13);
  for (double y : {0.0, 0.2, 0.49, 0.8, 1.6})
    EXPECT_NEAR(c.eval_hat(y), 2.0 * a.eval_hat(y) - 0.3 * b.eval_hat(y), 1e-13);
}

TEST(PiecewiseLinear, HatInnerProductExact) {
  const auto a = TestFunction::fejer(1.0);
  const auto b = TestFunction::fejer(0.5);
  // \int (1-|y|) * 2(1-2|y|) over |y| < 1/2 = 4 \int_0^{1/2} (1 - 3y + 2y^2) dy = 5/6.
  EXPECT_NEAR(a.hat_inner_product(b), 5.0 / 6.0, 1e-14);
  EXPECT_NEAR(b.hat_inner_product(a), 5.0 / 6.0, 1e-14);
}

TEST(Sinc, RemovableSingularity) {
  EXPECT_EQ(llz::sinc(0.0), 1.0);
  EXPECT_NEAR(llz::sinc(1e-6), 1.0 - 1e-12 / 6.0, 1e-18);
  EXPECT_NEAR(llz::sinc(kPi), 0.0, 1e-16);
}
