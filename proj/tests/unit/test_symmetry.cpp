#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "llz/errors.hpp"
#include "llz/symmetry.hpp"

using llz::Group;
using llz::TestFunction;

namespace {

constexpr Group kGroups[] = {Group::kU, Group::kO, Group::kSOeven, Group::kSOodd, Group::kSp};

// Fejer kappa in closed form, typed in independently of the library tables.
double kappa_closed(Group g, double d) {
  const bool small = d < 1.0;
  switch (g) {
    case Group::kU: return 1.0 / d;
    case Group::kO: return 1.0 / d + 0.5;
    case Group::kSOeven: return small ? 1.0 / d + 0.5 : 2.0 / d - 1.0 / (2 * d * d);
    case Group::kSOodd: return small ? 1.0 / d + 0.5 : 1.0 + 1.0 / (2 * d * d);
    case Group::kSp: return small ? 1.0 / d - 0.5 : 1.0 / (2 * d * d);
  }
  return NAN;
}

}  // namespace

TEST(Symmetry, SmoothPartValues) {
  EXPECT_EQ(llz::density_smooth_part(Group::kU, 3.7), 1.0);
  EXPECT_EQ(llz::density_smooth_part(Group::kSp, 0.0), 0.0);
  EXPECT_NEAR(llz::density_smooth_part(Group::kSOeven, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(llz::density_smooth_part(Group::kSOeven, 0.0), 2.0, 1e-15);
  EXPECT_EQ(llz::density_smooth_part(Group::kO, 0.3), 1.0);
  const double x = 0.37;
  EXPECT_NEAR(llz::density_smooth_part(Group::kSOodd, x),
              1.0 - std::sin(2 * std::numbers::pi * x) / (2 * std::numbers::pi * x), 1e-15);
}

TEST(Symmetry, DiracWeights) {
  EXPECT_EQ(llz::dirac_weight(Group::kO), 0.5);
  EXPECT_EQ(llz::dirac_weight(Group::kU), 0.0);
  EXPECT_EQ(llz::dirac_weight(Group::kSp), 0.0);
  EXPECT_EQ(llz::dirac_weight(Group::kSOeven), 0.0);
  // Forced eigenvalue 1 of every SO(2N+1) element: a full unit atom.
  EXPECT_EQ(llz::dirac_weight(Group::kSOodd), 1.0);
}

TEST(Symmetry, DensityIntegralExamples) {
  for (double d : {0.4, 1.0, 2.5}) EXPECT_NEAR(llz::density_integral(Group::kU, TestFunction::fejer(d)), 1.0 / d, 1e-14);
  EXPECT_NEAR(llz::density_integral(Group::kSp, TestFunction::fejer(0.5)), 1.5, 1e-14);
  EXPECT_NEAR(llz::density_integral(Group::kSOeven, TestFunction::fejer(2.0)), 0.875, 1e-14);
}

TEST(Symmetry, DensityIntegralMatchesTableThreeOnGrid) {
  for (Group g : kGroups)
    for (int i = 1; i <= 60; ++i) {
      const double d = 0.05 * i;
      EXPECT_NEAR(llz::density_integral(g, TestFunction::fejer(d)), kappa_closed(g, d), 1e-12)
          << llz::to_string(g) << " " << d;
    }
}

TEST(Symmetry, ClosedFormsAreContinuousAtOne) {
  for (Group g : kGroups) EXPECT_NEAR(kappa_closed(g, 1.0 - 1e-12), kappa_closed(g, 1.0), 1e-10);
  EXPECT_NEAR(llz::density_integral(Group::kSOeven, TestFunction::fejer(1.0)), 1.5, 1e-14);
}

TEST(Symmetry, QuadratureAgreesWithClosedForm) {
  for (Group g : kGroups)
    for (double d : {0.3, 0.5, 1.0, 1.5, 2.0}) {
      const auto phi = TestFunction::fejer(d);
      EXPECT_NEAR(llz::density_integral_quadrature(g, phi, 500.0, 1'000'000), llz::density_integral(g, phi), 5e-3)
          << llz::to_string(g) << " " << d;
    }
}

TEST(Symmetry, QuadratureExamplesAndTailDecay) {
  EXPECT_NEAR(llz::density_integral_quadrature(Group::kU, TestFunction::fejer(1), 200, 1'000'000), 1.0, 1e-2);
  const auto phi = TestFunction::fejer(0.5);
  const double e200 = std::abs(llz::density_integral_quadrature(Group::kSp, phi, 200, 1'000'000) - 1.5);
  const double e400 = std::abs(llz::density_integral_quadrature(Group::kSp, phi, 400, 1'000'000) - 1.5);
  EXPECT_LT(e200, 1e-2);
  EXPECT_GT(e200 / e400, 1.5);
}

TEST(Symmetry, QuadratureRejectsBadGrids) {
  const auto phi = TestFunction::fejer(1);
  EXPECT_THROW(llz::density_integral_quadrature(Group::kU, phi, 10.0, 1'000'000), llz::InvalidParameter);
  EXPECT_THROW(llz::density_integral_quadrature(Group::kU, phi, 500.0, 100), llz::InvalidParameter);
}

TEST(Symmetry, OrthogonalIsAverageOfBothFlavours) {
  const TestFunction phis[] = {
      TestFunction::fejer(0.6), TestFunction::fejer(1.7),
      TestFunction::piecewise_linear({{0.0, 2.0}, {0.3, 1.1}, {0.9, 0.7}, {2.4, 0.0}}),
      TestFunction::piecewise_linear({{0.0, 0.1}, {1.5, 0.9}, {3.0, 0.0}})};
  for (const auto& phi : phis) {
    const double o = llz::density_integral(Group::kO, phi);
    const double avg = 0.5 * (llz::density_integral(Group::kSOeven, phi) + llz::density_integral(Group::kSOodd, phi));
    EXPECT_NEAR(o, avg, 1e-13);
  }
}

TEST(Symmetry, OrthogonalFlavoursAgreeBelowSupportOne) {
  for (double d : {0.2, 0.7, 1.0}) {
    const auto phi = TestFunction::fejer(d);
    const double o = llz::density_integral(Group::kO, phi);
    EXPECT_NEAR(llz::density_integral(Group::kSOeven, phi), o, 1e-13);
    EXPECT_NEAR(llz::density_integral(Group::kSOodd, phi), o, 1e-13);
  }
  const auto phi = TestFunction::fejer(1.5);
  EXPECT_GT(llz::density_integral(Group::kSOodd, phi), llz::density_integral(Group::kSOeven, phi));
}

TEST(Symmetry, FamilyDensityIntegral) {
  using P = llz::FamilyDensityParams;
  EXPECT_NEAR(llz::family_density_integral(P{1.0, std::nullopt, 1.0}, TestFunction::fejer(0.5)), 1.5, 1e-14);
  const auto phi = TestFunction::fejer(1.3);
  EXPECT_EQ(llz::family_density_integral(P{0.0, std::nullopt, 1.0}, phi), phi.eval_hat(0.0));
  EXPECT_NEAR(llz::family_density_integral(P{-1.0, std::nullopt, 1.0}, TestFunction::fejer(1.0)), 1.5, 1e-14);
  // h_F enters through its Fourier transform.
  const auto h = TestFunction::piecewise_linear({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
  const auto h2 = TestFunction::piecewise_linear({{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_NEAR(llz::family_density_integral(P{1.0, h, 1.0}, phi), llz::family_density_integral(P{1.0, std::nullopt, 1.0}, phi), 1e-15);
  EXPECT_NEAR(llz::family_density_integral(P{0.0, h2, 1.0}, phi) - phi.eval_hat(0.0), phi.hat_inner_product(h2), 1e-15);
  EXPECT_THROW(llz::family_density_integral(P{1.0, std::nullopt, 0.0}, phi), llz::InvalidParameter);
}

TEST(Symmetry, FamilyDensityMatchesSymplecticForSmallSupport) {
  for (int i = 1; i <= 20; ++i) {
    const auto phi = TestFunction::fejer(0.05 * i);
    EXPECT_NEAR(llz::family_density_integral({1.0, std::nullopt, 1.0}, phi), llz::density_integral(Group::kSp, phi), 1e-13);
    EXPECT_NEAR(llz::family_density_integral({-1.0, std::nullopt, 1.0}, phi), llz::density_integral(Group::kO, phi), 1e-13);
  }
}

TEST(Symmetry, Parsing) {
  EXPECT_EQ(llz::parse_group("sp"), Group::kSp);
  EXPECT_EQ(llz::parse_group("SO(even)"), Group::kSOeven);
  EXPECT_EQ(llz::parse_group("so-odd"), Group::kSOodd);
  EXPECT_EQ(llz::parse_group("U"), Group::kU);
  EXPECT_EQ(llz::parse_group("o"), Group::kO);
  EXPECT_THROW(llz::parse_group("GL3"), llz::InvalidParameter);
  EXPECT_EQ(llz::parse_sign_regime("any"), llz::SignRegime::kAnySign);
  EXPECT_EQ(llz::parse_sign_regime("eps=1"), llz::SignRegime::kAllPlusOne);
  EXPECT_THROW(llz::parse_sign_regime("sometimes"), llz::InvalidParameter);
  for (Group g : kGroups) EXPECT_EQ(llz::parse_group(llz::to_string(g)), g);
}

TEST(Symmetry, VacuousType) {
  EXPECT_TRUE((llz::SymmetryType{Group::kSOodd, llz::SignRegime::kAllPlusOne}.is_vacuous()));
  EXPECT_FALSE((llz::SymmetryType{Group::kSOodd, llz::SignRegime::kAnySign}.is_vacuous()));
  EXPECT_FALSE((llz::SymmetryType{Group::kSp, llz::SignRegime::kAllPlusOne}.is_vacuous()));
}
