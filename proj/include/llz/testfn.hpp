#pragma once

#include <span>
#include <vector>

namespace llz {

/// sin(t)/t with the removable singularity at 0 filled in.
double sinc(double t) noexcept;

enum class TestFunctionKind { kFejer, kPiecewiseLinearFourier };

/// A sample (y, phi_hat(y)) of a piecewise-linear Fourier transform, y >= 0.
struct FourierKnot {
  double y;
  double value;
};

/// Even test function phi whose Fourier transform
///   phi_hat(y) = \int phi(x) e^{-2 pi i x y} dx
/// is compactly supported in [-support, support]. Immutable.
///
/// Both kinds are stored as knots of phi_hat on [0, support]; the physical
/// side is evaluated in closed form from the slope changes of phi_hat,
///   phi(x) = sum_i (s_i^+ - s_i^-) y_i^2 sinc^2(pi x y_i),
/// which is exact for any continuous piecewise-linear phi_hat.
class TestFunction {
 public:
  /// phi(x) = sinc^2(pi delta x), phi_hat(y) = max(1 - |y|/delta, 0) / delta.
  static TestFunction fejer(double delta);

  /// Knots must start at y = 0, be strictly increasing, and end with value 0.
  /// The last knot position is the support.
  static TestFunction piecewise_linear(std::vector<FourierKnot> knots);

  /// a*f + b*g, as a piecewise-linear Fourier-side function on the merged knots.
  static TestFunction linear_combination(double a, const TestFunction& f, double b,
                                         const TestFunction& g);

  double eval(double x) const noexcept;
  double eval_hat(double y) const noexcept;

  /// \int_{-a}^{a} phi_hat(y) dy, exact.
  double hat_integral(double a) const noexcept;

  /// \int phi_hat(y) g(y) dy for another piecewise-linear even function g, exact
  /// (Simpson on each merged segment integrates the quadratic product exactly).
  double hat_inner_product(const TestFunction& g) const noexcept;

  double support() const noexcept { return support_; }
  TestFunctionKind kind() const noexcept { return kind_; }
  std::span<const FourierKnot> fourier_knots() const noexcept { return knots_; }

  /// True when phi >= 0 is guaranteed: always for Fejer; for piecewise-linear
  /// data when every slope change at y > 0 is non-negative.
  bool known_nonnegative() const noexcept { return nonnegative_; }

 private:
  TestFunction(TestFunctionKind kind, std::vector<FourierKnot> knots);

  TestFunctionKind kind_;
  std::vector<FourierKnot> knots_;
  // slope_jumps_[i] pairs with knots_[i]; entry 0 unused (y = 0 carries no weight).
  std::vector<double> slope_jumps_;
  double support_;
  bool nonnegative_;
};

}  // namespace llz
