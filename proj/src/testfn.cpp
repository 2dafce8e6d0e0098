#include "llz/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "llz/errors.hpp"

namespace llz {

double sinc(double t) noexcept {
  if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

TestFunction::TestFunction(TestFunctionKind kind, std::vector<FourierKnot> knots)
    : kind_(kind), knots_(std::move(knots)) {
  if (knots_.size() < 2) throw InvalidParameter("test function needs at least two Fourier knots");
  if (knots_.front().y != 0.0) throw InvalidParameter("first Fourier knot must sit at y = 0");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].y > knots_[i - 1].y))
      throw InvalidParameter("Fourier knots must be strictly increasing in y");
  }
  if (knots_.back().value != 0.0)
    throw InvalidParameter("phi_hat must vanish at the last knot (compact support)");
  for (const auto& k : knots_) {
    if (!std::isfinite(k.y) || !std::isfinite(k.value))
      throw InvalidParameter("Fourier knots must be finite");
  }
  support_ = knots_.back().y;

  const std::size_t n = knots_.size();
  slope_jumps_.assign(n, 0.0);
  nonnegative_ = true;
  for (std::size_t i = 1; i < n; ++i) {
    const double left = (knots_[i].value - knots_[i - 1].value) / (knots_[i].y - knots_[i - 1].y);
    const double right =
        i + 1 < n ? (knots_[i + 1].value - knots_[i].value) / (knots_[i + 1].y - knots_[i].y)
                  : 0.0;
    slope_jumps_[i] = right - left;
    if (slope_jumps_[i] < 0.0) nonnegative_ = false;
  }
}

TestFunction TestFunction::fejer(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter("Fejer support must be a positive finite real, got " +
                           std::to_string(delta));
  TestFunction f(TestFunctionKind::kFejer, {{0.0, 1.0 / delta}, {delta, 0.0}});
  f.nonnegative_ = true;
  return f;
}

TestFunction TestFunction::piecewise_linear(std::vector<FourierKnot> knots) {
  return TestFunction(TestFunctionKind::kPiecewiseLinearFourier, std::move(knots));
}

TestFunction TestFunction::linear_combination(double a, const TestFunction& f, double b,
                                              const TestFunction& g) {
  std::vector<double> ys;
  ys.reserve(f.knots_.size() + g.knots_.size());
  for (const auto& k : f.knots_) ys.push_back(k.y);
  for (const auto& k : g.knots_) ys.push_back(k.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<FourierKnot> knots;
  knots.reserve(ys.size());
  for (double y : ys) knots.push_back({y, a * f.eval_hat(y) + b * g.eval_hat(y)});
  knots.back().value = 0.0;
  return piecewise_linear(std::move(knots));
}

double TestFunction::eval(double x) const noexcept {
  if (kind_ == TestFunctionKind::kFejer) {
    const double s = sinc(std::numbers::pi * support_ * x);
    return s * s;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double y = knots_[i].y;
    const double s = sinc(std::numbers::pi * x * y);
    acc += slope_jumps_[i] * y * y * s * s;
  }
  return acc;
}

double TestFunction::eval_hat(double y) const noexcept {
  const double ay = std::abs(y);
  if (ay >= support_) return 0.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), ay,
                             [](double v, const FourierKnot& k) { return v < k.y; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (ay - lo.y) / (hi.y - lo.y);
  return lo.value + t * (hi.value - lo.value);
}

double TestFunction::hat_integral(double a) const noexcept {
  if (a <= 0.0) return 0.0;
  double half = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double y0 = knots_[i - 1].y;
    if (y0 >= a) break;
    const double y1 = std::min(knots_[i].y, a);
    half += 0.5 * (y1 - y0) * (eval_hat(y0) + eval_hat(y1));
  }
  return 2.0 * half;
}

double TestFunction::hat_inner_product(const TestFunction& g) const noexcept {
  std::vector<double> ys;
  for (const auto& k : knots_) ys.push_back(k.y);
  for (const auto& k : g.knots_) ys.push_back(k.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const double end = std::min(support_, g.support_);
  double half = 0.0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    const double y0 = ys[i - 1];
    if (y0 >= end) break;
    const double y1 = std::min(ys[i], end);
    const double ym = 0.5 * (y0 + y1);
    half += (y1 - y0) / 6.0 *
            (eval_hat(y0) * g.eval_hat(y0) + 4.0 * eval_hat(ym) * g.eval_hat(ym) +
             eval_hat(y1) * g.eval_hat(y1));
  }
  return 2.0 * half;
}

}  // namespace llz
