#include "llz/lvalues.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "llz/errors.hpp"
#include "llz/families.hpp"

namespace llz {

namespace {

void check(std::int64_t d, double tolerance) {
  if (!is_fundamental_discriminant(d))
    throw InvalidParameter(std::to_string(d) + " is not a fundamental discriminant");
  if (std::llabs(d) > 10'000'000) throw UnsupportedArgument("|d| above 1e7");
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidParameter("tolerance must lie in (0, 1)");
}

double shape(std::int64_t d) { return d > 0 ? 0.25 : 0.75; }

}  // namespace

std::uint64_t central_value_terms(std::int64_t d, double tolerance) {
  check(d, tolerance);
  const double q = static_cast<double>(std::llabs(d));
  const double s0 = shape(d);
  std::uint64_t n = 1;
  while (boost::math::gamma_q(s0, std::numbers::pi * static_cast<double>(n * n) / q) >= tolerance) ++n;
  return n;
}

double central_value_quadratic(std::int64_t d, double tolerance) {
  check(d, tolerance);
  const double q = static_cast<double>(std::llabs(d));
  const double s0 = shape(d);
  double acc = 0.0;
  for (std::uint64_t n = 1;; ++n) {
    const double v = boost::math::gamma_q(s0, std::numbers::pi * static_cast<double>(n * n) / q);
    if (v < tolerance) break;
    if (const int chi = kronecker_symbol(d, n); chi != 0) acc += chi * v / std::sqrt(static_cast<double>(n));
  }
  return 2.0 * acc;
}

}  // namespace llz
