#pragma once

#include <cstdint>

namespace llz {

/// L(1/2, chi_d) for a fundamental discriminant d with |d| <= 1e7, from the
/// symmetric smoothed approximate functional equation
///   L(1/2) = 2 sum_n chi_d(n) n^{-1/2} Q(s0, pi n^2 / |d|),
/// where Q is the regularized upper incomplete gamma function and s0 = 1/4
/// (d > 0) or 3/4 (d < 0). Terms are summed until Q < tolerance.
/// Throws InvalidParameter for non-fundamental d.
double central_value_quadratic(std::int64_t d, double tolerance = 1e-12);

/// Number of series terms used at the given tolerance.
std::uint64_t central_value_terms(std::int64_t d, double tolerance = 1e-12);

}  // namespace llz
