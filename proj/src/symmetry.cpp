#include "llz/symmetry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "llz/errors.hpp"

namespace llz {

namespace {

std::string normalize(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '=')
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view to_string(Group g) noexcept {
  switch (g) {
    case Group::kU: return "U";
    case Group::kO: return "O";
    case Group::kSOeven: return "SO(even)";
    case Group::kSOodd: return "SO(odd)";
    case Group::kSp: return "Sp";
  }
  return "?";
}

std::string_view to_string(SignRegime r) noexcept {
  return r == SignRegime::kAnySign ? "any" : "plus_one";
}

Group parse_group(std::string_view s) {
  const std::string n = normalize(s);
  if (n == "u" || n == "unitary") return Group::kU;
  if (n == "o" || n == "orthogonal") return Group::kO;
  if (n == "soeven" || n == "evenorthogonal") return Group::kSOeven;
  if (n == "soodd" || n == "oddorthogonal") return Group::kSOodd;
  if (n == "sp" || n == "usp" || n == "symplectic") return Group::kSp;
  throw InvalidParameter("unknown symmetry group '" + std::string(s) + "'");
}

SignRegime parse_sign_regime(std::string_view s) {
  const std::string n = normalize(s);
  if (n == "any" || n == "anysign") return SignRegime::kAnySign;
  if (n == "plus" || n == "plusone" || n == "allplusone" || n == "eps=1" || n == "epsilon=1" ||
      n == "1")
    return SignRegime::kAllPlusOne;
  throw InvalidParameter("unknown sign regime '" + std::string(s) + "'");
}

double density_smooth_part(Group g, double x) noexcept {
  const int s = sine_kernel_sign(g);
  if (s == 0) return 1.0;
  return 1.0 + s * sinc(2.0 * std::numbers::pi * x);
}

double dirac_weight(Group g) noexcept {
  switch (g) {
    case Group::kO: return 0.5;
    case Group::kSOodd: return 1.0;
    default: return 0.0;
  }
}

int sine_kernel_sign(Group g) noexcept {
  switch (g) {
    case Group::kSOeven: return 1;
    case Group::kSOodd:
    case Group::kSp: return -1;
    default: return 0;
  }
}

double density_integral(Group g, const TestFunction& phi) noexcept {
  double value = phi.eval_hat(0.0) + dirac_weight(g) * phi.eval(0.0);
  if (const int s = sine_kernel_sign(g); s != 0) value += 0.5 * s * phi.hat_integral(1.0);
  return value;
}

double density_integral_quadrature(Group g, const TestFunction& phi, double cutoff,
                                   long n_points) {
  if (!(cutoff >= 50.0)) throw InvalidParameter("quadrature cutoff must be >= 50");
  if (n_points < 10'000) throw InvalidParameter("quadrature needs at least 1e4 points");
  // Integrand is even: Simpson on [0, cutoff] with an even number of panels.
  long panels = n_points / 2;
  if (panels % 2) ++panels;
  const double h = cutoff / static_cast<double>(panels);
  auto f = [&](double x) { return phi.eval(x) * density_smooth_part(g, x); };
  double acc = f(0.0) + f(cutoff);
  for (long i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(h * static_cast<double>(i));
  const double half = acc * h / 3.0;
  return 2.0 * half + dirac_weight(g) * phi.eval(0.0);
}

double family_density_integral(const FamilyDensityParams& params, const TestFunction& phi) {
  if (!(params.n_F > 0.0)) throw InvalidParameter("n_F must be positive");
  double value = phi.eval_hat(0.0) - 0.5 * params.gamma_F * phi.eval(0.0);
  if (params.h_hat) value += phi.hat_inner_product(*params.h_hat);
  return value;
}

}  // namespace llz
