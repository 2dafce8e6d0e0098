#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "llz/testfn.hpp"

namespace llz {

enum class Group { kU, kO, kSOeven, kSOodd, kSp };
enum class SignRegime { kAnySign, kAllPlusOne };

inline constexpr Group kAllGroups[] = {Group::kO, Group::kSOeven, Group::kSOodd, Group::kSp,
                                       Group::kU};

std::string_view to_string(Group g) noexcept;
std::string_view to_string(SignRegime r) noexcept;
/// Accepts "U", "O", "SOeven", "SO(even)", "so-even", "Sp", ... (case-insensitive).
Group parse_group(std::string_view s);
/// Accepts "any", "AnySign", "plus", "AllPlusOne", "eps=1".
SignRegime parse_sign_regime(std::string_view s);

struct SymmetryType {
  Group group = Group::kU;
  SignRegime sign_regime = SignRegime::kAnySign;

  /// SO(odd) with every sign +1 is representable but vacuous: such families
  /// have epsilon_L = -1 forced.
  bool is_vacuous() const noexcept {
    return group == Group::kSOodd && sign_regime == SignRegime::kAllPlusOne;
  }
  friend bool operator==(const SymmetryType&, const SymmetryType&) = default;
};

/// Non-atomic part of W_G at x.
double density_smooth_part(Group g, double x) noexcept;

/// Mass of the Dirac atom at 0 in W_G: 1/2 for O, 1 for SO(odd) (the forced
/// eigenvalue 1), else 0.
double dirac_weight(Group g) noexcept;

/// Coefficient of the sine kernel on the Fourier side: +1 SO(even), -1 SO(odd)/Sp, 0 U/O.
int sine_kernel_sign(Group g) noexcept;

/// \int phi W_G evaluated on the Fourier side:
///   phi_hat(0) + dirac_weight * phi(0) + s_G/2 \int_{-1}^{1} phi_hat.
double density_integral(Group g, const TestFunction& phi) noexcept;

/// Composite Simpson on [-cutoff, cutoff] of phi times the smooth part of W_G,
/// plus the atom. The tail neglected is O(1/cutoff) for Fejer phi.
double density_integral_quadrature(Group g, const TestFunction& phi, double cutoff = 500.0,
                                   long n_points = 1'000'000);

/// Parameters of W_F = 1 - gamma_F/2 delta_0 + h_F. h_F is stored through its
/// Fourier transform as piecewise-linear data.
struct FamilyDensityParams {
  double gamma_F = 0.0;
  std::optional<TestFunction> h_hat;
  double n_F = 1.0;
};

/// phi_hat(0) - gamma_F/2 phi(0) + \int h_F phi.
double family_density_integral(const FamilyDensityParams& params, const TestFunction& phi);

}  // namespace llz
