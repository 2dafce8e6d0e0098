#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llz/symmetry.hpp"
#include "llz/testfn.hpp"

namespace llz {

/// Fourier support delta: a positive real or the symbolic value infinity.
class Support {
 public:
  explicit Support(double delta);
  static Support infinite() noexcept { return Support(); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; +inf for the symbolic infinity.
  double value() const noexcept;
  std::string to_string() const;

  /// Parses "2", "3/2", "inf", "infinity".
  static Support parse(std::string_view text);

 private:
  Support() noexcept : delta_(0.0), infinite_(true) {}
  double delta_;
  bool infinite_;
};

/// kappa = \int W_G phi for the Fejer function of support delta, per branch
/// (delta < 1, delta >= 1, delta = infinity).
double kappa(Group g, Support delta);

struct EtaEntry {
  SymmetryType type;
  Support delta;
  double eta_raw;  // may be negative
  double eta;      // clamped to [0, 1]
};

/// eta_raw = 1 - kappa (any sign) or 1 - kappa/2 (all signs +1).
EtaEntry eta(SymmetryType type, Support delta);

/// Smallest support with eta_raw > 0 (an infimum); nullopt when no finite
/// support gives a positive proportion.
std::optional<double> delta_min(SymmetryType type);

/// Lower bound on the proportion of nonvanishing central values from an
/// estimate of \int W_F phi, clamped to [0, 1].
double nonvanishing_bound(double density_value, SignRegime regime);

/// Same, after checking the test function qualifies (phi(0) = 1, phi >= 0).
double nonvanishing_bound(double density_value, SignRegime regime, const TestFunction& phi);

/// One row of the literature survey of known supports. `delta` is empty when
/// the support is only given by citation; `delta_is_epsilon` marks an
/// arbitrarily small support.
struct KnownResult {
  std::string family;
  std::string aspect;
  std::optional<SymmetryType> type;
  std::optional<Support> delta;
  bool delta_is_epsilon = false;
  std::string printed_eta;  // as printed, e.g. "9/16"
  std::string reference;
};

struct KnownResultCheck {
  KnownResult row;
  std::optional<double> recomputed;  // empty when the row is not recomputable
  std::optional<double> printed;
  bool matches = false;
};

/// Reads the CSV survey (family,aspect,group,sign_regime,delta,eta,reference).
std::vector<KnownResult> read_known_results(std::istream& in);
std::vector<KnownResult> read_known_results_file(const std::string& path);

/// Recomputes eta for each row and compares with the printed value to 1e-12.
std::vector<KnownResultCheck> check_known_results(const std::vector<KnownResult>& rows);

/// Parses "p/q", integers, or decimals.
double parse_rational(std::string_view text);

}  // namespace llz
