#include "llz/predictions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "llz/errors.hpp"

namespace llz {

namespace {

// kappa on one branch as R + P u + Q u^2 with u = 1/delta.
struct Branch {
  double R, P, Q;
  double at(double u) const noexcept { return R + P * u + Q * u * u; }
};

Branch small_support_branch(Group g) noexcept {
  switch (g) {
    case Group::kO:
    case Group::kSOeven:
    case Group::kSOodd: return {0.5, 1.0, 0.0};
    case Group::kSp: return {-0.5, 1.0, 0.0};
    case Group::kU: return {0.0, 1.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

Branch large_support_branch(Group g) noexcept {
  switch (g) {
    case Group::kO: return {0.5, 1.0, 0.0};
    case Group::kSOeven: return {0.0, 2.0, -0.5};
    case Group::kSOodd: return {1.0, 0.0, 0.5};
    case Group::kSp: return {0.0, 0.0, 0.5};
    case Group::kU: return {0.0, 1.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

double regime_factor(SignRegime r) noexcept { return r == SignRegime::kAnySign ? 1.0 : 0.5; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError("cannot parse number '" + t + "'");
  return v;
}

}  // namespace

Support::Support(double delta) : delta_(delta), infinite_(false) {
  if (std::isinf(delta) && delta > 0) {
    infinite_ = true;
    delta_ = 0.0;
    return;
  }
  if (!(delta > 0.0)) throw InvalidParameter("support delta must be positive");
}

double Support::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : delta_;
}

std::string Support::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << delta_;
  return os.str();
}

Support Support::parse(std::string_view text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "Inf" || t == "oo") return infinite();
  return Support(parse_rational(t));
}

double parse_rational(std::string_view text) {
  const std::string t = trim(text);
  if (auto slash = t.find('/'); slash != std::string::npos) {
    const double num = parse_double(std::string_view(t).substr(0, slash));
    const double den = parse_double(std::string_view(t).substr(slash + 1));
    if (den == 0.0) throw ParseError("zero denominator in '" + t + "'");
    return num / den;
  }
  return parse_double(t);
}

double kappa(Group g, Support delta) {
  if (delta.is_infinite()) return large_support_branch(g).R;
  const double d = delta.value();
  const double u = 1.0 / d;
  return d < 1.0 ? small_support_branch(g).at(u) : large_support_branch(g).at(u);
}

EtaEntry eta(SymmetryType type, Support delta) {
  const double raw = 1.0 - regime_factor(type.sign_regime) * kappa(type.group, delta);
  return {type, delta, raw, std::clamp(raw, 0.0, 1.0)};
}

std::optional<double> delta_min(SymmetryType type) {
  const double c = regime_factor(type.sign_regime);
  // eta_raw is nondecreasing in delta on both branches, so the infimum is the
  // first root. Small-support branch: 1 - c (R + P u) = 0.
  const Branch lo = small_support_branch(type.group);
  if (lo.P != 0.0) {
    const double u = (1.0 / c - lo.R) / lo.P;
    if (u > 1.0) return 1.0 / u;
  }
  // Large-support branch on u in (0, 1]: c Q u^2 + c P u + (c R - 1) = 0.
  const Branch hi = large_support_branch(type.group);
  auto g = [&](double u) { return 1.0 - c * hi.at(u); };
  if (g(1.0) >= 0.0) return 1.0;
  if (g(0.0) <= 0.0) return std::nullopt;
  const double a = c * hi.Q, b = c * hi.P, k = c * hi.R - 1.0;
  double root;
  if (a == 0.0) {
    root = -k / b;
  } else {
    // Stable quadratic roots; keep the one in (0, 1].
    const double disc = std::sqrt(b * b - 4.0 * a * k);
    const double q = -0.5 * (b + std::copysign(disc, b));
    const double r1 = q / a, r2 = k / q;
    root = (r1 > 0.0 && r1 <= 1.0) ? r1 : r2;
  }
  return 1.0 / root;
}

double nonvanishing_bound(double density_value, SignRegime regime) {
  return std::clamp(1.0 - regime_factor(regime) * density_value, 0.0, 1.0);
}

double nonvanishing_bound(double density_value, SignRegime regime, const TestFunction& phi) {
  if (std::abs(phi.eval(0.0) - 1.0) > 1e-12)
    throw InvalidParameter("nonvanishing bound needs a test function with phi(0) = 1");
  if (!phi.known_nonnegative())
    throw InvalidParameter("nonvanishing bound needs a non-negative test function");
  return nonvanishing_bound(density_value, regime);
}

std::vector<KnownResult> read_known_results(std::istream& in) {
  std::vector<KnownResult> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(trim(cell));
    if (f.size() != 7)
      throw ParseError("known results line " + std::to_string(line_no) + ": expected 7 fields");
    KnownResult r;
    r.family = f[0];
    r.aspect = f[1];
    if (!f[2].empty()) r.type = SymmetryType{parse_group(f[2]), parse_sign_regime(f[3])};
    if (f[4] == "eps") {
      r.delta_is_epsilon = true;
    } else if (f[4] != "cited" && !f[4].empty()) {
      r.delta = Support::parse(f[4]);
    }
    r.printed_eta = f[5];
    r.reference = f[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<KnownResult> read_known_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open known results file '" + path + "'");
  return read_known_results(in);
}

std::vector<KnownResultCheck> check_known_results(const std::vector<KnownResult>& rows) {
  std::vector<KnownResultCheck> out;
  for (const auto& row : rows) {
    KnownResultCheck c{row, std::nullopt, std::nullopt, false};
    if (!row.printed_eta.empty() && row.printed_eta != "-") c.printed = parse_rational(row.printed_eta);
    if (row.type) {
      if (row.delta) {
        c.recomputed = eta(*row.type, *row.delta).eta;
      } else if (row.delta_is_epsilon) {
        // Arbitrarily small support: the small-support branch diverges to -inf.
        c.recomputed = 0.0;
      }
    }
    c.matches = c.recomputed && c.printed && std::abs(*c.recomputed - *c.printed) <= 1e-12;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace llz
