#include "llz/families.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "llz/errors.hpp"
#include "llz/rng.hpp"

namespace llz {

namespace {

// Jacobi symbol (a | n) for odd n > 0.
int jacobi(std::uint64_t a, std::uint64_t n) {
  a %= n;
  int t = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::uint64_t r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

std::uint64_t mod_nonneg(std::int64_t d, std::uint64_t n) {
  const std::int64_t m = d % static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(m < 0 ? m + static_cast<std::int64_t>(n) : m);
}

std::string normalize(std::string_view s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int kronecker_symbol(std::int64_t d, std::uint64_t n) {
  if (d == 0) throw InvalidParameter("Kronecker symbol needs d != 0");
  if (n == 0) throw InvalidParameter("Kronecker symbol needs n >= 1");
  int t = 1;
  if ((n & 1) == 0) {
    if ((d & 1) == 0) return 0;
    const std::uint64_t r = mod_nonneg(d, 8);
    while ((n & 1) == 0) {
      n >>= 1;
      if (r == 3 || r == 5) t = -t;
    }
  }
  if (n == 1) return t;
  return t * jacobi(mod_nonneg(d, n), n);
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return false;
  }
  return true;
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 0 || d == 1) return false;
  const std::uint64_t r = mod_nonneg(d, 4);
  const auto ad = static_cast<std::uint64_t>(std::llabs(d));
  if (r == 1) return is_squarefree(ad);
  if (r != 0) return false;
  const std::int64_t m = d / 4;
  const std::uint64_t rm = mod_nonneg(m, 4);
  return (rm == 2 || rm == 3) && is_squarefree(ad / 4);
}

std::vector<std::int64_t> fundamental_discriminants(std::int64_t X) {
  if (X < 3) throw EmptyFamily("quadratic family needs X >= 3");
  const auto n = static_cast<std::size_t>(X);
  std::vector<std::uint8_t> sqfree(n + 1, 1);
  sqfree[0] = 0;
  for (std::size_t q = 2; q * q <= n; ++q)
    for (std::size_t j = q * q; j <= n; j += q * q) sqfree[j] = 0;
  auto fundamental = [&](std::int64_t d) {
    const std::uint64_t r = mod_nonneg(d, 4);
    const auto ad = static_cast<std::size_t>(std::llabs(d));
    if (r == 1) return sqfree[ad] != 0;
    if (r != 0) return false;
    const std::uint64_t rm = mod_nonneg(d / 4, 4);
    return (rm == 2 || rm == 3) && sqfree[ad / 4] != 0;
  };
  std::vector<std::int64_t> out;
  for (std::int64_t a = 3; a <= X; ++a) {
    if (fundamental(a)) out.push_back(a);
    if (fundamental(-a)) out.push_back(-a);
  }
  return out;
}

void Family::coeff_row(std::size_t i, int k, std::span<const std::uint32_t> primes,
                       std::span<double> out) const {
  for (std::size_t j = 0; j < primes.size(); ++j) out[j] = coeff(i, primes[j], k);
}

void Family::lambda_row(std::size_t i, int k, std::span<const std::uint32_t> primes,
                        std::span<double> out) const {
  for (std::size_t j = 0; j < primes.size(); ++j) out[j] = lambda(i, primes[j], k);
}

double Family::weighted_lambda_sum(std::size_t i, int k, std::span<const std::uint32_t> primes,
                                   std::span<const double> weights) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < primes.size(); ++j) acc += weights[j] * lambda(i, primes[j], k);
  return acc;
}

double coefficient(const Family& family, std::size_t member, std::uint64_t n,
                   const PrimeTable& primes) {
  if (n == 0) throw InvalidParameter("coefficient index must be >= 1");
  double a = 1.0;
  for (const auto& [p, e] : primes.factor(n)) {
    a *= family.coeff(member, p, e);
    if (a == 0.0) break;
  }
  return a;
}

// Quadratic characters ---------------------------------------------------

QuadraticFamily::QuadraticFamily(std::int64_t X, Signs signs) : X_(X), signs_(signs) {
  for (std::int64_t d : fundamental_discriminants(X)) {
    if (signs == Signs::kPositive && d < 0) continue;
    if (signs == Signs::kNegative && d > 0) continue;
    ds_.push_back(d);
  }
  if (ds_.empty()) throw EmptyFamily("no fundamental discriminant in range");
  params_ = {1.0, 0.0, 1.0};
  symmetry_ = {Group::kSp, SignRegime::kAnySign};
  c_max_ = 0.0;
  for (std::int64_t d : ds_) c_max_ = std::max(c_max_, static_cast<double>(std::llabs(d)));
}

std::string QuadraticFamily::member_id(std::size_t i) const { return std::to_string(ds_.at(i)); }

double QuadraticFamily::conductor(std::size_t i) const {
  return static_cast<double>(std::llabs(ds_.at(i)));
}

double QuadraticFamily::coeff(std::size_t i, std::uint64_t p, int k) const {
  const int chi = kronecker_symbol(ds_[i], p);
  return (k % 2 == 0) ? static_cast<double>(chi * chi) : static_cast<double>(chi);
}

double QuadraticFamily::lambda(std::size_t i, std::uint64_t p, int k) const {
  return coeff(i, p, k);
}

double QuadraticFamily::oscillating_square(std::size_t i, std::uint64_t p) const {
  return coeff(i, p, 2) - 1.0;
}

void QuadraticFamily::lambda_row(std::size_t i, int k, std::span<const std::uint32_t> primes,
                                 std::span<double> out) const {
  const std::int64_t d = ds_[i];
  if (k % 2 == 0) {
    const auto ad = static_cast<std::uint64_t>(std::llabs(d));
    for (std::size_t j = 0; j < primes.size(); ++j) out[j] = (ad % primes[j]) ? 1.0 : 0.0;
    return;
  }
  for (std::size_t j = 0; j < primes.size(); ++j)
    out[j] = static_cast<double>(kronecker_symbol(d, primes[j]));
}

double QuadraticFamily::weighted_lambda_sum(std::size_t i, int k,
                                            std::span<const std::uint32_t> primes,
                                            std::span<const double> weights) const {
  if (k % 2 != 0) return Family::weighted_lambda_sum(i, k, primes, weights);
  // chi_d(p)^2 = 1 unless p | d: total weight minus the ramified primes.
  double acc = 0.0;
  for (double w : weights) acc += w;
  std::uint64_t ad = static_cast<std::uint64_t>(std::llabs(ds_[i]));
  for (std::uint64_t p = 2; ad > 1; ++p) {
    if (p * p > ad) p = ad;
    if (ad % p) continue;
    while (ad % p == 0) ad /= p;
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it != primes.end() && *it == p) acc -= weights[static_cast<std::size_t>(it - primes.begin())];
  }
  return acc;
}

std::vector<std::pair<std::string, std::string>> QuadraticFamily::describe() const {
  const char* s = signs_ == Signs::kBoth ? "both" : signs_ == Signs::kPositive ? "positive" : "negative";
  return {{"model", "quadratic"},
          {"X", std::to_string(X_)},
          {"signs", s},
          {"size", std::to_string(ds_.size())},
          {"conductor_max", fmt_double(c_max_)},
          {"declared_symmetry", std::string(to_string(symmetry_.group))}};
}

// Synthetic families ------------------------------------------------------

std::string_view to_string(SyntheticModel m) noexcept {
  return m == SyntheticModel::kSatoTateOrthogonal ? "sato-tate" : "random-sign";
}

SyntheticModel parse_synthetic_model(std::string_view s) {
  const std::string n = normalize(s);
  if (n == "satotate" || n == "satotateorthogonal" || n == "st") return SyntheticModel::kSatoTateOrthogonal;
  if (n == "randomsign" || n == "randomsignsymplectic" || n == "sign")
    return SyntheticModel::kRandomSignSymplectic;
  throw InvalidParameter("unknown synthetic model '" + std::string(s) + "'");
}

SyntheticFamily::SyntheticFamily(std::size_t size, SyntheticModel model, double conductor_scale,
                                 std::uint64_t seed)
    : size_(size), model_(model), seed_(seed) {
  if (size == 0) throw EmptyFamily("synthetic family needs at least one member");
  if (!(conductor_scale > 1.0)) throw InvalidParameter("conductor scale must exceed 1");
  c_max_ = conductor_scale;
  if (model == SyntheticModel::kSatoTateOrthogonal) {
    params_ = {-1.0, 0.0, 1.0};
    symmetry_ = {Group::kO, SignRegime::kAnySign};
  } else {
    params_ = {1.0, 0.0, 1.0};
    symmetry_ = {Group::kSp, SignRegime::kAnySign};
  }
}

std::string SyntheticFamily::member_id(std::size_t i) const {
  return std::string(to_string(model_)) + "-" + std::to_string(i);
}

double SyntheticFamily::sato_tate_angle(std::size_t i, std::uint64_t p) const {
  // Rejection from the uniform law on [0, pi]; the density is (2/pi) sin^2.
  CounterRng rng(seed_, i, p, 0x5a70);
  for (;;) {
    const double theta = std::numbers::pi * rng.uniform();
    const double s = std::sin(theta);
    if (rng.uniform() < s * s) return theta;
  }
}

int SyntheticFamily::random_sign(std::size_t i, std::uint64_t p) const {
  return (stream_key(seed_, i, p, 0x5167) >> 63) ? 1 : -1;
}

double SyntheticFamily::coeff(std::size_t i, std::uint64_t p, int k) const {
  if (model_ == SyntheticModel::kRandomSignSymplectic)
    return (k % 2 == 0) ? 1.0 : static_cast<double>(random_sign(i, p));
  // a(p^k) = U_k(cos theta) = sin((k+1) theta) / sin theta.
  const double theta = sato_tate_angle(i, p);
  const double s = std::sin(theta);
  if (std::abs(s) < 1e-12) return (k + 1) * ((theta > 1.0 && k % 2) ? -1.0 : 1.0);
  return std::sin((k + 1) * theta) / s;
}

double SyntheticFamily::lambda(std::size_t i, std::uint64_t p, int k) const {
  if (model_ == SyntheticModel::kRandomSignSymplectic)
    return (k % 2 == 0) ? 1.0 : static_cast<double>(random_sign(i, p));
  return 2.0 * std::cos(k * sato_tate_angle(i, p));
}

double SyntheticFamily::oscillating_square(std::size_t i, std::uint64_t p) const {
  if (model_ == SyntheticModel::kRandomSignSymplectic) return 0.0;
  const double c = std::cos(sato_tate_angle(i, p));
  return 4.0 * c * c - 1.0;
}

std::vector<std::pair<std::string, std::string>> SyntheticFamily::describe() const {
  return {{"model", std::string(to_string(model_))},
          {"size", std::to_string(size_)},
          {"seed", std::to_string(seed_)},
          {"conductor_scale", fmt_double(c_max_)},
          {"declared_symmetry", std::string(to_string(symmetry_.group))}};
}

NullFamily::NullFamily(std::size_t size, double conductor) : size_(size) {
  if (size == 0) throw EmptyFamily("null family needs at least one member");
  c_max_ = conductor;
  symmetry_ = {Group::kU, SignRegime::kAnySign};
  params_ = {0.0, 0.0, 1.0};
}

std::vector<std::pair<std::string, std::string>> NullFamily::describe() const {
  return {{"model", "null"}, {"size", std::to_string(size_)}, {"conductor_scale", fmt_double(c_max_)}};
}

}  // namespace llz
