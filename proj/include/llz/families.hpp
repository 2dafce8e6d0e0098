#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "llz/primes.hpp"
#include "llz/symmetry.hpp"

namespace llz {

/// (d | n) for d != 0, n >= 1.
int kronecker_symbol(std::int64_t d, std::uint64_t n);

bool is_squarefree(std::uint64_t n);
bool is_fundamental_discriminant(std::int64_t d);

/// Fundamental discriminants with 3 <= |d| <= X, ordered by |d| then positive first.
std::vector<std::int64_t> fundamental_discriminants(std::int64_t X);

enum class RootNumber { kPlus, kMinus, kUnknown };

/// Hecke-relation constants: Lambda(p^2)/log p = a~(p^2) + gamma_1 a(p) + gamma_F.
struct FamilyParams {
  double gamma_F = 0.0;
  double gamma_1 = 0.0;
  double n_F = 1.0;
};

/// A finite family of L-functions given by coefficient oracles. Members are
/// addressed by index. Implementations are immutable and thread-safe.
///
/// Oracles are only queried at primes p; `lambda` returns Lambda(p^k)/log p,
/// the power sum of the Satake parameters.
class Family {
 public:
  virtual ~Family() = default;

  virtual std::size_t size() const noexcept = 0;
  virtual std::string member_id(std::size_t i) const = 0;
  virtual double conductor(std::size_t i) const = 0;
  virtual RootNumber root_number(std::size_t) const { return RootNumber::kUnknown; }
  virtual int degree() const noexcept = 0;

  virtual double coeff(std::size_t i, std::uint64_t p, int k) const = 0;
  virtual double lambda(std::size_t i, std::uint64_t p, int k) const = 0;
  /// Oscillating part a~(p^2) of the Hecke decomposition.
  virtual double oscillating_square(std::size_t i, std::uint64_t p) const = 0;

  /// out[j] = coeff(i, primes[j], k). Overridden where a row can be made cheaper.
  virtual void coeff_row(std::size_t i, int k, std::span<const std::uint32_t> primes,
                         std::span<double> out) const;
  virtual void lambda_row(std::size_t i, int k, std::span<const std::uint32_t> primes,
                          std::span<double> out) const;
  /// sum_j weights[j] * lambda(i, primes[j], k).
  virtual double weighted_lambda_sum(std::size_t i, int k, std::span<const std::uint32_t> primes,
                                     std::span<const double> weights) const;

  FamilyParams params() const noexcept { return params_; }
  SymmetryType declared_symmetry() const noexcept { return symmetry_; }
  /// c(F): the largest member conductor.
  double c_max() const noexcept { return c_max_; }

  /// Flat key/value description for manifests.
  virtual std::vector<std::pair<std::string, std::string>> describe() const = 0;

 protected:
  FamilyParams params_;
  SymmetryType symmetry_;
  double c_max_ = 1.0;
};

/// a_L(n) from the prime-power oracle by factoring n with the table.
double coefficient(const Family& family, std::size_t member, std::uint64_t n,
                   const PrimeTable& primes);

/// Real primitive characters chi_d, ordered as fundamental_discriminants(X).
class QuadraticFamily final : public Family {
 public:
  enum class Signs { kBoth, kPositive, kNegative };

  explicit QuadraticFamily(std::int64_t X, Signs signs = Signs::kBoth);

  std::size_t size() const noexcept override { return ds_.size(); }
  std::string member_id(std::size_t i) const override;
  double conductor(std::size_t i) const override;
  RootNumber root_number(std::size_t) const override { return RootNumber::kPlus; }
  int degree() const noexcept override { return 1; }

  double coeff(std::size_t i, std::uint64_t p, int k) const override;
  double lambda(std::size_t i, std::uint64_t p, int k) const override;
  double oscillating_square(std::size_t i, std::uint64_t p) const override;

  void lambda_row(std::size_t i, int k, std::span<const std::uint32_t> primes,
                  std::span<double> out) const override;
  double weighted_lambda_sum(std::size_t i, int k, std::span<const std::uint32_t> primes,
                             std::span<const double> weights) const override;

  std::vector<std::pair<std::string, std::string>> describe() const override;

  std::int64_t discriminant(std::size_t i) const { return ds_.at(i); }
  std::span<const std::int64_t> discriminants() const noexcept { return ds_; }
  std::int64_t X() const noexcept { return X_; }

 private:
  std::int64_t X_;
  Signs signs_;
  std::vector<std::int64_t> ds_;
};

enum class SyntheticModel { kSatoTateOrthogonal, kRandomSignSymplectic };

std::string_view to_string(SyntheticModel m) noexcept;
/// Accepts "sato-tate", "SatoTateOrthogonal", "random-sign", "RandomSignSymplectic".
SyntheticModel parse_synthetic_model(std::string_view s);

/// Families realising the hypotheses by construction. Coefficients are pure
/// functions of (seed, member, p), regenerated on each query.
class SyntheticFamily final : public Family {
 public:
  SyntheticFamily(std::size_t size, SyntheticModel model, double conductor_scale,
                  std::uint64_t seed);

  std::size_t size() const noexcept override { return size_; }
  std::string member_id(std::size_t i) const override;
  double conductor(std::size_t) const override { return c_max_; }
  int degree() const noexcept override {
    return model_ == SyntheticModel::kSatoTateOrthogonal ? 2 : 1;
  }

  double coeff(std::size_t i, std::uint64_t p, int k) const override;
  double lambda(std::size_t i, std::uint64_t p, int k) const override;
  double oscillating_square(std::size_t i, std::uint64_t p) const override;

  std::vector<std::pair<std::string, std::string>> describe() const override;

  SyntheticModel model() const noexcept { return model_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Sato-Tate angle in [0, pi] of (member, p).
  double sato_tate_angle(std::size_t i, std::uint64_t p) const;
  /// Random sign of (member, p).
  int random_sign(std::size_t i, std::uint64_t p) const;

 private:
  std::size_t size_;
  SyntheticModel model_;
  std::uint64_t seed_;
};

/// Every coefficient zero (a(1) = 1 only).
class NullFamily final : public Family {
 public:
  explicit NullFamily(std::size_t size, double conductor = 1e6);

  std::size_t size() const noexcept override { return size_; }
  std::string member_id(std::size_t i) const override { return "null-" + std::to_string(i); }
  double conductor(std::size_t) const override { return c_max_; }
  int degree() const noexcept override { return 1; }
  double coeff(std::size_t, std::uint64_t, int) const override { return 0.0; }
  double lambda(std::size_t, std::uint64_t, int) const override { return 0.0; }
  double oscillating_square(std::size_t, std::uint64_t) const override { return 0.0; }
  std::vector<std::pair<std::string, std::string>> describe() const override;

 private:
  std::size_t size_;
};

}  // namespace llz
