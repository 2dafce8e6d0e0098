#pragma once

#include <stdexcept>
#include <string>

namespace llz {

/// A parameter is outside the domain an operation accepts.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The argument is valid in principle but beyond what the current tables support
/// (e.g. factoring n above the square of the sieve limit).
class UnsupportedArgument : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class EmptyFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The prime table does not reach c(F)^delta. Carries an upper bound on the
/// absolute contribution of the primes that were not summed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double missing_mass_bound)
      : std::runtime_error(what), missing_mass_bound_(missing_mass_bound) {}

  double missing_mass_bound() const noexcept { return missing_mass_bound_; }

 private:
  double missing_mass_bound_;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace llz
