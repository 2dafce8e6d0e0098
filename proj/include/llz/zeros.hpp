#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "llz/testfn.hpp"

namespace llz {

/// Ordinates gamma of the zeros 1/2 + i gamma of one L-function. When
/// `symmetric` is set only gamma >= 0 is stored and -gamma is implied.
struct ZeroList {
  std::string member_id;
  bool symmetric = false;
  std::vector<double> ordinates;
};

/// Reads blocks of the form
///   # member=<id> symmetric=<0|1>
///   <ordinate>
///   ...
/// Ordinates within a block must be ascending (and >= 0 when symmetric).
std::vector<ZeroList> read_zero_lists(std::istream& in);
std::vector<ZeroList> read_zero_lists_file(const std::string& path);
void write_zero_list(std::ostream& out, const ZeroList& zeros);

/// sum_gamma phi(gamma log_cF / (2 pi)), counting -gamma for symmetric lists.
double one_level_zero_side(const ZeroList& zeros, const TestFunction& phi, double log_cF);

struct ZeroSumTerms {
  double surrogate_sum = 0.0;          // sum_{|gamma| >= t} log(1 + (gamma log x)^-2)
  std::size_t below_threshold_count = 0;  // #{|gamma| < t}
};

/// Small-zero detector and its surrogate sum; threshold must be positive.
ZeroSumTerms zero_sum_terms(const ZeroList& zeros, double x, double threshold);

}  // namespace llz
