#include "llz/zeros.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "llz/errors.hpp"

namespace llz {

namespace {

std::string line_error(int line_no, const std::string& msg) {
  return "zero list line " + std::to_string(line_no) + ": " + msg;
}

void parse_header(const std::string& line, int line_no, ZeroList& z) {
  std::istringstream ss(line.substr(1));
  std::string token;
  bool have_member = false;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    if (key == "member") {
      z.member_id = value;
      have_member = true;
    } else if (key == "symmetric") {
      if (value != "0" && value != "1") throw ParseError(line_error(line_no, "symmetric must be 0 or 1"));
      z.symmetric = value == "1";
    }
  }
  if (!have_member) throw ParseError(line_error(line_no, "header lacks member=<id>"));
}

}  // namespace

std::vector<ZeroList> read_zero_lists(std::istream& in) {
  std::vector<ZeroList> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (line.find("member=") == std::string::npos) continue;  // plain comment
      out.emplace_back();
      parse_header(line.substr(first), line_no, out.back());
      continue;
    }
    if (out.empty()) throw ParseError(line_error(line_no, "ordinate before any header"));
    double g = 0.0;
    std::istringstream ss(line);
    if (!(ss >> g) || !std::isfinite(g)) throw ParseError(line_error(line_no, "bad ordinate"));
    auto& z = out.back();
    if (z.symmetric && g < 0.0) throw ParseError(line_error(line_no, "negative ordinate in symmetric list"));
    if (!z.ordinates.empty() && g < z.ordinates.back())
      throw ParseError(line_error(line_no, "ordinates must be ascending"));
    z.ordinates.push_back(g);
  }
  return out;
}

std::vector<ZeroList> read_zero_lists_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open zero file '" + path + "'");
  return read_zero_lists(in);
}

void write_zero_list(std::ostream& out, const ZeroList& zeros) {
  out << "# member=" << zeros.member_id << " symmetric=" << (zeros.symmetric ? 1 : 0) << '\n';
  out.precision(17);
  for (double g : zeros.ordinates) out << g << '\n';
}

double one_level_zero_side(const ZeroList& zeros, const TestFunction& phi, double log_cF) {
  if (!(log_cF > 0.0)) throw InvalidParameter("log c(F) must be positive");
  const double scale = log_cF / (2.0 * std::numbers::pi);
  double acc = 0.0;
  for (double g : zeros.ordinates) {
    const double v = phi.eval(g * scale);
    // phi is even, so -gamma contributes the same value.
    acc += (zeros.symmetric && g != 0.0) ? 2.0 * v : v;
  }
  return acc;
}

ZeroSumTerms zero_sum_terms(const ZeroList& zeros, double x, double threshold) {
  if (!(threshold > 0.0)) throw InvalidParameter("zero threshold must be positive");
  if (!(x > 1.0)) throw InvalidParameter("x must exceed 1");
  const double lx = std::log(x);
  ZeroSumTerms t;
  for (double g : zeros.ordinates) {
    const std::size_t mult = (zeros.symmetric && g != 0.0) ? 2 : 1;
    const double a = std::abs(g);
    if (a < threshold) {
      t.below_threshold_count += mult;
      continue;
    }
    const double u = a * lx;
    t.surrogate_sum += static_cast<double>(mult) * std::log1p(1.0 / (u * u));
  }
  return t;
}

}  // namespace llz
