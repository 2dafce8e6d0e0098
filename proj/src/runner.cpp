#include "llz/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "llz/accumulator.hpp"
#include "llz/errors.hpp"
#include "llz/explicit_formula.hpp"
#include "llz/families.hpp"
#include "llz/moments.hpp"
#include "llz/parallel.hpp"
#include "llz/predictions.hpp"
#include "llz/primes.hpp"
#include "llz/rmt.hpp"
#include "llz/symmetry.hpp"
#include "llz/zeros.hpp"
#ifdef LLZ_HAVE_LVALS
#include "llz/lvalues.hpp"
#endif

#ifndef LLZ_VERSION
#define LLZ_VERSION "0.0.0"
#endif
#ifndef LLZ_DATA_DIR
#define LLZ_DATA_DIR "data"
#endif

namespace llz {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(num(v)); }

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  try {
    return parse_rational(t);
  } catch (const ParseError&) {
    throw ParseError("key '" + key + "': cannot parse number '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ParseError("key '" + key + "': empty list");
  return out;
}

struct Context {
  const ExperimentConfig& cfg;
  RunResult& result;
  std::uint64_t seed;
  unsigned workers;
  TruncationPolicy policy;

  void check(bool ok, const std::string& what) {
    result.check_messages.push_back(std::string(ok ? "ok: " : "FAILED: ") + what);
    result.check_passed = result.check_passed && ok;
  }
  void add(std::string name, std::string content) {
    result.artifacts.push_back({std::move(name), std::move(content)});
  }
};

json describe_json(const Family& f) {
  json j = json::object();
  for (const auto& [k, v] : f.describe()) j[k] = v;
  const auto p = f.params();
  j["gamma_F"] = p.gamma_F;
  j["gamma_1"] = p.gamma_1;
  j["n_F"] = p.n_F;
  return j;
}

std::unique_ptr<Family> make_family(Context& ctx) {
  const std::string model = ctx.cfg.get_string("model", "random-sign");
  if (model == "quadratic") {
    const auto X = ctx.cfg.get_int("X", 100000);
    const std::string signs = ctx.cfg.get_string("signs", "both");
    auto s = QuadraticFamily::Signs::kBoth;
    if (signs == "positive") s = QuadraticFamily::Signs::kPositive;
    else if (signs == "negative") s = QuadraticFamily::Signs::kNegative;
    else if (signs != "both") throw ParseError("key 'signs': expected both, positive or negative");
    return std::make_unique<QuadraticFamily>(X, s);
  }
  if (model == "null")
    return std::make_unique<NullFamily>(static_cast<std::size_t>(ctx.cfg.get_int("family_size", 10000)),
                                        ctx.cfg.get_double("conductor_scale", 1e6));
  const auto size = ctx.cfg.get_int("family_size", 10000);
  if (size < 1) throw InvalidParameter("family_size must be positive");
  return std::make_unique<SyntheticFamily>(static_cast<std::size_t>(size), parse_synthetic_model(model),
                                           ctx.cfg.get_double("conductor_scale", 1e6), ctx.seed);
}

// Smallest table covering every requested reach.
PrimeTable make_primes(Context& ctx, std::initializer_list<double> reaches) {
  double need = 100.0;
  for (double r : reaches) need = std::max(need, std::ceil(r));
  const auto limit = static_cast<std::uint64_t>(ctx.cfg.get_double("prime_limit", need));
  return PrimeTable::sieve(limit);
}

double reach_for(const TestFunction& phi, double log_c) { return std::exp(phi.support() * log_c); }

// tables ------------------------------------------------------------------

void run_tables(Context& ctx) {
  const std::vector<std::pair<std::string, Support>> deltas = {
      {"1/2", Support(0.5)}, {"1", Support(1.0)}, {"3/2", Support(1.5)}, {"2", Support(2.0)},
      {"inf", Support::infinite()}};
  std::ostringstream csv;
  csv << "group,sign_regime,delta,kappa,eta_raw,eta,delta_min\n";
  bool two_path_ok = true;
  for (Group g : kAllGroups) {
    for (SignRegime r : {SignRegime::kAnySign, SignRegime::kAllPlusOne}) {
      const SymmetryType t{g, r};
      if (t.is_vacuous())
        ctx.result.warnings.push_back("SO(odd) with every sign +1 is vacuous (root numbers are -1)");
      const auto dm = delta_min(t);
      for (const auto& [label, d] : deltas) {
        const auto e = eta(t, d);
        csv << to_string(g) << ',' << to_string(r) << ',' << label << ',' << num(kappa(g, d)) << ','
            << num(e.eta_raw) << ',' << num(e.eta) << ',' << (dm ? num(*dm) : "none") << '\n';
        if (!d.is_infinite())
          two_path_ok = two_path_ok &&
                        std::abs(kappa(g, d) - density_integral(g, TestFunction::fejer(d.value()))) <= 1e-12;
      }
    }
  }
  ctx.add("tables.csv", csv.str());
  ctx.check(two_path_ok, "kappa equals the Fourier-side density integral at every tabulated delta");

  const std::string path = ctx.cfg.get_string("known_results", data_directory() + "/known_results.csv");
  const auto checks = check_known_results(read_known_results_file(path));
  std::ostringstream t4;
  t4 << "family,group,sign_regime,delta,printed_eta,recomputed_eta,status\n";
  std::size_t recomputed = 0, matched = 0;
  for (const auto& c : checks) {
    const auto& row = c.row;
    std::string delta = row.delta ? row.delta->to_string() : (row.delta_is_epsilon ? "eps" : "cited");
    std::string status = !c.recomputed ? "skipped" : c.matches ? "match" : "MISMATCH";
    if (c.recomputed) ++recomputed;
    if (c.matches) ++matched;
    t4 << row.family << ',' << (row.type ? std::string(to_string(row.type->group)) : "") << ','
       << (row.type ? std::string(to_string(row.type->sign_regime)) : "") << ',' << delta << ','
       << row.printed_eta << ',' << (c.recomputed ? num(*c.recomputed) : "") << ',' << status << '\n';
  }
  ctx.add("table4.csv", t4.str());
  ctx.check(recomputed == matched, "every recomputable survey row reproduces its printed eta (" +
                                       std::to_string(matched) + "/" + std::to_string(recomputed) + ")");
}

// rmt -----------------------------------------------------------------------

void run_rmt(Context& ctx) {
  const Group g = parse_group(ctx.cfg.get_string("group", "sp"));
  const int M = static_cast<int>(ctx.cfg.get_int("dim", g == Group::kSOodd ? 41 : 40));
  const auto deltas = parse_list("delta", ctx.cfg.get_string("delta", "0.5"));
  const auto n = static_cast<std::size_t>(ctx.cfg.get_int("samples", 20000));
  const double radius = ctx.cfg.get_double("near_zero_radius", 0.1);
  if (n < 100) throw InvalidParameter("samples must be at least 100");
  std::vector<TestFunction> phis;
  for (double d : deltas) phis.push_back(TestFunction::fejer(d));
  const auto run = ensemble_run(g, M, phis, n, ctx.seed, ctx.workers, radius);

  std::ostringstream csv;
  csv << "kind,index";
  for (double d : deltas) csv << ",delta=" << num(d);
  csv << ",near_zero\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv << "sample," << i;
    for (const auto& s : run.statistics) csv << ',' << num(s[i]);
    csv << ',' << num(run.near_zero[i]) << '\n';
  }
  std::vector<MonteCarloAccumulator> acc(phis.size() + 1);
  for (std::size_t f = 0; f < phis.size(); ++f)
    for (double v : run.statistics[f]) acc[f].add(v);
  for (double v : run.near_zero) acc.back().add(v);
  auto summary_row = [&](const char* kind, auto get) {
    csv << kind << ',';
    for (std::size_t f = 0; f < acc.size(); ++f) csv << ',' << num(get(f));
    csv << '\n';
  };
  summary_row("mean", [&](std::size_t f) { return acc[f].mean(); });
  summary_row("std_error", [&](std::size_t f) { return acc[f].std_error(); });
  summary_row("expected", [&](std::size_t f) {
    return f < phis.size() ? density_integral(g, phis[f]) : std::numeric_limits<double>::quiet_NaN();
  });
  ctx.add("rmt.csv", csv.str());

  json j;
  j["group"] = std::string(to_string(g));
  j["dimension"] = M;
  j["effective_dimension"] = effective_dimension(g, M);
  j["samples"] = n;
  json rows = json::array();
  for (std::size_t f = 0; f < phis.size(); ++f) {
    const double expected = density_integral(g, phis[f]);
    const double z = (acc[f].mean() - expected) / acc[f].std_error();
    rows.push_back({{"delta", deltas[f]},
                    {"mean", acc[f].mean()},
                    {"std_error", acc[f].std_error()},
                    {"expected", expected},
                    {"z", jnum(z)}});
    ctx.check(std::abs(z) < 3.0, std::string(to_string(g)) + " delta=" + num(deltas[f]) +
                                     ": |mean - expected| < 3 SE (z = " + num(z) + ")");
  }
  j["densities"] = rows;
  j["near_zero"] = {{"radius", radius}, {"mean", acc.back().mean()}, {"std_error", acc.back().std_error()}};
  ctx.add("rmt_summary.json", j.dump(2) + "\n");
}

// family-sim ----------------------------------------------------------------

void run_family_sim(Context& ctx) {
  auto fam = make_family(ctx);
  const auto phi = TestFunction::fejer(ctx.cfg.get_double("delta", 0.5));
  const double log_c = std::log(fam->c_max());
  const auto primes = make_primes(ctx, {reach_for(phi, log_c)});
  const bool per_member = ctx.cfg.get_bool("per_member_scaling", false);
  const auto r = one_level_family(*fam, phi, log_c, primes, ctx.workers, ctx.policy, per_member);
  if (r.truncated)
    ctx.result.warnings.push_back("prime sums truncated; omitted mass below " + num(r.missing_mass_bound));

  std::ostringstream csv;
  csv << "member,one_level_density\n";
  for (std::size_t i = 0; i < fam->size(); ++i) csv << fam->member_id(i) << ',' << num(r.values[i]) << '\n';
  ctx.add("one_level.csv", csv.str());

  const auto p = fam->params();
  const double predicted = family_density_integral({p.gamma_F, std::nullopt, p.n_F}, phi);
  json j;
  j["family"] = describe_json(*fam);
  j["delta"] = phi.support();
  j["log_conductor"] = log_c;
  j["mean"] = r.mean;
  j["std_error"] = r.std_error;
  j["terms"] = {{"phi_hat_0", r.mean_terms.phi_hat_0},
                {"k1", r.mean_terms.k1},
                {"k2", r.mean_terms.k2},
                {"k_high", r.mean_terms.k_high},
                {"max_abs_k_high", r.max_abs_k_high}};
  j["family_density_integral"] = predicted;
  j["symmetry_density_integral"] = density_integral(fam->declared_symmetry().group, phi);
  j["truncated"] = r.truncated;
  ctx.add("family_sim.json", j.dump(2) + "\n");
  ctx.check(std::abs(r.mean - predicted) < 3.0 * r.std_error,
            "family mean of D(L, phi) within 3 SE of the W_F integral (" + num(r.mean) + " vs " +
                num(predicted) + ")");
}

// hypcheck ------------------------------------------------------------------

void run_hypcheck(Context& ctx) {
  const auto X = ctx.cfg.get_int("X", 100000);
  QuadraticFamily fam(X);
  const double limit = ctx.cfg.get_double("prime_limit", 1e6);
  const auto primes = PrimeTable::sieve(static_cast<std::uint64_t>(limit));
  const auto n_pairs = static_cast<std::size_t>(ctx.cfg.get_int("pairs", 100));
  const double delta = ctx.cfg.get_double("delta", 0.5);
  const auto phi = TestFunction::fejer(delta);
  const double log_c = std::log(fam.c_max());
  const std::size_t F = fam.size();
  const auto ps = primes.primes();
  json j;
  j["family"] = describe_json(fam);
  j["prime_limit"] = limit;

  // 2.1 and 2.3 on random (member, prime) draws.
  const auto n_draws = static_cast<std::size_t>(ctx.cfg.get_int("hecke_draws", 10000));
  double max_a = 0.0, max_hecke = 0.0;
  const auto p_params = fam.params();
  for (std::size_t t = 0; t < n_draws; ++t) {
    CounterRng rng(ctx.seed, t, 0x2103);
    const std::size_t i = rng() % F;
    const std::uint64_t p = ps[rng() % ps.size()];
    const double a = fam.coeff(i, p, 1);
    max_a = std::max({max_a, std::abs(a), std::abs(fam.lambda(i, p, 1))});
    const double rhs = fam.oscillating_square(i, p) + p_params.gamma_1 * a + p_params.gamma_F;
    max_hecke = std::max(max_hecke, std::abs(fam.lambda(i, p, 2) - rhs));
  }
  j["2.1"] = {{"draws", n_draws}, {"max_abs_coefficient", max_a}, {"degree", fam.degree()}};
  j["2.3"] = {{"draws", n_draws}, {"max_identity_residual", max_hecke}};
  ctx.check(max_a <= fam.degree(), "Ramanujan bound |a(p)| <= d on every draw");
  ctx.check(max_hecke == 0.0, "Hecke decomposition holds exactly on every draw");

  // 2.2 Selberg orthogonality.
  const auto it5 = std::find(fam.discriminants().begin(), fam.discriminants().end(), 5);
  const std::size_t i5 = static_cast<std::size_t>(it5 - fam.discriminants().begin());
  const double diag = selberg_orthogonality_stat(fam, i5, fam, i5, limit, primes);
  std::vector<double> offdiag(n_pairs);
  parallel_for(n_pairs, ctx.workers, [&](std::size_t t) {
    CounterRng rng(ctx.seed, t, 0x2202);
    const std::size_t a = rng() % F;
    std::size_t b = rng() % F;
    while (b == a) b = rng() % F;
    offdiag[t] = selberg_orthogonality_stat(fam, a, fam, b, limit, primes);
  });
  const auto inside = static_cast<std::size_t>(
      std::count_if(offdiag.begin(), offdiag.end(), [](double v) { return std::abs(v) < 3.0; }));
  const double inside_frac = static_cast<double>(inside) / static_cast<double>(n_pairs);
  json off = json::array();
  for (double v : offdiag) off.push_back(v);
  j["2.2"] = {{"diagonal_member", 5},
              {"diagonal", diag},
              {"loglog_plus_B", std::log(std::log(limit)) + kMertensConstant},
              {"off_diagonal", off},
              {"off_diagonal_fraction_below_3", inside_frac}};
  ctx.check(diag >= 2.0 && diag <= 3.5, "Selberg diagonal in [2.0, 3.5] (" + num(diag) + ")");
  ctx.check(inside_frac >= 0.95, "off-diagonal |.| < 3 for >= 95% of pairs (" + num(inside_frac) + ")");

  // 2.4 orthogonality in the family on squarefree n != m.
  std::vector<std::uint64_t> sqfree;
  for (std::uint64_t n = 2; n <= 1000; ++n)
    if (is_squarefree(n)) sqfree.push_back(n);
  const auto n_orth = static_cast<std::size_t>(ctx.cfg.get_int("orthogonality_pairs", 20));
  json orth = json::array();
  double max_orth = 0.0;
  for (std::size_t t = 0; t < n_orth; ++t) {
    CounterRng rng(ctx.seed, t, 0x2404);
    const std::uint64_t n = sqfree[rng() % sqfree.size()];
    std::uint64_t m = sqfree[rng() % sqfree.size()];
    while (m == n) m = sqfree[rng() % sqfree.size()];
    const double v = family_orthogonality_stat(fam, n, m, primes, ctx.workers);
    max_orth = std::max(max_orth, std::abs(v));
    orth.push_back({{"n", n}, {"m", m}, {"value", v}});
  }
  const double diag_orth = family_orthogonality_stat(fam, 2, 2, primes, ctx.workers);
  j["2.4"] = {{"pairs", orth},
              {"max_abs", max_orth},
              {"empirical_gamma", jnum(-std::log(max_orth) / std::log(static_cast<double>(F)))},
              {"diagonal_n_eq_m_2", diag_orth}};
  ctx.check(max_orth < 0.05, "family orthogonality |.| < 0.05 on non-square nm (" + num(max_orth) + ")");

  // 2.5 beyond orthogonality.
  const double b1 = beyond_orthogonality_stat(fam, phi, 1, log_c, primes, ctx.workers, ctx.policy);
  const double b2 = beyond_orthogonality_stat(fam, phi, 2, log_c, primes, ctx.workers, ctx.policy);
  j["2.5"] = {{"delta", delta}, {"k1", b1}, {"k2", b2}};
  ctx.check(std::abs(b1) < 0.05, "beyond-orthogonality k=1 |.| < 0.05 (" + num(b1) + ")");

  const auto rs = rankin_selberg_average(fam, limit, primes, ctx.workers);
  const double rs_target = std::log(std::log(limit)) + kMertensConstant;
  j["rankin_selberg"] = {{"value", rs.value},
                         {"gamma_F_loglog_x", rs.prediction},
                         {"loglog_x_plus_B", rs_target},
                         {"difference", rs.value - rs_target}};
  ctx.check(std::abs(rs.value - rs_target) < 0.3,
            "Rankin-Selberg average within 0.3 of loglog x + B (" + num(rs.value) + " vs " + num(rs_target) + ")");

  const double mv_x = ctx.cfg.get_double("mean_value_x", 100.0);
  const auto mv = mean_value_check(fam, mv_x, primes, false, ctx.workers);
  const auto mvp = mean_value_check(fam, mv_x, primes, true, ctx.workers);
  j["mean_value"] = {
      {"x", mv_x},
      {"all_n", {{"lhs", mv.lhs}, {"rhs", mv.rhs}, {"difference", mv.difference()}}},
      {"primes_only", {{"lhs", mvp.lhs}, {"rhs", mvp.rhs}, {"difference", mvp.difference()}}}};

  const auto ol = one_level_family(fam, phi, log_c, primes, ctx.workers, ctx.policy);
  j["one_level"] = {{"delta", delta}, {"mean", ol.mean}, {"std_error", ol.std_error},
                    {"symplectic_limit", density_integral(Group::kSp, phi)}};
  ctx.add("hypcheck.json", j.dump(2) + "\n");
}

// moments -------------------------------------------------------------------

void run_moments(Context& ctx) {
  auto fam = make_family(ctx);
  const double x = ctx.cfg.get_double("x", 1000.0);
  const int k_max = static_cast<int>(ctx.cfg.get_int("k_max", 4));
  const bool weighted = ctx.cfg.get_bool("weighted", false);
  const auto phi = TestFunction::fejer(ctx.cfg.get_double("delta", 0.5));
  const double log_c = std::log(fam->c_max());
  const auto primes = make_primes(ctx, {x, weighted ? reach_for(phi, log_c) : 0.0});
  const auto r = weighted ? weighted_moments(*fam, x, k_max, phi, log_c, primes, ctx.workers, ctx.policy)
                          : empirical_moments(*fam, x, k_max, primes, ctx.workers);

  std::ostringstream csv;
  csv << "k,empirical,std_error,predicted,ratio,finite_size_target\n";
  for (int k = 0; k <= k_max; ++k) {
    const double target = gaussian_moment(k) * std::pow(r.prime_reciprocal_sum, 0.5 * k) * r.weight_factor;
    csv << k << ',' << num(r.empirical[k]) << ',' << num(r.std_error[k]) << ',' << num(r.predicted[k])
        << ',' << num(r.ratio[k]) << ',' << num(target) << '\n';
  }
  ctx.add(weighted ? "weighted_moments.csv" : "moments.csv", csv.str());

  json j;
  j["family"] = describe_json(*fam);
  j["x"] = x;
  j["weighted"] = weighted;
  j["variance_scale"] = r.variance_scale;
  j["prime_reciprocal_sum"] = r.prime_reciprocal_sum;
  j["weight_factor"] = r.weight_factor;
  const double s = r.prime_reciprocal_sum;
  if (!weighted) {
    if (k_max >= 3) {
      for (int k : {1, 3})
        ctx.check(std::abs(r.empirical[k]) < 3.0 * r.std_error[k],
                  "moment k=" + std::to_string(k) + " within 3 SE of 0 (" + num(r.empirical[k]) + ")");
    }
    if (k_max >= 4) {
      const double kurt = r.empirical[4] / (r.empirical[2] * r.empirical[2]);
      j["kurtosis_ratio"] = kurt;
      ctx.check(std::abs(r.empirical[2] / s - 1.0) < 0.10,
                "k=2 within 10% of sum 1/p (" + num(r.empirical[2]) + " vs " + num(s) + ")");
      ctx.check(std::abs(kurt / 3.0 - 1.0) < 0.15, "k=4 kurtosis ratio within 15% of 3 (" + num(kurt) + ")");
    }
  } else {
    const double z0 = (r.empirical[0] - r.weight_factor) / r.std_error[0];
    j["k0_z"] = z0;
    ctx.check(std::abs(z0) < 3.0, "weighted k=0 within 3 SE of the W_F integral (" + num(r.empirical[0]) +
                                      " vs " + num(r.weight_factor) + ", z = " + num(z0) + ")");
    if (k_max >= 2) {
      const double ratio = r.empirical[2] / r.empirical[0];
      j["k2_over_k0"] = ratio;
      ctx.check(std::abs(ratio / s - 1.0) < 0.15,
                "weighted k=2 / k=0 within 15% of sum 1/p (" + num(ratio) + " vs " + num(s) + ")");
    }
    const std::vector<double> edges = {-kInf, -2.0, -1.0, 0.0, 1.0, 2.0, kInf};
    const auto shares = interval_weighted_partition(*fam, x, edges, phi, log_c, primes, ctx.workers, ctx.policy);
    std::ostringstream icsv;
    icsv << "alpha,beta,weighted_share,gaussian_mass\n";
    double total = 0.0;
    for (std::size_t b = 0; b < shares.size(); ++b) {
      icsv << num(edges[b]) << ',' << num(edges[b + 1]) << ',' << num(shares[b]) << ','
           << num(gaussian_mass(edges[b], edges[b + 1])) << '\n';
      total += shares[b];
    }
    ctx.add("intervals.csv", icsv.str());
    const double s01 = shares[3];
    j["interval_0_1"] = {{"weighted_share", s01}, {"gaussian_mass", gaussian_mass(0.0, 1.0)}};
    j["partition_total"] = total;
    ctx.check(std::abs(s01 - gaussian_mass(0.0, 1.0)) < 0.05,
              "interval (0,1) weighted share within 0.05 of M(0,1) (" + num(s01) + ")");
    ctx.check(std::abs(total - 1.0) < 1e-12, "partition shares sum to 1");
  }
  ctx.add(weighted ? "weighted_moments.json" : "moments.json", j.dump(2) + "\n");
}

// clt -----------------------------------------------------------------------

std::vector<double> read_central_values(const std::string& path, const Family* fam) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open central values file '" + path + "'");
  std::vector<std::pair<std::string, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::string id, value;
    if (!(ss >> id >> value))
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected '<member_id> <value>'");
    double v = std::numeric_limits<double>::quiet_NaN();
    if (value != "nan" && value != "NA") v = parse_number("value", value);
    rows.emplace_back(id, v);
  }
  std::vector<double> out;
  auto to_log = [](double v) { return std::isnan(v) ? v : (v > 0.0 ? std::log(v) : -kInf); };
  if (!fam) {
    for (const auto& [id, v] : rows) out.push_back(to_log(v));
    return out;
  }
  std::map<std::string, double> by_id(rows.begin(), rows.end());
  for (std::size_t i = 0; i < fam->size(); ++i) {
    auto it = by_id.find(fam->member_id(i));
    out.push_back(it == by_id.end() ? std::numeric_limits<double>::quiet_NaN() : to_log(it->second));
  }
  return out;
}

Centering parse_centering(const std::string& s) {
  if (s == "theorem") return Centering::kTheorem;
  if (s == "prime-sum" || s == "prime_sum") return Centering::kPrimeSum;
  if (s == "empirical") return Centering::kEmpirical;
  throw ParseError("key 'centering': expected theorem, prime-sum or empirical");
}

void add_clt_artifacts(Context& ctx, const CltReport& r, json j, bool check_shape) {
  std::ostringstream csv;
  csv << "lo,hi,count\n";
  for (std::size_t b = 0; b < r.histogram.size(); ++b) {
    const double lo = b == 0 ? -kInf : r.bin_edges[b - 1];
    const double hi = b == r.bin_edges.size() ? kInf : r.bin_edges[b];
    csv << num(lo) << ',' << num(hi) << ',' << r.histogram[b] << '\n';
  }
  ctx.add("clt_histogram.csv", csv.str());
  j["mean_used"] = r.mean_used;
  j["scale_used"] = r.scale_used;
  j["theorem_mean"] = r.theorem_mean;
  j["theorem_mean_without_n_F"] = r.theorem_mean_without_n_F;
  j["theorem_scale"] = r.theorem_scale;
  j["family_size"] = r.family_size;
  j["excluded"] = r.excluded;
  json masses = json::array();
  for (const auto& m : r.masses)
    masses.push_back({{"alpha", jnum(m.alpha)}, {"beta", jnum(m.beta)}, {"empirical", m.empirical},
                      {"gaussian", m.gaussian}, {"lower_bound", m.lower_bound}});
  j["masses"] = masses;
  j["moments"] = r.moments;
  j["moment_std_errors"] = r.moment_std_errors;
  ctx.add("clt.json", j.dump(2) + "\n");
  if (check_shape && r.moments.size() == 4) {
    ctx.check(std::abs(r.masses[0].empirical - 0.5) < 0.05,
              "(0, inf) mass within 0.05 of 1/2 (" + num(r.masses[0].empirical) + ")");
    ctx.check(std::abs(r.moments[3] - 3.0) < 0.5,
              "fourth standardized moment within 0.5 of 3 (" + num(r.moments[3]) + ")");
  }
}

void run_clt(Context& ctx) {
  auto fam = make_family(ctx);
  const double x = ctx.cfg.get_double("x", 100000.0);
  const auto p = fam->params();
  CltOptions opt;
  opt.centering = parse_centering(ctx.cfg.get_string("centering", "empirical"));
  opt.include_n_F_in_mean = ctx.cfg.get_bool("include_n_F", true);
  opt.x = x;
  if (ctx.cfg.has("eta_delta")) opt.eta = eta(fam->declared_symmetry(), Support(ctx.cfg.get_double("eta_delta", 1.0))).eta;
  std::vector<double> values;
  json j;
  j["family"] = describe_json(*fam);
  const std::string file = ctx.cfg.get_string("central_values", "");
  if (!file.empty()) {
    values = read_central_values(file, fam.get());
    j["source"] = file;
  } else {
    const auto primes = make_primes(ctx, {x});
    for (const auto& t : central_value_family(*fam, x, primes, ctx.workers))
      values.push_back(t.square_term + t.prime_term + t.high_power_term);
    j["source"] = "prime-expansion proxy";
    j["x"] = x;
  }
  const auto r = clt_report(values, p.gamma_F, p.n_F, std::log(fam->c_max()), opt);
  add_clt_artifacts(ctx, r, j, true);
}

// amplify -------------------------------------------------------------------

void run_amplify(Context& ctx) {
  auto fam = make_family(ctx);
  const double x = ctx.cfg.get_double("x", 1000.0);
  const double alpha = ctx.cfg.get_double("alpha", 0.0), beta = ctx.cfg.get_double("beta", 1.0);
  const auto phi = TestFunction::fejer(ctx.cfg.get_double("delta", 0.5));
  SymmetryType type = fam->declared_symmetry();
  if (ctx.cfg.has("group")) type.group = parse_group(ctx.cfg.get_string("group", "sp"));
  if (ctx.cfg.has("sign_regime")) type.sign_regime = parse_sign_regime(ctx.cfg.get_string("sign_regime", "any"));
  const double threshold = ctx.cfg.get_double("zero_threshold", 1.0 / (std::log(x) * std::log(std::log(x))));
  const std::string zfile = ctx.cfg.get_string("zeros", "");
  std::vector<ZeroList> zeros;
  if (!zfile.empty()) zeros = read_zero_lists_file(zfile);
  else ctx.result.warnings.push_back("no zero data: small-zero filter skipped");
  const auto primes = make_primes(ctx, {x});
  const auto r = amplified_count(*fam, x, alpha, beta, phi, type, threshold, zfile.empty() ? nullptr : &zeros,
                                 primes, ctx.workers);
  if (r.members_without_zero_data)
    ctx.result.warnings.push_back(std::to_string(r.members_without_zero_data) + " members lack zero data");
  json j;
  j["family"] = describe_json(*fam);
  j["x"] = x;
  j["alpha"] = jnum(alpha);
  j["beta"] = jnum(beta);
  j["delta"] = phi.support();
  j["type"] = {{"group", std::string(to_string(type.group))},
               {"sign_regime", std::string(to_string(type.sign_regime))}};
  j["zero_threshold"] = threshold;
  j["count"] = r.count;
  j["interval_count"] = r.interval_count;
  j["lower_bound"] = r.lower_bound;
  j["zero_filter_applied"] = r.zero_filter_applied;
  ctx.add("amplify.json", j.dump(2) + "\n");
  ctx.check(static_cast<double>(r.count) >= r.lower_bound, "count reaches the eta M(alpha, beta) |F| bound");
}

// lvals ---------------------------------------------------------------------

double ks_distance_to_gaussian(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = 0.5 * std::erfc(-z[i] / std::numbers::sqrt2);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

void run_lvals(Context& ctx) {
#ifdef LLZ_HAVE_LVALS
  const auto dmax = ctx.cfg.get_int("dmax", 10000);
  const std::string signs = ctx.cfg.get_string("signs", "positive");
  const double tol = ctx.cfg.get_double("tolerance", 1e-12);
  auto s = QuadraticFamily::Signs::kPositive;
  if (signs == "both") s = QuadraticFamily::Signs::kBoth;
  else if (signs == "negative") s = QuadraticFamily::Signs::kNegative;
  QuadraticFamily fam(dmax, s);
  std::vector<double> L(fam.size());
  parallel_for(fam.size(), ctx.workers, [&](std::size_t i) { L[i] = central_value_quadratic(fam.discriminant(i), tol); });
  std::ostringstream csv;
  csv << "d,central_value,log_central_value\n";
  std::vector<double> logs;
  std::size_t non_positive = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double lg = L[i] > 0.0 ? std::log(L[i]) : -kInf;
    if (L[i] <= 0.0) ++non_positive;
    logs.push_back(lg);
    csv << fam.discriminant(i) << ',' << num(L[i]) << ',' << num(lg) << '\n';
  }
  ctx.add("lvals.csv", csv.str());
  if (non_positive) ctx.result.warnings.push_back(std::to_string(non_positive) + " non-positive central values");

  const auto p = fam.params();
  auto summarize = [&](std::int64_t bound) {
    std::vector<double> sub;
    for (std::size_t i = 0; i < fam.size(); ++i)
      if (std::llabs(fam.discriminant(i)) <= bound) sub.push_back(logs[i]);
    const auto th = clt_report(sub, p.gamma_F, p.n_F, std::log(static_cast<double>(bound)), {});
    CltOptions emp;
    emp.centering = Centering::kEmpirical;
    const auto em = clt_report(sub, p.gamma_F, p.n_F, std::log(static_cast<double>(bound)), emp);
    json j;
    j["bound"] = bound;
    j["members"] = sub.size();
    j["excluded"] = th.excluded;
    j["mean_log"] = em.mean_used;
    j["sd_log"] = em.scale_used;
    j["half_loglog"] = th.theorem_mean;
    j["sqrt_loglog"] = th.theorem_scale;
    j["ks_theorem_standardization"] = ks_distance_to_gaussian(th.standardized);
    j["ks_empirical_standardization"] = ks_distance_to_gaussian(em.standardized);
    return j;
  };
  json j;
  j["signs"] = signs;
  j["tolerance"] = tol;
  j["non_positive"] = non_positive;
  const auto small = summarize(std::min<std::int64_t>(1000, dmax));
  const auto large = summarize(dmax);
  j["small"] = small;
  j["large"] = large;
  ctx.add("lvals.json", j.dump(2) + "\n");
  const double half_ll = large["half_loglog"].get<double>(), sq = large["sqrt_loglog"].get<double>();
  const double m = large["mean_log"].get<double>();
  ctx.check(std::abs(m - half_ll) <= 0.5 * sq, "mean log L(1/2) within 0.5 sqrt(loglog X) of loglog X / 2 (" +
                                                   num(m) + " vs " + num(half_ll) + ")");
  ctx.check(large["ks_theorem_standardization"].get<double>() < small["ks_theorem_standardization"].get<double>(),
            "KS distance decreases from the small to the large range");
#else
  (void)ctx;
  throw UnsupportedArgument("built without the central-value evaluator (LLZ_ENABLE_LVALS=OFF)");
#endif
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// ExperimentConfig ----------------------------------------------------------

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::string& source) {
  ExperimentConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected key=value, got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError(source + ":" + std::to_string(line_no) + ": empty key");
    c.values_[key] = trim(t.substr(eq + 1));
  }
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void ExperimentConfig::merge(const ExperimentConfig& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  resolved_[key] = v;
  return v;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  const double v = it == values_.end() ? fallback : parse_number(key, it->second);
  resolved_[key] = num(v);
  return v;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const {
  auto it = values_.find(key);
  long long v = fallback;
  if (it != values_.end()) {
    const double d = parse_number(key, it->second);
    if (d != std::floor(d) || std::abs(d) > 9e15) throw ParseError("key '" + key + "': expected an integer");
    v = static_cast<long long>(d);
  }
  resolved_[key] = std::to_string(v);
  return v;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  bool v = fallback;
  if (it != values_.end()) {
    const std::string s = trim(it->second);
    if (s == "1" || s == "true" || s == "yes" || s == "on") v = true;
    else if (s == "0" || s == "false" || s == "no" || s == "off") v = false;
    else throw ParseError("key '" + key + "': expected a boolean");
  }
  resolved_[key] = v ? "true" : "false";
  return v;
}

// run -----------------------------------------------------------------------

std::string data_directory() {
  if (const char* env = std::getenv("LLZ_DATA_DIR")) return env;
  return LLZ_DATA_DIR;
}

RunResult run(const std::string& subcommand, const ExperimentConfig& config) {
  RunResult result;
  Context ctx{config, result, static_cast<std::uint64_t>(config.get_int("seed", 1)),
              static_cast<unsigned>(config.get_int("workers", 1)),
              config.get_bool("allow_truncation", false) ? TruncationPolicy::kWarn : TruncationPolicy::kError};
  result.check_requested = config.get_bool("check", false);

  if (subcommand == "tables") run_tables(ctx);
  else if (subcommand == "rmt") run_rmt(ctx);
  else if (subcommand == "family-sim") run_family_sim(ctx);
  else if (subcommand == "hypcheck") run_hypcheck(ctx);
  else if (subcommand == "moments") run_moments(ctx);
  else if (subcommand == "clt") run_clt(ctx);
  else if (subcommand == "amplify") run_amplify(ctx);
  else if (subcommand == "lvals") run_lvals(ctx);
  else throw InvalidParameter("unknown subcommand '" + subcommand + "'");

  json m;
  m["tool"] = "llz";
  m["version"] = LLZ_VERSION;
  m["subcommand"] = subcommand;
  m["seed"] = ctx.seed;
  json resolved = json::object();
  for (const auto& [k, v] : config.resolved()) resolved[k] = v;
  m["config"] = resolved;
  json names = json::array();
  for (const auto& a : result.artifacts) names.push_back(a.name);
  m["artifacts"] = names;
  m["warnings"] = result.warnings;
  m["checks"] = result.check_messages;
  m["timestamp"] = timestamp();
  result.artifacts.push_back({"manifest.json", m.dump(2) + "\n"});
  result.exit_code = (result.check_requested && !result.check_passed) ? 1 : 0;
  return result;
}

void write_artifacts(const RunResult& result, const std::string& directory) {
  std::filesystem::create_directories(directory);
  for (const auto& a : result.artifacts) {
    std::ofstream out(std::filesystem::path(directory) / a.name, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + a.name + "' in '" + directory + "'");
    out << a.content;
  }
}

}  // namespace llz
