// Command-line front end for the experiment runner.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "llz/errors.hpp"
#include "llz/runner.hpp"

namespace {

struct KeyOption {
  const char* key;
  const char* help;
};

// Subcommand options; each maps --<key with '_' as '-'> onto a config key.
const std::map<std::string, std::vector<KeyOption>>& subcommand_options() {
  static const std::map<std::string, std::vector<KeyOption>> table = {
      {"tables", {{"known_results", "survey CSV (default: bundled data)"}}},
      {"rmt",
       {{"group", "U, O, SOeven, SOodd or Sp"},
        {"dim", "matrix size M"},
        {"delta", "comma-separated Fejer supports"},
        {"samples", "number of Haar draws"},
        {"near_zero_radius", "unfolded radius for the density near 0"}}},
      {"family-sim",
       {{"model", "random-sign, sato-tate, quadratic or null"},
        {"family_size", "members of a synthetic family"},
        {"conductor_scale", "common conductor of a synthetic family"},
        {"X", "discriminant bound of the quadratic family"},
        {"signs", "both, positive or negative (quadratic)"},
        {"delta", "Fejer support"},
        {"prime_limit", "prime table size"},
        {"per_member_scaling", "scale by each member's conductor"}}},
      {"hypcheck",
       {{"X", "discriminant bound"},
        {"prime_limit", "primes up to this bound"},
        {"pairs", "off-diagonal Selberg pairs"},
        {"hecke_draws", "random (member, prime) draws"},
        {"orthogonality_pairs", "(n, m) pairs for family orthogonality"},
        {"delta", "Fejer support for the beyond-orthogonality sums"},
        {"mean_value_x", "length of the mean-value check"}}},
      {"moments",
       {{"model", "random-sign, sato-tate, quadratic or null"},
        {"family_size", "members of a synthetic family"},
        {"conductor_scale", "common conductor of a synthetic family"},
        {"X", "discriminant bound of the quadratic family"},
        {"x", "prime sum length"},
        {"k_max", "highest moment"},
        {"weighted", "weight by the prime-side one-level density"},
        {"delta", "Fejer support of the weight"},
        {"prime_limit", "prime table size"}}},
      {"clt",
       {{"model", "random-sign, sato-tate, quadratic or null"},
        {"family_size", "members of a synthetic family"},
        {"conductor_scale", "common conductor of a synthetic family"},
        {"X", "discriminant bound of the quadratic family"},
        {"x", "length of the prime expansion"},
        {"central_values", "file of '<member_id> <L(1/2)>' lines"},
        {"centering", "theorem, prime-sum or empirical"},
        {"include_n_F", "use gamma_F n_F in the theorem mean"},
        {"eta_delta", "support for the eta lower bounds"}}},
      {"amplify",
       {{"model", "random-sign, sato-tate, quadratic or null"},
        {"family_size", "members of a synthetic family"},
        {"conductor_scale", "common conductor of a synthetic family"},
        {"X", "discriminant bound of the quadratic family"},
        {"x", "prime sum length"},
        {"alpha", "interval start"},
        {"beta", "interval end"},
        {"delta", "Fejer support"},
        {"group", "symmetry group for eta (default: declared)"},
        {"sign_regime", "any or plus"},
        {"zeros", "zero-list file"},
        {"zero_threshold", "small-zero threshold"}}},
      {"lvals",
       {{"dmax", "largest |d|"},
        {"signs", "positive, negative or both"},
        {"tolerance", "incomplete-gamma cutoff"}}},
  };
  return table;
}

std::string flag_name(std::string key) {
  for (auto& c : key)
    if (c == '_') c = '-';
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-lying zeros and central values: experiments and predictions"};
  app.set_version_flag("--version", std::string(LLZ_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string seed, workers, config_file, out_dir = "llz_out";
  bool check = false, allow_truncation = false;
  std::vector<std::string> sets;
  app.add_option("--seed", seed, "master seed (default 1)");
  app.add_option("--workers", workers, "worker threads, 0 = all cores (default 1)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--config", config_file, "key=value config file");
  app.add_option("--set", sets, "extra key=value overrides");
  app.add_flag("--check", check, "exit nonzero when a built-in check fails");
  app.add_flag("--allow-truncation", allow_truncation, "warn instead of failing on short prime tables");

  std::map<std::string, std::map<std::string, std::string>> given;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"tables", "eta, kappa and delta_min tables; known-results recomputation"},
      {"rmt", "Monte Carlo one-level densities of the classical compact groups"},
      {"family-sim", "one-level density of a family from its explicit formula"},
      {"hypcheck", "coefficient statistics of the quadratic family"},
      {"moments", "plain or weighted moments of the prime sum P_L(x)"},
      {"clt", "Gaussian interval masses of log central values or a proxy"},
      {"amplify", "amplified count of members with a small prime sum"},
      {"lvals", "central values L(1/2, chi_d) and their distribution"},
  };
  for (const auto& name : llz::subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    subs[name] = sub;
    for (const auto& opt : subcommand_options().at(name))
      sub->add_option(flag_name(opt.key), given[name][opt.key], opt.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    llz::ExperimentConfig config;
    if (!config_file.empty()) config = llz::ExperimentConfig::parse_file(config_file);
    llz::ExperimentConfig overrides;
    std::string name;
    for (const auto& [n, sub] : subs)
      if (sub->parsed()) name = n;
    for (const auto& opt : subcommand_options().at(name))
      if (subs[name]->count(flag_name(opt.key)) > 0) overrides.set(opt.key, given[name][opt.key]);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw llz::ParseError("--set expects key=value, got '" + s + "'");
      overrides.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!seed.empty()) overrides.set("seed", seed);
    if (!workers.empty()) overrides.set("workers", workers);
    if (check) overrides.set("check", "true");
    if (allow_truncation) overrides.set("allow_truncation", "true");
    config.merge(overrides);

    const auto result = llz::run(name, config);
    llz::write_artifacts(result, out_dir);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& m : result.check_messages) std::cout << m << '\n';
    for (const auto& a : result.artifacts) std::cout << "wrote " << out_dir << '/' << a.name << '\n';
    return result.exit_code;
  } catch (const llz::TruncationError& e) {
    std::cerr << "error: " << e.what() << " (rerun with --allow-truncation to continue)\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
