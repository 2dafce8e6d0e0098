#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace llz {

/// Flat key=value configuration. Later assignments override earlier ones.
class ExperimentConfig {
 public:
  /// Parses UTF-8 text with `#` comments; throws ParseError naming the line.
  static ExperimentConfig parse(std::istream& in, const std::string& source = "<config>");
  static ExperimentConfig parse_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void merge(const ExperimentConfig& overrides);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  /// Every key read so far with the value actually used (defaults included).
  const std::map<std::string, std::string>& resolved() const noexcept { return resolved_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
};

struct Artifact {
  std::string name;     // file name relative to the output directory
  std::string content;  // deterministic for fixed config and seed
};

struct RunResult {
  int exit_code = 0;
  bool check_requested = false;
  bool check_passed = true;
  std::vector<std::string> check_messages;
  std::vector<std::string> warnings;
  std::vector<Artifact> artifacts;  // manifest.json is last
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"tables",  "rmt", "family-sim", "hypcheck",
                                                 "moments", "clt", "amplify",    "lvals"};
  return names;
}

/// Runs one subcommand. Recognized keys depend on the subcommand; see the README.
/// Global keys: seed, workers, check, allow_truncation.
RunResult run(const std::string& subcommand, const ExperimentConfig& config);

/// Writes every artifact into `directory` (created if missing).
void write_artifacts(const RunResult& result, const std::string& directory);

/// Location of the bundled data files (known_results.csv).
std::string data_directory();

}  // namespace llz
