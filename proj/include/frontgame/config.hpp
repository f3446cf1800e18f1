#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frontgame/dpp_solver.hpp"
#include "frontgame/verification.hpp"

namespace frontgame {

/// Flat `key = value` file with `#` comments.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Sorted `key = value` lines of the keys that define the solved problem
  /// (everything except check.* and rollout.*).
  std::string problem_text() const;
  /// SHA-256 hex of problem_text().
  std::string problem_digest() const;

 private:
  std::map<std::string, std::string> entries_;
};

std::string sha256_hex(const std::string& data);

/// Builds and validates the problem. Malformed or missing keys throw
/// ConfigParse; violated invariants throw their own codes.
ProblemConfig build_problem(const ConfigFile& cfg);

/// check.levels = "eps h n_dir; eps h n_dir; ..."
std::vector<RefinementLevel> parse_levels(const std::string& text);

}  // namespace frontgame
