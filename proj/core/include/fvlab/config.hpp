#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat "key = value" text config with '#' comments. Keys are dotted paths.
// Every key must be consumed by the experiment that reads the config;
// leftovers are reported as unknown keys.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string_or(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double_or(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key);
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback);
  std::uint64_t get_u64(const std::string& key);
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback);
  bool get_bool_or(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key);

  // Overrides (e.g. from command-line flags); marks nothing as consumed.
  void set(const std::string& key, const std::string& value);

  // Throws ConfigError if any key was never consumed.
  void check_all_consumed() const;

  // Ordered echo of every entry, for reports.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  std::string take(const std::string& key);
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> consumed_;
};

}  // namespace fvlab
