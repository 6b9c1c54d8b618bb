#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fvlab/estimate.hpp"

namespace fvlab {

struct Metric {
  std::string name;
  double value = 0.0;
  std::optional<Estimate> estimate;  // set for Monte Carlo quantities
};

struct Verdict {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string detail;
};

// Deterministic given (config, seed); wall_seconds is the only timing field.
struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<Metric> metrics;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  void add_value(const std::string& name, double value);
  void add_estimate(const std::string& name, const Estimate& est);
  // Pass when |observed| <= bound.
  void add_verdict(const std::string& name, double observed, double bound,
                   const std::string& detail = "");
  void add_flag_verdict(const std::string& name, bool pass, const std::string& detail = "");

  bool all_pass() const;

  std::string to_json(bool include_timing) const;
  std::string to_csv(bool include_timing) const;
  std::string format(const std::string& fmt, bool include_timing = true) const;
};

}  // namespace fvlab
