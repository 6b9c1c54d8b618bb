#include "fvlab/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fvlab {

void Report::add_value(const std::string& name, double value) {
  metrics.push_back({name, value, std::nullopt});
}

void Report::add_estimate(const std::string& name, const Estimate& est) {
  metrics.push_back({name, est.mean, est});
}

void Report::add_verdict(const std::string& name, double observed, double bound,
                         const std::string& detail) {
  verdicts.push_back({name, std::abs(observed) <= bound, observed, bound, detail});
}

void Report::add_flag_verdict(const std::string& name, bool pass, const std::string& detail) {
  verdicts.push_back({name, pass, pass ? 0.0 : 1.0, 0.0, detail});
}

bool Report::all_pass() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

std::string Report::to_json(bool include_timing) const {
  nlohmann::ordered_json out;
  out["experiment"] = experiment;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config_echo) cfg[key] = value;
  out["config"] = cfg;
  nlohmann::ordered_json ms = nlohmann::ordered_json::array();
  for (const auto& m : metrics) {
    nlohmann::ordered_json jm;
    jm["name"] = m.name;
    jm["value"] = m.value;
    if (m.estimate) {
      jm["variance"] = m.estimate->variance;
      jm["count"] = m.estimate->count;
      jm["ci99_half_width"] = m.estimate->ci99_half_width;
    }
    ms.push_back(jm);
  }
  out["metrics"] = ms;
  nlohmann::ordered_json vs = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    nlohmann::ordered_json jv;
    jv["name"] = v.name;
    jv["pass"] = v.pass;
    jv["observed"] = v.observed;
    jv["bound"] = v.bound;
    if (!v.detail.empty()) jv["detail"] = v.detail;
    vs.push_back(jv);
  }
  out["verdicts"] = vs;
  out["all_pass"] = all_pass();
  if (include_timing) out["wall_seconds"] = wall_seconds;
  return out.dump(2) + "\n";
}

std::string Report::to_csv(bool include_timing) const {
  std::ostringstream os;
  os.precision(17);
  os << "row,name,value,variance,count,ci99,pass,bound,detail\n";
  os << "experiment," << experiment << ",,,,,,,\n";
  for (const auto& [key, value] : config_echo) {
    os << "config," << key << "," << value << ",,,,,,\n";
  }
  for (const auto& m : metrics) {
    os << "metric," << m.name << "," << m.value << ",";
    if (m.estimate) {
      os << m.estimate->variance << "," << m.estimate->count << ","
         << m.estimate->ci99_half_width;
    } else {
      os << ",,";
    }
    os << ",,,\n";
  }
  for (const auto& v : verdicts) {
    os << "verdict," << v.name << "," << v.observed << ",,,," << (v.pass ? 1 : 0) << ","
       << v.bound << "," << v.detail << "\n";
  }
  os << "summary,all_pass," << (all_pass() ? 1 : 0) << ",,,,,,\n";
  if (include_timing) os << "summary,wall_seconds," << wall_seconds << ",,,,,,\n";
  return os.str();
}

std::string Report::format(const std::string& fmt, bool include_timing) const {
  if (fmt == "json") return to_json(include_timing);
  if (fmt == "csv") return to_csv(include_timing);
  throw std::invalid_argument("unknown report format: " + fmt);
}

}  // namespace fvlab
