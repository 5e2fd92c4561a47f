#include "carnotacf/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace carnotacf {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string scan_to_csv(const RadialScan& scan) {
  std::ostringstream os;
  os << "r,value,abs_error,scheme\n";
  for (std::size_t i = 0; i < scan.radii.size(); ++i)
    os << format_double(scan.radii[i]) << "," << format_double(scan.values[i]) << ","
       << format_double(scan.errors[i]) << "," << scan.scheme << "\n";
  return os.str();
}

std::string report_to_json_text(const MonotonicityReport& report) {
  nlohmann::json j;
  j["classification"] = trend_name(report.classification);
  j["first_violation"] = report.first_violation;
  j["confidence_margin"] = report.confidence_margin;
  return j.dump();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RunConfig cfg;
  for (const auto& [key, val] : j.items()) {
    if (key == "group")
      cfg.group_descriptor = val.is_string() ? val.get<std::string>() : val.dump();
    else if (key == "poly")
      cfg.poly_expr = val.get<std::string>();
    else if (key == "x0")
      cfg.x0 = val.get<std::vector<std::string>>();
    else if (key == "radii")
      cfg.radii = val.get<std::vector<double>>();
    else if (key == "resolution")
      cfg.resolution = Resolution::from_json_text(val.dump());
    else if (key == "functional")
      cfg.functional = val.get<std::string>();
    else if (key == "expect")
      cfg.expect = val.get<std::string>();
    else if (key == "out")
      cfg.out_dir = val.get<std::string>();
    else
      throw std::invalid_argument("unknown config key: " + key);
  }
  if (!cfg.expect.empty() && cfg.expect != "increasing" && cfg.expect != "decreasing")
    throw std::invalid_argument("expect must be increasing or decreasing");
  functional_kind_from_name(cfg.functional);
  return cfg;
}

std::string RunConfig::to_json_text() const {
  nlohmann::json j;
  j["group"] = nlohmann::json::parse(group_descriptor);
  j["poly"] = poly_expr;
  j["x0"] = x0;
  j["radii"] = radii;
  j["resolution"] = nlohmann::json::parse(resolution.to_json_text());
  j["functional"] = functional;
  j["expect"] = expect;
  j["out"] = out_dir;
  return j.dump(2);
}

}  // namespace carnotacf
