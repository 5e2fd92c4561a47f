#pragma once

#include <string>

#include "carnotacf/functionals.hpp"

namespace carnotacf {

/// Shortest exact round-trip form of a double (%.17g).
std::string format_double(double v);

/// Columns r,value,abs_error,scheme; values round-trip bit for bit.
std::string scan_to_csv(const RadialScan& scan);

std::string report_to_json_text(const MonotonicityReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

/// One scan/run request as accepted by the command line; parsing rejects
/// unknown keys and serialize(parse(x)) is idempotent.
struct RunConfig {
  std::string group_descriptor = "{\"kind\":\"heisenberg1\"}";
  std::string poly_expr;
  std::vector<std::string> x0;  // exact rational strings, empty = origin
  std::vector<double> radii;
  Resolution resolution;
  std::string functional = "j_tilde";  // j | j_tilde | mean_value | j_repr
  std::string expect;                  // "" | increasing | decreasing
  std::string out_dir;

  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

}  // namespace carnotacf
