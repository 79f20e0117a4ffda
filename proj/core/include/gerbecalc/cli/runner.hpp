#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gerbecalc/cli/manifest.hpp"

namespace gerbecalc::cli {

struct CheckResult {
  std::string name;
  std::string target;  // object ids the check ran on
  bool pass = false;
  double max_residual = 0.0;
  long points = 0;
  double wall_seconds = 0.0;
  std::string message;  // evaluation error, if any
};

struct Report {
  std::string scenario;
  std::vector<CheckResult> checks;
  int passed() const;
  int failed() const;
  bool ok() const { return failed() == 0; }
};

struct RunOptions {
  int quad_nodes = 16;
  std::optional<int> grid_override;
};

Report run(const Manifest& m, const RunOptions& opt = {});
// CHECK lines and SUMMARY; wall time only if requested.
std::string format_report(const Report& r, bool with_wall_time = false);

}  // namespace gerbecalc::cli
