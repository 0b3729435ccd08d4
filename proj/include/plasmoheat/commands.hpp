#pragma once

#include <string>
#include <vector>

#include "plasmoheat/config.hpp"

namespace plasmoheat {

// Least-squares line fit y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(y) vs log(x); x, y > 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Commands write CSV/SVG under cfg.output_dir and return a process exit
// code: 0 success, 1 failed validation checks.  Config errors throw before
// any command runs.
int cmd_spectrum(const RunConfig& cfg);
int cmd_coupling(const RunConfig& cfg);
int cmd_field(const RunConfig& cfg);
int cmd_heat(const RunConfig& cfg);
int cmd_gap_scan(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg);

}  // namespace plasmoheat
