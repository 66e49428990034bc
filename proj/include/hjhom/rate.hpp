#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hjhom/errors.hpp"

namespace hjhom {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// Least-squares line on (ln eps, ln value).  Needs at least three pairs and
// strictly positive values.
LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& pairs);

struct RatePoint {
  double eps = 0.0;
  double value = 0.0;
  bool ok = false;
  std::string note;
};

struct RateReport {
  std::string method;        // game-upper | game-lower | pde
  std::string profile_name;  // paper | experiments
  std::vector<RatePoint> points;  // sorted by eps descending
  LogLogFit fit;
  double bracket_min = 0.0;  // min value / sqrt(eps) over good points
  double bracket_max = 0.0;  // max value / sqrt(eps)
  std::vector<double> excluded_eps;  // dropped by the pre-asymptotic rule
};

struct RunConfig {
  std::string method = "game-upper";
  std::string profile = "paper";
  std::vector<double> eps_list;
  double dt_denominator = 200.0;  // dt = eps / dt_denominator
  int grid_n = 0;                 // pde: 0 = derive from h <= eps*w/4
  double grid_L = 5.0;
  double T = 1.0;
  std::uint64_t seed = 1;
  std::size_t max_nodes = 80000000;  // refusal guard for pde grids
};

// Runs the requested estimator per eps; per-eps failures are recorded and
// the sweep continues as long as three good points remain.  The fit drops
// the largest eps once when R^2 < 0.98 and at least four points remain.
RateReport rate_sweep(const RunConfig& config);

void write_report_csv(const RateReport& report, std::ostream& out);
std::string render_report_svg(const RateReport& report);

// CSV always written (header only when empty); SVG written only when the
// report carries at least one good point.
void emit_report(const RateReport& report, const std::string& csv_path,
                 const std::string& svg_path);

}  // namespace hjhom
