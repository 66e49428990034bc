#include "hjhom/rate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hjhom/engine.hpp"
#include "hjhom/solver.hpp"

namespace hjhom {

LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3)
    throw PreconditionError("loglog_fit: need at least 3 pairs");
  for (const auto& [eps, value] : pairs) {
    if (!(value > 0.0)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", eps);
      throw PreconditionError(
          std::string("loglog_fit: nonpositive value at eps=") + buf);
    }
  }
  double n = static_cast<double>(pairs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [eps, value] : pairs) {
    double x = std::log(eps), y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  LogLogFit fit;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw PreconditionError("loglog_fit: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  double mean_y = sy / n;
  for (const auto& [eps, value] : pairs) {
    double x = std::log(eps), y = std::log(value);
    double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

BumpProfile profile_by_name(const std::string& name, int dim) {
  if (name == "paper") return paper_profile();
  if (name == "experiments")
    return dim == 2 ? experiments_profile_2d() : experiments_profile_3d();
  throw PreconditionError("unknown profile: " + name);
}

double run_point(const RunConfig& cfg, double eps) {
  BumpProfile profile = profile_by_name(cfg.profile, 2);
  double dt = eps / cfg.dt_denominator;
  if (cfg.method == "game-upper") {
    GameSpec game = make_game_2d(profile);
    auto [fi, fii] = baseline_families(cfg.seed);
    (void)fi;
    return upper_value_estimate(game, eps, fii, cfg.T, dt).value;
  }
  if (cfg.method == "game-lower") {
    GameSpec game = make_game_2d(profile);
    auto [fi, fii] = baseline_families(cfg.seed);
    (void)fii;
    return lower_value_estimate(game, eps, fi, cfg.T, dt).value;
  }
  if (cfg.method == "pde") {
    double h_max = eps * profile.width / 4.0;
    int n = cfg.grid_n;
    if (n <= 0)
      n = static_cast<int>(std::ceil(2.0 * cfg.grid_L / h_max));
    std::size_t nodes = static_cast<std::size_t>(n + 1) *
                        static_cast<std::size_t>(n + 1);
    if (nodes > cfg.max_nodes)
      throw PreconditionError(
          "pde point needs " + std::to_string(nodes) +
          " nodes, over the budget of " + std::to_string(cfg.max_nodes));
    return solve_micro_2d(profile, eps, cfg.T, n, cfg.grid_L)
        .value_at_origin;
  }
  throw PreconditionError("unknown rate method: " + cfg.method);
}

}  // namespace

RateReport rate_sweep(const RunConfig& cfg) {
  if (cfg.eps_list.empty())
    throw PreconditionError("rate_sweep: empty eps list");
  for (double e : cfg.eps_list)
    if (!(e > 0.0 && e < 0.25))
      throw PreconditionError("rate_sweep: eps must lie in (0, 1/4)");

  RateReport report;
  report.method = cfg.method;
  report.profile_name = cfg.profile;
  for (double eps : cfg.eps_list) {
    RatePoint pt;
    pt.eps = eps;
    try {
      pt.value = run_point(cfg, eps);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.note = e.what();
    }
    report.points.push_back(std::move(pt));
  }
  std::sort(report.points.begin(), report.points.end(),
            [](const RatePoint& a, const RatePoint& b) { return a.eps > b.eps; });

  std::vector<std::pair<double, double>> good;
  for (const auto& pt : report.points)
    if (pt.ok && pt.value > 0.0) good.push_back({pt.eps, pt.value});
  if (good.size() < 3)
    throw PreconditionError(
        "rate_sweep: fewer than 3 usable points survived");

  report.fit = loglog_fit(good);
  // Pre-asymptotic transient trimming: drop the largest eps once.
  if (report.fit.r2 < 0.98 && good.size() >= 4) {
    report.excluded_eps.push_back(good.front().first);
    std::vector<std::pair<double, double>> trimmed(good.begin() + 1,
                                                   good.end());
    report.fit = loglog_fit(trimmed);
  }

  report.bracket_min = std::numeric_limits<double>::infinity();
  report.bracket_max = -std::numeric_limits<double>::infinity();
  for (const auto& [eps, value] : good) {
    double c = value / std::sqrt(eps);
    report.bracket_min = std::min(report.bracket_min, c);
    report.bracket_max = std::max(report.bracket_max, c);
  }
  return report;
}

void write_report_csv(const RateReport& report, std::ostream& out) {
  out << "eps,value,value_over_sqrt_eps,method,profile\n";
  char buf[32];
  for (const auto& pt : report.points) {
    if (!pt.ok) continue;
    std::snprintf(buf, sizeof buf, "%.17g", pt.eps);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", pt.value);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", pt.value / std::sqrt(pt.eps));
    out << buf << ',' << report.method << ',' << report.profile_name << '\n';
  }
}

std::string render_report_svg(const RateReport& report) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& pt : report.points)
    if (pt.ok && pt.value > 0.0)
      pts.push_back({std::log(pt.eps), std::log(pt.value)});
  if (pts.empty()) return {};

  double xmin = pts[0].first, xmax = pts[0].first;
  double ymin = pts[0].second, ymax = pts[0].second;
  for (auto& [x, y] : pts) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-9) ymax = ymin + 1.0;
  const double W = 640.0, H = 480.0, M = 60.0;
  auto X = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
  auto Y = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">"
      << report.method << " (" << report.profile_name
      << "): log value vs log eps</text>\n";
  for (auto& [x, y] : pts)
    svg << "<circle class=\"pt\" cx=\"" << X(x) << "\" cy=\"" << Y(y)
        << "\" r=\"4\" fill=\"steelblue\"/>\n";
  // fitted line across the x-range
  double yl = report.fit.intercept + report.fit.slope * xmin;
  double yr = report.fit.intercept + report.fit.slope * xmax;
  svg << "<line class=\"fit\" x1=\"" << X(xmin) << "\" y1=\"" << Y(yl)
      << "\" x2=\"" << X(xmax) << "\" y2=\"" << Y(yr)
      << "\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n";
  // slope-1/2 guide through the first point
  double gy_l = pts[0].second + 0.5 * (xmin - pts[0].first);
  double gy_r = pts[0].second + 0.5 * (xmax - pts[0].first);
  svg << "<line class=\"guide\" x1=\"" << X(xmin) << "\" y1=\"" << Y(gy_l)
      << "\" x2=\"" << X(xmax) << "\" y2=\"" << Y(gy_r)
      << "\" stroke=\"gray\" stroke-dasharray=\"6 3\"/>\n";
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "slope %.4f  intercept %.4f  R2 %.5f", report.fit.slope,
                report.fit.intercept, report.fit.r2);
  svg << "<text x=\"" << W / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\">" << buf << "</text>\n";
  if (!report.excluded_eps.empty()) {
    svg << "<text x=\"" << W / 2 << "\" y=\"" << H - 32
        << "\" text-anchor=\"middle\">excluded eps:";
    for (double e : report.excluded_eps) {
      std::snprintf(buf, sizeof buf, " %.6g", e);
      svg << buf;
    }
    svg << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_report(const RateReport& report, const std::string& csv_path,
                 const std::string& svg_path) {
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("emit_report: cannot write " + csv_path);
    write_report_csv(report, out);
  }
  if (!svg_path.empty()) {
    std::string svg = render_report_svg(report);
    if (svg.empty()) return;  // empty report: CSV header only, no SVG
    std::ofstream out(svg_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("emit_report: cannot write " + svg_path);
    out << svg;
  }
}

}  // namespace hjhom
