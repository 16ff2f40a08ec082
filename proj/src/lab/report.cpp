#include <algorithm>
#include <cstdio>
#include <limits>

#include "curveflow/lab/io.hpp"
#include "curveflow/lab/lab.hpp"

namespace curveflow::lab {
namespace {

using Loop = std::vector<Vec2>;

// One SVG path of several subpaths; coordinates are written with y flipped.
void write_svg(const std::vector<std::pair<Loop, bool>>& loops, const fs::path& path) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& [pts, closed] : loops) {
    for (const Vec2& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, -p.y);
      ymax = std::max(ymax, -p.y);
    }
  }
  const double half = 0.5 * 1.05 * std::max(xmax - xmin, ymax - ymin);
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);

  std::string d;
  char buf[96];
  for (const auto& [pts, closed] : loops) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.9g %.9g ", i == 0 ? "M" : "L", pts[i].x, -pts[i].y);
      d += buf;
    }
    if (closed) d += "Z ";
  }
  if (!d.empty()) d.pop_back();

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g", cx - half, cy - half, 2 * half, 2 * half);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + std::string(buf) +
         "\" width=\"600\" height=\"600\">\n";
  std::snprintf(buf, sizeof buf, "%.6g", 2 * half / 400);
  svg += "  <path fill=\"none\" stroke=\"black\" stroke-width=\"" + std::string(buf) + "\" d=\"" +
         d + "\"/>\n</svg>\n";
  io::write_text(path, svg);
}

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

void emit_svg(const PlaneCurve& curve, const fs::path& path) {
  write_svg({{Loop(curve.vertices().begin(), curve.vertices().end()), true}}, path);
}

void emit_svg(std::span<const PlaneCurve> curves, const fs::path& path) {
  std::vector<std::pair<Loop, bool>> loops;
  for (const PlaneCurve& c : curves) loops.push_back({Loop(c.vertices().begin(), c.vertices().end()), true});
  write_svg(loops, path);
}

void emit_svg(const AxiProfile& profile, const fs::path& path) {
  const auto s = profile.samples();
  Loop upper(s.begin(), s.end());
  Loop lower;
  for (const Vec2& p : s) lower.push_back({p.x, -p.y});
  switch (profile.topology()) {
    case Topology::TwoPoles: write_svg({{axi::meridian_loop(profile), true}}, path); break;
    case Topology::Periodic: write_svg({{upper, true}, {lower, true}}, path); break;
    case Topology::Tube: write_svg({{upper, false}, {lower, false}}, path); break;
  }
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", number_or_null(c.measured)},
                      {"relation", c.relation},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  }
  nlohmann::json artifacts = nlohmann::json::array();
  for (const auto& a : r.artifacts) artifacts.push_back(a.generic_string());
  nlohmann::json j{{"scenario", r.scenario},
                   {"kind", std::string(to_string(r.kind))},
                   {"passed", r.passed},
                   {"checks", checks},
                   {"wall_seconds", r.wall_seconds},
                   {"artifacts", artifacts}};
  if (!r.failure_cause.empty()) j["failure_cause"] = r.failure_cause;
  return j;
}

nlohmann::json summary_json(const std::vector<RunReport>& reports) {
  nlohmann::json all = nlohmann::json::array();
  std::size_t failed = 0;
  for (const RunReport& r : reports) {
    all.push_back(to_json(r));
    failed += r.passed ? 0 : 1;
  }
  return {{"scenarios", all},
          {"total", reports.size()},
          {"failed", failed},
          {"passed", failed == 0}};
}

std::string summary_table(const std::vector<RunReport>& reports) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %-40s %-12s %-4s %-12s %s\n", "scenario", "check",
                "measured", "rel", "tolerance", "status");
  out += buf;
  for (const RunReport& r : reports) {
    if (!r.failure_cause.empty()) {
      std::snprintf(buf, sizeof buf, "%-22s %-40s %-12s %-4s %-12s FAIL (%s)\n",
                    r.scenario.c_str(), "-", "-", "-", "-", r.failure_cause.c_str());
      out += buf;
    }
    for (const CheckResult& c : r.checks) {
      std::snprintf(buf, sizeof buf, "%-22s %-40s %-12.4g %-4s %-12.4g %s\n", r.scenario.c_str(),
                    c.name.c_str(), c.measured, c.relation.c_str(), c.tolerance,
                    c.passed ? "pass" : "FAIL");
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-22s %-40s %-12.2f %-4s %-12s %s\n", r.scenario.c_str(),
                  "wall-seconds", r.wall_seconds, "", "", r.passed ? "PASS" : "FAIL");
    out += buf;
  }
  return out;
}

}  // namespace curveflow::lab
