// Acceptance suite: runs the shipped catalog through the lab, reloads the
// written trajectories and scores each criterion against the tolerances
// pinned below (independent of the tolerances in the catalog file).
//
// usage: curveflow_acceptance [catalog.ini] [output-root]
// Exit status 0 when every criterion passes, 1 otherwise, 2 on setup errors.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "curveflow/error.hpp"
#include "curveflow/lab/io.hpp"
#include "curveflow/lab/lab.hpp"
#include "curveflow/oracle.hpp"
#include "curveflow/rescale.hpp"
#include "reference.hpp"

namespace fs = std::filesystem;
using namespace curveflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pinned tolerances and budgets.
namespace tol {
constexpr double circle_radius = 1e-3, circle_t_max = 0.45, circle_extinction = 0.005;
constexpr double area_slope = 0.005, area_extinction = 0.02;
constexpr double roundness_final = 0.02, isoperimetric = 0.01;
constexpr double spiral_lifetime_bound = 2.0, spiral_lifetime = 0.02;
constexpr double affine_drift = 0.01, affine_residual = 1e-3, affine_area_fraction = 0.51;
constexpr double sphere_radius = 1e-3, sphere_t_max = 0.22;
constexpr double neck_location = 0.05, neck_ratio_lo = 0.95, neck_ratio_hi = 1.05;
constexpr double torus_spacings = 3.0;
constexpr double reaper_deviation = 5e-3, reaper_half_width = 1.2, reaper_time = 0.3;
constexpr std::size_t reaper_samples = 128;
constexpr double oracle_error = 1e-6;
}  // namespace tol

namespace budget {
constexpr double circle = 10, ellipse = 30, spiral = 120, affine = 60, rth_root = 60;
constexpr double sphere = 30, dumbbell = 120, torus = 60, nested = 60, reaper = 30, oracle = 5;
}  // namespace budget

struct Criterion {
  int id;
  std::string title;
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Trajectory curve_traj(const fs::path& dir) { return std::get<Trajectory>(io::read_trajectory(dir)); }
AxiTrajectory axi_traj(const fs::path& dir) {
  return std::get<AxiTrajectory>(io::read_trajectory(dir));
}

double mean_radius(std::span<const Vec2> pts, Vec2 c) {
  double r = 0.0;
  for (const Vec2& p : pts) r += norm(p - c);
  return r / static_cast<double>(pts.size());
}

std::size_t non_embedded(const Trajectory& t) {
  std::size_t bad = t.has_event(EventKind::EmbeddednessLoss) ? 1 : 0;
  for (const Snapshot& s : t.snapshots) bad += curves::is_embedded(s.curve) ? 0 : 1;
  return bad;
}

class Suite {
 public:
  Suite(std::vector<lab::Scenario> catalog, fs::path out) : catalog_(std::move(catalog)), out_(std::move(out)) {}

  // Runs a scenario once; later lookups reuse the report.
  const lab::RunReport& run(const std::string& name) {
    if (auto it = reports_.find(name); it != reports_.end()) return it->second;
    for (const auto& s : catalog_) {
      if (s.name != name) continue;
      std::fprintf(stderr, "running %s ...\n", name.c_str());
      auto r = lab::run_scenario(s, out_);
      if (!r.failure_cause.empty())
        throw Error(ErrorKind::NumericalBreakdown, name + ": " + r.failure_cause);
      return reports_.emplace(name, std::move(r)).first->second;
    }
    throw Error(ErrorKind::Config, "catalog has no scenario '" + name + "'");
  }
  fs::path dir(const std::string& name) const { return out_ / name; }

 private:
  std::vector<lab::Scenario> catalog_;
  fs::path out_;
  std::map<std::string, lab::RunReport> reports_;
};

void circle_law(Suite& s, Criterion& c) {
  const auto& r = s.run("circle_law");
  const Trajectory t = curve_traj(s.dir("circle_law") / "trajectory");
  double worst = 0.0, reached = 0.0;
  for (const Snapshot& snap : t.snapshots) {
    if (snap.time > tol::circle_t_max) break;
    const double rad = mean_radius(snap.curve.vertices(), curves::centroid(snap.curve.vertices()));
    worst = std::max(worst, std::abs(rad / std::sqrt(1.0 - 2.0 * snap.time) - 1.0));
    reached = snap.time;
  }
  reached = std::max(reached, t.snapshots.back().time);
  const double T = flow::analyze_area_law(t).extrapolated_extinction;
  c.passed = worst < tol::circle_radius && reached >= tol::circle_t_max &&
             std::abs(T - 0.5) <= tol::circle_extinction && r.wall_seconds < budget::circle;
  c.detail = fmt("radius rel err %.2e (<%g to t=%g), extinction %.5f (0.5 +- %g), %.1fs", worst,
                 tol::circle_radius, tol::circle_t_max, T, tol::circle_extinction, r.wall_seconds);
}

void area_law(Suite& s, Criterion& c) {
  const auto& r = s.run("ellipse_area_law");
  const Trajectory t = curve_traj(s.dir("ellipse_area_law") / "trajectory");
  const auto law = flow::analyze_area_law(t);
  const double slope_err = std::abs(law.slope / -kTwoPi - 1.0);
  const double ext_err = std::abs(law.extrapolated_extinction - 1.0);
  c.passed = slope_err <= tol::area_slope && ext_err <= tol::area_extinction &&
             r.wall_seconds < budget::ellipse;
  c.detail = fmt("slope %.6f (rel err %.2e), extinction %.4f, %.1fs", law.slope, slope_err,
                 law.extrapolated_extinction, r.wall_seconds);
}

void roundness(Suite& s, Criterion& c) {
  const auto& r = s.run("ellipse_area_law");
  const Trajectory t = curve_traj(s.dir("ellipse_area_law") / "trajectory");
  const auto series = rescale::roundness_series(t);
  const double half = 0.5 * std::abs(t.snapshots.front().metrics.enclosed_area) / kTwoPi;
  std::size_t rises = 0;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (series[i - 1].time >= half && !(series[i].circle_residual < series[i - 1].circle_residual))
      ++rises;
  const double final_res = series.back().circle_residual;
  const double iso = std::abs(series.back().isoperimetric_ratio - 1.0);
  c.passed = rises == 0 && final_res < tol::roundness_final && iso < tol::isoperimetric &&
             r.wall_seconds < budget::ellipse;
  c.detail = fmt("%zu non-decreasing steps after t=%.3f, final residual %.4f, |iso-1| %.2e", rises,
                 half, final_res, iso);
}

void spiral(Suite& s, Criterion& c) {
  const auto& r = s.run("spiral_grayson");
  const Trajectory t = curve_traj(s.dir("spiral_grayson") / "trajectory");
  const std::size_t bad = non_embedded(t);
  const auto law = flow::analyze_area_law(t);
  const Event* conv = t.find_event(EventKind::Convexification);
  const double T = law.extrapolated_extinction;
  const double lifetime_err = std::abs(T / law.extinction_estimate - 1.0);
  c.passed = bad == 0 && conv && conv->time < T && T < tol::spiral_lifetime_bound &&
             lifetime_err <= tol::spiral_lifetime && r.wall_seconds < budget::spiral;
  c.detail = fmt("%zu non-embedded, convexified at %.4f, extinction %.4f vs A0/2pi %.4f, %.1fs", bad,
                 conv ? conv->time : NAN, T, law.extinction_estimate, r.wall_seconds);
}

void affine(Suite& s, Criterion& c) {
  const auto& r = s.run("affine_ellipse");
  const Trajectory t = curve_traj(s.dir("affine_ellipse") / "trajectory");
  const double e0 = flow::fit_ellipse(t.snapshots.front().curve).eccentricity;
  double drift = 0.0, residual = 0.0;
  for (const Snapshot& snap : t.snapshots) {
    const auto f = flow::fit_ellipse(snap.curve);
    drift = std::max(drift, std::abs(f.eccentricity / e0 - 1.0));
    residual = std::max(residual, f.residual);
  }
  const double fraction = t.snapshots.back().metrics.enclosed_area / t.snapshots.front().metrics.enclosed_area;
  c.passed = drift < tol::affine_drift && residual < tol::affine_residual &&
             fraction <= tol::affine_area_fraction && r.wall_seconds < budget::affine;
  c.detail = fmt("eccentricity drift %.2e, max residual %.2e, final area fraction %.3f", drift,
                 residual, fraction);
}

void rth_root(Suite& s, Criterion& c) {
  const auto& r = s.run("rth_root_ellipse");
  const Trajectory t = curve_traj(s.dir("rth_root_ellipse") / "trajectory");
  const auto series = flow::rescaled_length_series(t);
  std::size_t flat = 0;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (!(series[i].normalized_length > series[i - 1].normalized_length)) ++flat;
  c.passed = series.size() >= 10 && flat == 0 && r.wall_seconds < budget::rth_root;
  c.detail = fmt("%zu snapshots, %zu non-increasing steps, growth %.4f", series.size(), flat,
                 series.back().normalized_length / series.front().normalized_length);
}

void sphere(Suite& s, Criterion& c) {
  const auto& r = s.run("sphere_collapse");
  const AxiTrajectory t = axi_traj(s.dir("sphere_collapse") / "trajectory");
  double worst = 0.0;
  for (const AxiSnapshot& snap : t.snapshots) {
    if (snap.time > tol::sphere_t_max) break;
    const auto pts = snap.profile.samples();
    double cx = 0.0;
    for (const Vec2& p : pts) cx += p.x;
    const double rad = mean_radius(pts, {cx / static_cast<double>(pts.size()), 0.0});
    worst = std::max(worst, std::abs(rad / std::sqrt(1.0 - 4.0 * snap.time) - 1.0));
  }
  const double end = t.snapshots.back().time;
  c.passed = worst < tol::sphere_radius && end >= tol::sphere_t_max && r.wall_seconds < budget::sphere;
  c.detail = fmt("radius rel err %.2e up to t=%g (run reached %.4f), %.1fs", worst,
                 tol::sphere_t_max, end, r.wall_seconds);
}

void neck(Suite& s, Criterion& c) {
  const auto& r = s.run("dumbbell_pinch");
  const AxiTrajectory t = axi_traj(s.dir("dumbbell_pinch") / "trajectory");
  const Event* e = t.find_event(EventKind::NeckPinch);
  if (!e || !e->location) {
    c.detail = "no neck-pinch event";
    return;
  }
  const auto init = t.snapshots.front().profile.samples();
  const double mid = 0.5 * (init.front().x + init.back().x);
  const double offset = std::abs(e->location->x - mid) / 1.2;
  const auto report = axi::neck_report(t);
  std::size_t lost = 0;
  if (t.snapshots.front().metrics.mean_convex)
    for (const AxiSnapshot& snap : t.snapshots) lost += snap.metrics.mean_convex ? 0 : 1;
  c.passed = offset <= tol::neck_location && report.ratio_min >= tol::neck_ratio_lo &&
             report.ratio_max <= tol::neck_ratio_hi && lost == 0 && r.wall_seconds < budget::dumbbell;
  c.detail = fmt("pinch at x=%.4f (offset %.2e of tube), T_fit %.6f, ratio [%.4f, %.4f], %zu mean-convexity losses",
                 e->location->x, offset, report.pinch_time_fit, report.ratio_min, report.ratio_max, lost);
}

void torus(Suite& s, Criterion& c) {
  const auto& r = s.run("torus_collapse");
  const AxiTrajectory t = axi_traj(s.dir("torus_collapse") / "trajectory");
  const bool event = t.find_event(EventKind::TorusCollapse) != nullptr;
  const auto pts = t.snapshots.back().profile.samples();
  const auto fit = rescale::fit_circle(pts);
  double deviation = 0.0, spacing = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    deviation = std::max(deviation, std::abs(norm(pts[i] - fit.center) - fit.radius));
    spacing += norm(pts[(i + 1) % pts.size()] - pts[i]);
  }
  spacing /= static_cast<double>(pts.size());
  c.passed = event && deviation <= tol::torus_spacings * spacing && r.wall_seconds < budget::torus;
  c.detail = fmt("event %s, final max deviation %.2e = %.3f spacings (circle r=%.4f about (%.4f, %.4f))",
                 event ? "fired" : "missing", deviation, deviation / spacing, fit.radius,
                 fit.center.x, fit.center.y);
}

void disjoint(Suite& s, Criterion& c) {
  const auto& r = s.run("nested_disjoint");
  const Trajectory a = curve_traj(s.dir("nested_disjoint") / "trajectory-0");
  const Trajectory b = curve_traj(s.dir("nested_disjoint") / "trajectory-1");
  double closest = INFINITY;
  const std::size_t n = std::min(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < n; ++i)
    closest = std::min(closest, curves::min_distance(a.snapshots[i].curve, b.snapshots[i].curve));
  std::size_t bad = non_embedded(a) + non_embedded(b);
  for (const char* name : {"circle_law", "ellipse_area_law", "spiral_grayson"}) {
    s.run(name);
    bad += non_embedded(curve_traj(s.dir(name) / "trajectory"));
  }
  c.passed = n > 0 && closest > 0.0 && bad == 0 && r.wall_seconds < budget::nested;
  c.detail = fmt("min distance %.4f over %zu common snapshots, %zu non-embedded p=1 snapshots", closest,
                 n, bad);
}

void reaper(Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto tc = oracle::grim_reaper_translation(tol::reaper_samples, tol::reaper_half_width,
                                                  tol::reaper_time);
  const double wall = seconds_since(start);
  c.passed = tc.max_deviation < tol::reaper_deviation && wall < budget::reaper;
  c.detail = fmt("max interior deviation %.2e after t=%.3f (%zu steps), %.2fs", tc.max_deviation,
                 tc.time, tc.steps, wall);
}

void blowup(Suite& s, Criterion& c) {
  const auto& r = s.run("dumbbell_pinch");
  const AxiTrajectory t = axi_traj(s.dir("dumbbell_pinch") / "trajectory");
  const auto probes = rescale::neck_probes(t, 4, 1.0);
  struct Dial {
    double exponent;
    std::vector<LimitClass> accepted;
  };
  const Dial dials[] = {{2.0, {LimitClass::PlaneLike}},
                        {1.0, {LimitClass::ConvexNoncompact, LimitClass::CylinderLike}},
                        {0.5, {LimitClass::CylinderLike}}};
  c.passed = probes.size() >= 3 && r.wall_seconds < budget::dumbbell;
  c.detail = fmt("%zu probes;", probes.size());
  for (const Dial& d : dials) {
    const auto report = rescale::curvature_normalized_frames(t, probes, d.exponent);
    const bool ok = std::find(d.accepted.begin(), d.accepted.end(), report.limit_classification) !=
                    d.accepted.end();
    c.passed = c.passed && ok;
    c.detail += fmt(" h^%g: %s%s;", d.exponent, std::string(to_string(report.limit_classification)).c_str(),
                    d.exponent == 1.0 ? (report.late_frames_convex ? " (late frames convex)" : " (late frames not convex)") : "");
  }
}

void oracles(Suite& s, Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto checks = reference::check_oracles();
  double worst = 0.0;
  for (const auto& k : checks) worst = std::max(worst, k.error());
  const double wall = seconds_since(start);
  const auto& r = s.run("oracle_check");
  c.passed = !checks.empty() && worst <= tol::oracle_error && r.passed && wall < budget::oracle &&
             r.wall_seconds < budget::oracle;
  c.detail = fmt("%zu oracle/reference pairs, max error %.2e, %.3fs (catalog scenario %.3fs)",
                 checks.size(), worst, wall, r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path catalog_path = argc > 1 ? fs::path(argv[1]) : fs::path(CURVEFLOW_CATALOG);
  const fs::path out = argc > 2 ? fs::path(argv[2]) : lab::default_output_root() / "acceptance";

  std::vector<lab::Scenario> catalog;
  try {
    catalog = lab::load_config(catalog_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
  Suite suite(std::move(catalog), out);

  std::vector<Criterion> criteria = {
      {1, "circle law"},      {2, "area law"},         {3, "roundness"},
      {4, "spiral"},          {5, "affine flow"},      {6, "rth-root growth"},
      {7, "sphere"},          {8, "neck pinch"},       {9, "torus collapse"},
      {10, "disjointness and embeddedness"}, {11, "grim reaper"}, {12, "blow-up dial"},
      {13, "oracle self-check"}};
  const std::vector<std::function<void(Criterion&)>> scorers = {
      [&](Criterion& c) { circle_law(suite, c); }, [&](Criterion& c) { area_law(suite, c); },
      [&](Criterion& c) { roundness(suite, c); },  [&](Criterion& c) { spiral(suite, c); },
      [&](Criterion& c) { affine(suite, c); },     [&](Criterion& c) { rth_root(suite, c); },
      [&](Criterion& c) { sphere(suite, c); },     [&](Criterion& c) { neck(suite, c); },
      [&](Criterion& c) { torus(suite, c); },      [&](Criterion& c) { disjoint(suite, c); },
      [&](Criterion& c) { reaper(c); },            [&](Criterion& c) { blowup(suite, c); },
      [&](Criterion& c) { oracles(suite, c); }};

  auto score = [&](std::size_t i) {
    try {
      scorers[i](criteria[i]);
    } catch (const std::exception& e) {
      criteria[i].passed = false;
      criteria[i].detail = std::string("error: ") + e.what();
    }
  };

  // The oracle gate runs first; nothing else is trusted if it fails.
  score(12);
  const bool gate = criteria[12].passed;
  for (std::size_t i = 0; i + 1 < criteria.size(); ++i) {
    if (gate) {
      score(i);
    } else {
      criteria[i].detail = "skipped: oracle self-check failed";
    }
  }

  bool all = true;
  for (const Criterion& c : criteria) {
    std::printf("%s  %2d  %-30s %s\n", c.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                c.detail.c_str());
    all = all && c.passed;
  }
  std::printf("%s (%s)\n", all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", out.string().c_str());
  return all ? 0 : 1;
}
