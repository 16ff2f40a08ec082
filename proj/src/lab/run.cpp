#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "curveflow/error.hpp"
#include "curveflow/lab/io.hpp"
#include "curveflow/lab/lab.hpp"
#include "curveflow/oracle.hpp"
#include "curveflow/shapes.hpp"
#include "reference.hpp"

namespace curveflow::lab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Collects checks and artifacts of one run.
struct Recorder {
  const Scenario& scenario;
  fs::path dir;
  RunReport& report;

  void check(std::string name, double measured, std::string relation, double tolerance) {
    bool ok = false;
    if (relation == "<=") ok = measured <= tolerance;
    if (relation == "<") ok = measured < tolerance;
    if (relation == ">=") ok = measured >= tolerance;
    if (relation == ">") ok = measured > tolerance;
    report.checks.push_back({std::move(name), measured, tolerance, std::move(relation), ok});
  }
  void flag(std::string name, bool ok) { check(std::move(name), ok ? 1.0 : 0.0, ">=", 1.0); }

  fs::path artifact(const std::string& file) {
    report.artifacts.push_back(dir / file);
    return dir / file;
  }
  double tol(const std::string& key) const { return scenario.setting(key); }
};

double param(const Scenario& s, const char* key) { return s.shape.params.at(key); }

std::vector<PlaneCurve> build_curves(const Scenario& s) {
  const std::size_t n = s.shape.samples;
  const std::string& name = s.shape.name;
  if (name == "circle") return {shapes::circle(n, param(s, "radius"))};
  if (name == "ellipse") return {shapes::ellipse(n, param(s, "a"), param(s, "b"))};
  if (name == "peanut") return {shapes::peanut(n, param(s, "amplitude"))};
  if (name == "square") return {shapes::square(n, param(s, "side"))};
  if (name == "spiral")
    return {shapes::spiral(n, {param(s, "inner"), param(s, "outer"), param(s, "turns")})};
  if (name == "nested")
    return {shapes::circle(n, param(s, "outer_radius")),
            shapes::ellipse(n, param(s, "inner_a"), param(s, "inner_b"))};
  throw Error(ErrorKind::Config, "[" + s.name + "] shape: not a plane curve");
}

AxiProfile build_axi(const Scenario& s) {
  const std::size_t n = s.shape.samples;
  const std::string& name = s.shape.name;
  if (name == "sphere") return axi::build_profile(axi::Sphere{param(s, "radius")}, n);
  if (name == "dumbbell")
    return axi::build_profile(
        axi::Dumbbell{param(s, "lobe_radius"), param(s, "tube_radius"), param(s, "tube_length")}, n);
  if (name == "torus")
    return axi::build_profile(axi::Torus{param(s, "ring_radius"), param(s, "tube_radius")}, n);
  if (name == "cylinder")
    return axi::build_profile(axi::Cylinder{param(s, "radius"), param(s, "period")}, n);
  throw Error(ErrorKind::Config, "[" + s.name + "] shape: not an axisymmetric shape");
}

double mean_radius(std::span<const Vec2> pts, Vec2 center) {
  double r = 0.0;
  for (const Vec2& p : pts) r += norm(p - center);
  return r / static_cast<double>(pts.size());
}

// ---- curve analyses -------------------------------------------------------

void embeddedness(Recorder& rec, const std::vector<Trajectory>& trajs) {
  io::CsvWriter csv({"curve", "t", "embedded"});
  double bad = 0.0, losses = 0.0;
  for (std::size_t c = 0; c < trajs.size(); ++c) {
    for (const Snapshot& s : trajs[c].snapshots) {
      const bool ok = curves::is_embedded(s.curve);
      bad += ok ? 0.0 : 1.0;
      csv.row({static_cast<double>(c), s.time, ok ? 1.0 : 0.0});
    }
    losses += trajs[c].has_event(EventKind::EmbeddednessLoss) ? 1.0 : 0.0;
  }
  csv.save(rec.artifact("embeddedness.csv"));
  rec.check("non-embedded-snapshots", bad + losses, "<=", 0.0);
}

void radius_law(Recorder& rec, const Trajectory& traj, double r0) {
  const double p = traj.law.exponent;
  const double t_max = rec.tol("radius.t_max");
  io::CsvWriter csv({"t", "radius", "oracle", "relative_error"});
  double worst = 0.0;
  for (const Snapshot& s : traj.snapshots) {
    if (s.time > t_max || s.time >= oracle::power_circle_lifetime(r0, p)) break;
    const double r = mean_radius(s.curve.vertices(), curves::centroid(s.curve.vertices()));
    const double exact = oracle::power_circle_radius(r0, p, s.time);
    const double err = std::abs(r / exact - 1.0);
    worst = std::max(worst, err);
    csv.row({s.time, r, exact, err});
  }
  csv.save(rec.artifact("radius_law.csv"));
  rec.check("radius-error", worst, "<", rec.tol("tolerance.radius"));
  rec.check("radius-window-end", traj.snapshots.back().time, ">=", t_max);
}

flow::AreaLaw area_law(Recorder& rec, const Trajectory& traj) {
  const flow::AreaLaw law = flow::analyze_area_law(traj);
  io::CsvWriter csv({"t", "area", "fit"});
  for (const Snapshot& s : traj.snapshots)
    csv.row({s.time, std::abs(s.metrics.enclosed_area),
             law.slope * (s.time - law.extrapolated_extinction)});
  csv.save(rec.artifact("area_law.csv"));
  rec.check("area-slope", std::abs(law.slope / -kTwoPi - 1.0), "<=", rec.tol("tolerance.slope"));
  rec.check("extinction",
            std::abs(law.extrapolated_extinction / law.extinction_estimate - 1.0), "<=",
            rec.tol("tolerance.extinction"));
  return law;
}

void roundness(Recorder& rec, const Trajectory& traj) {
  const auto series = rescale::roundness_series(traj);
  const double half = 0.5 * std::abs(traj.snapshots.front().metrics.enclosed_area) / kTwoPi;
  io::CsvWriter csv({"t", "circle_residual", "iso_ratio"});
  double increases = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    csv.row({series[i].time, series[i].circle_residual, series[i].isoperimetric_ratio});
    if (i > 0 && series[i - 1].time >= half &&
        !(series[i].circle_residual < series[i - 1].circle_residual))
      increases += 1.0;
  }
  csv.save(rec.artifact("roundness.csv"));
  rec.check("roundness-non-decreasing-steps", increases, "<=", 0.0);
  rec.check("roundness-final", series.back().circle_residual, "<", rec.tol("tolerance.roundness"));
  rec.check("isoperimetric", std::abs(series.back().isoperimetric_ratio - 1.0), "<",
            rec.tol("tolerance.isoperimetric"));
}

void convexification(Recorder& rec, const Trajectory& traj, const flow::AreaLaw& law) {
  const Event* e = traj.find_event(EventKind::Convexification);
  const double extinction = law.extrapolated_extinction;
  nlohmann::json j{{"convexification_time", e ? nlohmann::json(e->time) : nlohmann::json()},
                   {"extinction", extinction},
                   {"lifetime_bound", rec.tol("tolerance.lifetime_bound")}};
  io::write_text(rec.artifact("convexification.json"), j.dump(2) + "\n");
  rec.check("convexification-over-extinction", e ? e->time / extinction : 2.0, "<", 1.0);
  rec.check("lifetime-bound", extinction, "<", rec.tol("tolerance.lifetime_bound"));
}

void eccentricity(Recorder& rec, const Trajectory& traj) {
  io::CsvWriter csv({"t", "semi_major", "semi_minor", "eccentricity", "residual"});
  const flow::EllipseFit first = flow::fit_ellipse(traj.snapshots.front().curve);
  double drift = 0.0, residual = 0.0;
  for (const Snapshot& s : traj.snapshots) {
    const flow::EllipseFit f = flow::fit_ellipse(s.curve);
    drift = std::max(drift, std::abs(f.eccentricity / first.eccentricity - 1.0));
    residual = std::max(residual, f.residual);
    csv.row({s.time, f.semi_major, f.semi_minor, f.eccentricity, f.residual});
  }
  csv.save(rec.artifact("eccentricity.csv"));
  rec.check("eccentricity-drift", drift, "<", rec.tol("tolerance.eccentricity_drift"));
  rec.check("ellipse-residual", residual, "<", rec.tol("tolerance.ellipse_residual"));
}

void length_growth(Recorder& rec, const Trajectory& traj) {
  const auto series = flow::rescaled_length_series(traj);
  io::CsvWriter csv({"t", "normalized_length"});
  double flat = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    csv.row({series[i].time, series[i].normalized_length});
    if (i > 0 && !(series[i].normalized_length > series[i - 1].normalized_length)) flat += 1.0;
  }
  csv.save(rec.artifact("normalized_length.csv"));
  rec.check("non-increasing-steps", flat, "<=", 0.0);
  rec.check("length-growth-ratio", series.back().normalized_length / series.front().normalized_length,
            ">", 1.0);
}

void disjointness(Recorder& rec, const std::vector<Trajectory>& trajs) {
  io::CsvWriter csv({"t", "min_distance"});
  double closest = std::numeric_limits<double>::infinity();
  const std::size_t n = std::min(trajs[0].snapshots.size(), trajs[1].snapshots.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = curves::min_distance(trajs[0].snapshots[i].curve, trajs[1].snapshots[i].curve);
    closest = std::min(closest, d);
    csv.row({trajs[0].snapshots[i].time, d});
  }
  csv.save(rec.artifact("distance.csv"));
  rec.check("min-distance", closest, ">", 0.0);
}

// ---- axisymmetric analyses ------------------------------------------------

void axi_radius_law(Recorder& rec, const AxiTrajectory& traj) {
  const Scenario& s = rec.scenario;
  const bool sphere = s.shape.name == "sphere";
  const oracle::ShrinkerKind kind{sphere ? oracle::Shrinker::Sphere : oracle::Shrinker::Cylinder,
                                  param(s, "radius")};
  const double t_max = rec.tol("radius.t_max");
  io::CsvWriter csv({"t", "radius", "oracle", "relative_error"});
  double worst = 0.0;
  for (const AxiSnapshot& snap : traj.snapshots) {
    if (snap.time > t_max || snap.time >= oracle::shrinker_lifetime(kind)) break;
    const auto pts = snap.profile.samples();
    double r = 0.0;
    if (sphere) {
      double cx = 0.0;
      for (const Vec2& p : pts) cx += p.x;
      r = mean_radius(pts, {cx / static_cast<double>(pts.size()), 0.0});
    } else {
      for (const Vec2& p : pts) r += p.y;
      r /= static_cast<double>(pts.size());
    }
    const double exact = oracle::shrinker_radius(kind, snap.time);
    const double err = std::abs(r / exact - 1.0);
    worst = std::max(worst, err);
    csv.row({snap.time, r, exact, err});
  }
  csv.save(rec.artifact("radius_law.csv"));
  rec.check("radius-error", worst, "<", rec.tol("tolerance.radius"));
  rec.check("radius-window-end", traj.snapshots.back().time, ">=", t_max);
}

void neck(Recorder& rec, const AxiTrajectory& traj) {
  const Event* e = traj.find_event(EventKind::NeckPinch);
  rec.flag("neck-event", e != nullptr);
  if (!e) return;
  const axi::NeckReport report = axi::neck_report(traj);
  io::CsvWriter csv({"t", "min_radius", "ratio", "fitted"});
  for (std::size_t i = 0; i < report.series.size(); ++i) {
    const auto [t, r] = report.series[i];
    const double cyl = std::sqrt(std::max(0.0, 2.0 * (report.pinch_time_fit - t)));
    csv.row({t, r, cyl > 0.0 ? r / cyl : 0.0, i >= report.fit_begin ? 1.0 : 0.0});
  }
  csv.save(rec.artifact("neck.csv"));

  const auto init = traj.snapshots.front().profile.samples();
  const double mid = 0.5 * (init.front().x + init.back().x);
  const double length = param(rec.scenario, "tube_length");
  rec.check("neck-offset-over-tube-length", std::abs(e->location->x - mid) / length, "<=",
            rec.tol("tolerance.neck_location"));
  rec.check("self-similar-ratio-deviation",
            std::max(std::abs(report.ratio_min - 1.0), std::abs(report.ratio_max - 1.0)), "<=",
            rec.tol("tolerance.self_similar"));
  double lost = 0.0;
  if (traj.snapshots.front().metrics.mean_convex)
    for (const AxiSnapshot& s : traj.snapshots) lost += s.metrics.mean_convex ? 0.0 : 1.0;
  rec.check("mean-convexity-losses", lost, "<=", 0.0);
}

void torus(Recorder& rec, const AxiTrajectory& traj) {
  const Event* e = traj.find_event(EventKind::TorusCollapse);
  rec.flag("torus-collapse-event", e != nullptr);
  const AxiSnapshot& last = traj.snapshots.back();
  const auto pts = last.profile.samples();
  const rescale::CircleFit fit = rescale::fit_circle(pts);
  double deviation = 0.0, spacing = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    deviation = std::max(deviation, std::abs(norm(pts[i] - fit.center) - fit.radius));
    spacing += norm(pts[(i + 1) % pts.size()] - pts[i]);
  }
  spacing /= static_cast<double>(pts.size());
  const double core = last.metrics.meridian_centroid.y / param(rec.scenario, "ring_radius");
  nlohmann::json j{{"time", last.time},
                   {"circle_center", {fit.center.x, fit.center.y}},
                   {"circle_radius", fit.radius},
                   {"max_deviation", deviation},
                   {"mean_spacing", spacing},
                   {"core_radius_ratio", core}};
  io::write_text(rec.artifact("torus.json"), j.dump(2) + "\n");
  rec.check("circle-deviation-in-spacings", deviation / spacing, "<=",
            rec.tol("tolerance.circle_spacings"));
  rec.check("core-radius-ratio", core, ">=", rec.tol("tolerance.core_radius"));
}

std::string dial_name(double exponent) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "blowup-lambda=h^%g", exponent);
  return buf;
}

void blowup(Recorder& rec, const AxiTrajectory& traj) {
  const Scenario& s = rec.scenario;
  const auto probes = rescale::neck_probes(
      traj, static_cast<std::size_t>(s.setting("blowup.probes")), s.setting("blowup.offset"));
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < s.blowup_exponents.size(); ++i) {
    const double e = s.blowup_exponents[i];
    const BlowupReport report = rescale::curvature_normalized_frames(traj, probes, e);
    nlohmann::json j = io::to_json(report);
    j["exponent"] = e;
    out.push_back(std::move(j));
    const auto& ok = s.blowup_expected[i];
    const bool match = std::find(ok.begin(), ok.end(), report.limit_classification) != ok.end();
    rec.flag(dial_name(e), match && probes.size() >= 3);
  }
  io::write_text(rec.artifact("blowup.json"), out.dump(2) + "\n");
}

// ---- oracle checks --------------------------------------------------------

void oracle_self_check(Recorder& rec) {
  const auto checks = reference::check_oracles();
  std::string csv = "check,oracle,reference,error\n";
  double worst = 0.0;
  for (const auto& c : checks) {
    csv += "\"" + c.name + "\"," + io::format_number(c.oracle) + "," +
           io::format_number(c.reference) + "," + io::format_number(c.error()) + "\n";
    worst = std::max(worst, c.error());
  }
  io::write_text(rec.artifact("oracle_check.csv"), csv);
  rec.check("oracle-max-error", worst, "<=", rec.tol("tolerance.oracle"));
}

void grim_reaper(Recorder& rec) {
  const auto n = static_cast<std::size_t>(rec.tol("reaper.samples"));
  const double hw = rec.tol("reaper.half_width");
  const double t = rec.tol("reaper.time");
  const oracle::TranslationCheck tc = oracle::grim_reaper_translation(n, hw, t);
  nlohmann::json j{{"samples", n}, {"half_width", hw}, {"time", tc.time},
                   {"steps", tc.steps}, {"max_deviation", tc.max_deviation}};
  io::write_text(rec.artifact("grim_reaper.json"), j.dump(2) + "\n");
  rec.check("grim-reaper-deviation", tc.max_deviation, "<", rec.tol("tolerance.reaper"));
}

bool wants(const Scenario& s, const char* analysis) {
  return std::find(s.analyses.begin(), s.analyses.end(), analysis) != s.analyses.end();
}

void run_curves(Recorder& rec) {
  const Scenario& s = rec.scenario;
  const std::vector<PlaneCurve> initial = build_curves(s);
  const std::vector<Trajectory> trajs = flow::run_coupled(initial, s.law, s.flow);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const fs::path sub = trajs.size() == 1 ? "trajectory" : "trajectory-" + std::to_string(i);
    for (auto& f : io::write_trajectory(rec.dir / sub, trajs[i])) rec.report.artifacts.push_back(f);
  }
  std::vector<PlaneCurve> last;
  for (const auto& t : trajs) last.push_back(t.snapshots.back().curve);
  emit_svg(initial, rec.artifact("initial.svg"));
  emit_svg(last, rec.artifact("final.svg"));

  const Trajectory& main = trajs.back();
  if (wants(s, "embeddedness")) embeddedness(rec, trajs);
  if (wants(s, "radius-law")) radius_law(rec, main, param(s, "radius"));
  std::optional<flow::AreaLaw> law;
  if (wants(s, "area-law")) law = area_law(rec, main);
  if (wants(s, "roundness")) roundness(rec, main);
  if (wants(s, "convexification")) convexification(rec, main, *law);
  if (wants(s, "eccentricity")) eccentricity(rec, main);
  if (wants(s, "length-growth")) length_growth(rec, main);
  if (wants(s, "disjointness")) disjointness(rec, trajs);
}

void run_axi(Recorder& rec) {
  const Scenario& s = rec.scenario;
  const AxiProfile initial = build_axi(s);
  const AxiTrajectory traj = axi::run_axi(initial, s.flow);
  for (auto& f : io::write_trajectory(rec.dir / "trajectory", traj)) rec.report.artifacts.push_back(f);
  emit_svg(initial, rec.artifact("initial.svg"));
  emit_svg(traj.snapshots.back().profile, rec.artifact("final.svg"));

  if (wants(s, "radius-law")) axi_radius_law(rec, traj);
  if (wants(s, "neck")) neck(rec, traj);
  if (wants(s, "torus")) torus(rec, traj);
  if (wants(s, "blowup")) blowup(rec, traj);
}

}  // namespace

const CheckResult* RunReport::find(std::string_view check) const {
  for (const CheckResult& c : checks)
    if (c.name == check) return &c;
  return nullptr;
}

RunReport run_scenario(const Scenario& scenario, const fs::path& out_root) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario = scenario.name;
  report.kind = scenario.kind;
  Recorder rec{scenario, out_root / scenario.name, report};
  try {
    std::error_code ec;
    fs::remove_all(rec.dir, ec);
    fs::create_directories(rec.dir);
    switch (scenario.kind) {
      case ScenarioKind::CurveFlow: run_curves(rec); break;
      case ScenarioKind::AxiFlow:
      case ScenarioKind::RescaleAnalysis: run_axi(rec); break;
      case ScenarioKind::OracleCheck:
        if (wants(scenario, "oracle-self-check")) oracle_self_check(rec);
        if (wants(scenario, "grim-reaper")) grim_reaper(rec);
        break;
    }
  } catch (const Error& e) {
    report.failure_cause = std::string(to_string(e.kind())) + ": " + e.what();
  } catch (const std::exception& e) {
    report.failure_cause = e.what();
  }
  report.passed = report.failure_cause.empty() && !report.checks.empty() &&
                  std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    io::write_text(rec.dir / "report.json", to_json(report).dump(2) + "\n");
  } catch (const Error& e) {
    if (report.failure_cause.empty()) report.failure_cause = e.what();
    report.passed = false;
  }
  return report;
}

std::vector<RunReport> run_batch(const std::vector<Scenario>& scenarios, const fs::path& out_root,
                                 std::size_t workers) {
  std::vector<RunReport> reports(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++)
      reports[i] = run_scenario(scenarios[i], out_root);
  };
  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, scenarios.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return reports;
}

AcceptResult accept(const std::vector<Scenario>& catalog, const fs::path& out_root,
                    std::size_t workers) {
  AcceptResult result;
  result.reports = run_batch(catalog, out_root, workers);
  result.passed = std::all_of(result.reports.begin(), result.reports.end(),
                              [](const RunReport& r) { return r.passed; });
  io::write_text(out_root / "summary.json", summary_json(result.reports).dump(2) + "\n");
  io::write_text(out_root / "summary.txt", summary_table(result.reports));
  return result;
}

fs::path default_output_root() {
  if (const char* env = std::getenv("CURVEFLOW_OUT"); env && *env) return env;
  return "curveflow-out";
}

}  // namespace curveflow::lab
