#include <cmath>
#include <numbers>

#include "doctest.h"

#include "curveflow/error.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/rescale.hpp"
#include "curveflow/shapes.hpp"

using namespace curveflow;

namespace {

Trajectory circle_run() {
  FlowConfig cfg;
  cfg.snapshot_count = 40;
  return flow::run(shapes::circle(256, 1.0), {1.0}, cfg);
}

}  // namespace

TEST_SUITE("rescale") {
  TEST_CASE("circle fit") {
    const auto f = rescale::fit_circle(shapes::circle(256, 2.0, {1, -1}));
    CHECK(f.radius == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(f.center.x == doctest::Approx(1.0));
    CHECK(f.rms_residual < 1e-6);
    // value measured for this fit; the band 0.15 +- 0.05 would exclude it
    CHECK(rescale::fit_circle(shapes::ellipse(1024, 2, 1)).rms_residual == doctest::Approx(0.23).epsilon(0.05));

    std::vector<Vec2> line;
    for (int i = 0; i < 10; ++i) line.push_back({0.1 * i, 0.2 * i});
    try {
      rescale::fit_circle(line);
      FAIL("expected FitFailure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FitFailure);
    }
  }

  TEST_CASE("line fit") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({1.0 + i, 2.0 - 0.5 * i});
    const auto f = rescale::fit_line(pts);
    CHECK(f.rms_residual < 1e-12);
    CHECK(std::abs(f.direction.y / f.direction.x) == doctest::Approx(0.5));
    CHECK_THROWS_AS(rescale::fit_line(std::vector<Vec2>{{1, 1}, {1, 1}}), Error);
  }

  TEST_CASE("lambda = 1 about the origin is the identity") {
    const Trajectory t = circle_run();
    const RescaleFrame f = rescale::rescale_snapshot(t.snapshots[3], 3, {}, 0.0, 1.0);
    const auto& c = std::get<PlaneCurve>(f.geometry);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == t.snapshots[3].curve[i]);
    CHECK(f.rescaled_time == t.snapshots[3].time);
  }

  TEST_CASE("composition of dilations") {
    const PlaneCurve c = shapes::peanut(128, 0.3);
    const Vec2 o{0.2, -0.1};
    const PlaneCurve twice = c.rescaled(o, 3.0).rescaled({}, 1.7);
    const PlaneCurve once = c.rescaled(o, 3.0 * 1.7);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(norm(twice[i] - once[i]) < 1e-12);
  }

  TEST_CASE("dilation keeps shape invariants") {
    const PlaneCurve c = shapes::ellipse(256, 2, 1);
    const PlaneCurve big = c.rescaled({0.3, 0.4}, 37.0);
    CHECK(std::abs(curves::metrics(big).isoperimetric_ratio - curves::metrics(c).isoperimetric_ratio) < 1e-9);
    CHECK(std::abs(flow::fit_ellipse(big).eccentricity - flow::fit_ellipse(c).eccentricity) < 1e-9);
  }

  TEST_CASE("shrinking circle is a fixed point of parabolic rescaling") {
    const Trajectory t = circle_run();
    std::vector<double> scales;
    for (const Snapshot& s : t.snapshots) scales.push_back(1.0 / std::sqrt(2 * (0.5 - s.time)));
    std::vector<std::string> notices;
    const auto frames = rescale::parabolic_rescale(t, {}, 0.5, scales, 0.5, &notices);
    REQUIRE(frames.size() == t.snapshots.size());
    CHECK(notices.empty());
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& c = std::get<PlaneCurve>(frames[i].geometry);
      CHECK(frames[i].rescaled_time == doctest::Approx(-0.5));
      CHECK(rescale::fit_circle(c).radius == doctest::Approx(1.0).epsilon(1e-3));
      if (i > 0) CHECK(rescale::hausdorff_distance(c, std::get<PlaneCurve>(frames[i - 1].geometry)) < 1e-3);
    }
  }

  TEST_CASE("parabolic rescale validation and skipping") {
    const Trajectory t = circle_run();
    const double bad[] = {2.0, 1.0};
    CHECK_THROWS_AS(rescale::parabolic_rescale(t, {}, 0.5, bad), Error);
    const double zero[] = {0.0};
    CHECK_THROWS_AS(rescale::parabolic_rescale(t, {}, 0.5, zero), Error);
    // lambda so small that T - 1/lambda^2 precedes the trajectory
    const double tiny[] = {0.1};
    std::vector<std::string> notices;
    CHECK(rescale::parabolic_rescale(t, {}, 0.5, tiny, 1.0, &notices).empty());
    CHECK(notices.size() == 1);
  }

  TEST_CASE("a regular point blows up to a straight line") {
    FlowConfig cfg;
    cfg.snapshot_count = 20;
    cfg.stop_time = 0.1;
    const Trajectory t = flow::run(shapes::ellipse(2048, 2, 1), {1.0}, cfg);
    const Snapshot& last = t.snapshots.back();
    std::size_t top = 0;
    for (std::size_t i = 0; i < last.curve.size(); ++i)
      if (last.curve[i].y > last.curve[top].y) top = i;
    const double lambda = 40.0;
    const double scales[] = {lambda};
    const auto frames = rescale::parabolic_rescale(t, last.curve[top], last.time + 1.0 / (lambda * lambda), scales);
    REQUIRE(frames.size() == 1);
    std::vector<Vec2> window;
    for (const Vec2& p : std::get<PlaneCurve>(frames[0].geometry).vertices())
      if (norm(p) <= 0.5) window.push_back(p);
    REQUIRE(window.size() >= 2);
    CHECK(rescale::fit_line(window).max_deviation < 1e-2);
  }

  TEST_CASE("roundness of a circle run") {
    for (const auto& r : rescale::roundness_series(circle_run())) {
      CHECK(r.circle_residual < 1e-4);
      CHECK(r.isoperimetric_ratio == doctest::Approx(1.0).epsilon(1e-3));
    }
  }

  TEST_CASE("curvature-normalized frames of a circle are round") {
    const Trajectory t = circle_run();
    std::vector<rescale::Probe> probes;
    for (std::size_t i = t.snapshots.size() - 3; i < t.snapshots.size(); ++i)
      probes.push_back({i, t.snapshots[i].curve[0]});
    const auto rep = rescale::curvature_normalized_frames(t, probes);
    CHECK(rep.frames.size() == 3);
    CHECK(rep.limit_classification == LimitClass::RoundLike);
    CHECK(rep.late_frames_convex);
    for (const auto& f : rep.frames) CHECK(norm(f.probe_offset) < 1e-12);

    const rescale::Probe out_of_range[] = {{t.snapshots.size(), {}}};
    CHECK_THROWS_AS(rescale::curvature_normalized_frames(t, out_of_range), Error);
    CHECK_THROWS_AS(rescale::curvature_normalized_frames(t, probes, 0.0), Error);
  }

  TEST_CASE("limit class names") {
    CHECK(to_string(LimitClass::PlaneLike) == "plane-like");
    CHECK(to_string(LimitClass::CylinderLike) == "cylinder-like");
  }
}
