#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "curveflow/curve.hpp"
#include "curveflow/error.hpp"
#include "curveflow/kernels.hpp"
#include "curveflow/shapes.hpp"

using namespace curveflow;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

std::size_t nearest(const PlaneCurve& c, Vec2 p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (norm(c[i] - p) < norm(c[best] - p)) best = i;
  return best;
}

// Star-shaped polygon with random radii: simple, usually non-convex.
std::vector<Vec2> random_star(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> r(0.5, 1.5);
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
    const double rad = r(rng);
    pts[i] = {rad * std::cos(t), rad * std::sin(t)};
  }
  return pts;
}

}  // namespace

TEST_SUITE("curves") {
  TEST_CASE("regular 512-gon metrics") {
    const auto m = curves::metrics(shapes::circle(512, 1.0));
    CHECK(std::abs(m.length / (2 * pi) - 1) < 1e-4);
    CHECK(std::abs(m.enclosed_area / pi - 1) < 1e-4);
    CHECK(m.isoperimetric_ratio == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(m.convex);
  }

  TEST_CASE("unit square metrics") {
    const auto m = curves::metrics(shapes::square(64, 1.0));
    CHECK(m.length == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.enclosed_area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.isoperimetric_ratio == doctest::Approx(4.0 / pi).epsilon(1e-12));
  }

  TEST_CASE("total turning of counterclockwise embedded curves") {
    for (const PlaneCurve& c : {shapes::circle(256, 3.0), shapes::ellipse(512, 2, 1),
                                shapes::peanut(512, 0.4), shapes::spiral(2048)}) {
      REQUIRE(c.counterclockwise());
      CHECK(std::abs(curves::metrics(c).total_turning - 2 * pi) < 1e-3);
    }
  }

  TEST_CASE("curvature of circle, ellipse and flat edge") {
    const auto circle = curves::curvature_profile(shapes::circle(256, 2.0));
    for (const auto& s : circle) CHECK(std::abs(s.curvature / 0.5 - 1) < 1e-2);
    // inward normal points at the center
    CHECK(circle[0].inward_normal.x == doctest::Approx(-1.0));

    const PlaneCurve e = shapes::ellipse(4096, 2, 1);
    const auto k = curves::curvature_profile(e);
    // ab / (a^2 sin^2 t + b^2 cos^2 t)^(3/2) at t = 0 and pi/2
    CHECK(k[nearest(e, {2, 0})].curvature == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(k[nearest(e, {-2, 0})].curvature == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(k[nearest(e, {0, 1})].curvature == doctest::Approx(0.25).epsilon(1e-3));

    const PlaneCurve sq = shapes::square(64, 1.0);
    CHECK(std::abs(curves::curvature_profile(sq)[nearest(sq, {0.5, 0})].curvature) < 1e-9);
  }

  TEST_CASE("curvature sign flips with orientation") {
    const PlaneCurve c = shapes::circle(64, 1.0).reversed();
    CHECK_FALSE(c.counterclockwise());
    for (const auto& s : curves::curvature_profile(c)) CHECK(s.curvature > 0.0);
  }

  TEST_CASE("circle polygon curvature constant within 1%") {
    for (std::size_t n : {256, 1000, 4096}) {
      const auto k = curves::curvature_profile(shapes::circle(n, 0.7));
      for (const auto& s : k) CHECK(std::abs(s.curvature * 0.7 - 1) < 1e-2);
    }
  }

  TEST_CASE("shoelace area converges at second order") {
    double err[3];
    const std::size_t ns[3] = {64, 256, 1024};
    for (int i = 0; i < 3; ++i) err[i] = pi - curves::metrics(shapes::circle(ns[i], 1.0)).enclosed_area;
    for (int i = 0; i < 2; ++i) CHECK(err[i] / err[i + 1] == doctest::Approx(16.0).epsilon(0.01));
  }

  TEST_CASE("isoperimetric ratio is at least one") {
    for (const PlaneCurve& c : {shapes::circle(64, 1), shapes::ellipse(64, 3, 1), shapes::square(64, 2),
                                shapes::peanut(128, 0.5), shapes::spiral(1024)})
      CHECK(curves::metrics(c).isoperimetric_ratio >= 1.0 - 1e-9);
  }

  TEST_CASE("resample_uniform") {
    const PlaneCurve c = shapes::circle(512, 1.0);
    for (auto mode : {Interpolation::Linear, Interpolation::CubicSpline}) {
      const PlaneCurve r = curves::resample_uniform(c, 512, mode);
      for (std::size_t i = 0; i < 512; ++i) CHECK(norm(r[i] - c[i]) < 1e-6);
    }

    const PlaneCurve sq = curves::resample_uniform(shapes::square(32, 1.0), 64);
    REQUIRE(sq.size() == 64);
    CHECK(std::abs(curves::metrics(sq).length / 4 - 1) < 1e-3);
    for (std::size_t i = 0; i < 64; ++i) CHECK(norm(sq[(i + 1) % 64] - sq[i]) == doctest::Approx(4.0 / 64));

    const PlaneCurve cw = shapes::ellipse(100, 2, 1).reversed();
    const PlaneCurve eight = curves::resample_uniform(cw, 8);
    CHECK(eight.size() == 8);
    CHECK_FALSE(eight.counterclockwise());

    CHECK(kind_of([&] { curves::resample_uniform(c, 7); }) == ErrorKind::InvalidInput);
  }

  TEST_CASE("resample_uniform is idempotent on uniform curves") {
    for (const PlaneCurve& uniform : {shapes::circle(200, 1.3), curves::resample_uniform(shapes::square(32, 1), 200)}) {
      const PlaneCurve again = curves::resample_uniform(uniform, uniform.size());
      for (std::size_t i = 0; i < uniform.size(); ++i) CHECK(norm(again[i] - uniform[i]) < 1e-9);
    }
  }

  TEST_CASE("embeddedness") {
    CHECK(curves::is_embedded(shapes::circle(64, 1)));
    // even counts put two vertices on the crossing point itself
    CHECK_FALSE(curves::is_embedded(shapes::figure_eight(128)));
    CHECK_FALSE(curves::is_embedded(shapes::figure_eight(129)));
    CHECK(curves::is_embedded(shapes::spiral(1024)));
  }

  TEST_CASE("min_distance") {
    const PlaneCurve a = shapes::circle(4096, 1), b = shapes::circle(4096, 2);
    CHECK(std::abs(curves::min_distance(a, b) - 1.0) < 1e-6);
    CHECK(curves::min_distance(a, a) == 0.0);
    const PlaneCurve shifted = shapes::circle(1024, 1, {3, 0});
    CHECK(std::abs(curves::min_distance(shapes::circle(1024, 1), shifted) - 1.0) < 1e-3);
  }

  TEST_CASE("invalid curves") {
    std::vector<Vec2> seven;
    for (int i = 0; i < 7; ++i) seven.push_back({std::cos(i), std::sin(i)});
    CHECK(kind_of([&] { PlaneCurve{seven}; }) == ErrorKind::InvalidInput);

    const PlaneCurve c = shapes::circle(16, 1);
    auto pts = std::vector<Vec2>(c.vertices().begin(), c.vertices().end());
    pts[3] = pts[2];
    CHECK(kind_of([&] { PlaneCurve{pts}; }) == ErrorKind::InvalidInput);

    std::vector<Vec2> tiny;
    for (const Vec2& p : c.vertices()) tiny.push_back(1e-11 * p);
    CHECK(kind_of([&] { PlaneCurve{tiny}; }) == ErrorKind::Extinct);
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("serial and OpenMP curvature agree bitwise") {
    std::mt19937 rng(7);
    for (std::size_t n : {8, 100, 5000}) {
      const auto pts = random_star(rng, n);
      std::vector<double> k1(n), k2(n);
      std::vector<Vec2> n1(n), n2(n);
      kernels::curvature_serial(pts, k1, n1);
      kernels::curvature_omp(pts, k2, n2);
      CHECK(k1 == k2);
      CHECK(n1 == n2);
    }
  }

  TEST_CASE("displacement kernels agree") {
    std::mt19937 rng(11);
    auto a = random_star(rng, 1000), b = a;
    const auto vel = random_star(rng, 1000);
    kernels::displace_serial(a, vel, 0.01);
    kernels::displace_omp(b, vel, 0.01);
    CHECK(a == b);
  }

  TEST_CASE("crossing detectors agree") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 8 + static_cast<std::size_t>(trial) * 13;
      std::vector<Vec2> pts;
      if (trial % 2 == 0) {
        pts = random_star(rng, n);  // simple
      } else {
        for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});  // almost surely crossing
      }
      const bool s = kernels::has_crossing_serial(pts);
      CHECK(s == kernels::has_crossing_omp(pts));
      CHECK(s == kernels::has_crossing_grid(pts));
      if (trial % 2 == 0) CHECK_FALSE(s);
    }
  }

  TEST_CASE("min distance kernels agree") {
    std::mt19937 rng(5);
    auto a = random_star(rng, 300);
    auto b = random_star(rng, 500);
    for (Vec2& p : b) p = 3.0 * p + Vec2{0.2, 0};
    CHECK(kernels::min_distance_serial(a, b) == kernels::min_distance_omp(a, b));
  }

  TEST_CASE("segment primitives") {
    CHECK(kernels::segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK_FALSE(kernels::segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    CHECK(kernels::segment_distance({0, 0}, {1, 0}, {0.5, 2}, {3, 2}) == doctest::Approx(2.0));
    // Menger curvature of three points on a unit circle
    const auto lc = kernels::menger({1, 0}, {0, 1}, {-1, 0});
    CHECK(std::abs(lc.k_left) == doctest::Approx(1.0));
  }
}
