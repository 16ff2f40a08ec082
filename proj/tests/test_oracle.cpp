#include <cmath>
#include <numbers>

#include "doctest.h"

#include "curveflow/error.hpp"
#include "curveflow/oracle.hpp"
#include "reference.hpp"

using namespace curveflow;
using oracle::Shrinker;

TEST_SUITE("oracle") {
  TEST_CASE("shrinker radii") {
    CHECK(oracle::shrinker_radius({Shrinker::Circle, 1.0}, 0.375) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(oracle::shrinker_radius({Shrinker::Sphere, 1.0}, 0.1875) == doctest::Approx(0.5).epsilon(1e-15));
    for (Shrinker k : {Shrinker::Circle, Shrinker::Sphere, Shrinker::Cylinder})
      CHECK(oracle::shrinker_radius({k, 2.5}, 0.0) == 2.5);
    CHECK(oracle::shrinker_lifetime({Shrinker::Cylinder, 2.0}) == 2.0);
    CHECK(oracle::shrinker_lifetime({Shrinker::Sphere, 2.0}) == 1.0);
  }

  TEST_CASE("squared radius is affine in time") {
    for (auto [k, slope] : {std::pair{Shrinker::Circle, -2.0}, {Shrinker::Cylinder, -2.0}, {Shrinker::Sphere, -4.0}}) {
      const auto r2 = [&](double t) { return std::pow(oracle::shrinker_radius({k, 1.3}, t), 2); };
      CHECK((r2(0.2) - r2(0.1)) / 0.1 == doctest::Approx(slope));
      CHECK((r2(0.3) - r2(0.0)) / 0.3 == doctest::Approx(slope));
    }
  }

  TEST_CASE("shrinker errors") {
    auto kind = [](auto&& f) {
      try {
        f();
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::Io;
    };
    CHECK(kind([] { oracle::shrinker_radius({Shrinker::Circle, 1.0}, 0.5); }) == ErrorKind::Extinct);
    CHECK(kind([] { oracle::shrinker_radius({Shrinker::Sphere, 1.0}, 0.3); }) == ErrorKind::Extinct);
    CHECK(kind([] { oracle::shrinker_radius({Shrinker::Circle, 1.0}, -0.1); }) == ErrorKind::InvalidInput);
    CHECK(kind([] { oracle::shrinker_radius({Shrinker::Circle, 0.0}, 0.1); }) == ErrorKind::InvalidInput);
    CHECK(kind([] { oracle::power_circle_radius(1.0, 1.0 / 3, 1.0); }) == ErrorKind::Extinct);
  }

  TEST_CASE("power-law circle") {
    CHECK(oracle::power_circle_radius(1, 1, 0.375) == doctest::Approx(0.5));
    // closed form gives 0.6^0.75 = 0.681732
    CHECK(oracle::power_circle_radius(1, 1.0 / 3, 0.3) == doctest::Approx(0.681732).epsilon(1e-6));
    for (double p : {0.2, 1.0 / 3, 1.0, 3.0}) CHECK(oracle::power_circle_radius(1, p, 0) == 1.0);
    CHECK(oracle::power_circle_lifetime(1, 1.0 / 3) == doctest::Approx(0.75));
  }

  TEST_CASE("power-law circle against an independent RK4") {
    for (double p : {0.2, 1.0 / 3, 0.5, 2.0}) {
      const auto y = reference::rk4<1>(
          [p](double, const std::array<double, 1>& r) { return std::array<double, 1>{-std::pow(r[0], -p)}; },
          {1.0}, 0.0, 0.2);
      CHECK(std::abs(y[0] - oracle::power_circle_radius(1, p, 0.2)) < 1e-6);
    }
  }

  TEST_CASE("grim reaper") {
    CHECK(oracle::grim_reaper_curvature(0.0) == doctest::Approx(1.0));
    CHECK(oracle::grim_reaper_curvature(1.0) == doctest::Approx(0.5403).epsilon(1e-4));
    CHECK(oracle::grim_reaper_height(0.0) == 0.0);

    const auto pts = oracle::grim_reaper(64, 1.2);
    REQUIRE(pts.size() == 64);
    CHECK(pts.front().x == doctest::Approx(-1.2));
    CHECK(pts.back().x == doctest::Approx(1.2));
    double lo = 1e9, hi = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(pts[i].y == doctest::Approx(-std::log(std::cos(pts[i].x))).epsilon(1e-12));
      if (i > 0) {
        lo = std::min(lo, norm(pts[i] - pts[i - 1]));
        hi = std::max(hi, norm(pts[i] - pts[i - 1]));
      }
    }
    CHECK(hi / lo < 1.01);  // equal arclength up to chord effects

    CHECK_THROWS_AS(oracle::grim_reaper(64, std::numbers::pi / 2), Error);
    CHECK_THROWS_AS(oracle::grim_reaper(15, 1.0), Error);
  }

  TEST_CASE("truncated grim reaper translates with unit speed") {
    const auto tc = oracle::grim_reaper_translation(64, 1.2, 0.1);
    CHECK(tc.time == doctest::Approx(0.1));
    CHECK(tc.max_deviation < 5e-3);
  }

  TEST_CASE("bowl soliton") {
    const auto b = oracle::bowl_soliton(2.0, 201);
    REQUIRE(b.rho.size() == 201);
    CHECK(b.rho.front() == 0.0);
    CHECK(b.height.front() == 0.0);
    for (std::size_t i = 1; i < b.rho.size(); ++i) {
      CHECK(b.second_derivative[i] > 0.0);
      if (b.rho[i] <= 0.2) CHECK(std::abs(b.height[i] / (b.rho[i] * b.rho[i] / 4) - 1) < 0.01);
      // the translator equation itself
      const double u1 = b.slope[i], u2 = b.second_derivative[i];
      CHECK(u2 / (1 + u1 * u1) + u1 / b.rho[i] == doctest::Approx(1.0).epsilon(1e-8));
    }
    const auto point = oracle::bowl_soliton(0.0, 64);
    CHECK(point.rho.size() == 1);
    CHECK(point.height.at(0) == 0.0);
    CHECK_THROWS_AS(oracle::bowl_soliton(-1.0, 64), Error);
    CHECK_THROWS_AS(oracle::bowl_soliton(1.0, 31), Error);
  }

  TEST_CASE("every oracle matches its reference integration") {
    const auto checks = reference::check_oracles();
    CHECK(checks.size() >= 10);
    for (const auto& c : checks) {
      INFO(c.name);
      CHECK(c.error() <= 1e-6);
    }
    CHECK(reference::all_passed(checks));
  }
}
