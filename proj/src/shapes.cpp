#include "curveflow/shapes.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "curveflow/error.hpp"

namespace curveflow::shapes {

namespace {

constexpr double kPi = std::numbers::pi;
// Dense pre-sampling before equal-arclength resampling; chord sag at this
// density is far below any test tolerance.
constexpr std::size_t kDense = 1 << 17;

PlaneCurve from_dense(std::vector<Vec2> dense, std::size_t n) {
  PlaneCurve c(std::move(dense));
  return curves::resample_uniform(c.as_counterclockwise(), n, Interpolation::Linear);
}

}  // namespace

PlaneCurve circle(std::size_t n, double radius, Vec2 center) {
  if (radius <= 0.0) throw Error(ErrorKind::InvalidInput, "circle radius must be positive");
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    v[i] = center + Vec2{radius * std::cos(t), radius * std::sin(t)};
  }
  return PlaneCurve(std::move(v));
}

PlaneCurve ellipse(std::size_t n, double a, double b, Vec2 center) {
  if (a <= 0.0 || b <= 0.0) throw Error(ErrorKind::InvalidInput, "ellipse axes must be positive");
  std::vector<Vec2> dense(kDense);
  for (std::size_t i = 0; i < kDense; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(kDense);
    dense[i] = center + Vec2{a * std::cos(t), b * std::sin(t)};
  }
  return from_dense(std::move(dense), n);
}

PlaneCurve square(std::size_t n, double side) {
  if (side <= 0.0) throw Error(ErrorKind::InvalidInput, "square side must be positive");
  // Two points per side so the input itself meets the 8-vertex minimum.
  std::vector<Vec2> v = {{0, 0},       {side / 2, 0},    {side, 0},    {side, side / 2},
                         {side, side}, {side / 2, side}, {0, side},    {0, side / 2}};
  return curves::resample_uniform(PlaneCurve(std::move(v)), n, Interpolation::Linear);
}

PlaneCurve figure_eight(std::size_t n) {
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    v[i] = {std::sin(t), std::sin(t) * std::cos(t)};
  }
  return PlaneCurve(std::move(v));
}

PlaneCurve peanut(std::size_t n, double amplitude) {
  if (amplitude <= 0.0 || amplitude >= 1.0)
    throw Error(ErrorKind::InvalidInput, "peanut amplitude must lie in (0, 1)");
  std::vector<Vec2> dense(kDense);
  for (std::size_t i = 0; i < kDense; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(kDense);
    const double r = 1.0 + amplitude * std::cos(2.0 * t);
    dense[i] = {r * std::cos(t), r * std::sin(t)};
  }
  return from_dense(std::move(dense), n);
}

double SpiralStrip::strip_width() const {
  return (outer_radius - inner_radius) / (2.0 * turns + 1.0);
}

PlaneCurve spiral(std::size_t n, const SpiralStrip& spec) {
  if (spec.inner_radius <= 0.0 || spec.outer_radius <= spec.inner_radius || spec.turns <= 0.0)
    throw Error(ErrorKind::InvalidInput, "spiral needs 0 < inner < outer and positive turns");
  const double w = spec.strip_width();
  const double sweep = 2.0 * kPi * spec.turns;
  const double start = spec.outer_radius - 0.5 * w;
  const double drop = spec.outer_radius - spec.inner_radius - w;

  // Centerline rho(theta) = start - drop * theta / sweep, its tangent and left normal.
  auto center = [&](double th) {
    const double r = start - drop * th / sweep;
    return Vec2{r * std::cos(th), r * std::sin(th)};
  };
  auto tangent = [&](double th) {
    const double r = start - drop * th / sweep;
    const double dr = -drop / sweep;
    return normalized(Vec2{dr * std::cos(th) - r * std::sin(th), dr * std::sin(th) + r * std::cos(th)});
  };

  const std::size_t side = kDense / 2;
  const std::size_t cap = kDense / 64;
  std::vector<Vec2> dense;
  dense.reserve(2 * side + 2 * cap);
  // Right-hand side going in, cap, left-hand side coming out, cap.
  for (std::size_t i = 0; i < side; ++i) {
    const double th = sweep * static_cast<double>(i) / static_cast<double>(side);
    dense.push_back(center(th) - 0.5 * w * perp(tangent(th)));
  }
  for (std::size_t i = 0; i < cap; ++i) {
    const double phi = kPi * static_cast<double>(i) / static_cast<double>(cap);
    const Vec2 t = tangent(sweep);
    dense.push_back(center(sweep) + 0.5 * w * (-std::cos(phi) * perp(t) + std::sin(phi) * t));
  }
  for (std::size_t i = 0; i < side; ++i) {
    const double th = sweep * (1.0 - static_cast<double>(i) / static_cast<double>(side));
    dense.push_back(center(th) + 0.5 * w * perp(tangent(th)));
  }
  for (std::size_t i = 0; i < cap; ++i) {
    const double phi = kPi * static_cast<double>(i) / static_cast<double>(cap);
    const Vec2 t = tangent(0.0);
    dense.push_back(center(0.0) + 0.5 * w * (std::cos(phi) * perp(t) - std::sin(phi) * t));
  }
  return from_dense(std::move(dense), n);
}

}  // namespace curveflow::shapes
