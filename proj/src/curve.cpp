#include "curveflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curveflow/error.hpp"
#include "curveflow/kernels.hpp"
#include "spline.hpp"

namespace curveflow {

PlaneCurve::PlaneCurve(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < kMinVertices)
    throw Error(ErrorKind::InvalidInput,
                "curve needs at least 8 vertices, got " + std::to_string(n));
  for (const Vec2& p : vertices_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorKind::InvalidInput, "curve has a non-finite vertex");
  diameter_ = curves::bounding_diameter(vertices_);
  if (diameter_ < kExtinctDiameter)
    throw Error(ErrorKind::Extinct, "curve has collapsed below the extinction diameter");
  const double min_sep = 1e-12 * diameter_;
  for (std::size_t i = 0; i < n; ++i) {
    if (norm(vertices_[(i + 1) % n] - vertices_[i]) <= min_sep)
      throw Error(ErrorKind::InvalidInput,
                  "coincident consecutive vertices at index " + std::to_string(i));
  }
  ccw_ = curves::signed_area(vertices_) >= 0.0;
}

PlaneCurve PlaneCurve::reversed() const {
  std::vector<Vec2> v(vertices_.rbegin(), vertices_.rend());
  // Keep vertex 0 first so resampling phases line up.
  std::rotate(v.begin(), v.end() - 1, v.end());
  return PlaneCurve(std::move(v));
}

PlaneCurve PlaneCurve::rescaled(Vec2 center, double scale) const {
  std::vector<Vec2> v;
  v.reserve(vertices_.size());
  for (const Vec2& p : vertices_) v.push_back(scale * (p - center));
  return PlaneCurve(std::move(v));
}

namespace curves {

double polygon_length(std::span<const Vec2> pts, bool closed) {
  const std::size_t n = pts.size();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) total += norm(pts[i + 1] - pts[i]);
  if (closed && n > 1) total += norm(pts[0] - pts[n - 1]);
  return total;
}

double signed_area(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(pts[i], pts[(i + 1) % n]);
  return 0.5 * twice;
}

Vec2 centroid(std::span<const Vec2> pts) {
  // Area centroid; falls back to the vertex mean for zero-area input.
  const std::size_t n = pts.size();
  double a2 = 0.0;
  Vec2 c{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = pts[i];
    const Vec2 q = pts[(i + 1) % n];
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  if (std::abs(a2) > 1e-300) return c / (3.0 * a2);
  Vec2 mean{};
  for (const Vec2& p : pts) mean += p;
  return mean / static_cast<double>(n);
}

double bounding_diameter(std::span<const Vec2> pts) {
  if (pts.empty()) return 0.0;
  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  for (const Vec2& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

std::vector<CurvatureSample> curvature_profile(const PlaneCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> k(n);
  std::vector<Vec2> normal(n);
  kernels::curvature_omp(curve.vertices(), k, normal);
  const double sign = curve.counterclockwise() ? 1.0 : -1.0;
  std::vector<CurvatureSample> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {sign * k[i], sign * normal[i]};
  return out;
}

CurveMetrics metrics(const PlaneCurve& curve) {
  const auto pts = curve.vertices();
  const std::size_t n = pts.size();
  CurveMetrics m;
  m.length = polygon_length(pts);
  m.enclosed_area = signed_area(pts);
  const double area = std::abs(m.enclosed_area);
  m.isoperimetric_ratio = area > 0.0 ? m.length * m.length / (4.0 * std::numbers::pi * area)
                                     : std::numeric_limits<double>::infinity();

  const auto profile = curvature_profile(curve);
  m.min_curvature = profile[0].curvature;
  m.max_curvature = profile[0].curvature;
  for (const auto& s : profile) {
    m.min_curvature = std::min(m.min_curvature, s.curvature);
    m.max_curvature = std::max(m.max_curvature, s.curvature);
  }

  const double sign = curve.counterclockwise() ? 1.0 : -1.0;
  double turning = 0.0;
  double min_turn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i] - pts[(i + n - 1) % n];
    const Vec2 b = pts[(i + 1) % n] - pts[i];
    const double angle = sign * std::atan2(cross(a, b), dot(a, b));
    turning += angle;
    min_turn = std::min(min_turn, angle);
  }
  m.total_turning = turning;
  m.convex = min_turn >= -1e-9 && std::abs(turning - 2.0 * std::numbers::pi) < 1e-6;
  return m;
}

namespace {

std::vector<double> chord_knots(std::span<const Vec2> pts, bool closed, double& total) {
  const std::size_t n = pts.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + norm(pts[i] - pts[i - 1]);
  total = s[n - 1] + (closed ? norm(pts[0] - pts[n - 1]) : 0.0);
  return s;
}

}  // namespace

PlaneCurve resample_uniform(const PlaneCurve& curve, std::size_t n, Interpolation mode) {
  if (n < PlaneCurve::kMinVertices)
    throw Error(ErrorKind::InvalidInput,
                "resample count must be at least 8, got " + std::to_string(n));
  const auto pts = curve.vertices();
  const std::size_t m = pts.size();
  double total = 0.0;
  const auto knots = chord_knots(pts, true, total);
  const double spacing = total / static_cast<double>(n);

  std::vector<Vec2> out;
  out.reserve(n);
  if (mode == Interpolation::Linear) {
    std::size_t seg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = spacing * static_cast<double>(j);
      while (seg + 1 < m && knots[seg + 1] <= s) ++seg;
      const Vec2 a = pts[seg];
      const Vec2 b = pts[(seg + 1) % m];
      const double s1 = seg + 1 < m ? knots[seg + 1] : total;
      const double t = (s - knots[seg]) / (s1 - knots[seg]);
      out.push_back(a + t * (b - a));
    }
  } else {
    const detail::ClosedSplineCurve spline(pts);
    for (std::size_t j = 0; j < n; ++j) out.push_back(spline(spacing * static_cast<double>(j)));
  }
  return PlaneCurve(std::move(out));
}

std::vector<Vec2> resample_open(std::span<const Vec2> pts, std::size_t n) {
  if (n < 2 || pts.size() < 2)
    throw Error(ErrorKind::InvalidInput, "open resample needs at least two points");
  double total = 0.0;
  const auto knots = chord_knots(pts, false, total);
  std::vector<double> xs(pts.size()), ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i].x;
    ys[i] = pts[i].y;
  }
  const auto sx = detail::CubicSpline::natural(knots, std::move(xs));
  const auto sy = detail::CubicSpline::natural(knots, std::move(ys));
  std::vector<Vec2> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = total * static_cast<double>(j) / static_cast<double>(n - 1);
    out.push_back({sx(s), sy(s)});
  }
  out.front() = pts.front();
  out.back() = pts.back();
  return out;
}

bool is_embedded(const PlaneCurve& curve) {
  return !kernels::has_crossing_grid(curve.vertices());
}

double min_distance(const PlaneCurve& a, const PlaneCurve& b) {
  return kernels::min_distance_omp(a.vertices(), b.vertices());
}

}  // namespace curves
}  // namespace curveflow
