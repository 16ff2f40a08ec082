#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curveflow/vec2.hpp"

namespace curveflow {

// Closed oriented polygon. The vertex list is cyclic; the first vertex is not
// repeated at the end. Construction validates the invariants and throws
// Error{InvalidInput} (or Error{Extinct} when the whole curve has collapsed
// below a 1e-9 bounding-box diameter).
class PlaneCurve {
 public:
  static constexpr std::size_t kMinVertices = 8;
  static constexpr double kExtinctDiameter = 1e-9;

  explicit PlaneCurve(std::vector<Vec2> vertices);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec2& operator[](std::size_t i) const { return vertices_[i]; }

  bool counterclockwise() const { return ccw_; }
  double diameter() const { return diameter_; }

  PlaneCurve reversed() const;
  // Same curve listed counterclockwise.
  PlaneCurve as_counterclockwise() const { return ccw_ ? *this : reversed(); }
  // (p - center) * scale for every vertex.
  PlaneCurve rescaled(Vec2 center, double scale) const;

 private:
  std::vector<Vec2> vertices_;
  bool ccw_ = true;
  double diameter_ = 0.0;
};

struct CurveMetrics {
  double length = 0.0;
  double enclosed_area = 0.0;  // signed, positive for counterclockwise
  double isoperimetric_ratio = 1.0;
  double min_curvature = 0.0;
  double max_curvature = 0.0;
  double total_turning = 0.0;
  bool convex = false;
};

// Signed curvature (positive where the curve bends toward the enclosed region)
// and the inward unit normal at one vertex.
struct CurvatureSample {
  double curvature = 0.0;
  Vec2 inward_normal{};

  Vec2 curvature_vector() const { return curvature * inward_normal; }
};

enum class Interpolation {
  Linear,       // along the polygon edges
  CubicSpline,  // periodic cubic spline through the vertices, chord-length knots
};

namespace curves {

double polygon_length(std::span<const Vec2> pts, bool closed = true);
double signed_area(std::span<const Vec2> pts);
Vec2 centroid(std::span<const Vec2> pts);
double bounding_diameter(std::span<const Vec2> pts);

CurveMetrics metrics(const PlaneCurve& curve);
std::vector<CurvatureSample> curvature_profile(const PlaneCurve& curve);

// n vertices at equal arclength spacing, starting at vertex 0. Orientation is
// preserved. Throws Error{InvalidInput} for n < 8.
PlaneCurve resample_uniform(const PlaneCurve& curve, std::size_t n,
                            Interpolation mode = Interpolation::Linear);

// Open polyline with fixed endpoints, equal spacing along a natural cubic spline.
std::vector<Vec2> resample_open(std::span<const Vec2> pts, std::size_t n);

bool is_embedded(const PlaneCurve& curve);
double min_distance(const PlaneCurve& a, const PlaneCurve& b);

}  // namespace curves
}  // namespace curveflow
