#pragma once

// Per-vertex and pairwise kernels. Each has a serial reference version and an
// OpenMP version; the library calls the *_omp variants, tests check that both
// agree, and bench/ compares their throughput.

#include <cstddef>
#include <span>

#include "curveflow/vec2.hpp"

namespace curveflow::kernels {

// Signed Menger curvature of the circle through (prev, cur, next), positive for
// a left turn, together with the left unit normal at cur.
struct LocalCurvature {
  double k_left = 0.0;
  Vec2 normal_left{};
};

inline LocalCurvature menger(Vec2 prev, Vec2 cur, Vec2 next) {
  const Vec2 a = cur - prev;
  const Vec2 b = next - cur;
  const Vec2 c = next - prev;
  const double la = norm(a);
  const double lb = norm(b);
  const double lc = norm(c);
  LocalCurvature out;
  const Vec2 bisector = a / la + b / lb;
  const double bn = norm(bisector);
  // Antiparallel edges (a cusp) leave the bisector undefined; fall back to the edge.
  out.normal_left = bn > 1e-300 ? perp(bisector / bn) : perp(a / la);
  out.k_left = lc > 0.0 ? 2.0 * cross(a, b) / (la * lb * lc) : 0.0;
  return out;
}

// Closed polygon: cyclic neighbours. k and normal must have pts.size() entries.
void curvature_serial(std::span<const Vec2> pts, std::span<double> k, std::span<Vec2> normal);
void curvature_omp(std::span<const Vec2> pts, std::span<double> k, std::span<Vec2> normal);

// pts[i] += dt * vel[i]
void displace_serial(std::span<Vec2> pts, std::span<const Vec2> vel, double dt);
void displace_omp(std::span<Vec2> pts, std::span<const Vec2> vel, double dt);

// Exact segment test; a 1e-12 relative guard treats near-zero orientations as
// collinear, and collinear overlap or endpoint contact counts as intersection.
bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);
double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

// True if two non-adjacent edges of the closed polygon intersect.
bool has_crossing_serial(std::span<const Vec2> pts);
bool has_crossing_omp(std::span<const Vec2> pts);
// Uniform-grid broad phase; same answer as the brute-force versions.
bool has_crossing_grid(std::span<const Vec2> pts);

// Minimum distance between two closed polygons.
double min_distance_serial(std::span<const Vec2> a, std::span<const Vec2> b);
double min_distance_omp(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace curveflow::kernels
