#include "curveflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace curveflow::kernels {

namespace {

// Below this size the OpenMP fork costs more than the loop.
constexpr std::ptrdiff_t kParallelThreshold = 2048;

int orientation(Vec2 p, Vec2 q, Vec2 r) {
  const Vec2 u = q - p;
  const Vec2 v = r - p;
  const double o = cross(u, v);
  const double guard = 1e-12 * norm(u) * norm(v);
  if (o > guard) return 1;
  if (o < -guard) return -1;
  return 0;
}

// r collinear with p-q: does its projection fall on the segment? Same
// relative slack as the collinearity guard, so round-off touches count.
bool on_segment(Vec2 p, Vec2 q, Vec2 r) {
  const Vec2 u = q - p;
  const double len2 = dot(u, u);
  if (len2 == 0.0) return r == p;
  const double t = dot(r - p, u) / len2;
  return t >= -1e-12 && t <= 1.0 + 1e-12;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// Edges i and j (edge i joins vertex i to i+1) share a vertex.
bool adjacent(std::size_t i, std::size_t j, std::size_t n) {
  return i == j || (i + 1) % n == j || (j + 1) % n == i;
}

}  // namespace

void curvature_serial(std::span<const Vec2> pts, std::span<double> k, std::span<Vec2> normal) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto lc = menger(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
    k[i] = lc.k_left;
    normal[i] = lc.normal_left;
  }
}

void curvature_omp(std::span<const Vec2> pts, std::span<double> k, std::span<Vec2> normal) {
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lc = menger(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
    k[i] = lc.k_left;
    normal[i] = lc.normal_left;
  }
}

void displace_serial(std::span<Vec2> pts, std::span<const Vec2> vel, double dt) {
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += dt * vel[i];
}

void displace_omp(std::span<Vec2> pts, std::span<const Vec2> vel, double dt) {
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) pts[i] += dt * vel[i];
}

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const int o1 = orientation(a0, a1, b0);
  const int o2 = orientation(a0, a1, b1);
  const int o3 = orientation(b0, b1, a0);
  const int o4 = orientation(b0, b1, a1);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

bool has_crossing_serial(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (adjacent(i, j, n)) continue;
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return true;
    }
  }
  return false;
}

bool has_crossing_omp(std::span<const Vec2> pts) {
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
  int found = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(| : found) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (found) continue;
    for (std::ptrdiff_t j = i + 2; j < n; ++j) {
      if (adjacent(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                   static_cast<std::size_t>(n)))
        continue;
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) {
        found = 1;
        break;
      }
    }
  }
  return found != 0;
}

bool has_crossing_grid(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  if (n < 4) return false;
  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xmin = std::min(xmin, pts[i].x);
    xmax = std::max(xmax, pts[i].x);
    ymin = std::min(ymin, pts[i].y);
    ymax = std::max(ymax, pts[i].y);
    total += norm(pts[(i + 1) % n] - pts[i]);
  }
  const double diam = std::hypot(xmax - xmin, ymax - ymin);
  const double cell = std::max(2.0 * total / static_cast<double>(n), diam / 1024.0);
  const auto nx = static_cast<std::int64_t>((xmax - xmin) / cell) + 1;
  const auto ny = static_cast<std::int64_t>((ymax - ymin) / cell) + 1;

  // Bucket each edge into every cell its bounding box touches (padded by one
  // cell so touching edges on a cell boundary still meet).
  std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(nx * ny));
  auto cell_of = [&](double v, double lo, std::int64_t count) {
    return std::clamp(static_cast<std::int64_t>((v - lo) / cell), std::int64_t{0}, count - 1);
  };
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2 p = pts[e];
    const Vec2 q = pts[(e + 1) % n];
    const auto cx0 = std::max<std::int64_t>(cell_of(std::min(p.x, q.x), xmin, nx) - 1, 0);
    const auto cx1 = std::min<std::int64_t>(cell_of(std::max(p.x, q.x), xmin, nx) + 1, nx - 1);
    const auto cy0 = std::max<std::int64_t>(cell_of(std::min(p.y, q.y), ymin, ny) - 1, 0);
    const auto cy1 = std::min<std::int64_t>(cell_of(std::max(p.y, q.y), ymin, ny) + 1, ny - 1);
    for (auto cy = cy0; cy <= cy1; ++cy)
      for (auto cx = cx0; cx <= cx1; ++cx)
        buckets[static_cast<std::size_t>(cy * nx + cx)].push_back(static_cast<std::uint32_t>(e));
  }
  for (const auto& bucket : buckets) {
    for (std::size_t a = 0; a < bucket.size(); ++a) {
      for (std::size_t b = a + 1; b < bucket.size(); ++b) {
        const std::size_t i = bucket[a];
        const std::size_t j = bucket[b];
        if (adjacent(i, j, n)) continue;
        if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return true;
      }
    }
  }
  return false;
}

double min_distance_serial(std::span<const Vec2> a, std::span<const Vec2> b) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      best = std::min(best, segment_distance(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]));
  return best;
}

double min_distance_omp(std::span<const Vec2> a, std::span<const Vec2> b) {
  double best = std::numeric_limits<double>::infinity();
  const auto na = static_cast<std::ptrdiff_t>(a.size());
  const auto nb = static_cast<std::ptrdiff_t>(b.size());
#pragma omp parallel for schedule(static) reduction(min : best) if (na * nb > 65536)
  for (std::ptrdiff_t i = 0; i < na; ++i)
    for (std::ptrdiff_t j = 0; j < nb; ++j)
      best = std::min(best, segment_distance(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]));
  return best;
}

}  // namespace curveflow::kernels
