#include "curveflow/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "curveflow/error.hpp"
#include "curveflow/kernels.hpp"
#include "spline.hpp"

namespace curveflow {

std::string_view to_string(LimitClass cls) {
  switch (cls) {
    case LimitClass::PlaneLike: return "plane-like";
    case LimitClass::RoundLike: return "circle-or-sphere-like";
    case LimitClass::CylinderLike: return "cylinder-like";
    case LimitClass::ConvexNoncompact: return "convex-noncompact";
    case LimitClass::Unclassified: return "unclassified";
  }
  return "unclassified";
}

namespace rescale {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDenseSamples = 801;

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * d));
}

double directed_hausdorff(std::span<const Vec2> a, std::span<const Vec2> b) {
  double worst = 0.0;
  for (const Vec2& p : a) {
    double best = kInf;
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, point_segment_distance(p, b[j], b[(j + 1) % b.size()]));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<double> validated_scales(std::span<const double> scales) {
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i]))
      throw Error(ErrorKind::InvalidInput, "rescale factors must be positive and finite");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw Error(ErrorKind::InvalidInput, "rescale factors must be increasing");
  }
  return {scales.begin(), scales.end()};
}

// Index of the snapshot nearest the target time, or npos outside the window.
template <class Snaps>
std::size_t select_snapshot(const Snaps& snaps, double target, double window) {
  std::size_t best = std::string::npos;
  double gap = kInf;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const double g = std::abs(snaps[i].time - target);
    if (g < gap) {
      gap = g;
      best = i;
    }
  }
  return gap <= window ? best : std::string::npos;
}

template <class Traj, class Rescale>
std::vector<RescaleFrame> rescale_all(const Traj& traj, double T, std::span<const double> scales,
                                      double c, std::vector<std::string>* notices,
                                      Rescale&& make) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidInput, "time offset must be positive");
  std::vector<RescaleFrame> out;
  for (double lambda : validated_scales(scales)) {
    const double span = c / (lambda * lambda);
    const double target = T - span;
    const std::size_t idx = select_snapshot(traj.snapshots, target, kTimeWindow * span);
    if (idx == std::string::npos) {
      if (notices) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "skipped lambda=%.6g: no snapshot within %.3g of t=%.6g",
                      lambda, kTimeWindow * span, target);
        notices->emplace_back(buf);
      }
      continue;
    }
    out.push_back(make(traj.snapshots[idx], idx, lambda));
  }
  return out;
}

// Dense spline samples along a closed curve, centered on knot index `vertex`.
std::vector<Vec2> dense_arc(std::span<const Vec2> loop, Vec2 shift, std::size_t vertex,
                            double half_span) {
  const detail::ClosedSplineCurve spline(loop, shift);
  const double s0 = spline.knot(vertex);
  const double half = std::min(half_span, 0.5 * spline.length());
  std::vector<Vec2> out(kDenseSamples);
  for (std::size_t i = 0; i < kDenseSamples; ++i) {
    const double u = -half + 2.0 * half * static_cast<double>(i) / (kDenseSamples - 1);
    out[i] = spline(s0 + u);
  }
  return out;
}

// Contiguous run of the arc around its middle sample where keep() holds.
// `open` is set when the run reaches either end of the arc.
template <class Keep>
std::pair<std::size_t, std::size_t> middle_run(const std::vector<Vec2>& arc, Keep&& keep,
                                               bool* open = nullptr) {
  const std::size_t mid = arc.size() / 2;
  std::size_t lo = mid, hi = mid;
  while (lo > 0 && keep(arc[lo - 1])) --lo;
  while (hi + 1 < arc.size() && keep(arc[hi + 1])) ++hi;
  if (open) *open = lo == 0 || hi + 1 == arc.size();
  return {lo, hi};
}

// Signed curvature of the dense arc w.r.t. the interior side (+1 left).
double min_menger(const std::vector<Vec2>& arc, std::size_t lo, std::size_t hi, double side) {
  double k = kInf;
  for (std::size_t i = std::max<std::size_t>(lo, 1); i + 1 <= hi && i + 1 < arc.size(); ++i)
    k = std::min(k, side * kernels::menger(arc[i - 1], arc[i], arc[i + 1]).k_left);
  return k;
}

FrameResiduals curve_residuals(const PlaneCurve& frame, std::size_t vertex) {
  FrameResiduals r;
  const auto arc = dense_arc(frame.vertices(), {}, vertex, 4.0 * kWindowRadius);
  const auto [lo, hi] =
      middle_run(arc, [](Vec2 p) { return norm(p - Vec2{}) <= kWindowRadius + 1e-12; });
  const std::span<const Vec2> window(arc.data() + lo, hi - lo + 1);
  r.plane = window.size() >= 5 ? fit_line(window).rms_residual : kInf;
  try {
    r.round = fit_circle(frame).rms_residual;
  } catch (const Error&) {
    r.round = kInf;
  }
  r.cylinder = kInf;
  r.min_curvature = min_menger(arc, lo, hi, frame.counterclockwise() ? 1.0 : -1.0);
  return r;
}

double plane_rms_3d(const std::vector<Vec2>& meridian, Vec2 probe) {
  std::vector<Eigen::Vector3d> pts;
  constexpr int kAngles = 61;
  for (const Vec2& m : meridian) {
    const double r = std::abs(m.y);
    const double phi_max = r > 1e-12 ? std::min(std::numbers::pi, 2.0 * kWindowRadius / r) : 0.0;
    for (int a = 0; a < kAngles; ++a) {
      const double phi = phi_max * (2.0 * a / (kAngles - 1) - 1.0);
      const Eigen::Vector3d q(m.x - probe.x, r * std::cos(phi) - probe.y, r * std::sin(phi));
      if (q.norm() <= kWindowRadius) pts.push_back(q);
    }
  }
  if (pts.size() < 10) return kInf;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& q : pts) mean += q;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& q : pts) cov += (q - mean) * (q - mean).transpose();
  cov /= static_cast<double>(pts.size());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  return std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
}

FrameResiduals axi_residuals(const AxiProfile& frame, std::size_t vertex) {
  FrameResiduals r;
  const Vec2 probe = frame.samples()[vertex];
  const auto loop = axi::meridian_loop(frame);
  const Vec2 shift{frame.topology() == Topology::Tube ? frame.period() : 0.0, 0.0};
  const auto arc = dense_arc(loop, shift, vertex, 4.0 * kWindowRadius);

  const auto [lo, hi] =
      middle_run(arc, [&](Vec2 p) { return norm(p - probe) <= kWindowRadius + 1e-12; });
  const std::vector<Vec2> window(arc.begin() + lo, arc.begin() + hi + 1);
  r.plane = plane_rms_3d(window, probe);

  r.round = kInf;
  if (frame.topology() == Topology::TwoPoles) {
    try {
      r.round = fit_circle(loop).rms_residual;
    } catch (const Error&) {
    }
  }

  bool open = false;
  const auto [clo, chi] = middle_run(
      arc, [&](Vec2 p) { return std::abs(p.x - probe.x) <= kWindowRadius && p.y > 0.0; }, &open);
  r.cylinder = kInf;
  if (!open && chi > clo) {
    double rmin = kInf, rmax = 0.0, sum = 0.0;
    for (std::size_t i = clo; i <= chi; ++i) {
      rmin = std::min(rmin, arc[i].y);
      rmax = std::max(rmax, arc[i].y);
      sum += arc[i].y;
    }
    r.cylinder = (rmax - rmin) / (sum / static_cast<double>(chi - clo + 1));
  }

  // Meridian curvature and the rotational curvature -n_r / r, both taken
  // with respect to the inward normal.
  const double side = frame.interior_side();
  double k = kInf;
  for (std::size_t i = std::max<std::size_t>(lo, 1); i + 1 <= hi && i + 1 < arc.size(); ++i) {
    if (arc[i].y <= 1e-12) continue;
    const auto lc = kernels::menger(arc[i - 1], arc[i], arc[i + 1]);
    const Vec2 inward = side * lc.normal_left;
    k = std::min({k, side * lc.k_left, -inward.y / arc[i].y});
  }
  r.min_curvature = k;
  return r;
}

std::pair<LimitClass, double> classify(const FrameResiduals& r) {
  if (r.plane < kPlaneThreshold) return {LimitClass::PlaneLike, r.plane};
  if (r.round < kRoundThreshold) return {LimitClass::RoundLike, r.round};
  if (r.cylinder < kCylinderThreshold) return {LimitClass::CylinderLike, r.cylinder};
  if (r.min_curvature >= kConvexTolerance) return {LimitClass::ConvexNoncompact, r.min_curvature};
  return {LimitClass::Unclassified, r.plane};
}

std::size_t nearest_vertex(std::span<const Vec2> pts, Vec2 p) {
  std::size_t best = 0;
  double d = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = norm(pts[i] - p);
    if (e < d) {
      d = e;
      best = i;
    }
  }
  return best;
}

void finish(BlowupReport& report) {
  const auto& f = report.frames;
  for (const auto& b : f) report.fit_residuals.push_back(classify(b.residuals).second);
  if (f.size() < 3) return;
  const LimitClass last = f.back().classification;
  const bool agree = std::all_of(f.end() - 3, f.end(),
                                 [last](const BlowupFrame& b) { return b.classification == last; });
  if (agree) report.limit_classification = last;
  report.late_frames_convex = std::all_of(f.end() - 3, f.end(), [](const BlowupFrame& b) {
    return b.residuals.min_curvature >= kConvexTolerance;
  });
}

double dial_scale(double curvature, double exponent) {
  const double h = std::abs(curvature);
  if (!(h > SpeedLaw::kZeroCurvature))
    throw Error(ErrorKind::GeometryDegenerate, "zero curvature at the probe vertex");
  return std::pow(h, exponent);
}

void check_probe(std::size_t snapshot, std::size_t count, double exponent) {
  if (snapshot >= count)
    throw Error(ErrorKind::InvalidInput, "probe snapshot index " + std::to_string(snapshot) +
                                             " out of range");
  if (!(exponent > 0.0)) throw Error(ErrorKind::InvalidInput, "scale exponent must be positive");
}

}  // namespace

CircleFit fit_circle(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) throw Error(ErrorKind::FitFailure, "circle fit needs at least three points");
  Vec2 mean{};
  for (const Vec2& p : pts) mean += p;
  mean = mean / static_cast<double>(n);
  double spread = 0.0;
  for (const Vec2& p : pts) spread += dot(p - mean, p - mean);
  spread = std::sqrt(spread / static_cast<double>(n));
  if (!(spread > 0.0)) throw Error(ErrorKind::FitFailure, "circle fit on coincident points");

  // x^2 + y^2 + D x + E y + F = 0 on normalized coordinates.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 q = (pts[i] - mean) / spread;
    a(i, 0) = q.x;
    a(i, 1) = q.y;
    a(i, 2) = 1.0;
    b(i) = -(q.x * q.x + q.y * q.y);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw Error(ErrorKind::FitFailure, "circle fit on collinear points");
  const Eigen::Vector3d sol = qr.solve(b);
  const Vec2 c{-sol(0) / 2.0, -sol(1) / 2.0};
  const double r2 = dot(c, c) - sol(2);
  if (!(r2 > 0.0) || std::sqrt(r2) > 1e6)
    throw Error(ErrorKind::FitFailure, "circle fit on (nearly) collinear points");

  CircleFit fit;
  fit.center = mean + spread * c;
  fit.radius = spread * std::sqrt(r2);
  double ss = 0.0;
  for (const Vec2& p : pts) {
    const double d = norm(p - fit.center) - fit.radius;
    ss += d * d;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n)) / fit.radius;
  return fit;
}

CircleFit fit_circle(const PlaneCurve& curve) { return fit_circle(curve.vertices()); }

LineFit fit_line(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw Error(ErrorKind::FitFailure, "line fit needs at least two points");
  Vec2 mean{};
  for (const Vec2& p : pts) mean += p;
  mean = mean / static_cast<double>(n);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const Vec2& p : pts) {
    const Eigen::Vector2d d(p.x - mean.x, p.y - mean.y);
    cov += d * d.transpose();
  }
  if (!(cov.trace() > 0.0)) throw Error(ErrorKind::FitFailure, "line fit on coincident points");
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d dir = eig.eigenvectors().col(1);

  LineFit fit;
  fit.point = mean;
  fit.direction = {dir(0), dir(1)};
  double ss = 0.0;
  for (const Vec2& p : pts) {
    const double d = std::abs(cross(fit.direction, p - mean));
    ss += d * d;
    fit.max_deviation = std::max(fit.max_deviation, d);
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

double hausdorff_distance(const PlaneCurve& a, const PlaneCurve& b) {
  return std::max(directed_hausdorff(a.vertices(), b.vertices()),
                  directed_hausdorff(b.vertices(), a.vertices()));
}

RescaleFrame rescale_snapshot(const Snapshot& snap, std::size_t index, Vec2 center,
                              double reference_time, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidInput, "rescale factor must be positive");
  return {index, center, reference_time, scale, scale * scale * (snap.time - reference_time),
          snap.curve.rescaled(center, scale)};
}

RescaleFrame rescale_snapshot(const AxiSnapshot& snap, std::size_t index, Vec2 center,
                              double reference_time, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidInput, "rescale factor must be positive");
  if (center.y != 0.0)
    throw Error(ErrorKind::InvalidInput, "axisymmetric rescale center must lie on the axis");
  return {index, center, reference_time, scale, scale * scale * (snap.time - reference_time),
          snap.profile.rescaled(center, scale)};
}

std::vector<RescaleFrame> parabolic_rescale(const Trajectory& traj, Vec2 center, double T,
                                            std::span<const double> scales, double time_offset,
                                            std::vector<std::string>* notices) {
  return rescale_all(traj, T, scales, time_offset, notices,
                     [&](const Snapshot& s, std::size_t i, double lambda) {
                       return rescale_snapshot(s, i, center, T, lambda);
                     });
}

std::vector<RescaleFrame> parabolic_rescale(const AxiTrajectory& traj, double center_x, double T,
                                            std::span<const double> scales, double time_offset,
                                            std::vector<std::string>* notices) {
  return rescale_all(traj, T, scales, time_offset, notices,
                     [&](const AxiSnapshot& s, std::size_t i, double lambda) {
                       return rescale_snapshot(s, i, {center_x, 0.0}, T, lambda);
                     });
}

std::vector<Roundness> roundness_series(const Trajectory& traj) {
  std::vector<Roundness> out;
  out.reserve(traj.snapshots.size());
  for (const Snapshot& s : traj.snapshots) {
    const double area = std::abs(s.metrics.enclosed_area);
    const PlaneCurve unit =
        s.curve.rescaled(curves::centroid(s.curve.vertices()), std::sqrt(std::numbers::pi / area));
    out.push_back({s.time, fit_circle(unit).rms_residual, s.metrics.isoperimetric_ratio});
  }
  return out;
}

BlowupReport curvature_normalized_frames(const Trajectory& traj, std::span<const Probe> probes,
                                         double exponent) {
  BlowupReport report;
  for (const Probe& probe : probes) {
    check_probe(probe.snapshot, traj.snapshots.size(), exponent);
    const Snapshot& snap = traj.snapshots[probe.snapshot];
    const auto pts = snap.curve.vertices();
    const std::size_t j = nearest_vertex(pts, probe.point);
    const double k = curves::curvature_profile(snap.curve)[j].curvature;
    RescaleFrame frame =
        rescale_snapshot(snap, probe.snapshot, pts[j], snap.time, dial_scale(k, exponent));
    const FrameResiduals res = curve_residuals(std::get<PlaneCurve>(frame.geometry), j);
    report.frames.push_back(
        {std::move(frame), j, pts[j] - probe.point, k, res, classify(res).first});
  }
  finish(report);
  return report;
}

BlowupReport curvature_normalized_frames(const AxiTrajectory& traj, std::span<const Probe> probes,
                                         double exponent) {
  BlowupReport report;
  for (const Probe& probe : probes) {
    check_probe(probe.snapshot, traj.snapshots.size(), exponent);
    const AxiSnapshot& snap = traj.snapshots[probe.snapshot];
    const auto pts = snap.profile.samples();
    const std::size_t j = nearest_vertex(pts, probe.point);
    const double h = axi::mean_curvature_profile(snap.profile)[j].h;
    RescaleFrame frame = rescale_snapshot(snap, probe.snapshot, {pts[j].x, 0.0}, snap.time,
                                          dial_scale(h, exponent));
    const FrameResiduals res = axi_residuals(std::get<AxiProfile>(frame.geometry), j);
    report.frames.push_back(
        {std::move(frame), j, pts[j] - probe.point, h, res, classify(res).first});
  }
  finish(report);
  return report;
}

std::vector<Probe> neck_probes(const AxiTrajectory& traj, std::size_t count,
                               double offset_factor) {
  std::vector<Probe> out;
  for (std::size_t i = traj.snapshots.size(); i-- > 0 && out.size() < count;) {
    const AxiMetrics& m = traj.snapshots[i].metrics;
    if (!m.has_neck) continue;
    out.push_back({i, {m.min_radius_location + offset_factor * m.min_radius, 0.0}});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace rescale
}  // namespace curveflow
