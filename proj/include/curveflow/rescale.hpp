#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "curveflow/axisym.hpp"
#include "curveflow/curve.hpp"
#include "curveflow/flow.hpp"

// Parabolic rescaling about spacetime points and comparison of the rescaled
// data against plane, round, cylinder and convex limit shapes.
namespace curveflow {

using Geometry = std::variant<PlaneCurve, AxiProfile>;

struct RescaleFrame {
  std::size_t snapshot_index = 0;
  // Curve case: any point. Axisymmetric case: a point on the axis (r = 0).
  Vec2 center{};
  double reference_time = 0.0;
  double scale = 1.0;
  double rescaled_time = 0.0;  // scale^2 (t - T)
  Geometry geometry;
};

enum class LimitClass { PlaneLike, RoundLike, CylinderLike, ConvexNoncompact, Unclassified };

std::string_view to_string(LimitClass cls);

// Template residuals of one frame inside the unit window around its probe.
// Inapplicable templates hold +infinity.
struct FrameResiduals {
  double plane = 0.0;         // RMS distance to the best line or plane
  double round = 0.0;         // fit_circle residual of the whole frame
  double cylinder = 0.0;      // relative radius variation along the axis window
  double min_curvature = 0.0; // smallest principal curvature (rescaled)
};

struct BlowupFrame {
  RescaleFrame frame;
  std::size_t probe_vertex = 0;
  Vec2 probe_offset{};  // substituted vertex minus requested probe point
  double curvature = 0.0;  // h_i at the probe vertex, before rescaling
  FrameResiduals residuals;
  LimitClass classification = LimitClass::Unclassified;
};

struct BlowupReport {
  std::vector<BlowupFrame> frames;
  LimitClass limit_classification = LimitClass::Unclassified;
  // Residual of each frame's matched template (plane residual if none matched).
  std::vector<double> fit_residuals;
  // Every principal curvature in the final three windows is >= kConvexTolerance.
  bool late_frames_convex = false;
};

namespace rescale {

inline constexpr double kPlaneThreshold = 0.01;
inline constexpr double kRoundThreshold = 0.02;
inline constexpr double kCylinderThreshold = 0.02;
inline constexpr double kConvexTolerance = -1e-3;
// Radius of the unit-diameter window around the probe.
inline constexpr double kWindowRadius = 0.5;
// A snapshot serves time T - c/lambda^2 when within this fraction of c/lambda^2.
inline constexpr double kTimeWindow = 0.1;

struct CircleFit {
  Vec2 center{};
  double radius = 0.0;
  double rms_residual = 0.0;  // RMS of |p - c| - R, divided by R
};
// Algebraic (Kasa) least-squares circle. Throws Error{FitFailure} for fewer
// than three points or (nearly) collinear input.
CircleFit fit_circle(std::span<const Vec2> pts);
CircleFit fit_circle(const PlaneCurve& curve);

struct LineFit {
  Vec2 point{};
  Vec2 direction{};
  double rms_residual = 0.0;
  double max_deviation = 0.0;
};
// Total least squares. Throws Error{FitFailure} for fewer than two distinct points.
LineFit fit_line(std::span<const Vec2> pts);

// Symmetric Hausdorff distance between two closed polygons.
double hausdorff_distance(const PlaneCurve& a, const PlaneCurve& b);

// Translate by -center and dilate by scale. The snapshot time becomes
// scale^2 (t - reference_time).
RescaleFrame rescale_snapshot(const Snapshot& snap, std::size_t index, Vec2 center,
                              double reference_time, double scale);
RescaleFrame rescale_snapshot(const AxiSnapshot& snap, std::size_t index, Vec2 center,
                              double reference_time, double scale);

// For each lambda the snapshot nearest T - c/lambda^2 is rescaled. Scales with
// no snapshot inside the time window are skipped and described in notices.
// Throws Error{InvalidInput} for non-positive or non-increasing scales.
std::vector<RescaleFrame> parabolic_rescale(const Trajectory& traj, Vec2 center, double T,
                                            std::span<const double> scales,
                                            double time_offset = 1.0,
                                            std::vector<std::string>* notices = nullptr);
std::vector<RescaleFrame> parabolic_rescale(const AxiTrajectory& traj, double center_x, double T,
                                            std::span<const double> scales,
                                            double time_offset = 1.0,
                                            std::vector<std::string>* notices = nullptr);

struct Roundness {
  double time = 0.0;
  double circle_residual = 0.0;
  double isoperimetric_ratio = 0.0;
};
// Per snapshot, the unit-area-normalized curve's circle residual.
std::vector<Roundness> roundness_series(const Trajectory& traj);

struct Probe {
  std::size_t snapshot = 0;
  Vec2 point{};
};

// Frames about each probe dilated by lambda = |h|^exponent, where h is the
// curvature (mean curvature for surfaces) at the nearest sample. exponent 1
// is the curvature normalization; 2 and 1/2 are the fast and slow dials.
// Throws Error{InvalidInput} for an out-of-range snapshot index or
// exponent <= 0, Error{GeometryDegenerate} for zero curvature at a probe.
BlowupReport curvature_normalized_frames(const Trajectory& traj, std::span<const Probe> probes,
                                         double exponent = 1.0);
BlowupReport curvature_normalized_frames(const AxiTrajectory& traj, std::span<const Probe> probes,
                                         double exponent = 1.0);

// Axis points x_neck + offset_factor * r_min for the last `count` snapshots
// with a neck, approaching the pinch from the +x lobe.
std::vector<Probe> neck_probes(const AxiTrajectory& traj, std::size_t count,
                               double offset_factor = 1.0);

}  // namespace rescale
}  // namespace curveflow
