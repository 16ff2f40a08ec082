#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/event.hpp"

namespace curveflow {

// Normal speed F(k) = sign(k) |k|^p. p = 1 is curve shortening, p = 1/3 the
// affine normal flow.
struct SpeedLaw {
  double exponent = 1.0;

  static constexpr double kMaxExponent = 8.0;
  // |k| below this is treated as exactly zero.
  static constexpr double kZeroCurvature = 1e-12;

  double speed(double curvature) const;
  bool is_curve_shortening() const { return exponent == 1.0; }
  // Throws Error{InvalidInput} unless 0 < p <= 8.
  void validate() const;
};

struct FlowConfig {
  double cfl_factor = 0.5;
  std::size_t resample_every = 20;
  // Spacing used to choose the vertex count at each resample; 0 keeps the count.
  double target_vertex_spacing = 0.0;
  std::size_t min_vertices = 64;
  std::size_t max_vertices = 16384;
  double stop_area_fraction = 0.02;
  // Halt once max |k| exceeds this multiple of the initial max |k|.
  double max_curvature_factor = 1e4;
  std::size_t max_steps = 50'000'000;
  // Snapshots are taken as the area crosses stop_area_fraction^(j / snapshot_count).
  std::size_t snapshot_count = 60;
  double stop_time = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct Snapshot {
  double time = 0.0;
  PlaneCurve curve;
  CurveMetrics metrics;
};

struct Trajectory {
  SpeedLaw law;
  std::vector<Snapshot> snapshots;
  std::vector<Event> events;
  std::size_t steps = 0;

  bool has_event(EventKind kind) const;
  const Event* find_event(EventKind kind) const;
};

namespace flow {

std::vector<Vec2> normal_velocity(const PlaneCurve& curve, SpeedLaw law);

// Largest explicit-Euler step for this curve scaled by cfl_factor:
// cfl * h_min^2 / (2 * g), g = 1 for p = 1, otherwise max |k|^(p-1).
double stable_timestep(const PlaneCurve& curve, SpeedLaw law, double cfl_factor = 1.0);

// One forward-Euler step. Throws Error{TimestepTooLarge} past the stability
// bound; the result is revalidated as a PlaneCurve.
PlaneCurve step(const PlaneCurve& curve, SpeedLaw law, double dt);

// Evolve until the area fraction, curvature cap, step budget or stop_time
// is reached. Embeddedness loss is recorded as an event and halts the run.
Trajectory run(const PlaneCurve& curve, SpeedLaw law, const FlowConfig& config);

// Several curves advanced with one shared time step and snapshot schedule;
// stops when any of them reaches a stop condition.
std::vector<Trajectory> run_coupled(std::span<const PlaneCurve> curves, SpeedLaw law,
                                    const FlowConfig& config);

// Open polyline: interior vertices move with the normal speed, the two ends
// with a prescribed velocity.
std::vector<Vec2> step_open(std::span<const Vec2> pts, SpeedLaw law, double dt,
                            Vec2 end_velocity);

struct AreaLaw {
  double slope = 0.0;
  double extinction_estimate = 0.0;      // A(0) / 2pi
  double extrapolated_extinction = 0.0;  // zero crossing of the fitted line
};
// Throws Error{InvalidInput} with fewer than 10 snapshots.
AreaLaw analyze_area_law(const Trajectory& traj);

// First snapshot time at which every signed curvature is >= -tolerance.
std::optional<double> convexification_time(const Trajectory& traj, double tolerance = 1e-6);

struct EllipseFit {
  Vec2 center{};
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double angle = 0.0;  // major axis direction
  double eccentricity = 0.0;
  double residual = 0.0;  // RMS Sampson distance / bounding-box diameter
};
// Direct least-squares ellipse fit. Throws Error{FitFailure} for non-elliptic conics.
EllipseFit fit_ellipse(const PlaneCurve& curve);

struct NormalizedLength {
  double time = 0.0;
  double normalized_length = 0.0;  // L(t) sqrt(A(0) / A(t))
};
std::vector<NormalizedLength> rescaled_length_series(const Trajectory& traj);

}  // namespace flow
}  // namespace curveflow
