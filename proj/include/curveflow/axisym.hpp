#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "curveflow/event.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/vec2.hpp"

// Mean curvature flow of surfaces of revolution about the x axis, evolved
// through their meridian profile. A sample is stored as Vec2{x, r}.
namespace curveflow {

enum class Topology {
  TwoPoles,  // open meridian from axis to axis; sphere-like surfaces
  Periodic,  // closed meridian away from the axis; tori
  Tube,      // meridian periodic in x with a fixed period; infinite cylinders
};

std::string_view to_string(Topology topology);

class AxiProfile {
 public:
  static constexpr std::size_t kMinSamples = 8;

  // Throws Error{InvalidInput} when the topology's radius conditions fail.
  // TwoPoles endpoints are snapped onto the axis when already within 1e-12.
  AxiProfile(std::vector<Vec2> samples, Topology topology, double period = 0.0);

  std::span<const Vec2> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  Topology topology() const { return topology_; }
  double period() const { return period_; }

  // Meridian does not cross itself (mirror image included for TwoPoles).
  bool is_simple() const;
  // Meridian points before/after sample i, with pole reflection and tube wrap.
  std::pair<Vec2, Vec2> neighbors(std::size_t i) const;
  bool is_pole(std::size_t i) const;
  // +1 when the enclosed region lies to the left of the traversal.
  double interior_side() const;

  AxiProfile rescaled(Vec2 center, double scale) const;

 private:
  std::vector<Vec2> samples_;
  Topology topology_;
  double period_;
};

struct AxiMetrics {
  double surface_area = 0.0;
  double enclosed_volume = 0.0;
  // Neck radius for TwoPoles profiles (equatorial radius when there is no
  // neck), distance to the axis for tori and tubes.
  double min_radius = 0.0;
  double min_radius_location = 0.0;
  bool has_neck = false;
  // Periodic only: largest distance from the meridian centroid.
  double tube_radius = 0.0;
  Vec2 meridian_centroid{};
  double min_mean_curvature = 0.0;
  double max_mean_curvature = 0.0;
  bool mean_convex = false;
};

struct MeanCurvatureSample {
  double h = 0.0;  // sum of principal curvatures w.r.t. the inward normal
  Vec2 inward_normal{};
  bool pole = false;
};

struct AxiSnapshot {
  double time = 0.0;
  AxiProfile profile;
  AxiMetrics metrics;
};

struct AxiTrajectory {
  std::vector<AxiSnapshot> snapshots;
  std::vector<Event> events;
  std::size_t steps = 0;
  double initial_spacing = 0.0;

  const Event* find_event(EventKind kind) const;
};

namespace axi {

// Relative slack on h >= 0 for the mean-convex flag.
inline constexpr double kMeanConvexTolerance = 1e-6;

// h = kappa_meridian + nu_r / r with nu the outward normal; pole samples use
// the limit 2 kappa_meridian. Throws Error{GeometryDegenerate} when an
// interior sample has r <= 0.
std::vector<MeanCurvatureSample> mean_curvature_profile(const AxiProfile& profile);

AxiMetrics metrics(const AxiProfile& profile);

// Closed meridian: a TwoPoles profile followed by its mirror image below the
// axis; other topologies return their samples unchanged.
std::vector<Vec2> meridian_loop(const AxiProfile& profile);

// Equal arclength resampling to n samples along a cubic spline (poles kept on
// the axis, tube period kept).
AxiProfile resample(const AxiProfile& profile, std::size_t n);

// cfl * min(h^2, h * r_min) / 4 with h the smallest spacing.
double stable_timestep(const AxiProfile& profile, double cfl_factor = 1.0);

AxiProfile step(const AxiProfile& profile, double dt);

// Halts at neck pinch, torus collapse, pole extinction, the area fraction,
// the curvature cap, stop_time or max_steps. Throws Error{NumericalBreakdown}
// if an interior sample reaches the axis before a neck event.
AxiTrajectory run_axi(const AxiProfile& profile, const FlowConfig& config);

// Neck event threshold: max(1e-3 * initial scale, 5 * sample spacing).
double neck_threshold(double initial_scale, double spacing);

struct Sphere {
  double radius = 1.0;
};
struct Dumbbell {
  double lobe_radius = 1.0;
  double tube_radius = 0.15;
  double tube_length = 1.2;
};
struct Torus {
  double ring_radius = 1.0;
  double tube_radius = 0.1;
};
struct Cylinder {
  double radius = 1.0;
  double period = 1.0;
};
using Shape = std::variant<Sphere, Dumbbell, Torus, Cylinder>;

// Dumbbell lobes meet the tube through circular fillets of radius
// 1.5 * lobe_radius, tangent to both, which keeps the surface mean convex.
AxiProfile build_profile(const Shape& shape, std::size_t n);

struct NeckReport {
  double pinch_time_fit = 0.0;
  std::vector<std::pair<double, double>> series;  // (time, min_radius)
  std::size_t fit_begin = 0;  // first series index used by the fit
  // min over the fitted window of r / sqrt(2 (T - t)), and max.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};
// Fits r^2 = 2 (T - t) over the last decade of neck-radius decay.
// Throws Error{InvalidInput} if the trajectory has no neck-pinch event.
NeckReport neck_report(const AxiTrajectory& traj);

}  // namespace axi
}  // namespace curveflow
