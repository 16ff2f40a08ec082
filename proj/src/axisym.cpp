#include "curveflow/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curveflow/curve.hpp"
#include "curveflow/error.hpp"
#include "curveflow/kernels.hpp"
#include "spline.hpp"

namespace curveflow {

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::TwoPoles: return "twopoles";
    case Topology::Periodic: return "periodic";
    case Topology::Tube: return "tube";
  }
  return "unknown";
}

AxiProfile::AxiProfile(std::vector<Vec2> samples, Topology topology, double period)
    : samples_(std::move(samples)), topology_(topology), period_(period) {
  const std::size_t n = samples_.size();
  if (n < kMinSamples)
    throw Error(ErrorKind::InvalidInput, "profile needs at least 8 samples, got " + std::to_string(n));
  for (const Vec2& p : samples_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorKind::InvalidInput, "profile has a non-finite sample");
  switch (topology_) {
    case Topology::TwoPoles:
      for (std::size_t e : {std::size_t{0}, n - 1}) {
        if (std::abs(samples_[e].y) > 1e-12)
          throw Error(ErrorKind::InvalidInput, "two-pole profile must start and end on the axis");
        samples_[e].y = 0.0;
      }
      for (std::size_t i = 1; i + 1 < n; ++i)
        if (!(samples_[i].y > 0.0))
          throw Error(ErrorKind::InvalidInput,
                      "two-pole profile has r <= 0 at interior sample " + std::to_string(i));
      break;
    case Topology::Periodic:
    case Topology::Tube:
      for (std::size_t i = 0; i < n; ++i)
        if (!(samples_[i].y > 0.0))
          throw Error(ErrorKind::InvalidInput,
                      "profile must stay off the axis, r <= 0 at sample " + std::to_string(i));
      break;
  }
  if (topology_ == Topology::Tube && !(period_ > 0.0))
    throw Error(ErrorKind::InvalidInput, "tube profile needs a positive period");
}

bool AxiProfile::is_pole(std::size_t i) const {
  return topology_ == Topology::TwoPoles && (i == 0 || i + 1 == samples_.size());
}

std::pair<Vec2, Vec2> AxiProfile::neighbors(std::size_t i) const {
  const std::size_t n = samples_.size();
  auto mirror = [](Vec2 p) { return Vec2{p.x, -p.y}; };
  switch (topology_) {
    case Topology::TwoPoles:
      if (i == 0) return {mirror(samples_[1]), samples_[1]};
      if (i + 1 == n) return {samples_[n - 2], mirror(samples_[n - 2])};
      return {samples_[i - 1], samples_[i + 1]};
    case Topology::Periodic:
      return {samples_[(i + n - 1) % n], samples_[(i + 1) % n]};
    case Topology::Tube: {
      const Vec2 shift{period_, 0.0};
      const Vec2 prev = i == 0 ? samples_[n - 1] - shift : samples_[i - 1];
      const Vec2 next = i + 1 == n ? samples_[0] + shift : samples_[i + 1];
      return {prev, next};
    }
  }
  return {};
}

double AxiProfile::interior_side() const {
  if (topology_ == Topology::Periodic) return curves::signed_area(samples_) >= 0.0 ? 1.0 : -1.0;
  // Traversing in +x with the axis below puts the interior on the right.
  return samples_.back().x > samples_.front().x ? -1.0 : 1.0;
}

namespace {

// TwoPoles profile plus its mirror image: a closed curve symmetric about the axis.
std::vector<Vec2> mirror_closure(std::span<const Vec2> s) {
  std::vector<Vec2> closed(s.begin(), s.end());
  for (std::size_t i = s.size() - 2; i >= 1; --i) closed.push_back({s[i].x, -s[i].y});
  return closed;
}

}  // namespace

bool AxiProfile::is_simple() const {
  switch (topology_) {
    case Topology::TwoPoles:
      return !kernels::has_crossing_grid(mirror_closure(samples_));
    case Topology::Periodic:
      return !kernels::has_crossing_grid(samples_);
    case Topology::Tube: {
      const std::size_t n = samples_.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j)
          if (kernels::segments_intersect(samples_[i], samples_[i + 1 < n ? i + 1 : 0],
                                          samples_[j], j + 1 < n ? samples_[j + 1]
                                                                 : samples_[0] + Vec2{period_, 0}))
            if (!(i == 0 && j == n - 1)) return false;
      return true;
    }
  }
  return true;
}

AxiProfile AxiProfile::rescaled(Vec2 center, double scale) const {
  std::vector<Vec2> v;
  v.reserve(samples_.size());
  for (const Vec2& p : samples_) v.push_back(scale * (p - center));
  if (topology_ == Topology::TwoPoles) {
    v.front().y = 0.0;
    v.back().y = 0.0;
  }
  return AxiProfile(std::move(v), topology_, period_ * scale);
}

namespace axi {

namespace {

constexpr double kPi = std::numbers::pi;

// Segment list including the wrap segment for closed and tube topologies.
template <typename F>
void for_each_segment(const AxiProfile& p, F&& f) {
  const auto s = p.samples();
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + 1 < n; ++i) f(s[i], s[i + 1]);
  if (p.topology() == Topology::Periodic) f(s[n - 1], s[0]);
  if (p.topology() == Topology::Tube) f(s[n - 1], s[0] + Vec2{p.period(), 0.0});
}

double total_length(const AxiProfile& p) {
  double len = 0.0;
  for_each_segment(p, [&](Vec2 a, Vec2 b) { len += norm(b - a); });
  return len;
}

double min_spacing(const AxiProfile& p) {
  double h = std::numeric_limits<double>::infinity();
  for_each_segment(p, [&](Vec2 a, Vec2 b) { h = std::min(h, norm(b - a)); });
  return h;
}

double surface_area(const AxiProfile& p) {
  double area = 0.0;
  for_each_segment(p, [&](Vec2 a, Vec2 b) { area += kPi * (a.y + b.y) * norm(b - a); });
  return area;
}

// Scale whose collapse defines the singular event for this topology.
double singular_scale(const AxiMetrics& m, Topology topology) {
  return topology == Topology::Periodic ? m.tube_radius : m.min_radius;
}

}  // namespace

std::vector<MeanCurvatureSample> mean_curvature_profile(const AxiProfile& profile) {
  const std::size_t n = profile.size();
  const auto s = profile.samples();
  const double side = profile.interior_side();
  std::vector<MeanCurvatureSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [prev, next] = profile.neighbors(i);
    const auto lc = kernels::menger(prev, s[i], next);
    const double kappa = side * lc.k_left;
    Vec2 inward = side * lc.normal_left;
    if (profile.is_pole(i)) {
      inward.y = 0.0;
      inward = normalized(inward);
      out[i] = {2.0 * kappa, inward, true};
      continue;
    }
    if (!(s[i].y > 0.0))
      throw Error(ErrorKind::GeometryDegenerate,
                  "interior sample " + std::to_string(i) + " reached the axis");
    out[i] = {kappa - inward.y / s[i].y, inward, false};
  }
  return out;
}

AxiMetrics metrics(const AxiProfile& profile) {
  const auto s = profile.samples();
  const std::size_t n = s.size();
  AxiMetrics m;
  m.surface_area = surface_area(profile);
  double vol = 0.0;
  for_each_segment(profile, [&](Vec2 a, Vec2 b) {
    vol += kPi * (a.y * a.y + a.y * b.y + b.y * b.y) / 3.0 * (b.x - a.x);
  });
  m.enclosed_volume = std::abs(vol);

  switch (profile.topology()) {
    case Topology::TwoPoles: {
      // A neck is the lowest point between the outermost local maxima of r.
      std::size_t first_max = n, last_max = n;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i].y >= s[i - 1].y && s[i].y >= s[i + 1].y) {
          if (first_max == n) first_max = i;
          last_max = i;
        }
      }
      std::size_t best = n;
      if (first_max < last_max) {
        for (std::size_t i = first_max + 1; i < last_max; ++i)
          if (best == n || s[i].y < s[best].y) best = i;
        const double bound = std::min(s[first_max].y, s[last_max].y);
        if (best != n && s[best].y < (1.0 - 1e-6) * bound) m.has_neck = true;
      }
      if (!m.has_neck) {
        best = 1;
        for (std::size_t i = 1; i + 1 < n; ++i)
          if (s[i].y > s[best].y) best = i;
      }
      m.min_radius = s[best].y;
      m.min_radius_location = s[best].x;
      break;
    }
    case Topology::Periodic:
    case Topology::Tube: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (s[i].y < s[best].y) best = i;
      m.min_radius = s[best].y;
      m.min_radius_location = s[best].x;
      break;
    }
  }
  if (profile.topology() == Topology::Periodic) {
    m.meridian_centroid = curves::centroid(s);
    for (const Vec2& p : s) m.tube_radius = std::max(m.tube_radius, norm(p - m.meridian_centroid));
  }

  const auto hs = mean_curvature_profile(profile);
  m.min_mean_curvature = std::numeric_limits<double>::infinity();
  m.max_mean_curvature = -std::numeric_limits<double>::infinity();
  double hmax_abs = 0.0;
  for (const auto& h : hs) {
    m.min_mean_curvature = std::min(m.min_mean_curvature, h.h);
    m.max_mean_curvature = std::max(m.max_mean_curvature, h.h);
    hmax_abs = std::max(hmax_abs, std::abs(h.h));
  }
  m.mean_convex = m.min_mean_curvature >= -kMeanConvexTolerance * hmax_abs;
  return m;
}

std::vector<Vec2> meridian_loop(const AxiProfile& profile) {
  const auto s = profile.samples();
  if (profile.topology() == Topology::TwoPoles) return mirror_closure(s);
  return {s.begin(), s.end()};
}

AxiProfile resample(const AxiProfile& profile, std::size_t n) {
  if (n < AxiProfile::kMinSamples)
    throw Error(ErrorKind::InvalidInput, "profile resample count must be at least 8");
  const auto s = profile.samples();
  std::vector<Vec2> pts;
  switch (profile.topology()) {
    case Topology::TwoPoles: pts = mirror_closure(s); break;
    case Topology::Periodic: pts.assign(s.begin(), s.end()); break;
    case Topology::Tube: pts.assign(s.begin(), s.end()); break;
  }
  const Vec2 shift{profile.topology() == Topology::Tube ? profile.period() : 0.0, 0.0};
  const detail::ClosedSplineCurve spline(pts, shift);
  const double total = spline.length();

  std::vector<Vec2> out;
  out.reserve(n);
  if (profile.topology() == Topology::TwoPoles) {
    // Half of the symmetric closed curve, pole to pole.
    const double spacing = 0.5 * total / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = spacing * static_cast<double>(j);
      out.push_back(spline(t));
    }
    out.front() = {out.front().x, 0.0};
    out.back() = {out.back().x, 0.0};
  } else {
    const double spacing = total / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = spacing * static_cast<double>(j);
      out.push_back(spline(t));
    }
  }
  return AxiProfile(std::move(out), profile.topology(), profile.period());
}

double stable_timestep(const AxiProfile& profile, double cfl_factor) {
  const double h = min_spacing(profile);
  double rmin = std::numeric_limits<double>::infinity();
  const auto s = profile.samples();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!profile.is_pole(i)) rmin = std::min(rmin, s[i].y);
  return cfl_factor * std::min(h * h, h * rmin) / 4.0;
}

namespace {

AxiProfile advance(const AxiProfile& profile, const std::vector<MeanCurvatureSample>& hs,
                   double dt) {
  const auto s = profile.samples();
  const std::size_t n = s.size();
  std::vector<Vec2> next(s.begin(), s.end());
  for (std::size_t i = 0; i < n; ++i) {
    double h = hs[i].h;
    if (hs[i].pole) {
      // Pole speed limited by the adjacent sample.
      const double limit = std::abs(hs[i == 0 ? 1 : n - 2].h);
      h = std::clamp(h, -limit, limit);
    }
    next[i] += dt * h * hs[i].inward_normal;
  }
  if (profile.topology() == Topology::TwoPoles) {
    next.front().y = 0.0;
    next.back().y = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (!(next[i].y > 0.0))
        throw Error(ErrorKind::NumericalBreakdown,
                    "interior sample " + std::to_string(i) + " crossed the axis");
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (!(next[i].y > 0.0))
        throw Error(ErrorKind::NumericalBreakdown,
                    "sample " + std::to_string(i) + " crossed the axis");
  }
  return AxiProfile(std::move(next), profile.topology(), profile.period());
}

}  // namespace

AxiProfile step(const AxiProfile& profile, double dt) {
  if (dt < 0.0) throw Error(ErrorKind::InvalidInput, "negative time step");
  const double bound = stable_timestep(profile, 1.0);
  if (dt > bound)
    throw Error(ErrorKind::TimestepTooLarge, "time step " + std::to_string(dt) +
                                                 " exceeds stability bound " +
                                                 std::to_string(bound));
  if (dt == 0.0) return profile;
  return advance(profile, mean_curvature_profile(profile), dt);
}

double neck_threshold(double initial_scale, double spacing) {
  return std::max(1e-3 * initial_scale, 5.0 * spacing);
}

AxiTrajectory run_axi(const AxiProfile& initial, const FlowConfig& config) {
  config.validate();
  AxiTrajectory traj;
  AxiProfile profile = initial;
  const auto m0 = metrics(profile);
  traj.snapshots.push_back({0.0, profile, m0});
  traj.initial_spacing = total_length(profile) / static_cast<double>(profile.size() - 1);
  const double area0 = m0.surface_area;
  const double scale0 = singular_scale(m0, profile.topology());
  const double hmax0 = std::max(std::abs(m0.min_mean_curvature), std::abs(m0.max_mean_curvature));
  const std::size_t count = profile.size();

  // Snapshot levels: geometric in the singular scale, with the per-level
  // ratio matched to the area cadence used for plane curves.
  const double scale_ratio =
      std::exp(0.5 * std::log(config.stop_area_fraction) / static_cast<double>(config.snapshot_count));
  double next_area_level = std::pow(config.stop_area_fraction, 1.0 / static_cast<double>(config.snapshot_count));
  double next_scale_level = scale_ratio;

  double t = 0.0;
  std::size_t steps = 0;
  auto finish = [&](std::optional<Event> ev) {
    if (ev) traj.events.push_back(*ev);
    if (traj.snapshots.back().time < t) traj.snapshots.push_back({t, profile, metrics(profile)});
    traj.steps = steps;
    return traj;
  };

  while (true) {
    if (steps >= config.max_steps) return finish(std::nullopt);
    const auto hs = mean_curvature_profile(profile);
    double hmax = 0.0;
    for (const auto& h : hs) hmax = std::max(hmax, std::abs(h.h));
    if (hmax > config.max_curvature_factor * hmax0)
      return finish(Event{EventKind::CurvatureBlowup, t, std::nullopt});

    double dt = stable_timestep(profile, config.cfl_factor);
    bool last = false;
    if (t + dt >= config.stop_time) {
      dt = config.stop_time - t;
      last = true;
    }
    profile = advance(profile, hs, dt);
    t = last ? config.stop_time : t + dt;
    ++steps;
    if (steps % config.resample_every == 0 && profile.topology() != Topology::Tube)
      profile = resample(profile, count);

    const auto m = metrics(profile);
    const double spacing = total_length(profile) / static_cast<double>(profile.size() - 1);
    // A torus keeps its sample count while the tube shrinks, so its spacing
    // scales with the tube; the collapse threshold uses the initial spacing.
    const double threshold = neck_threshold(
        scale0, profile.topology() == Topology::Periodic ? traj.initial_spacing : spacing);
    const double scale = singular_scale(m, profile.topology());
    switch (profile.topology()) {
      case Topology::TwoPoles:
        if (m.has_neck && m.min_radius < threshold)
          return finish(Event{EventKind::NeckPinch, t, Vec2{m.min_radius_location, 0.0}});
        if (!m.has_neck && m.min_radius < threshold)
          return finish(Event{EventKind::PoleExtinction, t, Vec2{m.min_radius_location, 0.0}});
        break;
      case Topology::Periodic:
        if (m.tube_radius < threshold)
          return finish(Event{EventKind::TorusCollapse, t, m.meridian_centroid});
        break;
      case Topology::Tube:
        if (m.min_radius < threshold)
          return finish(Event{EventKind::NeckPinch, t, Vec2{m.min_radius_location, 0.0}});
        break;
    }
    if (m.surface_area <= config.stop_area_fraction * area0)
      return finish(Event{EventKind::ExtinctionApproach, t, std::nullopt});
    if (last) return finish(std::nullopt);

    const double area_frac = m.surface_area / area0;
    const double scale_frac = scale / scale0;
    if (area_frac <= next_area_level || scale_frac <= next_scale_level) {
      traj.snapshots.push_back({t, profile, m});
      while (area_frac <= next_area_level) next_area_level *= std::pow(config.stop_area_fraction, 1.0 / static_cast<double>(config.snapshot_count));
      while (scale_frac <= next_scale_level) next_scale_level *= scale_ratio;
    }
  }
}

namespace {

AxiProfile sphere_profile(double r0, std::size_t n) {
  if (r0 <= 0.0) throw Error(ErrorKind::InvalidInput, "sphere radius must be positive");
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = kPi * static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = {-r0 * std::cos(phi), r0 * std::sin(phi)};
  }
  v.front() = {-r0, 0.0};
  v.back() = {r0, 0.0};
  return AxiProfile(std::move(v), Topology::TwoPoles);
}

AxiProfile torus_profile(double ring, double tube, std::size_t n) {
  if (ring <= 0.0 || tube <= 0.0 || tube >= ring)
    throw Error(ErrorKind::InvalidInput, "torus needs 0 < tube_r < ring_R");
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    v[i] = {tube * std::cos(th), ring + tube * std::sin(th)};
  }
  return AxiProfile(std::move(v), Topology::Periodic);
}

AxiProfile cylinder_profile(double radius, double period, std::size_t n) {
  if (radius <= 0.0 || period <= 0.0)
    throw Error(ErrorKind::InvalidInput, "cylinder needs positive radius and period");
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = {period * static_cast<double>(i) / static_cast<double>(n), radius};
  return AxiProfile(std::move(v), Topology::Tube, period);
}

AxiProfile dumbbell_profile(const Dumbbell& d, std::size_t n) {
  const double R = d.lobe_radius;
  const double a = d.tube_radius;
  const double half = 0.5 * d.tube_length;
  if (R <= 0.0 || a <= 0.0 || d.tube_length <= 0.0 || a >= R)
    throw Error(ErrorKind::InvalidInput, "dumbbell needs positive dimensions and tube_r < lobe_r");
  const double rf = 1.5 * R;
  const Vec2 fillet{half, a + rf};
  const double cx = half + std::sqrt((R + rf) * (R + rf) - (a + rf) * (a + rf));
  const Vec2 lobe{cx, 0.0};
  const Vec2 u = (lobe - fillet) / (R + rf);
  const double psi_max = std::atan2(u.x, -u.y);
  const double alpha_t = std::atan2(-R * u.y, -R * u.x);

  // Right half, from the tube middle out to the right pole.
  constexpr std::size_t kDense = 20000;
  std::vector<Vec2> right;
  for (std::size_t i = 0; i < kDense; ++i)
    right.push_back({half * static_cast<double>(i) / kDense, a});
  for (std::size_t i = 0; i < kDense; ++i) {
    const double psi = psi_max * static_cast<double>(i) / kDense;
    right.push_back(fillet + rf * Vec2{std::sin(psi), -std::cos(psi)});
  }
  for (std::size_t i = 0; i <= kDense; ++i) {
    const double al = alpha_t * (1.0 - static_cast<double>(i) / kDense);
    right.push_back(lobe + R * Vec2{std::cos(al), std::sin(al)});
  }
  right.back() = {cx + R, 0.0};

  std::vector<Vec2> full;
  full.reserve(2 * right.size());
  for (std::size_t i = right.size(); i-- > 1;) full.push_back({-right[i].x, right[i].y});
  full.insert(full.end(), right.begin(), right.end());
  return resample(AxiProfile(std::move(full), Topology::TwoPoles), n);
}

}  // namespace

AxiProfile build_profile(const Shape& shape, std::size_t n) {
  if (n < AxiProfile::kMinSamples)
    throw Error(ErrorKind::InvalidInput, "profile needs at least 8 samples");
  return std::visit(
      [n](const auto& s) -> AxiProfile {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) return sphere_profile(s.radius, n);
        else if constexpr (std::is_same_v<T, Torus>) return torus_profile(s.ring_radius, s.tube_radius, n);
        else if constexpr (std::is_same_v<T, Cylinder>) return cylinder_profile(s.radius, s.period, n);
        else return dumbbell_profile(s, n);
      },
      shape);
}

NeckReport neck_report(const AxiTrajectory& traj) {
  if (traj.find_event(EventKind::NeckPinch) == nullptr)
    throw Error(ErrorKind::InvalidInput, "trajectory has no neck-pinch event");
  NeckReport rep;
  for (const auto& s : traj.snapshots) rep.series.emplace_back(s.time, s.metrics.min_radius);
  const double r_final = rep.series.back().second;
  rep.fit_begin = 0;
  while (rep.fit_begin + 2 < rep.series.size() && rep.series[rep.fit_begin].second > 10.0 * r_final)
    ++rep.fit_begin;
  double sum = 0.0;
  const auto count = static_cast<double>(rep.series.size() - rep.fit_begin);
  for (std::size_t i = rep.fit_begin; i < rep.series.size(); ++i) {
    const auto [t, r] = rep.series[i];
    sum += t + 0.5 * r * r;
  }
  rep.pinch_time_fit = sum / count;
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  for (std::size_t i = rep.fit_begin; i < rep.series.size(); ++i) {
    const auto [t, r] = rep.series[i];
    const double gap = rep.pinch_time_fit - t;
    const double ratio = gap > 0.0 ? r / std::sqrt(2.0 * gap) : std::numeric_limits<double>::infinity();
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
  }
  return rep;
}

}  // namespace axi

const Event* AxiTrajectory::find_event(EventKind kind) const {
  for (const auto& e : events)
    if (e.kind == kind) return &e;
  return nullptr;
}

}  // namespace curveflow
