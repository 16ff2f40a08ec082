#include "curveflow/flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "curveflow/error.hpp"
#include "curveflow/kernels.hpp"

namespace curveflow {

double SpeedLaw::speed(double curvature) const {
  const double a = std::abs(curvature);
  if (a < kZeroCurvature) return 0.0;
  if (exponent == 1.0) return curvature;
  return std::copysign(std::pow(a, exponent), curvature);
}

void SpeedLaw::validate() const {
  if (!(exponent > 0.0 && exponent <= kMaxExponent))
    throw Error(ErrorKind::InvalidInput,
                "speed exponent must lie in (0, 8], got " + std::to_string(exponent));
}

void FlowConfig::validate() const {
  auto fail = [](const char* field) {
    throw Error(ErrorKind::InvalidInput, std::string("flow config field out of range: ") + field);
  };
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0)) fail("cfl_factor");
  if (resample_every == 0) fail("resample_every");
  if (!(target_vertex_spacing >= 0.0)) fail("target_vertex_spacing");
  if (min_vertices < PlaneCurve::kMinVertices) fail("min_vertices");
  if (max_vertices < min_vertices) fail("max_vertices");
  if (!(stop_area_fraction > 0.0 && stop_area_fraction < 1.0)) fail("stop_area_fraction");
  if (!(max_curvature_factor > 1.0)) fail("max_curvature_factor");
  if (max_steps == 0) fail("max_steps");
  if (snapshot_count == 0) fail("snapshot_count");
  if (!(stop_time > 0.0)) fail("stop_time");
}

bool Trajectory::has_event(EventKind kind) const { return find_event(kind) != nullptr; }

const Event* Trajectory::find_event(EventKind kind) const {
  for (const auto& e : events)
    if (e.kind == kind) return &e;
  return nullptr;
}

namespace flow {

namespace {

struct Kinematics {
  std::vector<Vec2> velocity;
  double max_abs_curvature = 0.0;
  double guard = 1.0;
};

Kinematics kinematics(const PlaneCurve& curve, SpeedLaw law) {
  const std::size_t n = curve.size();
  std::vector<double> k(n);
  std::vector<Vec2> normal(n);
  kernels::curvature_omp(curve.vertices(), k, normal);
  Kinematics out;
  out.velocity.resize(n);
  // The left normal times a left-signed speed is orientation independent.
  for (std::size_t i = 0; i < n; ++i) out.velocity[i] = law.speed(k[i]) * normal[i];
  double kmax = 0.0;
  double kmin = std::numeric_limits<double>::infinity();
  for (double v : k) {
    kmax = std::max(kmax, std::abs(v));
    kmin = std::min(kmin, std::abs(v));
  }
  out.max_abs_curvature = kmax;
  if (law.exponent > 1.0) {
    out.guard = std::pow(kmax, law.exponent - 1.0);
  } else if (law.exponent < 1.0) {
    // F'(k) blows up at k = 0 for p < 1; floor |k| at a scale set by the curve size.
    const double floor = 1e-3 / curve.diameter();
    out.guard = std::pow(std::max(kmin, floor), law.exponent - 1.0);
  }
  out.guard = std::max(out.guard, 1e-300);
  return out;
}

double min_spacing(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) h = std::min(h, norm(pts[(i + 1) % n] - pts[i]));
  return h;
}

double timestep_bound(const PlaneCurve& curve, const Kinematics& kin, double cfl) {
  const double h = min_spacing(curve.vertices());
  return cfl * h * h / (2.0 * kin.guard);
}

PlaneCurve advance(const PlaneCurve& curve, const Kinematics& kin, double dt) {
  std::vector<Vec2> pts(curve.vertices().begin(), curve.vertices().end());
  kernels::displace_omp(pts, kin.velocity, dt);
  return PlaneCurve(std::move(pts));
}

// Per-curve bookkeeping for run_coupled.
struct Track {
  PlaneCurve curve;
  Trajectory traj;
  double initial_area = 0.0;
  double initial_kmax = 0.0;
  bool check_embedding = false;
  bool convex = false;
};

std::size_t vertex_count(const PlaneCurve& curve, const FlowConfig& cfg) {
  if (cfg.target_vertex_spacing <= 0.0)
    return std::clamp(curve.size(), cfg.min_vertices, cfg.max_vertices);
  const double len = curves::polygon_length(curve.vertices());
  const auto want = static_cast<std::size_t>(std::ceil(len / cfg.target_vertex_spacing));
  return std::clamp(want, cfg.min_vertices, cfg.max_vertices);
}

}  // namespace

std::vector<Vec2> normal_velocity(const PlaneCurve& curve, SpeedLaw law) {
  return kinematics(curve, law).velocity;
}

double stable_timestep(const PlaneCurve& curve, SpeedLaw law, double cfl_factor) {
  return timestep_bound(curve, kinematics(curve, law), cfl_factor);
}

PlaneCurve step(const PlaneCurve& curve, SpeedLaw law, double dt) {
  law.validate();
  if (dt < 0.0) throw Error(ErrorKind::InvalidInput, "negative time step");
  const auto kin = kinematics(curve, law);
  const double bound = timestep_bound(curve, kin, 1.0);
  if (dt > bound)
    throw Error(ErrorKind::TimestepTooLarge, "time step " + std::to_string(dt) +
                                                 " exceeds stability bound " +
                                                 std::to_string(bound));
  if (dt == 0.0) return curve;
  return advance(curve, kin, dt);
}

std::vector<Trajectory> run_coupled(std::span<const PlaneCurve> initial, SpeedLaw law,
                                    const FlowConfig& config) {
  law.validate();
  config.validate();
  if (initial.empty()) throw Error(ErrorKind::InvalidInput, "no curves to evolve");

  std::vector<Track> tracks;
  tracks.reserve(initial.size());
  for (const auto& c : initial) {
    Track t{c, {}, 0.0, 0.0, false, false};
    t.traj.law = law;
    const auto m = curves::metrics(c);
    t.initial_area = std::abs(m.enclosed_area);
    t.initial_kmax = std::max(std::abs(m.min_curvature), std::abs(m.max_curvature));
    t.check_embedding = curves::is_embedded(c);
    t.convex = m.convex;
    t.traj.snapshots.push_back({0.0, c, m});
    tracks.push_back(std::move(t));
  }

  const double log_stop = std::log(config.stop_area_fraction);
  std::size_t next_level = 1;
  auto level = [&](std::size_t j) {
    return std::exp(log_stop * static_cast<double>(j) / static_cast<double>(config.snapshot_count));
  };

  double t = 0.0;
  std::size_t steps = 0;
  bool halt = false;

  auto snapshot_all = [&] {
    for (auto& tr : tracks) {
      auto& snaps = tr.traj.snapshots;
      if (!snaps.empty() && snaps.back().time >= t) continue;
      snaps.push_back({t, tr.curve, curves::metrics(tr.curve)});
    }
  };
  auto record = [&](Track& tr, EventKind kind, std::optional<Vec2> where) {
    tr.traj.events.push_back({kind, t, where});
  };

  while (!halt) {
    if (steps >= config.max_steps) {
      snapshot_all();
      break;
    }
    std::vector<Kinematics> kin;
    kin.reserve(tracks.size());
    double dt = std::numeric_limits<double>::infinity();
    for (auto& tr : tracks) {
      kin.push_back(kinematics(tr.curve, law));
      if (kin.back().max_abs_curvature > config.max_curvature_factor * tr.initial_kmax) {
        record(tr, EventKind::CurvatureBlowup, curves::centroid(tr.curve.vertices()));
        halt = true;
      }
      dt = std::min(dt, timestep_bound(tr.curve, kin.back(), config.cfl_factor));
    }
    if (halt) {
      snapshot_all();
      break;
    }
    bool last_step = false;
    if (t + dt >= config.stop_time) {
      dt = config.stop_time - t;
      last_step = true;
    }

    for (std::size_t i = 0; i < tracks.size(); ++i) {
      try {
        tracks[i].curve = advance(tracks[i].curve, kin[i], dt);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Extinct && e.kind() != ErrorKind::InvalidInput) throw;
        // The polygon degenerated: treat it as having reached extinction.
        t += dt;
        record(tracks[i], EventKind::ExtinctionApproach, std::nullopt);
        halt = true;
      }
    }
    if (halt) {
      snapshot_all();
      break;
    }
    t = last_step ? config.stop_time : t + dt;
    ++steps;

    const bool checkpoint = steps % config.resample_every == 0;
    if (checkpoint) {
      for (auto& tr : tracks) {
        tr.curve = curves::resample_uniform(tr.curve, vertex_count(tr.curve, config),
                                            Interpolation::CubicSpline);
        if (tr.check_embedding && !curves::is_embedded(tr.curve)) {
          record(tr, EventKind::EmbeddednessLoss, curves::centroid(tr.curve.vertices()));
          halt = true;
        }
        if (!tr.convex) {
          const auto m = curves::metrics(tr.curve);
          if (m.convex) {
            tr.convex = true;
            record(tr, EventKind::Convexification, curves::centroid(tr.curve.vertices()));
          }
        }
      }
    }

    double min_fraction = 1.0;
    for (auto& tr : tracks) {
      const double frac = std::abs(curves::signed_area(tr.curve.vertices())) / tr.initial_area;
      min_fraction = std::min(min_fraction, frac);
      if (frac <= config.stop_area_fraction) {
        record(tr, EventKind::ExtinctionApproach, curves::centroid(tr.curve.vertices()));
        halt = true;
      }
    }
    if (halt || last_step) {
      snapshot_all();
      break;
    }
    if (min_fraction <= level(next_level)) {
      while (next_level <= config.snapshot_count && min_fraction <= level(next_level)) ++next_level;
      snapshot_all();
      for (auto& tr : tracks) {
        if (tr.check_embedding && !curves::is_embedded(tr.curve)) {
          record(tr, EventKind::EmbeddednessLoss, curves::centroid(tr.curve.vertices()));
          halt = true;
        }
      }
    }
  }

  std::vector<Trajectory> out;
  out.reserve(tracks.size());
  for (auto& tr : tracks) {
    tr.traj.steps = steps;
    out.push_back(std::move(tr.traj));
  }
  return out;
}

Trajectory run(const PlaneCurve& curve, SpeedLaw law, const FlowConfig& config) {
  auto trajs = run_coupled(std::span<const PlaneCurve>(&curve, 1), law, config);
  return std::move(trajs.front());
}

std::vector<Vec2> step_open(std::span<const Vec2> pts, SpeedLaw law, double dt,
                            Vec2 end_velocity) {
  const std::size_t n = pts.size();
  if (n < 3) throw Error(ErrorKind::InvalidInput, "open polyline needs at least 3 points");
  std::vector<Vec2> out(pts.begin(), pts.end());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto lc = kernels::menger(pts[i - 1], pts[i], pts[i + 1]);
    out[i] += dt * law.speed(lc.k_left) * lc.normal_left;
  }
  out.front() += dt * end_velocity;
  out.back() += dt * end_velocity;
  return out;
}

AreaLaw analyze_area_law(const Trajectory& traj) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 10)
    throw Error(ErrorKind::InvalidInput, "area law needs at least 10 snapshots, got " +
                                             std::to_string(snaps.size()));
  const double n = static_cast<double>(snaps.size());
  double st = 0, sa = 0, stt = 0, sta = 0;
  for (const auto& s : snaps) {
    const double a = std::abs(s.metrics.enclosed_area);
    st += s.time;
    sa += a;
    stt += s.time * s.time;
    sta += s.time * a;
  }
  const double slope = (n * sta - st * sa) / (n * stt - st * st);
  const double intercept = (sa - slope * st) / n;
  AreaLaw out;
  out.slope = slope;
  out.extinction_estimate = std::abs(snaps.front().metrics.enclosed_area) / (2.0 * std::numbers::pi);
  out.extrapolated_extinction = -intercept / slope;
  return out;
}

std::optional<double> convexification_time(const Trajectory& traj, double tolerance) {
  for (const auto& s : traj.snapshots)
    if (s.metrics.min_curvature >= -tolerance) return s.time;
  return std::nullopt;
}

EllipseFit fit_ellipse(const PlaneCurve& curve) {
  const auto pts = curve.vertices();
  const std::size_t n = pts.size();
  Vec2 mean{};
  for (const Vec2& p : pts) mean += p;
  mean = mean / static_cast<double>(n);
  double scale = 0.0;
  for (const Vec2& p : pts) scale += dot(p - mean, p - mean);
  scale = std::sqrt(scale / static_cast<double>(n));

  // Halir-Flusser split of the Fitzgibbon direct fit, on normalized data.
  Eigen::MatrixXd d1(n, 3), d2(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 q = (pts[i] - mean) / scale;
    d1.row(static_cast<Eigen::Index>(i)) << q.x * q.x, q.x * q.y, q.y * q.y;
    d2.row(static_cast<Eigen::Index>(i)) << q.x, q.y, 1.0;
  }
  const Eigen::Matrix3d s1 = d1.transpose() * d1;
  const Eigen::Matrix3d s2 = d1.transpose() * d2;
  const Eigen::Matrix3d s3 = d2.transpose() * d2;
  const Eigen::Matrix3d tmat = -s3.ldlt().solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * tmat;
  Eigen::Matrix3d reduced;
  reduced.row(0) = m.row(2) / 2.0;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2.0;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(reduced);
  Eigen::Vector3d quad = Eigen::Vector3d::Zero();
  bool found = false;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d v = solver.eigenvectors().col(i).real();
    if (4.0 * v(0) * v(2) - v(1) * v(1) > 0.0) {
      quad = v;
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorKind::FitFailure, "no elliptic conic fits the curve");
  if (quad(0) + quad(2) < 0.0) quad = -quad;
  const Eigen::Vector3d lin = tmat * quad;
  const double A = quad(0), B = quad(1), C = quad(2), D = lin(0), E = lin(1), F = lin(2);

  Eigen::Matrix2d h;
  h << 2 * A, B, B, 2 * C;
  const Eigen::Vector2d c = h.lu().solve(Eigen::Vector2d(-D, -E));
  const double f0 = A * c(0) * c(0) + B * c(0) * c(1) + C * c(1) * c(1) + D * c(0) + E * c(1) + F;
  Eigen::Matrix2d q;
  q << A, B / 2, B / 2, C;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(q);
  const double l0 = eig.eigenvalues()(0);
  const double l1 = eig.eigenvalues()(1);
  const double ax0 = -f0 / l0;
  const double ax1 = -f0 / l1;
  if (!(ax0 > 0.0 && ax1 > 0.0 && std::isfinite(ax0) && std::isfinite(ax1)))
    throw Error(ErrorKind::FitFailure, "fitted conic is not a real ellipse");

  EllipseFit out;
  out.center = mean + scale * Vec2{c(0), c(1)};
  // Smaller eigenvalue belongs to the major axis.
  out.semi_major = scale * std::sqrt(ax0);
  out.semi_minor = scale * std::sqrt(ax1);
  const Eigen::Vector2d major = eig.eigenvectors().col(0);
  out.angle = std::atan2(major(1), major(0));
  out.eccentricity = std::sqrt(std::max(0.0, 1.0 - (out.semi_minor * out.semi_minor) /
                                                       (out.semi_major * out.semi_major)));

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = (pts[i] - mean) / scale;
    const double val = A * p.x * p.x + B * p.x * p.y + C * p.y * p.y + D * p.x + E * p.y + F;
    const double gx = 2 * A * p.x + B * p.y + D;
    const double gy = B * p.x + 2 * C * p.y + E;
    const double g2 = gx * gx + gy * gy;
    const double dist = g2 > 0.0 ? val / std::sqrt(g2) : 0.0;
    sum += dist * dist;
  }
  out.residual = scale * std::sqrt(sum / static_cast<double>(n)) / curve.diameter();
  return out;
}

std::vector<NormalizedLength> rescaled_length_series(const Trajectory& traj) {
  std::vector<NormalizedLength> out;
  if (traj.snapshots.empty()) return out;
  const double a0 = std::abs(traj.snapshots.front().metrics.enclosed_area);
  out.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) {
    const double a = std::abs(s.metrics.enclosed_area);
    out.push_back({s.time, s.metrics.length * std::sqrt(a0 / a)});
  }
  return out;
}

}  // namespace flow
}  // namespace curveflow
