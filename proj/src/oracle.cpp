#include "curveflow/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "curveflow/error.hpp"

namespace curveflow::oracle {
namespace {

void require_radius(double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw Error(ErrorKind::InvalidInput, "initial radius must be positive, got " + std::to_string(r0));
  }
}

void require_time(double t, double lifetime) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "time must be non-negative");
  if (t >= lifetime) {
    throw Error(ErrorKind::Extinct, "t=" + std::to_string(t) + " is past the extinction time " +
                                        std::to_string(lifetime));
  }
}

// Arclength of y = -ln cos x from 0 to x.
double reaper_arclength(double x) { return std::asinh(std::tan(x)); }
// Inverse: x = gd(s).
double reaper_abscissa(double s) { return std::atan(std::sinh(s)); }

using BowlState = std::array<double, 2>;

// Series start off the singular axis: u = rho^2/4 + rho^4/128.
BowlState bowl_series(double rho) {
  const double r2 = rho * rho;
  return {r2 / 4.0 + r2 * r2 / 128.0, rho / 2.0 + r2 * rho / 32.0};
}

double bowl_second(double rho, double slope) {
  if (rho == 0.0) return 0.5;
  return (1.0 + slope * slope) * (1.0 - slope / rho);
}

}  // namespace

double shrinker_lifetime(ShrinkerKind s) {
  require_radius(s.initial_radius);
  const double r2 = s.initial_radius * s.initial_radius;
  return s.kind == Shrinker::Sphere ? r2 / 4.0 : r2 / 2.0;
}

double shrinker_radius(ShrinkerKind s, double t) {
  require_time(t, shrinker_lifetime(s));
  const double c = s.kind == Shrinker::Sphere ? 4.0 : 2.0;
  return std::sqrt(s.initial_radius * s.initial_radius - c * t);
}

double power_circle_lifetime(double r0, double p) {
  require_radius(r0);
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidInput, "exponent must be positive");
  return std::pow(r0, 1.0 + p) / (1.0 + p);
}

double power_circle_radius(double r0, double p, double t) {
  require_time(t, power_circle_lifetime(r0, p));
  return std::pow(std::pow(r0, 1.0 + p) - (1.0 + p) * t, 1.0 / (1.0 + p));
}

double grim_reaper_height(double x) { return -std::log(std::cos(x)); }
double grim_reaper_curvature(double x) { return std::cos(x); }

std::vector<Vec2> grim_reaper(std::size_t n, double half_width) {
  if (n < 16) throw Error(ErrorKind::InvalidInput, "grim reaper needs n >= 16");
  if (!(half_width > 0.0) || half_width >= std::numbers::pi / 2) {
    throw Error(ErrorKind::InvalidInput, "half_width must lie in (0, pi/2)");
  }
  const double s_max = reaper_arclength(half_width);
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = -s_max + 2.0 * s_max * static_cast<double>(i) / static_cast<double>(n - 1);
    const double x = i + 1 == n ? half_width : (i == 0 ? -half_width : reaper_abscissa(s));
    pts[i] = {x, grim_reaper_height(x)};
  }
  return pts;
}

TranslationCheck grim_reaper_translation(std::size_t n, double half_width, double t,
                                         double cfl_factor, std::size_t resample_every) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "time must be non-negative");
  if (!(cfl_factor > 0.0) || cfl_factor > 1.0 || resample_every == 0) {
    throw Error(ErrorKind::InvalidInput, "cfl_factor must lie in (0, 1] and resample_every >= 1");
  }
  std::vector<Vec2> pts = grim_reaper(n, half_width);
  const SpeedLaw law{1.0};
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) h = std::min(h, norm(pts[i] - pts[i - 1]));
  const double dt_max = cfl_factor * h * h / 2.0;

  TranslationCheck out;
  while (out.time < t) {
    const double dt = std::min(dt_max, t - out.time);
    pts = flow::step_open(pts, law, dt, {0.0, 1.0});
    out.time += dt;
    ++out.steps;
    if (out.steps % resample_every == 0) pts = curves::resample_open(pts, n);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = pts[i].x;
    if (std::abs(x) >= half_width) continue;
    out.max_deviation =
        std::max(out.max_deviation, std::abs(pts[i].y - (grim_reaper_height(x) + out.time)));
  }
  return out;
}

BowlProfile bowl_soliton(double rho_max, std::size_t n) {
  if (!(rho_max >= 0.0) || !std::isfinite(rho_max)) {
    throw Error(ErrorKind::InvalidInput, "rho_max must be finite and >= 0");
  }
  BowlProfile out;
  if (rho_max == 0.0) {
    out.rho = {0.0};
    out.height = {0.0};
    out.slope = {0.0};
    out.second_derivative = {0.5};
    return out;
  }
  if (n < 32) throw Error(ErrorKind::InvalidInput, "bowl soliton needs n >= 32");

  namespace ode = boost::numeric::odeint;
  const auto rhs = [](const BowlState& y, BowlState& dy, double rho) {
    dy[0] = y[1];
    dy[1] = bowl_second(rho, y[1]);
  };
  const double rho_start = std::min(1e-4, rho_max / static_cast<double>(4 * n));
  BowlState y = bowl_series(rho_start);
  double rho = rho_start;
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<BowlState>());

  out.rho.resize(n);
  out.height.resize(n);
  out.slope.resize(n);
  out.second_derivative.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double target = rho_max * static_cast<double>(j) / static_cast<double>(n - 1);
    BowlState at;
    if (target <= rho_start) {
      at = bowl_series(target);
    } else {
      ode::integrate_adaptive(stepper, rhs, y, rho, target, (target - rho) / 8.0);
      rho = target;
      at = y;
    }
    out.rho[j] = target;
    out.height[j] = at[0];
    out.slope[j] = at[1];
    out.second_derivative[j] = bowl_second(target, at[1]);
  }
  return out;
}

}  // namespace curveflow::oracle
