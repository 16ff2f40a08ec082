#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "curveflow/oracle.hpp"

namespace curveflow::reference {
namespace {

std::string label(const char* kind, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(%g, %g)", kind, a, b);
  return buf;
}

// Radius of a circle-like shrinker dr/dt = -c r^-p.
double shrink(double r0, double c, double p, double t) {
  const auto y = rk4<1>(
      [c, p](double, const std::array<double, 1>& r) {
        return std::array<double, 1>{-c * std::pow(r[0], -p)};
      },
      {r0}, 0.0, t);
  return y[0];
}

double reaper(double x) { return -std::log(std::cos(x)); }

}  // namespace

std::vector<OracleCheck> check_oracles() {
  using oracle::Shrinker;
  std::vector<OracleCheck> out;
  for (double t : {0.1, 0.375, 0.45}) {
    out.push_back({label("circle", 1.0, t), oracle::shrinker_radius({Shrinker::Circle, 1.0}, t),
                   shrink(1.0, 1.0, 1.0, t)});
  }
  for (double t : {0.1, 0.1875, 0.22}) {
    out.push_back({label("sphere", 1.0, t), oracle::shrinker_radius({Shrinker::Sphere, 1.0}, t),
                   shrink(1.0, 2.0, 1.0, t)});
  }
  for (double t : {0.005, 0.018}) {
    out.push_back({label("cylinder", 0.2, t),
                   oracle::shrinker_radius({Shrinker::Cylinder, 0.2}, t),
                   shrink(0.2, 1.0, 1.0, t)});
  }
  for (double p : {1.0 / 5.0, 1.0 / 3.0, 1.0, 2.0}) {
    const double t = 0.3;
    out.push_back({label("power-circle", p, t), oracle::power_circle_radius(1.0, p, t),
                   shrink(1.0, 1.0, p, t)});
  }

  // Grim reaper: curvature y''/(1+y'^2)^1.5 and translation speed y''/(1+y'^2)
  // from central differences of the graph.
  const double dx = 1e-4;
  for (double x : {0.0, 0.5, 1.0, 1.2}) {
    const double d1 = (reaper(x + dx) - reaper(x - dx)) / (2 * dx);
    const double d2 = (reaper(x + dx) - 2 * reaper(x) + reaper(x - dx)) / (dx * dx);
    const double g = 1 + d1 * d1;
    out.push_back({label("grim-reaper-curvature", x, 0.0), oracle::grim_reaper_curvature(x),
                   d2 / std::pow(g, 1.5)});
    out.push_back({label("grim-reaper-speed", x, 0.0), 1.0, d2 / g});
  }

  // Bowl: independent fixed-step integration from a second-order start.
  const double rho_max = 3.0;
  const std::size_t n = 61;
  const auto bowl = oracle::bowl_soliton(rho_max, n);
  const double r0 = 1e-3;
  std::array<double, 2> y{r0 * r0 / 4, r0 / 2};
  double rho = r0;
  for (std::size_t j = 10; j < n; j += 10) {
    y = rk4<2>(
        [](double r, const std::array<double, 2>& s) {
          return std::array<double, 2>{s[1], (1 + s[1] * s[1]) * (1 - s[1] / r)};
        },
        y, rho, bowl.rho[j]);
    rho = bowl.rho[j];
    out.push_back({label("bowl-height", rho_max, rho), bowl.height[j], y[0]});
    out.push_back({label("bowl-slope", rho_max, rho), bowl.slope[j], y[1]});
  }
  return out;
}

bool all_passed(const std::vector<OracleCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed(); });
}

}  // namespace curveflow::reference
