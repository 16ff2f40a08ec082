#pragma once

#include <cstddef>
#include <vector>

#include "curveflow/flow.hpp"
#include "curveflow/vec2.hpp"

// Exact and ODE-accurate reference solutions.
namespace curveflow::oracle {

enum class Shrinker { Circle, Sphere, Cylinder };

struct ShrinkerKind {
  Shrinker kind = Shrinker::Circle;
  double initial_radius = 1.0;
};

// r0^2 / 2 for circles and cylinders, r0^2 / 4 for spheres.
double shrinker_lifetime(ShrinkerKind shrinker);
// Throws Error{Extinct} for t >= lifetime, Error{InvalidInput} for t < 0 or r0 <= 0.
double shrinker_radius(ShrinkerKind shrinker, double t);

// Circle under F(k) = k^p: (r0^(1+p) - (1+p) t)^(1/(1+p)).
double power_circle_lifetime(double r0, double p);
double power_circle_radius(double r0, double p, double t);

// y = -ln cos x on [-half_width, half_width], equal arclength spacing.
// Throws Error{InvalidInput} unless 0 < half_width < pi/2 and n >= 16.
std::vector<Vec2> grim_reaper(std::size_t n, double half_width);
double grim_reaper_height(double x);
double grim_reaper_curvature(double x);

struct TranslationCheck {
  double time = 0.0;
  std::size_t steps = 0;
  // Largest vertical distance of an interior vertex from the translated graph.
  double max_deviation = 0.0;
};
// Evolves the truncated grim reaper with unit-speed ends.
TranslationCheck grim_reaper_translation(std::size_t n, double half_width, double t,
                                         double cfl_factor = 0.5,
                                         std::size_t resample_every = 20);

// Rotationally symmetric translator u''/(1+u'^2) + u'/rho = 1, u(0) = u'(0) = 0.
struct BowlProfile {
  std::vector<double> rho;
  std::vector<double> height;
  std::vector<double> slope;
  std::vector<double> second_derivative;
};
// n samples on [0, rho_max]; rho_max == 0 gives the single point at the origin.
// Throws Error{InvalidInput} for rho_max < 0 or n < 32.
BowlProfile bowl_soliton(double rho_max, std::size_t n);

}  // namespace curveflow::oracle
