#pragma once

#include <cstddef>

#include "curveflow/curve.hpp"

// Initial curves for experiments. All are returned counterclockwise with
// vertices at (near) equal arclength spacing.
namespace curveflow::shapes {

PlaneCurve circle(std::size_t n, double radius, Vec2 center = {});
// Axis-aligned ellipse with semi-axes a (x) and b (y).
PlaneCurve ellipse(std::size_t n, double a, double b, Vec2 center = {});
// Axis-aligned square with the given side, corner at the origin.
PlaneCurve square(std::size_t n, double side);
// Lemniscate-style self-crossing curve (not embedded).
PlaneCurve figure_eight(std::size_t n);
// Two lobes joined by a waist: polar r = 1 + amplitude cos(2 theta).
PlaneCurve peanut(std::size_t n, double amplitude);

// Closed embedded curve that spirals inward `turns` times from the outer
// radius to the inner radius and back out, drawn as the boundary of a spiral
// strip whose width equals the gap between its coils, with semicircular caps.
struct SpiralStrip {
  double inner_radius = 1.0;
  double outer_radius = 2.0;
  double turns = 1.5;

  double strip_width() const;
};
PlaneCurve spiral(std::size_t n, const SpiralStrip& spec = {});

}  // namespace curveflow::shapes
