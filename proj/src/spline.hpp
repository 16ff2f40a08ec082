#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curveflow/vec2.hpp"

namespace curveflow::detail {

// Cubic spline in one variable over strictly increasing knots. Periodic splines
// wrap with the given period; natural splines have zero second derivative at
// both ends.
class CubicSpline {
 public:
  static CubicSpline periodic(std::vector<double> knots, std::vector<double> values, double period);
  static CubicSpline natural(std::vector<double> knots, std::vector<double> values);

  double operator()(double s) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;
  double period_ = 0.0;
  bool periodic_ = false;
};

// Closed planar curve through the given points, parametrized by chord length.
// A nonzero shift makes the curve close onto its first point translated by
// shift (a tube meridian repeating along x); the linear drift is removed
// before fitting so both coordinates are periodic.
class ClosedSplineCurve {
 public:
  explicit ClosedSplineCurve(std::span<const Vec2> pts, Vec2 shift = {});

  double length() const { return total_; }
  double knot(std::size_t i) const { return knots_[i]; }
  Vec2 operator()(double s) const;

 private:
  std::vector<double> knots_;
  double total_ = 0.0;
  Vec2 drift_{};
  CubicSpline x_;
  CubicSpline y_;
};

}  // namespace curveflow::detail
