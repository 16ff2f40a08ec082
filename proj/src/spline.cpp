#include "spline.hpp"

#include <algorithm>
#include <cmath>

namespace curveflow::detail {

namespace {

// Thomas algorithm. sub[0] and sup[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

// Cyclic tridiagonal system with corner entries: row 0 couples to n-1 via
// sub[0], row n-1 couples to 0 via sup[n-1]. Sherman-Morrison reduction.
std::vector<double> solve_cyclic(const std::vector<double>& sub, std::vector<double> diag,
                                 const std::vector<double>& sup, const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  const double alpha = sup[n - 1];
  const double beta = sub[0];
  const double gamma = -diag[0];
  diag[0] -= gamma;
  diag[n - 1] -= alpha * beta / gamma;
  std::vector<double> x = solve_tridiagonal(sub, diag, sup, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> z = solve_tridiagonal(sub, diag, sup, u);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace

CubicSpline CubicSpline::periodic(std::vector<double> knots, std::vector<double> values,
                                  double period) {
  CubicSpline s;
  const std::size_t n = knots.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i)
    h[i] = (i + 1 < n ? knots[i + 1] : knots[0] + period) - knots[i];
  std::vector<double> sub(n), diag(n), sup(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    sub[i] = h[im];
    diag[i] = 2.0 * (h[im] + h[i]);
    sup[i] = h[i];
    rhs[i] = 6.0 * ((values[ip] - values[i]) / h[i] - (values[i] - values[im]) / h[im]);
  }
  s.second_ = solve_cyclic(sub, diag, sup, rhs);
  s.knots_ = std::move(knots);
  s.values_ = std::move(values);
  s.period_ = period;
  s.periodic_ = true;
  return s;
}

CubicSpline CubicSpline::natural(std::vector<double> knots, std::vector<double> values) {
  CubicSpline s;
  const std::size_t n = knots.size();
  s.second_.assign(n, 0.0);
  if (n > 2) {
    const std::size_t m = n - 2;
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = j + 1;
      const double h0 = knots[i] - knots[i - 1];
      const double h1 = knots[i + 1] - knots[i];
      sub[j] = h0;
      diag[j] = 2.0 * (h0 + h1);
      sup[j] = h1;
      rhs[j] = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
    }
    const auto inner = solve_tridiagonal(sub, diag, sup, rhs);
    std::copy(inner.begin(), inner.end(), s.second_.begin() + 1);
  }
  s.knots_ = std::move(knots);
  s.values_ = std::move(values);
  return s;
}

double CubicSpline::operator()(double s) const {
  const std::size_t n = knots_.size();
  if (periodic_) {
    s = knots_[0] + std::fmod(s - knots_[0], period_);
    if (s < knots_[0]) s += period_;
  } else {
    s = std::clamp(s, knots_.front(), knots_.back());
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (!periodic_ && i >= n - 1) i = n - 2;
  const std::size_t j = (i + 1) % n;
  const double s1 = (i + 1 < n) ? knots_[i + 1] : knots_[0] + period_;
  const double h = s1 - knots_[i];
  const double a = (s1 - s) / h;
  const double b = (s - knots_[i]) / h;
  return a * values_[i] + b * values_[j] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[j]) * h * h / 6.0;
}

namespace {

struct Fit {
  std::vector<double> knots;
  double total = 0.0;
  Vec2 drift{};
  std::vector<double> xs, ys;
};

Fit prepare(std::span<const Vec2> pts, Vec2 shift) {
  Fit f;
  const std::size_t m = pts.size();
  f.knots.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) f.knots[i] = f.knots[i - 1] + norm(pts[i] - pts[i - 1]);
  f.total = f.knots[m - 1] + norm(pts[0] + shift - pts[m - 1]);
  f.drift = shift / f.total;
  f.xs.resize(m);
  f.ys.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 q = pts[i] - f.knots[i] * f.drift;
    f.xs[i] = q.x;
    f.ys[i] = q.y;
  }
  return f;
}

}  // namespace

ClosedSplineCurve::ClosedSplineCurve(std::span<const Vec2> pts, Vec2 shift) {
  Fit f = prepare(pts, shift);
  x_ = CubicSpline::periodic(f.knots, std::move(f.xs), f.total);
  y_ = CubicSpline::periodic(f.knots, std::move(f.ys), f.total);
  knots_ = std::move(f.knots);
  total_ = f.total;
  drift_ = f.drift;
}

Vec2 ClosedSplineCurve::operator()(double s) const { return Vec2{x_(s), y_(s)} + s * drift_; }

}  // namespace curveflow::detail
