#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

// Independent re-derivations of the oracle formulas: fixed-step classical
// Runge-Kutta and central differences, sharing no code with the oracles.
namespace curveflow::reference {

inline constexpr double kStep = 1e-5;
inline constexpr double kTolerance = 1e-6;

template <std::size_t N, class F>
std::array<double, N> rk4(F&& rhs, std::array<double, N> y, double t0, double t1,
                          double step = kStep) {
  const std::size_t count = static_cast<std::size_t>(std::ceil((t1 - t0) / step));
  const double h = (t1 - t0) / static_cast<double>(count);
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  double t = t0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + h / 2, axpy(y, h / 2, k1));
    const auto k3 = rhs(t + h / 2, axpy(y, h / 2, k2));
    const auto k4 = rhs(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < N; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t = t0 + static_cast<double>(k + 1) * h;
  }
  return y;
}

struct OracleCheck {
  std::string name;
  double oracle = 0.0;
  double reference = 0.0;
  double error() const { return std::abs(oracle - reference); }
  bool passed() const { return error() <= kTolerance; }
};

std::vector<OracleCheck> check_oracles();
bool all_passed(const std::vector<OracleCheck>& checks);

}  // namespace curveflow::reference
