// Serial reference kernels against their OpenMP versions.
// OMP_NUM_THREADS controls the thread count of the *_omp cases.

#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "curveflow/kernels.hpp"
#include "curveflow/shapes.hpp"

using namespace curveflow;

namespace {

std::vector<Vec2> wavy(std::size_t n, double shift = 0.0) {
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    const double r = 1.0 + 0.2 * std::cos(7 * t);
    pts[i] = {r * std::cos(t) + shift, r * std::sin(t)};
  }
  return pts;
}

template <void (*Kernel)(std::span<const Vec2>, std::span<double>, std::span<Vec2>)>
void curvature(benchmark::State& state) {
  const auto pts = wavy(static_cast<std::size_t>(state.range(0)));
  std::vector<double> k(pts.size());
  std::vector<Vec2> normal(pts.size());
  for (auto _ : state) {
    Kernel(pts, k, normal);
    benchmark::DoNotOptimize(k.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Kernel)(std::span<Vec2>, std::span<const Vec2>, double)>
void displace(benchmark::State& state) {
  auto pts = wavy(static_cast<std::size_t>(state.range(0)));
  const auto vel = wavy(pts.size());
  for (auto _ : state) {
    Kernel(pts, vel, 1e-9);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool (*Kernel)(std::span<const Vec2>)>
void crossing(benchmark::State& state) {
  const auto pts = wavy(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Kernel)(std::span<const Vec2>, std::span<const Vec2>)>
void distance(benchmark::State& state) {
  const auto a = wavy(static_cast<std::size_t>(state.range(0)));
  const auto b = wavy(a.size(), 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(curvature<kernels::curvature_serial>)->Name("curvature_serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(curvature<kernels::curvature_omp>)->Name("curvature_omp")->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(displace<kernels::displace_serial>)->Name("displace_serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(displace<kernels::displace_omp>)->Name("displace_omp")->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(crossing<kernels::has_crossing_serial>)->Name("crossing_serial")->RangeMultiplier(4)->Range(1 << 8, 1 << 12);
BENCHMARK(crossing<kernels::has_crossing_omp>)->Name("crossing_omp")->RangeMultiplier(4)->Range(1 << 8, 1 << 12);
BENCHMARK(crossing<kernels::has_crossing_grid>)->Name("crossing_grid")->RangeMultiplier(4)->Range(1 << 8, 1 << 14);
BENCHMARK(distance<kernels::min_distance_serial>)->Name("distance_serial")->RangeMultiplier(4)->Range(1 << 8, 1 << 12);
BENCHMARK(distance<kernels::min_distance_omp>)->Name("distance_omp")->RangeMultiplier(4)->Range(1 << 8, 1 << 12);

BENCHMARK_MAIN();
