// Microbenchmarks for the hot paths: profile evaluation, sphere quadrature,
// the dense eigenvalue routine, and tuple enumeration.

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "crcurv/bubbles.hpp"
#include "crcurv/criterion.hpp"
#include "crcurv/curvature.hpp"
#include "crcurv/numerics.hpp"

using namespace crcurv;

namespace {

const Calibration& cal() {
  static const Calibration c = Calibration::compute(48);
  return c;
}

void bm_delta_exact(benchmark::State& state) {
  const Bubble b = Bubble::make(quasi_random_sphere_point(1, 7), 2.0);
  const SpherePoint x = quasi_random_sphere_point(2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(delta_exact(cal(), b, x));
}
BENCHMARK(bm_delta_exact);

void bm_integrate_sphere(benchmark::State& state) {
  const Bubble b = Bubble::make(quasi_random_sphere_point(1, 7), 2.0);
  const auto f = [&](const SpherePoint& x) {
    const double d = delta_exact(cal(), b, x);
    return d * d * d * d;
  };
  for (auto _ : state) {
    const QuadResult q = integrate_sphere(cal(), f, {b.a}, {b.lambda}, 32);
    benchmark::DoNotOptimize(q.value);
  }
}
BENCHMARK(bm_integrate_sphere)->Unit(benchmark::kMillisecond);

void bm_jacobi_eigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      a[static_cast<std::size_t>(i) * n + j] = a[static_cast<std::size_t>(j) * n + i] = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(num::jacobi_eigenvalues(a, n));
}
BENCHMARK(bm_jacobi_eigenvalues)->Arg(4)->Arg(8);

void bm_enumerate_F1(benchmark::State& state) {
  AbstractCriticalData data;
  const int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i)
    data.points.push_back({"y" + std::to_string(i + 1), 1.0 + 0.1 * i, -3.0, 0.0, 3});
  data.green.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) data.green[static_cast<std::size_t>(i) * n + j] = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_F1(data));
}
BENCHMARK(bm_enumerate_F1)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
