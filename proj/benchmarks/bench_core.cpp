#include <benchmark/benchmark.h>

#include <vector>

#include "bilat/bands.hpp"
#include "bilat/device.hpp"
#include "bilat/oracle.hpp"
#include "bilat/tmatrix.hpp"
#include "bilat/transmission.hpp"

namespace {

const bilat::HalfCellSpec kSpec{2.15, 3.8, 1.9, 288.09, 0.074, 0.080};

void BM_layer_w(benchmark::State& state) {
  const bilat::Layer barrier{3.8, 288.09, 0.080};
  double e = 85.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilat::layer_w(barrier, e));
    e = e < 130.0 ? e + 0.01 : 85.0;
  }
}
BENCHMARK(BM_layer_w);

void BM_half_cell_w(benchmark::State& state) {
  double e = 85.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilat::half_cell_w(kSpec, e));
    e = e < 130.0 ? e + 0.01 : 85.0;
  }
}
BENCHMARK(BM_half_cell_w);

void BM_device_w(benchmark::State& state) {
  const bilat::Device dev = bilat::build_biperiodic(
      kSpec, static_cast<int>(state.range(0)), bilat::Ordering::WideFirst);
  double e = 85.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilat::device_w(dev, e));
    e = e < 130.0 ? e + 0.01 : 85.0;
  }
}
BENCHMARK(BM_device_w)->Arg(6)->Arg(35);

void BM_kard_decompose(benchmark::State& state) {
  const double e = 95.0;
  const bilat::WMatrix w = bilat::half_cell_w(kSpec, e);
  const double nu = bilat::exterior_velocity(e, 0.0, kSpec.well_mass);
  for (auto _ : state) benchmark::DoNotOptimize(bilat::kard_decompose(w, nu));
}
BENCHMARK(BM_kard_decompose);

void BM_sweep_point(benchmark::State& state) {
  const bilat::Device dev =
      bilat::build_biperiodic(kSpec, 6, bilat::Ordering::WideFirst);
  double e = 92.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilat::sweep(dev, std::vector<double>{e}));
    e = e < 96.5 ? e + 0.001 : 92.0;
  }
}
BENCHMARK(BM_sweep_point);

void BM_integrate_w(benchmark::State& state) {
  const bilat::Device dev =
      bilat::build_biperiodic(kSpec, 2, bilat::Ordering::WideFirst);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(bilat::integrate_w(dev, 100.0, {h, false}));
}
BENCHMARK(BM_integrate_w)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
