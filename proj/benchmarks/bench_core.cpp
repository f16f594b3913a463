#include <benchmark/benchmark.h>

#include <random>

#include "episim/control.hpp"
#include "episim/dynamics.hpp"
#include "episim/experiments.hpp"
#include "episim/lifted.hpp"
#include "episim/spectral.hpp"
#include "episim/stability.hpp"
#include "episim/system_matrices.hpp"

namespace {

episim::PeriodicSchedule desk_schedule(int n) {
  episim::SyntheticNetSpec spec;
  spec.n = n;
  spec.ring_width = 1;
  spec.p = 3;
  spec.overlay.edge_prob = 0.1;
  spec.overlay.weight_min = 0.5;
  spec.overlay.weight_max = 1.5;
  spec.beta = 1.0;
  spec.delta = 15.0;
  return episim::generate_synthetic(spec, 0xBE7C4);
}

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const episim::SystemMatrices mats = episim::build_system_matrices(desk_schedule(n));
  episim::StateVector x = episim::StateVector::Constant(n, 0.5);
  long k = 0;
  for (auto _ : state) {
    x = episim::step(mats, k++, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Step)->Arg(16)->Arg(64)->Arg(256);

void BM_Simulate10k(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const episim::SystemMatrices mats = episim::build_system_matrices(desk_schedule(n));
  const episim::StateVector x0 = episim::StateVector::Constant(n, 0.5);
  for (auto _ : state) {
    const episim::Trajectory traj = episim::simulate(mats, x0, 10000);
    benchmark::DoNotOptimize(traj.states.back().data());
  }
}
BENCHMARK(BM_Simulate10k)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SpectralRadius(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  m /= static_cast<double>(n);
  for (auto _ : state) benchmark::DoNotOptimize(episim::spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->Arg(16)->Arg(64)->Arg(256);

void BM_Monodromy(benchmark::State& state) {
  const episim::SystemMatrices mats =
      episim::build_system_matrices(desk_schedule(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const episim::MonodromySet mono = episim::monodromy(mats);
    benchmark::DoNotOptimize(mono.rho.data());
  }
}
BENCHMARK(BM_Monodromy)->Arg(16)->Arg(64);

void BM_JsrBoundsDepth6(benchmark::State& state) {
  const episim::SystemMatrices mats =
      episim::build_system_matrices(desk_schedule(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const episim::JsrBounds bounds = episim::jsr_bounds(mats.m, 6);
    benchmark::DoNotOptimize(bounds.lower);
  }
}
BENCHMARK(BM_JsrBoundsDepth6)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ClassifyWithCertificate(benchmark::State& state) {
  const episim::PeriodicSchedule s = desk_schedule(static_cast<int>(state.range(0)));
  const episim::SystemMatrices mats = episim::build_system_matrices(s);
  for (auto _ : state) {
    const episim::StabilityReport report = episim::classify(s, mats, {});
    benchmark::DoNotOptimize(report.rho_monodromy);
  }
}
BENCHMARK(BM_ClassifyWithCertificate)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LiftedStep(benchmark::State& state) {
  const episim::SystemMatrices mats =
      episim::build_system_matrices(desk_schedule(static_cast<int>(state.range(0))));
  Eigen::VectorXd y =
      episim::lifted_initial_state(mats, episim::StateVector::Constant(mats.n, 0.5));
  for (auto _ : state) {
    y = episim::lifted_step(mats, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_LiftedStep)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
