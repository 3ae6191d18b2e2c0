#include <cmath>

#include <benchmark/benchmark.h>

#include "mctx/enzyme_tx.hpp"
#include "mctx/ideal_tx.hpp"
#include "mctx/pbs.hpp"
#include "mctx/receiver.hpp"

namespace {

mctx::PermeabilityWaveform triple() {
  const std::vector<double> t{0, 5, 10, 15, 20, 25};
  return mctx::waveform_instantaneous(t, mctx::SystemConfig{}.rho_max);
}

void BM_IdealStep(benchmark::State& state) {
  const auto p = mctx::make_ideal_params(mctx::SystemConfig{}, 0.1);
  mctx::IdealTxState s;
  for (auto _ : state) {
    s = mctx::step_ideal(s, 2.7e-2, p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_IdealStep);

void BM_PracticalStep(benchmark::State& state) {
  const auto p = mctx::make_practical_params(mctx::SystemConfig{}, mctx::EnzymeRates{});
  mctx::EnzymeTxState s;
  s.C_E = 2 / (p.V_in * p.N_a);
  for (auto _ : state) {
    s = mctx::step_practical(s, 2.7e-2, p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PracticalStep);

// 30 s of simulated time at T = 1e-4 s.
void BM_Simulate30s(benchmark::State& state) {
  const auto w = triple();
  const bool enzyme = state.range(0) == 1;
  for (auto _ : state) {
    if (enzyme) {
      benchmark::DoNotOptimize(mctx::simulate_practical(
          mctx::make_practical_params(mctx::SystemConfig{}, mctx::EnzymeRates{}), 2, w, 30, 100));
    } else {
      benchmark::DoNotOptimize(
          mctx::simulate_ideal(mctx::make_ideal_params(mctx::SystemConfig{}, 0.1), w, 30, 100));
    }
  }
  state.SetLabel(enzyme ? "enzyme" : "ideal");
}
BENCHMARK(BM_Simulate30s)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ReceiverConvolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> released(n);
  for (std::size_t i = 0; i < n; ++i) released[i] = static_cast<double>(i / 100);
  const mctx::PointSourceHitting model(mctx::ReceiverConfig{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mctx::absorbed_series(released, 0.01, model));
  }
}
BENCHMARK(BM_ReceiverConvolution)->Arg(1000)->Arg(3001)->Unit(benchmark::kMillisecond);

// One particle trajectory: 1 s open, 1 s closed.
void BM_ParticleRun(benchmark::State& state) {
  mctx::pbs::PbsConfig cfg;
  cfg.k_AB = 1;
  cfg.mode = state.range(0) == 1 ? mctx::pbs::Mode::Enzyme : mctx::pbs::Mode::IdealFirstOrder;
  const std::vector<double> t{0, 1};
  const auto w = mctx::waveform_instantaneous(t, cfg.sys.rho_max);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mctx::pbs::run_single(cfg, w, 2.0, seed++));
  }
  state.SetLabel(state.range(0) == 1 ? "enzyme" : "first-order");
}
BENCHMARK(BM_ParticleRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RadialStep(benchmark::State& state) {
  mctx::pbs::Rng rng(3);
  const double sigma = std::sqrt(2 * 2.6e-12 * 1e-4);
  double r = 40e-9;
  for (auto _ : state) {
    const auto step = mctx::pbs::radial_step(sigma, rng);
    const double next = mctx::pbs::stepped_radius(r, step);
    r = next > 80e-9 ? mctx::pbs::reflected_radius(r, step, 80e-9) : next;
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_RadialStep);

}  // namespace

BENCHMARK_MAIN();
