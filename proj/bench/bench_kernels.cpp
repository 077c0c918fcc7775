#include <benchmark/benchmark.h>

#include <vector>

#include "mdce/experiments.hpp"
#include "mdce/kernels.hpp"

namespace {

using namespace mdce;

struct Fixture {
  CircuitParams circuit;
  TrajectoryParams params;
  DriveSpectrum drive;
  std::vector<double> omegas;

  explicit Fixture(std::size_t points) {
    params = {TrajectoryKind::sinusoidal_acceleration, 13.725e18, constants::two_pi * 14.6e9, circuit.v};
    circuit = bias_for_modulation_depth(params, circuit);
    drive = trajectory_to_drive(params, circuit, 10);
    omegas.resize(points);
    for (std::size_t i = 0; i < points; ++i) omegas[i] = 3.0 * params.omega_d * (i + 1.0) / (points + 1.0);
  }
};

void BM_SpectrumSerial(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const ThermalInput th{0.025};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_serial(f.omegas, f.drive, f.circuit, th));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SpectrumParallel(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const ThermalInput th{0.025};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_parallel(f.omegas, f.drive, f.circuit, th));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Sweep(benchmark::State& state, Execution exec) {
  SweepSpec spec = preset_sweep(FigureId::nout_vs_abar);
  spec.grid.points = static_cast<int>(state.range(0));
  const CircuitParams circuit;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, circuit, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SpectrumSerial)->Arg(401)->Arg(4001);
BENCHMARK(BM_SpectrumParallel)->Arg(401)->Arg(4001);
BENCHMARK_CAPTURE(BM_Sweep, serial, mdce::Execution::serial)->Arg(101)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, parallel, mdce::Execution::parallel)->Arg(101)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  mdce::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
