#include "irisac/schemes.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace irisac;

struct Fixture {
  Scenario s;
  ChannelSet ch;
  ReflectDesign rf;
  ComplexMatrix rx;

  explicit Fixture(Mode mode, int n = 4) : s(desk_scenario(mode)) {
    s.config.M = s.config.N = n;
    ch = generate_channels(s.config, s.geometry, s.model, 7);
    Rng rng(7);
    rf = initial_reflect(ch, s.config, rng);
    rx = solve_p3_closed_form(ch, rf, s.config);
  }
};

void BM_CrbClosedForm(benchmark::State& state) {
  const Fixture f(Mode::sensing, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(crb_closed_form(f.ch, f.rx, f.rf, f.s.config));
}
BENCHMARK(BM_CrbClosedForm)->Arg(4)->Arg(8);

void BM_P3ClosedForm(benchmark::State& state) {
  const Fixture f(Mode::sensing);
  for (auto _ : state) benchmark::DoNotOptimize(solve_p3_closed_form(f.ch, f.rf, f.s.config));
}
BENCHMARK(BM_P3ClosedForm);

void BM_P3Numeric(benchmark::State& state) {
  const Fixture f(Mode::sensing);
  for (auto _ : state) benchmark::DoNotOptimize(solve_p3_numeric(f.ch, f.rf, f.s.config));
}
BENCHMARK(BM_P3Numeric)->Unit(benchmark::kMillisecond);

void BM_PhaseSdr(benchmark::State& state) {
  const Fixture f(Mode::sensing, static_cast<int>(state.range(0)));
  const ComplexMatrix m = phase_power_matrix(f.ch, f.rx, f.rf.p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_phase_sdr(m));
}
BENCHMARK(BM_PhaseSdr)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_P5(benchmark::State& state) {
  const Fixture f(Mode::isac);
  for (auto _ : state) benchmark::DoNotOptimize(solve_p5(f.ch, f.rf, f.s.config));
}
BENCHMARK(BM_P5)->Unit(benchmark::kMillisecond);

void BM_AoSensing(benchmark::State& state) {
  const Fixture f(Mode::sensing);
  for (auto _ : state) benchmark::DoNotOptimize(ao_sensing(f.ch, f.s.config, 7));
}
BENCHMARK(BM_AoSensing)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
