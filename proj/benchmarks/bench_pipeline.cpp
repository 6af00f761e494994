#include <benchmark/benchmark.h>

#include <vector>

#include "pwret/frames.hpp"
#include "pwret/grid.hpp"
#include "pwret/measurement.hpp"
#include "pwret/recovery.hpp"
#include "pwret/signal.hpp"

namespace {

using namespace pwret;

ModulatorBank make_bank(int j) {
  return ModulatorBank(FrameFamily::canonical_k2(),
                       InterpolationGrid::shannon(1.0, 2, 1, -j - 1, j - 1));
}

void BM_Measure(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const TimeLimitedSignal x = TimeLimitedSignal::random(1.0, j, 42);
  const ModulatorBank bank = make_bank(j);
  for (auto _ : state) benchmark::DoNotOptimize(measure(x, bank));
}
BENCHMARK(BM_Measure)->Arg(8)->Arg(32);

void BM_RankOneRecover(benchmark::State& state) {
  const FrameFamily frame = FrameFamily::canonical_k2();
  const TimeLimitedSignal x = TimeLimitedSignal::random(1.0, 2, 7);
  std::vector<double> c(frame.count());
  for (int m = 0; m < frame.count(); ++m) {
    Complex s = 0.0;
    for (int k = 0; k < frame.dim(); ++k)
      s += std::conj(frame.vector(m)[k]) * x.coefficients()[k];
    c[m] = std::norm(s);
  }
  for (auto _ : state) benchmark::DoNotOptimize(rank_one_recover(c, frame));
}
BENCHMARK(BM_RankOneRecover);

void BM_RecoverRoundtrip(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const TimeLimitedSignal x = TimeLimitedSignal::random(1.0, j, 42);
  const ModulatorBank bank = make_bank(j);
  const MeasurementSet ms = measure(x, bank);
  RecoverOptions opt;
  opt.max_harmonic = j;
  opt.interval_length = 1.0;
  opt.backend = ReconstructionBackend::shannon_closed_form;
  for (auto _ : state) benchmark::DoNotOptimize(recover(ms, opt));
}
BENCHMARK(BM_RecoverRoundtrip)->Arg(8)->Arg(32);

void BM_GeneratingFunction(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  const InterpolationGrid grid =
      InterpolationGrid::shannon(1.0, 2, 1, -blocks - 1, blocks - 1);
  const std::vector<Complex> pts = grid.points();
  const double radius = kTwoPi * (blocks + 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(generating_function(pts, Complex(1.5, 0.0), radius));
}
BENCHMARK(BM_GeneratingFunction)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
