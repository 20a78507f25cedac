// Microbenchmarks for the hot paths: beamformer construction, quantizer
// engines, spectral integrals, and the end-to-end trial loop.  Run with
// --benchmark_filter=... to select; not wired into ctest.
#include <benchmark/benchmark.h>

#include "mimofb/channel.hpp"
#include "mimofb/fading.hpp"
#include "mimofb/feedback.hpp"
#include "mimofb/montecarlo.hpp"
#include "mimofb/rng.hpp"

using namespace mfb;

namespace {

void BM_ZfBeamformer(benchmark::State& state) {
  const int m = int(state.range(0));
  Rng rng = Rng::from_path(1, {0, 0, 0, 0});
  ChannelRealization real = sample_iid_channel(m, m, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zf_beamformer(real.h_csit));
  }
}
BENCHMARK(BM_ZfBeamformer)->Arg(2)->Arg(4)->Arg(8);

void BM_RvqStreaming(benchmark::State& state) {
  const int bits = int(state.range(0));
  Rng rng = Rng::from_path(2, {0, 0, 0, 0});
  CVec h(4);
  for (int i = 0; i < 4; ++i) h(i) = rng.cgauss();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvq_quantize_streaming(h, bits, rng));
  }
  state.SetItemsProcessed(state.iterations() << bits);
}
BENCHMARK(BM_RvqStreaming)->Arg(8)->Arg(12)->Arg(16);

void BM_RvqSampled(benchmark::State& state) {
  const int bits = int(state.range(0));
  Rng rng = Rng::from_path(3, {0, 0, 0, 0});
  CVec h(4);
  for (int i = 0; i < 4; ++i) h(i) = rng.cgauss();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvq_sample_quantized_direction(h, bits, rng));
  }
}
BENCHMARK(BM_RvqSampled)->Arg(16)->Arg(53);

void BM_JakesPredictionMmse(benchmark::State& state) {
  const double delta = 1.0 / double(state.range(0));
  const FadingProcess process = FadingProcess::jakes(0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prediction_mmse(process, delta));
  }
}
BENCHMARK(BM_JakesPredictionMmse)->Arg(10)->Arg(1000);

void BM_AnalogScenarioPoint(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.m = 4;
  cfg.snr_grid_db = {20.0};
  cfg.trials = state.range(0);
  cfg.seed = 5;
  cfg.workers = 1;
  cfg.scheme = AnalogScheme{1.0, 0, FadingProcess::iid_block()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_AnalogScenarioPoint)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
