#include <benchmark/benchmark.h>

#include "pakf/adapt.hpp"
#include "pakf/baseline.hpp"
#include "pakf/corpus.hpp"
#include "pakf/kalman.hpp"
#include "pakf/recon.hpp"
#include "pakf/rts.hpp"
#include "pakf/synth.hpp"

using namespace pakf;

namespace {

SynthTrace noisy_trace(std::size_t nt) {
  SynthSpec spec;
  spec.nt = nt;
  spec.pulse_time_s = static_cast<double>(nt / 2) * spec.dt;
  spec.seed = 1;
  return synth_trace(spec);
}

void BM_kf_filter(benchmark::State& state) {
  const auto st = noisy_trace(static_cast<std::size_t>(state.range(0)));
  const FilterParams p = pipeline_params(st.trace, 1e-4, 2.5e-3);
  for (auto _ : state) benchmark::DoNotOptimize(kf_filter(st.trace, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_kf_filter)->Arg(512)->Arg(2048)->Arg(8192);

void BM_denoise_trace(benchmark::State& state) {
  const auto st = noisy_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(denoise_trace(st.trace, 1e-4, 2.5e-3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_denoise_trace)->Arg(512)->Arg(2048)->Arg(8192);

void BM_lowpass(benchmark::State& state) {
  const auto st = noisy_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lowpass(st.trace, kDefaultLowpassCutoffHz));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_lowpass)->Arg(512)->Arg(2048);

void BM_envelope(benchmark::State& state) {
  const auto st = noisy_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(envelope(st.trace));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_envelope)->Arg(512)->Arg(2048)->Arg(8192);

void BM_pipeline_denoise(benchmark::State& state) {
  const auto sv = corpus_entry("phantom-L").generate();
  const std::size_t w = default_noise_window(sv.volume.nt());
  for (auto _ : state) benchmark::DoNotOptimize(pipeline_denoise(sv.volume, &sv.background, 1e-5, w));
}
BENCHMARK(BM_pipeline_denoise)->Unit(benchmark::kMillisecond);

void BM_select_q(benchmark::State& state) {
  const auto& e = corpus_entry("phantom-L");
  const auto sv = e.generate();
  const std::size_t w = default_noise_window(sv.volume.nt());
  for (auto _ : state) benchmark::DoNotOptimize(select_q_auto(sv.volume, e.n_sample, 1, w, e.roi));
}
BENCHMARK(BM_select_q)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
