#include <benchmark/benchmark.h>

#include "kidsim/analysis.hpp"
#include "kidsim/excitation.hpp"
#include "kidsim/pipeline.hpp"
#include "kidsim/tonegen.hpp"

using namespace kidsim;

namespace {

const ToneConfig kTone{4000, 65536, 6, kChainRate};

void BM_ToneGenFixed(benchmark::State& state) {
    SaturationCounter sat;
    ToneGenerator<CpxI32> gen(kTone, kCordicDefaultIterations, sat);
    for (auto _ : state) benchmark::DoNotOptimize(gen.block(16384));
    state.SetItemsProcessed(state.iterations() * 16384);
}
BENCHMARK(BM_ToneGenFixed);

void BM_InterpolatorFixed(benchmark::State& state) {
    SaturationCounter sat;
    ToneGenerator<CpxI32> gen(kTone, kCordicDefaultIterations, sat);
    Interpolator<CpxI32> interp(default_interp_taps(), sat);
    const auto block = gen.block(4096);
    for (auto _ : state) benchmark::DoNotOptimize(interp.push(block));
    state.SetItemsProcessed(state.iterations() * 4096 * kInterpFactor);
}
BENCHMARK(BM_InterpolatorFixed);

void BM_ChannelizerFixed(benchmark::State& state) {
    SaturationCounter sat;
    Channelizer<CpxI32> chan(6, default_channelizer_taps(), sat);
    ToneGenerator<CpxI32> gen(kTone, kCordicDefaultIterations, sat);
    auto block = gen.block(32768);
    for (auto& s : block.samples) s.q = 0;   // channelizer input is real
    for (auto _ : state) benchmark::DoNotOptimize(chan.push(block));
    state.SetItemsProcessed(state.iterations() * 32768);
}
BENCHMARK(BM_ChannelizerFixed);

void BM_ClosedLoopBlock(benchmark::State& state) {
    // One full-chain pass over a small modulus so the loop fits in a benchmark
    // iteration; items are 250 MHz input samples.
    RunConfig cfg;
    cfg.accumulator_modulus = 4096;
    cfg.duration = 8;
    cfg.settle_skip = 1;
    cfg.psd.segment_length = 8;
    cfg.bands = {{6, {250}}};
    for (auto _ : state) benchmark::DoNotOptimize(run_closed_loop(cfg));
    state.SetItemsProcessed(state.iterations() * (cfg.duration + cfg.settle_skip) * 4096);
}
BENCHMARK(BM_ClosedLoopBlock);

}  // namespace

BENCHMARK_MAIN();
