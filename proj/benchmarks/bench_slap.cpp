#include <benchmark/benchmark.h>

#include "slap/conversion.hpp"
#include "slap/experiments.hpp"
#include "slap/messages.hpp"
#include "slap/rng.hpp"

namespace {

void BM_Conversion(benchmark::State& state) {
    const auto length = static_cast<std::size_t>(state.range(0));
    slap::Rng rng(1);
    const slap::BitString a = slap::random_bitstring(length, rng);
    const slap::BitString b = slap::random_bitstring(length, rng);
    for (auto _ : state) benchmark::DoNotOptimize(slap::conversion(a, b, slap::Threshold{6}));
}
BENCHMARK(BM_Conversion)->Arg(32)->Arg(96);

void BM_GroupingSchema(benchmark::State& state) {
    const auto length = static_cast<std::size_t>(state.range(0));
    slap::Rng rng(2);
    const slap::BitString a = slap::random_bitstring(length, rng);
    for (auto _ : state) benchmark::DoNotOptimize(slap::grouping_schema(a, slap::Threshold{6}));
}
BENCHMARK(BM_GroupingSchema)->Arg(32)->Arg(96);

void BM_BuildB(benchmark::State& state) {
    const auto length = static_cast<std::size_t>(state.range(0));
    const slap::ProtocolParams p{length, slap::Threshold{6}, state.range(1) != 0};
    slap::Rng rng(3);
    const slap::BitString k1 = slap::random_bitstring(length, rng);
    const slap::BitString k2 = slap::random_bitstring(length, rng);
    const slap::BitString n = slap::random_bitstring(length, rng);
    const slap::BitString A = slap::build_A(k1, k2, n, p);
    for (auto _ : state) benchmark::DoNotOptimize(slap::build_B_for(k1, k2, n, A, p));
}
BENCHMARK(BM_BuildB)->Args({32, 0})->Args({32, 1})->Args({96, 0})->Args({96, 1});

void BM_Preimage(benchmark::State& state) {
    slap::Rng rng(4);
    const slap::BitString target = slap::random_bitstring(32, rng);
    for (auto _ : state) benchmark::DoNotOptimize(slap::preimage(target, slap::Threshold{6}, 3));
}
BENCHMARK(BM_Preimage);

void BM_SweepAll30(benchmark::State& state) {
    slap::ExperimentConfig cfg;
    cfg.trials = 100;
    const auto flips = slap::candidate_flips(slap::FlipSides::both);
    for (auto _ : state) benchmark::DoNotOptimize(slap::sweep_flips(cfg, flips, false).any_hits);
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SweepAll30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
