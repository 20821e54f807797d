#include "ltvcomm/commute.hpp"

#include <benchmark/benchmark.h>

namespace {

ltvcomm::LTVSystem system_a() {
    return ltvcomm::make_system("1", "3 + sin(t)", "3.25 + 0.25*sin(t)^2 + 1.5*sin(t) + 0.5*cos(t)");
}

void BM_SynthesizePair(benchmark::State& state) {
    const ltvcomm::LTVSystem a = system_a();
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::synthesize_pair(a, {1, -2, 0}));
}
BENCHMARK(BM_SynthesizePair);

void BM_CheckPair(benchmark::State& state) {
    const ltvcomm::LTVSystem a = system_a();
    const ltvcomm::LTVSystem b = ltvcomm::synthesize_pair(a, {1, -2, 0});
    const ltvcomm::TimeGrid grid{0.0, 10.0, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::check_pair(a, b, grid));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CheckPair)->Arg(101)->Arg(1001)->Arg(10001)->Arg(100001)->Complexity(benchmark::oN);

void BM_CheckTransitivity(benchmark::State& state) {
    const ltvcomm::LTVSystem a = system_a();
    const ltvcomm::LTVSystem b = ltvcomm::synthesize_pair(a, {1, -2, 0});
    const ltvcomm::LTVSystem c = ltvcomm::synthesize_pair(b, {1, 3, 3});
    const ltvcomm::TimeGrid grid = ltvcomm::default_grid(0.0);
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::check_transitivity(a, b, c, grid));
}
BENCHMARK(BM_CheckTransitivity);

}  // namespace
