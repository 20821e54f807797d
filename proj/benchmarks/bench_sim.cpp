#include "ltvcomm/commute.hpp"
#include "ltvcomm/sim.hpp"

#include <benchmark/benchmark.h>

#include <array>

namespace {

std::array<ltvcomm::LTVSystem, 2> pair_chain() {
    ltvcomm::LTVSystem a = ltvcomm::make_system("1", "3 + sin(t)", "3.25 + 0.25*sin(t)^2 + 1.5*sin(t) + 0.5*cos(t)");
    ltvcomm::LTVSystem b = ltvcomm::synthesize_pair(a, {1, -2, 0});
    a.ic = b.ic = ltvcomm::InitialState{1.0, -1.5};
    return {a, b};
}

ltvcomm::SimulationConfig example_config(ltvcomm::Integrator m) {
    ltvcomm::SimulationConfig cfg;
    cfg.integrator = m;
    cfg.input = ltvcomm::parse("40*sin(10*pi*t)");
    return cfg;
}

void BM_SimulatePairBS3(benchmark::State& state) {
    const auto chain = pair_chain();
    const auto cfg = example_config(ltvcomm::Integrator::BS3);
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::simulate_chain(chain, cfg));
}
BENCHMARK(BM_SimulatePairBS3)->Unit(benchmark::kMicrosecond);

void BM_SimulatePairRK4(benchmark::State& state) {
    const auto chain = pair_chain();
    const auto cfg = example_config(ltvcomm::Integrator::RK4Reference);
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::simulate_chain(chain, cfg));
}
BENCHMARK(BM_SimulatePairRK4)->Unit(benchmark::kMicrosecond);

void BM_ReferenceRun(benchmark::State& state) {
    const auto chain = pair_chain();
    const auto cfg = example_config(ltvcomm::Integrator::BS3);
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::reference_run(chain, cfg));
}
BENCHMARK(BM_ReferenceRun)->Unit(benchmark::kMillisecond);

}  // namespace
