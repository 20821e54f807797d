#include "ltvcomm/expr.hpp"
#include "ltvcomm/system.hpp"

#include <benchmark/benchmark.h>

namespace {

const char* const kStiffness = "3.25 + 0.25*sin(t)^2 + 1.5*sin(t) + 0.5*cos(t)";

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::parse(kStiffness));
}
BENCHMARK(BM_Parse);

void BM_Eval(benchmark::State& state) {
    const ltvcomm::CoeffExpr e = ltvcomm::parse(kStiffness);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e.eval(t));
        t += 1e-3;
    }
}
BENCHMARK(BM_Eval);

void BM_Derivative(benchmark::State& state) {
    const ltvcomm::CoeffExpr e = ltvcomm::parse(kStiffness);
    for (auto _ : state) benchmark::DoNotOptimize(e.derivative());
}
BENCHMARK(BM_Derivative);

void BM_InvariantConstancy(benchmark::State& state) {
    const ltvcomm::LTVSystem a = ltvcomm::make_system("1", "3 + sin(t)", kStiffness);
    const ltvcomm::TimeGrid grid = ltvcomm::default_grid(0.0);
    for (auto _ : state) benchmark::DoNotOptimize(ltvcomm::commutativity_invariant(a, grid));
}
BENCHMARK(BM_InvariantConstancy);

}  // namespace
