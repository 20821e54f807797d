#include <benchmark/benchmark.h>

// The distro's prebuilt benchmark_main archive is LTO bytecode from a
// different compiler version, so the entry point is built here.
BENCHMARK_MAIN();
