#include <benchmark/benchmark.h>

// The distro's benchmark_main archive carries LTO bytecode from another
// compiler release, so the entry point is defined here instead.
BENCHMARK_MAIN();
