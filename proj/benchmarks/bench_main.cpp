#include "bench_harness.hpp"

int main() { return bench::run_all(); }
