#pragma once

// Minimal self-contained timing harness; keeps the benchmark sources in the
// usual register-and-run shape without an external dependency.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace bench {

struct Case {
    std::string name;
    std::function<void()> fn;
};

inline std::vector<Case>& registry() {
    static std::vector<Case> r;
    return r;
}

struct Register {
    Register(std::string name, std::function<void()> fn) {
        registry().push_back({std::move(name), std::move(fn)});
    }
};

inline int run_all() {
    std::printf("%-44s %12s %10s\n", "benchmark", "iterations", "ms/op");
    for (const auto& c : registry()) {
        c.fn(); // warmup
        int iters = 0;
        auto start = std::chrono::steady_clock::now();
        double elapsed = 0;
        while (elapsed < 0.25 && iters < 1000000) {
            c.fn();
            ++iters;
            elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        }
        std::printf("%-44s %12d %10.3f\n", c.name.c_str(), iters, 1e3 * elapsed / iters);
    }
    return 0;
}

} // namespace bench

#define NIBTOWER_BENCH(name)                                            \
    static void bench_fn_##name();                                      \
    static bench::Register bench_reg_##name(#name, bench_fn_##name);    \
    static void bench_fn_##name()
