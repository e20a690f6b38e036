#include "bench_harness.hpp"
#include "nibtower/resolvent.hpp"

using namespace nibtower;

NIBTOWER_BENCH(valuation_pattern_3_7) {
    if (!verify_valuation_pattern(3, 7).pass) std::abort();
}

NIBTOWER_BENCH(valuation_pattern_7_29) {
    if (!verify_valuation_pattern(7, 29).pass) std::abort();
}

NIBTOWER_BENCH(norm_compat_3_2_19) {
    auto rep = verify_norm_compat(3, 2, 19);
    if (!rep.congruent_mod_ell) std::abort();
}

NIBTOWER_BENCH(split_prime_phi_mod_p) {
    auto primes = split_prime(13, 36);
    if (primes.empty()) std::abort();
}
