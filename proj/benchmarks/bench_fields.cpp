#include "bench_harness.hpp"
#include "nibtower/tower.hpp"

using namespace nibtower;

NIBTOWER_BENCH(unit_group_structure_5040_cached) {
    auto g = unit_group_structure(5040);
    if (g.order() != 1152) std::abort();
}

NIBTOWER_BENCH(field_canonicalize_maxraw_420) {
    auto f = AbelianField::max_real(420);
    if (f.degree() != 48) std::abort();
}

NIBTOWER_BENCH(character_group_zeta_105) {
    auto f = AbelianField::cyclotomic(105);
    if (f.character_group().size() != 48) std::abort();
}

NIBTOWER_BENCH(canonical_split_scan_n_40) {
    int split_count = 0;
    for (i64 n : {15, 21, 24, 35, 40}) {
        auto level = UnitGroup::make(n);
        auto subs = intermediate_subgroups(Subgroup::trivial(level), Subgroup::full(level), 1000);
        for (const auto& hl : subs)
            for (const auto& hk : subs) {
                if (!hk.contains(hl)) continue;
                Tower t(AbelianField::rationals(), AbelianField::from_subgroup(hk),
                        AbelianField::from_subgroup(hl));
                if (is_arithmetically_split(t).split) ++split_count;
            }
    }
    if (split_count == 0) std::abort();
}
