#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "nibtower/tower.hpp"

using namespace nibtower;

namespace {

AbelianField q() { return AbelianField::rationals(); }

Tower tower_31() {
    return Tower(q(), AbelianField::cyclic_subfield(31, 3), AbelianField::cyclic_subfield(31, 15));
}

} // namespace

TEST_CASE("make_tower: examples") {
    auto l = AbelianField::cyclotomic(20);
    Tower t(q(), q(), l);
    for (auto& [p, rel] : t.ramification_table()) {
        (void)p;
        CHECK(rel.e_lower == 1);
    }

    // (Q, cubic cond 31, degree-15 cond 31): table {31 -> (3, 5)}
    Tower t31 = tower_31();
    REQUIRE(t31.ramification_table().count(31) == 1);
    CHECK(t31.ramification_table().at(31) == RelativeRamification{3, 5});
    CHECK(t31.degree_top_over_middle() == 5);

    CHECK_THROWS_AS(Tower(q(), AbelianField::cyclotomic(7), AbelianField::cyclotomic(5)),
                    not_a_tower_error);
}

TEST_CASE("has_disjoint_ramification: examples") {
    // Q(zeta15)/Q(zeta15)+/Q is unramified in the top layer at finite primes
    Tower t(q(), AbelianField::max_real(15), AbelianField::cyclotomic(15));
    auto r = has_disjoint_ramification(t);
    CHECK(r.disjoint);
    CHECK(r.witnesses.empty());

    auto r31 = has_disjoint_ramification(tower_31());
    CHECK(!r31.disjoint);
    CHECK(r31.witnesses == std::vector<i64>{31});

    auto cubic9 = AbelianField::from_fixing_subgroup(9, {8});
    Tower t3(q(), cubic9, compositum(cubic9, AbelianField::max_real(7)));
    CHECK(has_disjoint_ramification(t3).disjoint);
}

TEST_CASE("ramification_module: examples") {
    Tower unram(q(), AbelianField::max_real(15), AbelianField::cyclotomic(15));
    auto m0 = ramification_module(unram);
    CHECK(m0.primes.empty());
    CHECK(m0.top_is_cm);

    auto m31 = ramification_module(tower_31());
    CHECK(m31.primes == std::vector<i64>{31});
    CHECK(m31.orders == std::vector<i64>{5});
    CHECK(m31.j_action == std::vector<std::size_t>{0});
    CHECK(!m31.top_is_cm);

    Tower t7(q(), q(), AbelianField::cyclotomic(7));
    auto m7 = ramification_module(t7);
    CHECK(m7.primes == std::vector<i64>{7});
    CHECK(m7.orders == std::vector<i64>{6});
    CHECK(m7.top_is_cm);
}

TEST_CASE("canonical_split: examples") {
    // K = Q: the complement is L itself
    auto l = AbelianField::cyclotomic(9);
    auto c = canonical_split(Tower(q(), q(), l));
    REQUIRE(c.has_value());
    CHECK(*c == l);

    // component stripping picks out Q(zeta7)+ over the cubic of conductor 9
    auto cubic9 = AbelianField::from_fixing_subgroup(9, {8});
    auto real7 = AbelianField::max_real(7);
    auto cc = canonical_split(Tower(q(), cubic9, compositum(real7, cubic9)));
    REQUIRE(cc.has_value());
    CHECK(*cc == real7);

    // Q(zeta15)/Q(zeta15)+ is not arithmetically split
    auto none = canonical_split(Tower(q(), AbelianField::max_real(15), AbelianField::cyclotomic(15)));
    CHECK(!none.has_value());
}

TEST_CASE("is_arithmetically_split with re-verification") {
    auto cubic9 = AbelianField::from_fixing_subgroup(9, {8});
    auto real7 = AbelianField::max_real(7);

    auto v1 = is_arithmetically_split(Tower(q(), q(), AbelianField::cyclotomic(5)));
    CHECK(v1.split);
    CHECK(*v1.complement == AbelianField::cyclotomic(5));

    auto v2 = is_arithmetically_split(Tower(q(), cubic9, compositum(real7, cubic9)));
    CHECK(v2.split);
    CHECK(compositum(*v2.complement, cubic9) == compositum(real7, cubic9));
    CHECK(arithmetically_disjoint(*v2.complement, cubic9));

    auto v3 = is_arithmetically_split(Tower(q(), AbelianField::max_real(15), AbelianField::cyclotomic(15)));
    CHECK(!v3.split);

    // arithmetically split implies disjoint ramification
    Tower ts(q(), cubic9, compositum(real7, cubic9));
    CHECK(has_disjoint_ramification(ts).disjoint);
}

TEST_CASE("exhaustive_split_oracle: examples and agreement") {
    CHECK(exhaustive_split_oracle(Tower(q(), q(), AbelianField::cyclotomic(7))));
    CHECK(!exhaustive_split_oracle(
        Tower(q(), AbelianField::max_real(15), AbelianField::cyclotomic(15))));

    // hand-built product: X_L = X_{L'} x X_K with disjoint ramification
    auto cubic9 = AbelianField::from_fixing_subgroup(9, {8});
    auto real7 = AbelianField::max_real(7);
    Tower t(q(), cubic9, compositum(real7, cubic9));
    CHECK(exhaustive_split_oracle(t));
    auto w = exhaustive_split_witness(t);
    REQUIRE(w.has_value());
    CHECK(compositum(*w, cubic9) == t.top());

    CHECK_THROWS_AS(exhaustive_split_oracle(Tower(q(), q(), AbelianField::cyclotomic(7)), 2),
                    bound_exceeded_error);
}

TEST_CASE("canonical and oracle verdicts agree on towers inside Q(zeta_n), n <= 40") {
    // full agreement for n <= 60 runs in the acceptance suite; a faster sweep here
    i64 towers = 0;
    for (i64 n : {5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 28, 31, 33, 35, 36, 39, 40}) {
        auto level = UnitGroup::make(n);
        auto subs = intermediate_subgroups(Subgroup::trivial(level), Subgroup::full(level), 100);
        for (const auto& hl : subs) {
            for (const auto& hk : subs) {
                if (!hk.contains(hl)) continue;
                AbelianField l = AbelianField::from_subgroup(hl);
                AbelianField k = AbelianField::from_subgroup(hk);
                Tower t(q(), k, l);
                bool canonical = is_arithmetically_split(t).split;
                bool oracle = exhaustive_split_oracle(t);
                CHECK(canonical == oracle);
                ++towers;
            }
        }
    }
    CHECK(towers > 300);
}

TEST_CASE("multiplicativity of ramification indices on random towers") {
    std::mt19937_64 rng(5150);
    std::vector<i64> moduli{5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 28, 33, 35, 45, 63};
    int built = 0;
    while (built < 1000) {
        i64 n = moduli[rng() % moduli.size()];
        auto level = UnitGroup::make(n);
        // random chain H_L <= H_K <= H_k via random generators
        auto random_subgroup = [&](const Subgroup& lower) {
            std::vector<i64> gens = lower.elements();
            int extra = (int)(rng() % 3);
            for (int i = 0; i < extra; ++i)
                gens.push_back(level->units()[rng() % level->units().size()]);
            return Subgroup(level, gens);
        };
        Subgroup hl = random_subgroup(Subgroup::trivial(level));
        Subgroup hk = random_subgroup(hl);
        Subgroup hb = random_subgroup(hk);
        AbelianField l = AbelianField::from_subgroup(hl);
        AbelianField k = AbelianField::from_subgroup(hk);
        AbelianField b = AbelianField::from_subgroup(hb);
        Tower t(b, k, l);
        for (auto& [p, rel] : t.ramification_table()) {
            CHECK(ramification_index(t.top(), p) ==
                  rel.e_lower * rel.e_upper * ramification_index(t.base(), p));
        }
        ++built;
    }
}

TEST_CASE("cyclic_prime_power_decomposition: examples") {
    // L = K: empty
    auto k15 = AbelianField::max_real(15);
    CHECK(cyclic_prime_power_decomposition(Tower(q(), k15, k15)).empty());

    // quotient cyclic of order 5: a single factor, the top itself
    auto d31 = cyclic_prime_power_decomposition(tower_31());
    REQUIRE(d31.size() == 1);
    CHECK(d31[0] == AbelianField::cyclic_subfield(31, 15));

    // compositum of two cubics over Q: two cubic factors
    auto cubic7 = AbelianField::cyclic_subfield(7, 3);
    auto cubic9 = AbelianField::from_fixing_subgroup(9, {8});
    Tower t(q(), q(), compositum(cubic7, cubic9));
    auto parts = cyclic_prime_power_decomposition(t);
    REQUIRE(parts.size() == 2);
    AbelianField comp = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) comp = compositum(comp, parts[i]);
    CHECK(comp == t.top());
    for (const auto& f : parts) {
        auto g = relative_galois_structure(t.middle(), f);
        CHECK(g.invariant_factors == std::vector<i64>{3});
    }

    // relative galois structure of the compositum itself
    auto g = relative_galois_structure(q(), t.top());
    CHECK(g.invariant_factors == std::vector<i64>{3, 3});
}
