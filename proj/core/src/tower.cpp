#include "nibtower/tower.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace nibtower {

Tower::Tower(AbelianField base, AbelianField middle, AbelianField top)
    : base_(std::move(base)), middle_(std::move(middle)), top_(std::move(top)) {
    if (!middle_.contains(base_) || !top_.contains(middle_))
        throw not_a_tower_error("tower containment fails");
    std::set<i64> primes;
    for (auto [p, e] : top_.ramification()) {
        (void)e;
        primes.insert(p);
    }
    for (i64 p : primes) {
        i64 ek = ramification_index(base_, p);
        i64 em = ramification_index(middle_, p);
        i64 et = ramification_index(top_, p);
        if (em % ek != 0 || et % em != 0)
            throw error("tower: ramification indices fail multiplicativity");
        RelativeRamification rel{em / ek, et / em};
        if (et / ek > 1) table_[p] = rel;
    }
}

DisjointRamificationResult has_disjoint_ramification(const Tower& t) {
    DisjointRamificationResult out;
    for (auto& [p, rel] : t.ramification_table())
        if (rel.e_lower > 1 && rel.e_upper > 1) out.witnesses.push_back(p);
    out.disjoint = out.witnesses.empty();
    return out;
}

RamModule ramification_module(const Tower& t) {
    RamModule m;
    for (auto& [p, rel] : t.ramification_table()) {
        if (rel.e_upper <= 1) continue;
        m.primes.push_back(p);
        m.orders.push_back(rel.e_upper);
    }
    // complex conjugation fixes every rational-prime block: identity, but
    // recorded rather than implied
    m.j_action.resize(m.primes.size());
    for (std::size_t i = 0; i < m.j_action.size(); ++i) m.j_action[i] = i;
    m.top_is_cm = !t.top().is_totally_real();
    return m;
}

namespace {

// CRT projection of a unit mod n: keep the residue at prime blocks outside S,
// replace blocks at primes of S by 1.
i64 strip_units_at(i64 x, i64 n, const std::set<i64>& s) {
    if (n == 1) return 0;
    std::vector<i64> residues, moduli;
    for (auto [p, e] : factorize(n)) {
        i64 pe = 1;
        for (i64 i = 0; i < e; ++i) pe *= p;
        moduli.push_back(pe);
        residues.push_back(s.count(p) ? 1 : x % pe);
    }
    return crt(residues, moduli);
}

} // namespace

AbelianField strip_ramified_components(const AbelianField& top, const std::vector<i64>& s) {
    const i64 n = top.conductor();
    auto level = top.level();
    std::set<i64> sset(s.begin(), s.end());
    // fixing subgroup of the stripped character group is the preimage of H
    // under the CRT projection
    std::vector<i64> elems;
    for (i64 a : level->units()) {
        i64 y = strip_units_at(a, n, sset);
        if (n == 1 || top.fixing_subgroup().contains(y)) elems.push_back(a);
    }
    return AbelianField::from_subgroup(Subgroup::from_sorted_elements(level, std::move(elems)));
}

std::optional<AbelianField> canonical_split(const Tower& t) {
    if (!t.base_is_rationals())
        throw precondition_error("canonical_split: base must be Q");
    std::vector<i64> s;
    for (auto [p, e] : t.middle().ramification()) {
        (void)e;
        s.push_back(p);
    }
    AbelianField candidate = strip_ramified_components(t.top(), s);
    if (!(compositum(candidate, t.middle()) == t.top())) return std::nullopt;
    if (!arithmetically_disjoint(candidate, t.middle())) return std::nullopt;
    return candidate;
}

namespace {

// relative arithmetic disjointness of F and K over k: linear disjointness
// over k plus no common rational prime ramified in F/k and K/k
bool relatively_arith_disjoint(const AbelianField& f, const AbelianField& k_field,
                               const AbelianField& base) {
    if (!(intersection(f, k_field) == base)) return false;
    // e_{p,F/k} > 1 iff e_p(F) > e_p(k); same for K
    for (auto [p, e] : f.ramification()) {
        (void)e;
        if (ramification_index(f, p) > ramification_index(base, p) &&
            ramification_index(k_field, p) > ramification_index(base, p))
            return false;
    }
    return true;
}

std::vector<AbelianField> split_candidates(const Tower& t, i64 subgroup_bound) {
    if (t.top().degree() > subgroup_bound)
        throw bound_exceeded_error("split oracle: [top:Q] = " +
                                   std::to_string(t.top().degree()) + " exceeds bound " +
                                   std::to_string(subgroup_bound));
    const i64 n = t.top().conductor();
    Subgroup lower = t.top().fixing_subgroup();
    Subgroup upper = t.base().fixing_subgroup_at(n);
    std::vector<AbelianField> fields;
    for (const auto& h : intermediate_subgroups(lower, upper, subgroup_bound))
        fields.push_back(AbelianField::from_subgroup(h));
    std::sort(fields.begin(), fields.end(), [](const AbelianField& a, const AbelianField& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a < b;
    });
    return fields;
}

} // namespace

std::optional<AbelianField> exhaustive_split_witness(const Tower& t, i64 subgroup_bound) {
    for (const auto& f : split_candidates(t, subgroup_bound)) {
        if (!(compositum(f, t.middle()) == t.top())) continue;
        if (!relatively_arith_disjoint(f, t.middle(), t.base())) continue;
        return f;
    }
    return std::nullopt;
}

bool exhaustive_split_oracle(const Tower& t, i64 subgroup_bound) {
    return exhaustive_split_witness(t, subgroup_bound).has_value();
}

SplitnessVerdict is_arithmetically_split(const Tower& t, i64 subgroup_bound) {
    SplitnessVerdict v;
    if (t.base_is_rationals()) {
        v.method = "canonical";
        auto c = canonical_split(t);
        v.split = c.has_value();
        if (c) v.complement = std::move(*c);
        return v;
    }
    v.method = "oracle";
    auto w = exhaustive_split_witness(t, subgroup_bound);
    v.split = w.has_value();
    if (w) v.complement = std::move(*w);
    return v;
}

AbelianGroupStructure relative_galois_structure(const AbelianField& middle,
                                                const AbelianField& top) {
    if (!top.contains(middle)) throw not_a_tower_error("relative_galois_structure: not nested");
    const i64 n = top.conductor();
    auto level = top.level();
    std::vector<std::vector<i64>> xl, xk;
    for (const auto& chi : annihilator_characters(level, top.fixing_subgroup()))
        xl.push_back(chi.dual_tuple());
    for (const auto& chi : annihilator_characters(level, middle.fixing_subgroup_at(n)))
        xk.push_back(chi.dual_tuple());
    return quotient_structure(level->invariant_factors(), xl, xk);
}

std::vector<AbelianField> cyclic_prime_power_decomposition(const Tower& t) {
    const AbelianField& k_field = t.middle();
    const AbelianField& l_field = t.top();
    if (l_field == k_field) return {};
    const i64 n = l_field.conductor();
    auto level = l_field.level();
    Subgroup hk = k_field.fixing_subgroup_at(n);

    std::vector<std::vector<i64>> xl, xk;
    for (const auto& chi : annihilator_characters(level, l_field.fixing_subgroup()))
        xl.push_back(chi.dual_tuple());
    for (const auto& chi : annihilator_characters(level, hk))
        xk.push_back(chi.dual_tuple());
    AbelianGroupStructure q = quotient_structure(level->invariant_factors(), xl, xk);

    std::vector<AbelianField> out;
    for (std::size_t j = 0; j < q.invariant_factors.size(); ++j) {
        i64 order = q.invariant_factors[j];
        DirichletCharacter chi = DirichletCharacter::from_dual_tuple(level, q.generators[j]);
        for (auto [ell, e] : factorize(order)) {
            (void)e;
            i64 ell_pow = 1;
            i64 rest = order;
            while (rest % ell == 0) {
                rest /= ell;
                ell_pow *= ell;
            }
            DirichletCharacter part = chi.power(order / ell_pow);
            // field of <X_K, part>: units of H_K killed by part
            std::vector<i64> kernel;
            for (i64 a : hk.elements())
                if (part.value_exponent_at_level(a) == 0) kernel.push_back(a);
            out.push_back(AbelianField::from_subgroup(
                Subgroup::from_sorted_elements(level, std::move(kernel))));
        }
    }
    return out;
}

} // namespace nibtower
