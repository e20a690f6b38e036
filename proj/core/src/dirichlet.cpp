#include "nibtower/dirichlet.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace nibtower {

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> level,
                                       std::vector<i64> gen_exponents)
    : level_(std::move(level)), t_(std::move(gen_exponents)) {
    const auto& d = level_->invariant_factors();
    if (t_.size() != d.size()) throw precondition_error("character: arity mismatch");
    const i64 m = level_->exponent();
    i64 g = m;
    for (std::size_t i = 0; i < t_.size(); ++i) {
        t_[i] %= m;
        if (t_[i] < 0) t_[i] += m;
        // value at generator i must be a d_i-th root of unity
        if (mulmod(t_[i] % m, d[i] % m, m) != 0)
            throw precondition_error("character: exponent not compatible with generator order");
        g = std::gcd(g, t_[i]);
    }
    order_ = m / g;

    // conductor: least divisor f of n with chi trivial on {a = 1 mod f}
    const i64 n = level_->modulus();
    for (i64 f : divisors(n)) {
        bool trivial = true;
        for (i64 a = 1; a < n && trivial; a += f) {
            if (std::gcd(a, n) != 1) continue;
            if (value_exponent_at_level(a) != 0) trivial = false;
        }
        if (trivial) {
            conductor_ = f;
            break;
        }
    }
}

i64 DirichletCharacter::value_exponent_at_level(i64 a) const {
    const auto& e = level_->dlog(a);
    const i64 m = level_->exponent();
    i64 acc = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        acc = (acc + mulmod(t_[i], e[i] % m, m)) % m;
    return acc;
}

i64 DirichletCharacter::value_exponent(i64 a) const {
    i64 m = level_->exponent();
    i64 v = value_exponent_at_level(a);
    return v / (m / order_);
}

bool DirichletCharacter::is_odd() const {
    if (modulus() == 1) return false;
    return value_exponent_at_level(modulus() - 1) != 0;
}

bool DirichletCharacter::is_trivial_on(const Subgroup& h) const {
    const std::vector<i64>& gens =
        h.given_generators().empty() ? h.elements() : h.given_generators();
    for (i64 g : gens)
        if (value_exponent_at_level(g) != 0) return false;
    return true;
}

std::vector<i64> DirichletCharacter::value_exponents() const {
    const i64 m = level_->exponent();
    std::vector<i64> out;
    for (i64 t : t_) out.push_back(t / (m / order_));
    return out;
}

std::vector<i64> DirichletCharacter::dual_tuple() const {
    const auto& d = level_->invariant_factors();
    const i64 m = level_->exponent();
    std::vector<i64> out(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) out[i] = t_[i] / (m / d[i]);
    return out;
}

DirichletCharacter DirichletCharacter::from_dual_tuple(std::shared_ptr<const UnitGroup> level,
                                                       const std::vector<i64>& tuple) {
    const auto& d = level->invariant_factors();
    if (tuple.size() != d.size()) throw precondition_error("character tuple: arity mismatch");
    const i64 m = level->exponent();
    std::vector<i64> t(tuple.size());
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        i64 c = tuple[i] % d[i];
        if (c < 0) c += d[i];
        t[i] = c * (m / d[i]);
    }
    return DirichletCharacter(std::move(level), std::move(t));
}

DirichletCharacter DirichletCharacter::power(i64 k) const {
    const i64 m = level_->exponent();
    std::vector<i64> t(t_.size());
    i64 kk = k % m;
    if (kk < 0) kk += m;
    for (std::size_t i = 0; i < t_.size(); ++i) t[i] = mulmod(t_[i], kk, m);
    return DirichletCharacter(level_, std::move(t));
}

DirichletCharacter DirichletCharacter::times(const DirichletCharacter& o) const {
    if (modulus() != o.modulus()) throw precondition_error("character product: level mismatch");
    const i64 m = level_->exponent();
    std::vector<i64> t(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) t[i] = (t_[i] + o.t_[i]) % m;
    return DirichletCharacter(level_, std::move(t));
}

std::vector<DirichletCharacter> annihilator_characters(std::shared_ptr<const UnitGroup> level,
                                                       const Subgroup& h) {
    const auto& d = level->invariant_factors();
    std::vector<i64> test_gens =
        h.given_generators().empty() ? h.canonical_generators() : h.given_generators();
    std::vector<std::vector<i64>> gen_dlogs;
    for (i64 g : test_gens) gen_dlogs.push_back(level->dlog(g));

    const i64 m = level->exponent();
    std::vector<DirichletCharacter> out;
    std::vector<i64> tuple(d.size(), 0);
    while (true) {
        bool ok = true;
        for (const auto& e : gen_dlogs) {
            i64 acc = 0;
            for (std::size_t i = 0; i < d.size(); ++i)
                acc = (acc + mulmod(tuple[i] * (m / d[i]) % m, e[i] % m, m)) % m;
            if (acc != 0) { ok = false; break; }
        }
        if (ok) out.push_back(DirichletCharacter::from_dual_tuple(level, tuple));
        // odometer
        std::size_t i = d.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++tuple[i] < d[i]) { done = false; break; }
            tuple[i] = 0;
        }
        if (done) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// AbelianField

namespace {

// {a in (Z/nZ)^x : a = 1 mod f}, for f | n.
std::vector<i64> congruence_kernel(const UnitGroup& ug, i64 f) {
    const i64 n = ug.modulus();
    std::vector<i64> out;
    if (n == 1) return {0};
    for (i64 a = 1; a < n; a += f)
        if (std::gcd(a, n) == 1) out.push_back(a);
    if (out.empty()) out.push_back(1);
    return out;
}

bool subset_of_subgroup(const std::vector<i64>& elems, const Subgroup& h) {
    for (i64 a : elems)
        if (!h.contains(a)) return false;
    return true;
}

} // namespace

AbelianField::AbelianField(std::shared_ptr<const UnitGroup> level, Subgroup fixing)
    : level_(std::move(level)), fixing_(std::move(fixing)) {
    degree_ = level_->order() / fixing_.order();
    // inertia order at each prime dividing the conductor
    const i64 f = level_->modulus();
    for (auto [p, v] : factorize(f)) {
        i64 pv = 1;
        for (i64 i = 0; i < v; ++i) pv *= p;
        std::vector<i64> inertia = congruence_kernel(*level_, f / pv);
        Subgroup t = join(Subgroup(level_, inertia), fixing_);
        i64 ep = t.order() / fixing_.order();
        if (ep < 2) throw error("AbelianField: conductor prime with trivial inertia");
        ramification_[p] = ep;
    }
}

AbelianField AbelianField::from_subgroup(const Subgroup& h) {
    auto level = h.ambient();
    const i64 n = level->modulus();
    // conductor: least f | n whose congruence kernel lies in h
    i64 cond = n;
    for (i64 f : divisors(n)) {
        if (subset_of_subgroup(congruence_kernel(*level, f), h)) {
            cond = f;
            break;
        }
    }
    if (cond % 4 == 2) cond /= 2; // same kernel, canonical label
    auto clevel = UnitGroup::make(cond);
    std::set<i64> reduced;
    for (i64 a : h.elements()) reduced.insert(clevel->reduce(a));
    std::vector<i64> els(reduced.begin(), reduced.end());
    return AbelianField(clevel, Subgroup::from_sorted_elements(clevel, std::move(els)));
}

AbelianField AbelianField::rationals() {
    auto level = UnitGroup::make(1);
    return AbelianField(level, Subgroup::full(level));
}

AbelianField AbelianField::from_fixing_subgroup(i64 n, const std::vector<i64>& generators) {
    auto level = UnitGroup::make(n);
    return from_subgroup(Subgroup(level, generators));
}

AbelianField AbelianField::cyclotomic(i64 n) {
    auto level = UnitGroup::make(n);
    return from_subgroup(Subgroup::trivial(level));
}

AbelianField AbelianField::max_real(i64 n) {
    auto level = UnitGroup::make(n);
    return from_subgroup(Subgroup(level, {level->modulus() - 1}));
}

AbelianField AbelianField::cyclic_subfield(i64 p, i64 d) {
    if (!is_prime(p)) throw precondition_error("cyclic_subfield: p must be prime");
    if (d < 1 || (p - 1) % d != 0)
        throw precondition_error("cyclic_subfield: d must divide p-1");
    auto level = UnitGroup::make(p);
    i64 g = level->generators().empty() ? 1 : level->generators()[0];
    return from_subgroup(Subgroup(level, {powmod(g, d, p)}));
}

AbelianField AbelianField::from_characters(std::shared_ptr<const UnitGroup> level,
                                           const std::vector<DirichletCharacter>& chars) {
    std::vector<i64> kernel;
    for (i64 a : level->units()) {
        bool in_all = true;
        for (const auto& chi : chars)
            if (chi.value_exponent_at_level(a) != 0) { in_all = false; break; }
        if (in_all) kernel.push_back(a);
    }
    return from_subgroup(Subgroup::from_sorted_elements(level, std::move(kernel)));
}

std::vector<DirichletCharacter> AbelianField::character_group() const {
    return annihilator_characters(level_, fixing_);
}

bool AbelianField::is_totally_real() const {
    if (conductor() == 1) return true;
    return fixing_.contains(conductor() - 1);
}

i64 AbelianField::roots_of_unity_order() const {
    const i64 f = conductor();
    i64 best = 1;
    // Q(zeta_w) subfield of this field  <=>  H contained in {a = 1 mod w}
    for (i64 w : divisors(f)) {
        if (w % 4 == 2) continue;
        std::vector<i64> kw = congruence_kernel(*level_, w);
        Subgroup k = Subgroup::from_sorted_elements(level_, std::move(kw));
        if (k.contains(fixing_)) best = std::max(best, w);
    }
    return best % 2 == 1 ? 2 * best : best;
}

Subgroup AbelianField::fixing_subgroup_at(i64 n) const {
    auto big = UnitGroup::make(n);
    const i64 m = big->modulus();
    if (m % conductor() != 0)
        throw precondition_error("fixing_subgroup_at: conductor does not divide level");
    if (m == conductor()) return fixing_;
    if (conductor() == 1) return Subgroup::full(big);
    std::vector<i64> elems;
    for (i64 a : big->units())
        if (fixing_.contains(a % conductor())) elems.push_back(a);
    return Subgroup::from_sorted_elements(big, std::move(elems));
}

bool AbelianField::contains(const AbelianField& other) const {
    i64 m = lcm64(conductor(), other.conductor());
    Subgroup mine = fixing_subgroup_at(m);
    Subgroup theirs = other.fixing_subgroup_at(m);
    return theirs.contains(mine);
}

std::string AbelianField::describe() const {
    if (conductor() == 1) return "Q";
    std::string s = "Q(zeta_" + std::to_string(conductor()) + ")";
    if ((i64)degree_ == level_->order()) return s;
    return "deg-" + std::to_string(degree_) + " subfield of " + s;
}

AbelianField compositum(const AbelianField& a, const AbelianField& b) {
    i64 m = lcm64(a.conductor(), b.conductor());
    Subgroup ha = a.fixing_subgroup_at(m);
    Subgroup hb = b.fixing_subgroup_at(m);
    return AbelianField::from_subgroup(intersect(ha, hb));
}

AbelianField intersection(const AbelianField& a, const AbelianField& b) {
    i64 m = lcm64(a.conductor(), b.conductor());
    Subgroup ha = a.fixing_subgroup_at(m);
    Subgroup hb = b.fixing_subgroup_at(m);
    return AbelianField::from_subgroup(join(ha, hb));
}

bool linearly_disjoint(const AbelianField& a, const AbelianField& b) {
    return intersection(a, b).is_rationals();
}

bool arithmetically_disjoint(const AbelianField& a, const AbelianField& b) {
    if (!linearly_disjoint(a, b)) return false;
    for (auto [p, e] : a.ramification()) {
        (void)e;
        if (b.ramification().count(p)) return false;
    }
    return true;
}

std::map<i64, i64> ramification_data(const AbelianField& f) { return f.ramification(); }

i64 ramification_index(const AbelianField& f, i64 p) {
    auto it = f.ramification().find(p);
    return it == f.ramification().end() ? 1 : it->second;
}

i64 residue_degree(const AbelianField& f, i64 p) {
    if (f.conductor() == 1) return 1;
    if (f.conductor() % p == 0) {
        // pass to the inertia-fixed subfield, whose conductor is prime to p
        i64 v = padic_valuation(f.conductor(), p);
        i64 pv = 1;
        for (i64 i = 0; i < v; ++i) pv *= p;
        std::vector<i64> inertia;
        const i64 n = f.conductor();
        for (i64 a = 1; a < n; a += n / pv)
            if (std::gcd(a, n) == 1) inertia.push_back(a);
        Subgroup t = join(Subgroup(f.level(), inertia), f.fixing_subgroup());
        AbelianField f0 = AbelianField::from_subgroup(t);
        return residue_degree(f0, p);
    }
    // order of p in (Z/fZ)^x / H
    i64 k = 1;
    i64 pk = f.level()->reduce(p);
    while (!f.fixing_subgroup().contains(pk)) {
        pk = mulmod(pk, f.level()->reduce(p), f.conductor());
        ++k;
    }
    return k;
}

bool is_totally_real(const AbelianField& f) { return f.is_totally_real(); }
i64 roots_of_unity_order(const AbelianField& f) { return f.roots_of_unity_order(); }

ZetaQResult zeta_q_in_3power_closure(i64 q, const AbelianField& l) {
    if (q == 2 || !is_prime(q)) throw precondition_error("zeta_q test: q must be an odd prime");
    // Gal(Q(zeta_q)/Q) is cyclic of order q-1; only its 3-part can come from
    // the 3-power layer, so a finite cap suffices.
    i64 cap = padic_valuation(q - 1, 3) + padic_valuation(l.conductor(), 3) + 1;
    i64 three_pow = 1;
    for (i64 i = 0; i < cap; ++i) three_pow *= 3;
    AbelianField closure = compositum(l, AbelianField::cyclotomic(three_pow));
    bool contained = closure.contains(AbelianField::cyclotomic(q));
    return {contained, cap};
}

} // namespace nibtower
