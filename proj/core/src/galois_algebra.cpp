#include "nibtower/galois_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace nibtower {

namespace {

GroupVec vec_add(const GroupVec& a, const GroupVec& b, const std::vector<i64>& factors) {
    GroupVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % factors[i];
    return out;
}

GroupVec vec_neg(const GroupVec& a, const std::vector<i64>& factors) {
    GroupVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (factors[i] - a[i]) % factors[i];
    return out;
}

GroupVec vec_scale(i64 c, const GroupVec& a, const std::vector<i64>& factors) {
    GroupVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        i64 r = mulmod(((c % factors[i]) + factors[i]) % factors[i], a[i], factors[i]);
        out[i] = r;
    }
    return out;
}

bool vec_is_zero(const GroupVec& a) {
    for (i64 x : a)
        if (x != 0) return false;
    return true;
}

i64 vec_order(const GroupVec& a, const std::vector<i64>& factors) {
    i64 o = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        o = std::lcm(o, factors[i] / std::gcd(factors[i], a[i]));
    return o;
}

// units congruent to 1 mod f, at level n (f | n)
std::vector<i64> congruence_kernel(i64 n, i64 f) {
    if (n == 1) return {0};
    std::vector<i64> out;
    for (i64 a = 1; a < n; a += f)
        if (std::gcd(a, n) == 1) out.push_back(a);
    if (out.empty()) out.push_back(1);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// GExtension

GExtension::GExtension(std::shared_ptr<const UnitGroup> level, AbelianGroupStructure g,
                       std::vector<GroupVec> generator_images)
    : level_(std::move(level)), g_(std::move(g)), images_(std::move(generator_images)) {
    const auto& orders = level_->invariant_factors();
    if (images_.size() != orders.size())
        throw precondition_error("GExtension: one image per unit-group generator required");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i].size() != g_.invariant_factors.size())
            throw precondition_error("GExtension: image arity mismatch");
        for (std::size_t j = 0; j < images_[i].size(); ++j) {
            i64 f = g_.invariant_factors[j];
            images_[i][j] = ((images_[i][j] % f) + f) % f;
        }
        if (orders[i] % vec_order(images_[i], g_.invariant_factors) != 0)
            throw precondition_error("GExtension: image order does not divide generator order");
    }
}

GExtension GExtension::identity_class(i64 n, AbelianGroupStructure g) {
    auto level = UnitGroup::make(n);
    std::vector<GroupVec> images(level->invariant_factors().size(),
                                 GroupVec(g.invariant_factors.size(), 0));
    return GExtension(level, std::move(g), std::move(images));
}

GroupVec GExtension::apply(i64 a) const {
    const auto& e = level_->dlog(a);
    GroupVec out(g_.invariant_factors.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i)
        out = vec_add(out, vec_scale(e[i], images_[i], g_.invariant_factors),
                      g_.invariant_factors);
    return out;
}

i64 GExtension::conductor() const {
    const i64 n = level_->modulus();
    for (i64 f : divisors(n)) {
        bool trivial = true;
        for (i64 a : congruence_kernel(n, f))
            if (!vec_is_zero(apply(a))) { trivial = false; break; }
        if (trivial) return f % 4 == 2 ? f / 2 : f;
    }
    return n;
}

GExtension GExtension::lift_to(i64 n) const {
    auto big = UnitGroup::make(n);
    if (big->modulus() % level_->modulus() != 0)
        throw precondition_error("GExtension::lift_to: level must be a multiple");
    if (big->modulus() == level_->modulus()) return *this;
    std::vector<GroupVec> images;
    for (i64 g : big->generators()) images.push_back(apply(g % level_->modulus()));
    return GExtension(big, g_, std::move(images));
}

Subgroup GExtension::kernel() const {
    std::vector<i64> elems;
    for (i64 a : level_->units())
        if (vec_is_zero(apply(a))) elems.push_back(a);
    return Subgroup::from_sorted_elements(level_, std::move(elems));
}

bool GExtension::is_identity_class() const {
    for (const auto& img : images_)
        if (!vec_is_zero(img)) return false;
    return true;
}

GExtension g_product(const GExtension& a, const GExtension& b) {
    if (!(a.group() == b.group())) throw precondition_error("g_product: group mismatch");
    i64 n = lcm64(a.level()->modulus(), b.level()->modulus());
    GExtension aa = a.lift_to(n), bb = b.lift_to(n);
    std::vector<GroupVec> images;
    for (std::size_t i = 0; i < aa.generator_images().size(); ++i)
        images.push_back(vec_add(aa.generator_images()[i], bb.generator_images()[i],
                                 a.group().invariant_factors));
    return GExtension(aa.level(), a.group(), std::move(images));
}

GExtension g_inverse(const GExtension& a) {
    std::vector<GroupVec> images;
    for (const auto& img : a.generator_images())
        images.push_back(vec_neg(img, a.group().invariant_factors));
    return GExtension(a.level(), a.group(), std::move(images));
}

bool g_equal(const GExtension& a, const GExtension& b) {
    if (!(a.group() == b.group())) return false;
    i64 n = lcm64(a.level()->modulus(), b.level()->modulus());
    GExtension aa = a.lift_to(n), bb = b.lift_to(n);
    return aa.generator_images() == bb.generator_images();
}

CoreResult core(const GExtension& m) {
    std::vector<std::vector<i64>> gens;
    for (const auto& img : m.generator_images()) gens.push_back(img);
    AbelianGroupStructure image = subgroup_structure(m.group().invariant_factors, gens);
    AbelianField field = AbelianField::from_subgroup(m.kernel());
    return {image, image.generators, std::move(field)};
}

namespace {

// order of the image of the inertia subgroup at p
i64 inertia_image_order(const GExtension& m, i64 p) {
    const i64 n = m.level()->modulus();
    i64 v = padic_valuation(n, p);
    if (v == 0) return 1;
    i64 pv = 1;
    for (i64 i = 0; i < v; ++i) pv *= p;
    std::vector<std::vector<i64>> images;
    for (i64 a : congruence_kernel(n, n / pv)) images.push_back(m.apply(a));
    return subgroup_structure(m.group().invariant_factors, images).order();
}

} // namespace

bool is_unramified(const GExtension& m) {
    for (auto [p, e] : factorize(m.level()->modulus())) {
        (void)e;
        if (inertia_image_order(m, p) > 1) return false;
    }
    return true;
}

bool is_tame(const GExtension& m) {
    for (auto [p, e] : factorize(m.level()->modulus())) {
        (void)e;
        if (inertia_image_order(m, p) % p == 0) return false;
    }
    return true;
}

GExtension construct_psi(const GExtension& phi, const std::vector<i64>& strip_primes) {
    const i64 n = phi.level()->modulus();
    std::set<i64> s(strip_primes.begin(), strip_primes.end());
    i64 kept = 1;
    std::vector<i64> moduli;
    for (auto [p, e] : factorize(n)) {
        i64 pe = 1;
        for (i64 i = 0; i < e; ++i) pe *= p;
        if (!s.count(p)) {
            kept *= pe;
            moduli.push_back(pe);
        }
    }
    auto small = UnitGroup::make(kept);
    std::vector<GroupVec> images;
    for (i64 g : small->generators()) {
        // lift g to level n: g at the kept blocks, 1 at the stripped blocks
        std::vector<i64> residues, mods;
        for (auto [p, e] : factorize(n)) {
            i64 pe = 1;
            for (i64 i = 0; i < e; ++i) pe *= p;
            mods.push_back(pe);
            residues.push_back(s.count(p) ? 1 : g % pe);
        }
        i64 lifted = n == 1 ? 0 : crt(residues, mods);
        images.push_back(phi.apply(lifted));
    }
    return GExtension(small, phi.group(), std::move(images));
}

// ---------------------------------------------------------------------------
// GRestriction

GRestriction::GRestriction(std::shared_ptr<const UnitGroup> level, Subgroup domain,
                           AbelianGroupStructure g, std::unordered_map<i64, GroupVec> values)
    : level_(std::move(level)), domain_(std::move(domain)), g_(std::move(g)),
      values_(std::move(values)) {}

GroupVec GRestriction::apply(i64 a) const {
    auto it = values_.find(level_->reduce(a));
    if (it == values_.end()) throw precondition_error("GRestriction: element outside domain");
    return it->second;
}

GRestriction GRestriction::lift_to(i64 n) const {
    auto big = UnitGroup::make(n);
    if (big->modulus() % level_->modulus() != 0)
        throw precondition_error("GRestriction::lift_to: level must be a multiple");
    if (big->modulus() == level_->modulus()) return *this;
    std::vector<i64> elems;
    std::unordered_map<i64, GroupVec> values;
    for (i64 a : big->units()) {
        i64 r = level_->modulus() == 1 ? 0 : a % level_->modulus();
        auto it = values_.find(r);
        if (it == values_.end()) continue;
        elems.push_back(a);
        values[a] = it->second;
    }
    return GRestriction(big, Subgroup::from_sorted_elements(big, std::move(elems)), g_,
                        std::move(values));
}

bool GRestriction::is_identity_class() const {
    for (const auto& [a, v] : values_) {
        (void)a;
        if (!vec_is_zero(v)) return false;
    }
    return true;
}

GRestriction base_change(const GExtension& m, const AbelianField& k_field) {
    i64 n = lcm64(m.level()->modulus(), k_field.conductor());
    GExtension lifted = m.lift_to(n);
    Subgroup domain = k_field.fixing_subgroup_at(lifted.level()->modulus());
    std::unordered_map<i64, GroupVec> values;
    for (i64 a : domain.elements()) values[a] = lifted.apply(a);
    return GRestriction(lifted.level(), std::move(domain), m.group(), std::move(values));
}

GRestriction g_product(const GRestriction& a, const GRestriction& b) {
    if (!(a.group() == b.group())) throw precondition_error("g_product: group mismatch");
    i64 n = lcm64(a.level()->modulus(), b.level()->modulus());
    GRestriction aa = a.lift_to(n), bb = b.lift_to(n);
    if (!(aa.domain() == bb.domain()))
        throw precondition_error("g_product: restrictions over different fields");
    std::unordered_map<i64, GroupVec> values;
    for (i64 x : aa.domain().elements())
        values[x] = vec_add(aa.apply(x), bb.apply(x), a.group().invariant_factors);
    return GRestriction(aa.level(), aa.domain(), a.group(), std::move(values));
}

GRestriction g_inverse(const GRestriction& a) {
    std::unordered_map<i64, GroupVec> values;
    for (i64 x : a.domain().elements())
        values[x] = vec_neg(a.apply(x), a.group().invariant_factors);
    return GRestriction(a.level(), a.domain(), a.group(), std::move(values));
}

bool g_equal(const GRestriction& a, const GRestriction& b) {
    if (!(a.group() == b.group())) return false;
    i64 n = lcm64(a.level()->modulus(), b.level()->modulus());
    GRestriction aa = a.lift_to(n), bb = b.lift_to(n);
    if (!(aa.domain() == bb.domain())) return false;
    for (i64 x : aa.domain().elements())
        if (aa.apply(x) != bb.apply(x)) return false;
    return true;
}

namespace {

i64 restricted_inertia_image_order(const GRestriction& m, i64 p) {
    const i64 n = m.level()->modulus();
    i64 v = padic_valuation(n, p);
    if (v == 0) return 1;
    i64 pv = 1;
    for (i64 i = 0; i < v; ++i) pv *= p;
    std::vector<std::vector<i64>> images;
    for (i64 a : congruence_kernel(n, n / pv))
        if (m.domain().contains(a)) images.push_back(m.apply(a));
    return subgroup_structure(m.group().invariant_factors, images).order();
}

} // namespace

bool is_unramified(const GRestriction& m) {
    for (auto [p, e] : factorize(m.level()->modulus())) {
        (void)e;
        if (restricted_inertia_image_order(m, p) > 1) return false;
    }
    return true;
}

bool is_tame(const GRestriction& m) {
    for (auto [p, e] : factorize(m.level()->modulus())) {
        (void)e;
        if (restricted_inertia_image_order(m, p) % p == 0) return false;
    }
    return true;
}

RestrictedCore core(const GRestriction& m) {
    std::vector<std::vector<i64>> gens;
    std::vector<i64> kernel_elems;
    for (i64 a : m.domain().elements()) {
        GroupVec v = m.apply(a);
        gens.push_back(v);
        if (vec_is_zero(v)) kernel_elems.push_back(a);
    }
    AbelianGroupStructure image = subgroup_structure(m.group().invariant_factors, gens);
    AbelianField field = AbelianField::from_subgroup(
        Subgroup::from_sorted_elements(m.level(), std::move(kernel_elems)));
    return {image, std::move(field), image.order()};
}

// ---------------------------------------------------------------------------
// Group enumeration helpers

namespace {

// partitions of e as descending tuples
void exponent_partitions(i64 e, i64 max_part, std::vector<i64>& cur,
                         std::vector<std::vector<i64>>& out) {
    if (e == 0) {
        out.push_back(cur);
        return;
    }
    for (i64 part = std::min(e, max_part); part >= 1; --part) {
        cur.push_back(part);
        exponent_partitions(e - part, part, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<AbelianGroupStructure> odd_abelian_groups_up_to(i64 bound) {
    std::vector<AbelianGroupStructure> out;
    for (i64 n = 1; n <= bound; n += 2) {
        auto fac = factorize(n);
        // per-prime partitions of the exponent
        std::vector<std::vector<std::vector<i64>>> choices;
        for (auto [p, e] : fac) {
            (void)p;
            std::vector<std::vector<i64>> parts;
            std::vector<i64> cur;
            exponent_partitions(e, e, cur, parts);
            choices.push_back(std::move(parts));
        }
        std::vector<std::size_t> pick(choices.size(), 0);
        while (true) {
            // assemble invariant factors by aligning largest parts
            std::size_t rows = 0;
            for (std::size_t i = 0; i < choices.size(); ++i)
                rows = std::max(rows, choices[i][pick[i]].size());
            std::vector<i64> inv(rows, 1);
            for (std::size_t i = 0; i < choices.size(); ++i) {
                const auto& parts = choices[i][pick[i]]; // descending exponents
                for (std::size_t j = 0; j < parts.size(); ++j) {
                    i64 pe = 1;
                    for (i64 k = 0; k < parts[j]; ++k) pe *= fac[i].first;
                    inv[j] *= pe; // row 0 gets the largest part
                }
            }
            std::reverse(inv.begin(), inv.end()); // ascending divisibility
            AbelianGroupStructure g;
            g.invariant_factors = std::move(inv);
            out.push_back(std::move(g));
            // odometer over partition choices
            std::size_t i = choices.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (++pick[i] < choices[i].size()) { done = false; break; }
                pick[i] = 0;
            }
            if (done) break;
        }
    }
    return out;
}

std::vector<std::vector<GroupVec>> all_abstract_subgroups(const AbelianGroupStructure& g) {
    const auto& f = g.invariant_factors;
    const std::size_t k = f.size();
    auto elements = [&] {
        std::vector<GroupVec> all;
        GroupVec cur(k, 0);
        while (true) {
            all.push_back(cur);
            std::size_t i = k;
            bool done = true;
            while (i > 0) {
                --i;
                if (++cur[i] < f[i]) { done = false; break; }
                cur[i] = 0;
            }
            if (done) break;
        }
        return all;
    }();

    auto closure_of = [&](std::vector<GroupVec> base, const GroupVec& extra) {
        std::set<GroupVec> seen(base.begin(), base.end());
        std::vector<GroupVec> frontier(seen.begin(), seen.end());
        std::vector<GroupVec> gens = {extra};
        while (!frontier.empty()) {
            std::vector<GroupVec> next;
            for (const auto& x : frontier)
                for (const auto& gg : gens) {
                    GroupVec y(k);
                    for (std::size_t i = 0; i < k; ++i) y[i] = (x[i] + gg[i]) % f[i];
                    if (seen.insert(y).second) next.push_back(y);
                }
            frontier = std::move(next);
        }
        return std::vector<GroupVec>(seen.begin(), seen.end());
    };

    std::set<std::vector<GroupVec>> found;
    std::vector<std::vector<GroupVec>> frontier;
    std::vector<GroupVec> trivial{GroupVec(k, 0)};
    found.insert(trivial);
    frontier.push_back(trivial);
    while (!frontier.empty()) {
        std::vector<std::vector<GroupVec>> next;
        for (const auto& h : frontier)
            for (const auto& a : elements) {
                if (std::binary_search(h.begin(), h.end(), a)) continue;
                auto bigger = closure_of(h, a);
                if (found.insert(bigger).second) next.push_back(bigger);
            }
        frontier = std::move(next);
    }
    return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Amitsur minus-complex

bool amitsur_minus_exact(const AbelianGroupStructure& g, const std::vector<GroupVec>& g0_gens) {
    if (g.order() % 2 == 0) throw precondition_error("amitsur_minus_exact: |G| must be odd");
    const auto& f = g.invariant_factors;
    const std::size_t k = f.size();
    for (const auto& z : g0_gens)
        if (z.size() != k) throw precondition_error("amitsur_minus_exact: generator arity");

    // enumerate G
    std::vector<GroupVec> all;
    GroupVec cur(k, 0);
    while (true) {
        all.push_back(cur);
        std::size_t i = k;
        bool done = true;
        while (i > 0) {
            --i;
            if (++cur[i] < f[i]) { done = false; break; }
            cur[i] = 0;
        }
        if (done || k == 0) break;
    }

    auto closure = [&](std::vector<GroupVec> gens, std::size_t arity) {
        std::vector<i64> fac;
        for (std::size_t r = 0; r < arity; ++r) fac.insert(fac.end(), f.begin(), f.end());
        std::set<GroupVec> seen;
        seen.insert(GroupVec(arity * k, 0));
        std::vector<GroupVec> frontier(seen.begin(), seen.end());
        while (!frontier.empty()) {
            std::vector<GroupVec> next;
            for (const auto& x : frontier)
                for (const auto& gg : gens) {
                    GroupVec y(x.size());
                    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] + gg[i]) % fac[i];
                    if (seen.insert(y).second) next.push_back(y);
                }
            frontier = std::move(next);
        }
        return seen;
    };

    // relation subgroups R2 = <(z,-z)>, R3 = <(z,-z,0),(0,z,-z)>
    std::vector<GroupVec> r2_gens, r3_gens;
    for (const auto& z : g0_gens) {
        GroupVec zn = vec_neg(z, f);
        GroupVec a(2 * k, 0), b(3 * k, 0), c(3 * k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            a[i] = z[i];
            a[k + i] = zn[i];
            b[i] = z[i];
            b[k + i] = zn[i];
            c[k + i] = z[i];
            c[2 * k + i] = zn[i];
        }
        r2_gens.push_back(a);
        r3_gens.push_back(b);
        r3_gens.push_back(c);
    }
    auto r2 = closure(r2_gens, 2);
    auto r3 = closure(r3_gens, 3);

    // kernel of d2 on G^(2): classes [(x,y)] with (0, x+y, 0) in R3
    i64 kernel_pairs = 0;
    for (const auto& x : all)
        for (const auto& y : all) {
            GroupVec mid(3 * k, 0);
            for (std::size_t i = 0; i < k; ++i) mid[k + i] = (x[i] + y[i]) % f[i];
            if (r3.count(mid)) ++kernel_pairs;
        }
    if (kernel_pairs % (i64)r2.size() != 0) throw error("amitsur: kernel not a union of classes");
    i64 kernel_classes = kernel_pairs / (i64)r2.size();

    // image of d1: classes of (x, -x)
    std::set<GroupVec> image_pairs;
    for (const auto& x : all) {
        GroupVec xn = vec_neg(x, f);
        for (const auto& r : r2) {
            GroupVec v(2 * k);
            for (std::size_t i = 0; i < k; ++i) {
                v[i] = (x[i] + r[i]) % f[i];
                v[k + i] = (xn[i] + r[k + i]) % f[i];
            }
            image_pairs.insert(std::move(v));
        }
    }
    if ((i64)image_pairs.size() % (i64)r2.size() != 0)
        throw error("amitsur: image not a union of classes");
    i64 image_classes = (i64)image_pairs.size() / (i64)r2.size();

    // the image must lie in the kernel (complex property), then compare sizes
    for (const auto& v : image_pairs) {
        GroupVec mid(3 * k, 0);
        for (std::size_t i = 0; i < k; ++i) mid[k + i] = (v[i] + v[k + i]) % f[i];
        if (!r3.count(mid)) return false;
    }
    return kernel_classes == image_classes;
}

} // namespace nibtower
