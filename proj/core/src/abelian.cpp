#include "nibtower/abelian.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>

#include <gmpxx.h>

namespace nibtower {

i64 AbelianGroupStructure::order() const {
    i64 o = 1;
    for (i64 d : invariant_factors) o *= d;
    return o;
}

i64 AbelianGroupStructure::exponent() const {
    return invariant_factors.empty() ? 1 : invariant_factors.back();
}

bool is_cyclic(const AbelianGroupStructure& g) { return g.invariant_factors.size() <= 1; }

// ---------------------------------------------------------------------------
// Integer matrix helpers (exact, GMP-backed).

namespace {

using Mat = std::vector<std::vector<mpz_class>>; // row-major

Mat identity(std::size_t k) {
    Mat m(k, std::vector<mpz_class>(k, 0));
    for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
    return m;
}

// Smith normal form U*A*V = D with d1 | d2 | ... Returns D and U^{-1}; the
// column transform V is not tracked (generators only need U^{-1}).
struct SmithResult {
    Mat d;
    Mat uinv;
};

SmithResult smith_normal_form(Mat a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    Mat uinv = identity(rows);

    auto add_row = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
        // row_dst += q * row_src  =>  uinv.col(src) -= q * uinv.col(dst)
        for (std::size_t j = 0; j < cols; ++j) a[dst][j] += q * a[src][j];
        for (std::size_t i = 0; i < rows; ++i) uinv[i][src] -= q * uinv[i][dst];
    };
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        for (std::size_t r = 0; r < rows; ++r) std::swap(uinv[r][i], uinv[r][j]);
    };
    auto negate_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = -a[i][j];
        for (std::size_t r = 0; r < rows; ++r) uinv[r][i] = -uinv[r][i];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
        for (std::size_t i = 0; i < rows; ++i) a[i][dst] += q * a[i][src];
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
    };

    const std::size_t t_end = std::min(rows, cols);
    for (std::size_t t = 0; t < t_end; ++t) {
        bool found = false;
        for (std::size_t i = t; i < rows && !found; ++i)
            for (std::size_t j = t; j < cols && !found; ++j)
                if (a[i][j] != 0) {
                    if (i != t) swap_rows(t, i);
                    if (j != t) swap_cols(t, j);
                    found = true;
                }
        if (!found) break;

        while (true) {
            // clear column t below the pivot, then row t right of the pivot
            bool clean = false;
            while (!clean) {
                clean = true;
                for (std::size_t i = t + 1; i < rows; ++i) {
                    if (a[i][t] == 0) continue;
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                    add_row(i, t, -q);
                    if (a[i][t] != 0) { swap_rows(t, i); clean = false; }
                }
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (a[t][j] == 0) continue;
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                    add_col(j, t, -q);
                    if (a[t][j] != 0) { swap_cols(t, j); clean = false; }
                }
            }
            if (a[t][t] < 0) negate_row(t);
            // pivot must divide the remaining submatrix
            bool redo = false;
            for (std::size_t i = t + 1; i < rows && !redo; ++i)
                for (std::size_t j = t + 1; j < cols && !redo; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        add_row(t, i, 1);
                        redo = true;
                    }
            if (!redo) break;
        }
    }
    return {std::move(a), std::move(uinv)};
}

i64 to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw error("integer overflow in group computation");
    return (i64)z.get_si();
}

// Additive closure of exponent vectors mod the ambient factors.
std::set<std::vector<i64>> additive_closure(const std::vector<i64>& factors,
                                            const std::vector<std::vector<i64>>& gens) {
    const std::size_t k = factors.size();
    std::set<std::vector<i64>> seen;
    seen.insert(std::vector<i64>(k, 0));
    std::vector<std::vector<i64>> frontier(seen.begin(), seen.end());
    std::vector<std::vector<i64>> norm_gens;
    for (const auto& g : gens) {
        if (g.size() != k) throw error("additive_closure: generator arity mismatch");
        std::vector<i64> v(k);
        for (std::size_t i = 0; i < k; ++i) {
            v[i] = g[i] % factors[i];
            if (v[i] < 0) v[i] += factors[i];
        }
        norm_gens.push_back(std::move(v));
    }
    while (!frontier.empty()) {
        std::vector<std::vector<i64>> next;
        for (const auto& x : frontier)
            for (const auto& g : norm_gens) {
                std::vector<i64> y(k);
                for (std::size_t i = 0; i < k; ++i) y[i] = (x[i] + g[i]) % factors[i];
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen;
}

} // namespace

// Constructive invariant-factor decomposition of (span(num)+R)/(span(den)+R)
// by enumeration: repeatedly split off an element of maximal order in the
// quotient, correcting it to have that exact order. Deterministic (lex-least
// candidates). Sound because generated-order products reaching the group
// order forces a direct decomposition; validated at the end.
AbelianGroupStructure quotient_structure(const std::vector<i64>& ambient_factors,
                                         const std::vector<std::vector<i64>>& numerator_gens,
                                         const std::vector<std::vector<i64>>& denominator_gens) {
    const std::size_t k = ambient_factors.size();
    if (k == 0) return {};
    auto snum = additive_closure(ambient_factors, numerator_gens);
    auto sden = additive_closure(ambient_factors, denominator_gens);
    for (const auto& d : sden)
        if (!snum.count(d)) throw precondition_error("quotient_structure: denominator not contained");

    auto add = [&](const std::vector<i64>& a, const std::vector<i64>& b) {
        std::vector<i64> y(k);
        for (std::size_t i = 0; i < k; ++i) y[i] = (a[i] + b[i]) % ambient_factors[i];
        return y;
    };
    auto smul = [&](i64 c, const std::vector<i64>& a) {
        std::vector<i64> y(k);
        for (std::size_t i = 0; i < k; ++i) y[i] = mulmod(c % ambient_factors[i], a[i], ambient_factors[i]);
        return y;
    };

    // current generated subgroup of the quotient, stored as a union of
    // denominator-cosets (element set of the preimage in snum)
    std::set<std::vector<i64>> t = sden;
    const i64 quotient_order = (i64)snum.size() / (i64)sden.size();
    auto coset_order = [&](const std::vector<i64>& g) {
        if (t.size() == 1) {
            // plain element order, from the factor shape
            i64 o = 1;
            for (std::size_t i = 0; i < k; ++i)
                o = std::lcm(o, ambient_factors[i] / std::gcd(ambient_factors[i], g[i]));
            return o;
        }
        std::vector<i64> x = g;
        i64 o = 1;
        while (!t.count(x)) {
            x = add(x, g);
            ++o;
        }
        return o;
    };

    AbelianGroupStructure out;
    i64 produced = 1;
    while (produced < quotient_order) {
        i64 best_order = 0;
        std::vector<i64> best;
        for (const auto& g : snum) {
            if (t.count(g)) continue;
            i64 o = coset_order(g);
            if (o > best_order) {
                best_order = o;
                best = g;
            }
        }
        if (best_order <= 1) throw error("quotient_structure: no progress");
        // correct best so its order in the full quotient is exactly
        // best_order: find u in t with best_order*(best - u) inside sden
        std::vector<i64> target = smul(best_order, best);
        bool fixed = false;
        for (const auto& u : t) {
            std::vector<i64> du = smul(best_order, u);
            std::vector<i64> diff(k);
            for (std::size_t i = 0; i < k; ++i) {
                diff[i] = (target[i] - du[i]) % ambient_factors[i];
                if (diff[i] < 0) diff[i] += ambient_factors[i];
            }
            if (sden.count(diff)) {
                std::vector<i64> corrected(k);
                for (std::size_t i = 0; i < k; ++i) {
                    corrected[i] = (best[i] - u[i]) % ambient_factors[i];
                    if (corrected[i] < 0) corrected[i] += ambient_factors[i];
                }
                best = corrected;
                fixed = true;
                break;
            }
        }
        if (!fixed) throw error("quotient_structure: direct-summand correction failed");
        out.invariant_factors.push_back(best_order);
        out.generators.push_back(best);
        produced *= best_order;
        // enlarge t by the new generator
        std::set<std::vector<i64>> bigger = t;
        std::vector<std::vector<i64>> frontier(t.begin(), t.end());
        while (!frontier.empty()) {
            std::vector<std::vector<i64>> next;
            for (const auto& x : frontier) {
                auto y = add(x, best);
                if (bigger.insert(y).second) next.push_back(y);
            }
            frontier = std::move(next);
        }
        t = std::move(bigger);
    }
    if ((i64)t.size() != (i64)snum.size()) throw error("quotient_structure: generation failed");
    // descending order chain -> ascending divisibility order
    std::reverse(out.invariant_factors.begin(), out.invariant_factors.end());
    std::reverse(out.generators.begin(), out.generators.end());
    for (std::size_t i = 0; i + 1 < out.invariant_factors.size(); ++i)
        if (out.invariant_factors[i + 1] % out.invariant_factors[i] != 0)
            throw error("quotient_structure: invariant chain violated");
    return out;
}

AbelianGroupStructure subgroup_structure(const std::vector<i64>& ambient_factors,
                                         const std::vector<std::vector<i64>>& generators) {
    return quotient_structure(ambient_factors, generators, {});
}

// ---------------------------------------------------------------------------
// UnitGroup

namespace {
std::mutex g_unit_cache_mutex;
std::unordered_map<i64, std::shared_ptr<const UnitGroup>> g_unit_cache;

i64 normalize_modulus(i64 n) {
    if (n < 1) throw precondition_error("modulus must be >= 1");
    if (n % 4 == 2) n /= 2;
    return n;
}
} // namespace

UnitGroup::UnitGroup(i64 n) : n_(n) {
    phi_ = euler_phi(n_);
    if (n_ == 1) {
        units_ = {0};
        dlog_[0] = {};
        return;
    }

    // CRT generators per prime power
    std::vector<i64> raw_gens, raw_orders;
    for (auto [p, e] : factorize(n_)) {
        i64 pe = 1;
        for (i64 i = 0; i < e; ++i) pe *= p;
        i64 rest = n_ / pe;
        auto lift = [&](i64 g) { return rest == 1 ? g % n_ : crt({g, 1}, {pe, rest}); };
        if (p == 2) {
            if (e == 1) continue; // excluded by normalization
            if (e == 2) {
                raw_gens.push_back(lift(3));
                raw_orders.push_back(2);
            } else {
                raw_gens.push_back(lift(pe - 1)); // -1
                raw_orders.push_back(2);
                raw_gens.push_back(lift(5));
                raw_orders.push_back(pe / 4);
            }
        } else {
            raw_gens.push_back(lift(primitive_root(pe)));
            raw_orders.push_back(pe / p * (p - 1));
        }
    }

    // canonical invariant-factor basis via SNF of the relation matrix
    const std::size_t k = raw_gens.size();
    Mat rel(k, std::vector<mpz_class>(k, 0));
    for (std::size_t i = 0; i < k; ++i) rel[i][i] = raw_orders[i];
    SmithResult s = smith_normal_form(std::move(rel));
    for (std::size_t j = 0; j < k; ++j) {
        i64 dj = to_i64(s.d[j][j]);
        if (dj <= 1) continue;
        i64 g = 1;
        for (std::size_t i = 0; i < k; ++i) {
            mpz_class e;
            mpz_fdiv_r_ui(e.get_mpz_t(), s.uinv[i][j].get_mpz_t(), (unsigned long)raw_orders[i]);
            g = mulmod(g, powmod(raw_gens[i], to_i64(e), n_), n_);
        }
        gens_.push_back(g);
        orders_.push_back(dj);
    }

    // enumerate all units with their exponent vectors (mixed-radix odometer)
    const std::size_t kk = gens_.size();
    std::vector<i64> exps(kk, 0);
    while (true) {
        i64 value = from_exponents(exps);
        dlog_[value] = exps;
        units_.push_back(value);
        std::size_t i = kk;
        bool done = true;
        while (i > 0) {
            --i;
            if (++exps[i] < orders_[i]) { done = false; break; }
            exps[i] = 0;
        }
        if (done) break;
    }
    if ((i64)units_.size() != phi_)
        throw error("UnitGroup: generator basis does not enumerate the group");
    std::sort(units_.begin(), units_.end());
}

std::shared_ptr<const UnitGroup> UnitGroup::make(i64 n) {
    n = normalize_modulus(n);
    std::lock_guard<std::mutex> lock(g_unit_cache_mutex);
    auto it = g_unit_cache.find(n);
    if (it != g_unit_cache.end()) return it->second;
    auto ug = std::shared_ptr<const UnitGroup>(new UnitGroup(n));
    g_unit_cache.emplace(n, ug);
    return ug;
}

bool UnitGroup::is_unit(i64 a) const {
    if (n_ == 1) return true;
    return std::gcd(reduce(a), n_) == 1;
}

i64 UnitGroup::reduce(i64 a) const {
    a %= n_;
    if (a < 0) a += n_;
    return a;
}

const std::vector<i64>& UnitGroup::dlog(i64 a) const {
    auto it = dlog_.find(reduce(a));
    if (it == dlog_.end()) throw precondition_error("dlog: not a unit");
    return it->second;
}

i64 UnitGroup::from_exponents(const std::vector<i64>& e) const {
    if (e.size() != gens_.size()) throw error("from_exponents: arity mismatch");
    if (n_ == 1) return 0;
    i64 v = 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
        i64 ei = e[i] % orders_[i];
        if (ei < 0) ei += orders_[i];
        v = mulmod(v, powmod(gens_[i], ei, n_), n_);
    }
    return v;
}

AbelianGroupStructure unit_group_structure(i64 n) {
    auto ug = UnitGroup::make(n);
    AbelianGroupStructure out;
    out.invariant_factors = ug->invariant_factors();
    out.generator_residues = ug->generators();
    for (std::size_t i = 0; i < out.invariant_factors.size(); ++i) {
        std::vector<i64> e(out.invariant_factors.size(), 0);
        e[i] = 1;
        out.generators.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Subgroup

namespace {
std::vector<i64> closure(const UnitGroup& ug, const std::vector<i64>& gens) {
    if (ug.modulus() == 1) return {0};
    std::set<i64> seen;
    seen.insert(1);
    std::vector<i64> frontier{1};
    while (!frontier.empty()) {
        std::vector<i64> next;
        for (i64 x : frontier)
            for (i64 g : gens) {
                i64 y = mulmod(x, g, ug.modulus());
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}
} // namespace

Subgroup::Subgroup(std::shared_ptr<const UnitGroup> ambient, const std::vector<i64>& generators)
    : ambient_(std::move(ambient)) {
    for (i64 g : generators) {
        if (!ambient_->is_unit(g)) throw precondition_error("non-unit subgroup generator");
        gens_.push_back(ambient_->reduce(g));
    }
    elements_ = closure(*ambient_, gens_);
}

Subgroup Subgroup::trivial(std::shared_ptr<const UnitGroup> ambient) {
    return Subgroup(std::move(ambient), {});
}

Subgroup Subgroup::full(std::shared_ptr<const UnitGroup> ambient) {
    Subgroup s(ambient, ambient->generators());
    return s;
}

Subgroup Subgroup::from_sorted_elements(std::shared_ptr<const UnitGroup> ambient,
                                        std::vector<i64> elements) {
    Subgroup s(ambient, {});
    s.elements_ = std::move(elements);
    return s;
}

bool Subgroup::contains(i64 a) const {
    return std::binary_search(elements_.begin(), elements_.end(), ambient_->reduce(a));
}

bool Subgroup::contains(const Subgroup& other) const {
    for (i64 e : other.elements_)
        if (!contains(e)) return false;
    return true;
}

std::vector<i64> Subgroup::canonical_generators() const {
    // derived from the sorted element list, hence canonical
    std::vector<std::vector<i64>> gens;
    for (i64 g : elements_) gens.push_back(ambient_->dlog(g));
    AbelianGroupStructure s = subgroup_structure(ambient_->invariant_factors(), gens);
    std::vector<i64> out;
    for (const auto& vec : s.generators) out.push_back(ambient_->from_exponents(vec));
    return out;
}

Subgroup join(const Subgroup& a, const Subgroup& b) {
    if (a.ambient()->modulus() != b.ambient()->modulus())
        throw precondition_error("join: ambient mismatch");
    std::vector<i64> gens = a.elements();
    gens.insert(gens.end(), b.elements().begin(), b.elements().end());
    return Subgroup(a.ambient(), gens);
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    if (a.ambient()->modulus() != b.ambient()->modulus())
        throw precondition_error("intersect: ambient mismatch");
    std::vector<i64> common;
    std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(),
                          b.elements().end(), std::back_inserter(common));
    return Subgroup::from_sorted_elements(a.ambient(), std::move(common));
}

AbelianGroupStructure subgroup_structure(const Subgroup& s) {
    const auto& ug = *s.ambient();
    std::vector<std::vector<i64>> gens;
    const std::vector<i64>& src = s.given_generators().empty() ? s.elements() : s.given_generators();
    for (i64 g : src) gens.push_back(ug.dlog(g));
    AbelianGroupStructure out = subgroup_structure(ug.invariant_factors(), gens);
    for (const auto& vec : out.generators) out.generator_residues.push_back(ug.from_exponents(vec));
    return out;
}

std::vector<Subgroup> intermediate_subgroups(const Subgroup& lower, const Subgroup& upper,
                                             i64 index_bound) {
    if (!upper.contains(lower)) throw precondition_error("intermediate_subgroups: not nested");
    i64 index = upper.order() / lower.order();
    if (index > index_bound)
        throw bound_exceeded_error("intermediate_subgroups: index " + std::to_string(index) +
                                   " exceeds bound " + std::to_string(index_bound));
    auto ambient = lower.ambient();
    std::set<std::vector<i64>> seen;
    seen.insert(lower.elements());
    std::vector<std::vector<i64>> frontier{lower.elements()};
    while (!frontier.empty()) {
        std::vector<std::vector<i64>> next;
        for (const auto& h : frontier) {
            for (i64 a : upper.elements()) {
                if (std::binary_search(h.begin(), h.end(), a)) continue;
                std::vector<i64> gens = h;
                gens.push_back(a);
                Subgroup bigger(ambient, gens);
                if (seen.insert(bigger.elements()).second) next.push_back(bigger.elements());
            }
        }
        frontier = std::move(next);
    }
    std::vector<Subgroup> out;
    out.reserve(seen.size());
    for (const auto& els : seen) out.push_back(Subgroup::from_sorted_elements(ambient, els));
    std::sort(out.begin(), out.end(), [](const Subgroup& x, const Subgroup& y) {
        if (x.order() != y.order()) return x.order() < y.order();
        return x.elements() < y.elements();
    });
    return out;
}

} // namespace nibtower
