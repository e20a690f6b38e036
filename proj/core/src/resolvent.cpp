#include "nibtower/resolvent.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace nibtower {

// ---------------------------------------------------------------------------
// Rational idempotents

std::vector<GroupVec> enumerate_group(const AbelianGroupStructure& g) {
    std::vector<GroupVec> all;
    const auto& f = g.invariant_factors;
    GroupVec cur(f.size(), 0);
    while (true) {
        all.push_back(cur);
        std::size_t i = f.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++cur[i] < f[i]) { done = false; break; }
            cur[i] = 0;
        }
        if (done) break;
    }
    return all;
}

std::vector<mpq_class> group_algebra_mul(const AbelianGroupStructure& g,
                                         const std::vector<mpq_class>& a,
                                         const std::vector<mpq_class>& b) {
    auto all = enumerate_group(g);
    const auto& f = g.invariant_factors;
    auto index_of = [&](const GroupVec& v) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < f.size(); ++i) idx = idx * (std::size_t)f[i] + (std::size_t)v[i];
        return idx;
    };
    std::vector<mpq_class> out(all.size(), 0);
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (b[j] == 0) continue;
            GroupVec z(f.size());
            for (std::size_t c = 0; c < f.size(); ++c) z[c] = (all[i][c] + all[j][c]) % f[c];
            out[index_of(z)] += a[i] * b[j];
        }
    }
    return out;
}

namespace {

// Ramanujan sum: sum over a coprime to d of zeta_d^{a s}
i64 ramanujan_sum(i64 d, i64 s) {
    i64 g = std::gcd(((s % d) + d) % d, d);
    if (g == 0) g = d;
    i64 dg = d / g;
    return mobius(dg) * (euler_phi(d) / euler_phi(dg));
}

i64 char_order_of_tuple(const AbelianGroupStructure& g, const GroupVec& c) {
    i64 o = 1;
    for (std::size_t i = 0; i < c.size(); ++i)
        o = std::lcm(o, g.invariant_factors[i] / std::gcd(g.invariant_factors[i], c[i]));
    return o;
}

} // namespace

std::vector<IdempotentDescriptor> rational_idempotents(const AbelianGroupStructure& g) {
    const auto& f = g.invariant_factors;
    const i64 e = g.exponent();
    auto all = enumerate_group(g); // also enumerates the dual tuples
    std::set<GroupVec> remaining(all.begin(), all.end());

    std::vector<IdempotentDescriptor> out;
    while (!remaining.empty()) {
        GroupVec rep = *remaining.begin();
        // Galois orbit: rep^a for a coprime to the exponent
        std::set<GroupVec> orbit;
        for (i64 a = 1; a <= e; ++a) {
            if (std::gcd(a, e) != 1) continue;
            GroupVec pw(rep.size());
            for (std::size_t i = 0; i < rep.size(); ++i) pw[i] = mulmod(a, rep[i], f[i]);
            orbit.insert(pw);
        }
        IdempotentDescriptor d;
        d.character_order = char_order_of_tuple(g, rep);
        for (const auto& c : orbit) {
            d.orbit.push_back(c);
            remaining.erase(c);
        }
        std::sort(d.orbit.begin(), d.orbit.end());

        // e_psi = (1/|G|) sum_chi sum_g chi(g^{-1}) g; the chi-sum over the
        // orbit is a Ramanujan sum, hence an integer
        const i64 ord = d.character_order;
        d.coefficients.resize(all.size());
        for (std::size_t gi = 0; gi < all.size(); ++gi) {
            // chi(g) = prod zeta_{f_i}^{rep_i x_i} = zeta_ord^s; the turn
            // fraction num_i / f_i scales to an integral power of zeta_ord
            // because the value's order divides ord
            i64 s = 0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                i64 num = mulmod(rep[i] % f[i], all[gi][i] % f[i], f[i]);
                i64 scaled = (i64)(((__int128)num * ord) / f[i]);
                if ((__int128)scaled * f[i] != (__int128)num * ord)
                    throw error("rational_idempotents: exponent scaling failed");
                s = (s + scaled) % ord;
            }
            i64 val = ramanujan_sum(ord, -s); // sum over the orbit at g^{-1}
            d.coefficients[gi] = mpq_class(val, g.order());
            d.coefficients[gi].canonicalize();
        }
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end(), [](const IdempotentDescriptor& a,
                                         const IdempotentDescriptor& b) {
        if (a.character_order != b.character_order) return a.character_order < b.character_order;
        return a.orbit < b.orbit;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Resolvents

namespace {

// lift a unit mod n to a unit mod m (n | m) fixing the residue mod n
i64 lift_unit(i64 a, i64 n, i64 m) {
    if (m == n) return a;
    std::vector<i64> residues, moduli;
    for (auto [p, e] : factorize(m)) {
        i64 pe = 1;
        for (i64 i = 0; i < e; ++i) pe *= p;
        moduli.push_back(pe);
        residues.push_back(n % p == 0 ? a % pe : 1);
    }
    return crt(residues, moduli);
}

std::vector<i64> coset_reps(const Subgroup& big, const Subgroup& small) {
    const i64 n = big.ambient()->modulus();
    if (n == 1) return {0};
    std::vector<i64> reps;
    std::set<i64> seen;
    for (i64 a : big.elements()) {
        if (seen.count(a)) continue;
        reps.push_back(a);
        for (i64 h : small.elements()) seen.insert(mulmod(a, h, n));
    }
    return reps;
}

} // namespace

CycInt resolvent(const CycInt& alpha, const DirichletCharacter& chi, const Tower& t) {
    const i64 n = t.top().conductor();
    const i64 m = alpha.conductor();
    if (chi.modulus() != n) throw precondition_error("resolvent: character level mismatch");
    if (!chi.is_trivial_on(t.top().fixing_subgroup()))
        throw precondition_error("resolvent: character does not factor through Gal(top/Q)");
    if (m % n != 0) throw precondition_error("resolvent: ambient conductor must contain the top");
    if (chi.order() > 1 && m % chi.order() != 0)
        throw precondition_error("resolvent: ambient lacks the character's root of unity");

    Subgroup hk = t.middle().fixing_subgroup_at(n);
    const i64 ord = chi.order();
    CycInt acc(m);
    for (i64 a : coset_reps(hk, t.top().fixing_subgroup())) {
        // chi(a^{-1}) * sigma_a(alpha), sigma_a extended to the ambient ring
        i64 exp_inv = ord == 1 ? 0 : (ord - chi.value_exponent(a)) % ord;
        CycInt root = ord == 1 ? CycInt::integer(m, 1)
                               : CycInt::zeta_power(m, (m / ord) * exp_inv);
        CycInt term = root * alpha.galois(n == 1 ? 1 : lift_unit(a, n, m));
        acc = acc + term;
    }
    return acc;
}

std::vector<CycInt> gaussian_periods(const AbelianField& l, i64 ambient) {
    const i64 p = l.conductor();
    if (!is_prime(p)) throw precondition_error("gaussian_periods: conductor must be prime");
    if (ambient % p != 0) throw precondition_error("gaussian_periods: ambient must contain p");
    auto level = l.level();
    i64 g0 = level->generators().at(0);
    const i64 d = l.degree();
    std::vector<CycInt> out;
    for (i64 b = 0; b < d; ++b) {
        i64 rep = powmod(g0, b, p);
        CycInt eta(ambient);
        for (i64 h : l.fixing_subgroup().elements())
            eta = eta + CycInt::zeta_power(ambient, (ambient / p) * mulmod(rep, h, p));
        out.push_back(std::move(eta));
    }
    return out;
}

mpz_class period_basis_discriminant(const AbelianField& l) {
    const i64 p = l.conductor();
    const i64 d = l.degree();
    auto periods = gaussian_periods(l, p);
    const i64 index = (p - 1) / d; // [Q(zeta_p) : L]
    std::vector<std::vector<mpz_class>> gram(d, std::vector<mpz_class>(d));
    for (i64 i = 0; i < d; ++i)
        for (i64 j = 0; j < d; ++j) {
            mpz_class tr = absolute_trace(periods[i] * periods[j]);
            if (tr % index != 0) throw error("period trace not divisible by the index");
            gram[i][j] = tr / index;
        }
    // Bareiss determinant
    mpz_class prev = 1;
    int sign = 1;
    for (i64 k = 0; k + 1 < d; ++k) {
        if (gram[k][k] == 0) {
            i64 piv = -1;
            for (i64 i = k + 1; i < d; ++i)
                if (gram[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(gram[k], gram[piv]);
            sign = -sign;
        }
        for (i64 i = k + 1; i < d; ++i) {
            for (i64 j = k + 1; j < d; ++j) {
                mpz_class num = gram[i][j] * gram[k][k] - gram[i][k] * gram[k][j];
                mpz_class q;
                mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                gram[i][j] = q;
            }
            gram[i][k] = 0;
        }
        prev = gram[k][k];
    }
    return sign * gram[d - 1][d - 1];
}

DirichletCharacter canonical_faithful_character(const AbelianField& l) {
    auto level = l.level();
    if (level->invariant_factors().size() != 1)
        throw precondition_error("canonical_faithful_character: unit group must be cyclic");
    const i64 phi = level->order();
    const i64 d = l.degree();
    return DirichletCharacter::from_dual_tuple(level, {phi / d});
}

// ---------------------------------------------------------------------------
// Valuation patterns

namespace {

struct IdealRunResult {
    std::vector<PrimeValuationEntry> primes; // label-sorted
    bool twist_ok = true;
    bool gauss_norm_ok = true;
    i64 e_ratio = 1; // e(ambient prime / L(zeta_s) prime)
};

// Resolvent-ideal valuations above p for a cyclic subfield of prime conductor
// p, computed from the Gaussian-period basis. The resolvents of the periods
// are root-of-unity multiples of each other (twist rule, verified exactly),
// so their common valuation vector is the ideal's.
IdealRunResult ideal_above_ramified_p(const AbelianField& l, const DirichletCharacter& chi,
                                      ValuationOptions opts) {
    const i64 p = l.conductor();
    const i64 d = l.degree();
    const i64 s = chi.order();
    const i64 m = p * s;
    if (std::gcd(p, s) != 1)
        throw precondition_error("resolvent ideal: wild case (p divides the character order)");

    Tower t(AbelianField::rationals(), AbelianField::rationals(), l);
    auto periods = gaussian_periods(l, m);
    std::vector<CycInt> res;
    for (const auto& eta : periods) res.push_back(resolvent(eta, chi, t));

    IdealRunResult out;
    // twist rule: resolvent of the b-th period is zeta^{b s0} times the first
    auto level = l.level();
    i64 g0 = level->generators().at(0);
    for (i64 b = 0; b < d; ++b) {
        i64 exp = chi.order() == 1 ? 0 : chi.value_exponent(powmod(g0, b, p));
        CycInt expected = chi.order() == 1
                              ? res[0]
                              : CycInt::zeta_power(m, (m / chi.order()) * exp) * res[0];
        if (!(res[b] == expected)) out.twist_ok = false;
    }
    if (!out.twist_ok) throw error("resolvent ideal: twist rule violated");

    if (chi.order() > 1 && chi.conductor() == p) {
        CycInt prod = res[0] * res[0].conj();
        out.gauss_norm_ok = prod == CycInt::integer(m, p);
    }

    // valuations of the generator at the primes above p, via the norm to the
    // prime-to-p layer
    if (res[0].is_zero()) throw error("resolvent ideal: generator vanishes");
    const i64 sub = m / p; // = s
    CycInt y = relative_norm(res[0], sub);
    auto primes = split_prime(p, sub);
    out.e_ratio = (p - 1) / l.degree(); // e(ambient prime / L(zeta_s) prime)
    for (const auto& prime : primes) {
        PrimeValuationEntry entry;
        entry.label = prime.label;
        entry.root = prime.f == 1 ? (prime.p - prime.label) % prime.p : 0;
        entry.big_valuation = valuation_unramified(y, prime, opts);
        if (entry.big_valuation % out.e_ratio != 0)
            throw error("resolvent ideal: valuation not divisible by the ramification ratio");
        entry.q_valuation = entry.big_valuation / out.e_ratio;
        out.primes.push_back(entry);
    }
    std::sort(out.primes.begin(), out.primes.end(),
              [](const PrimeValuationEntry& a, const PrimeValuationEntry& b) {
                  return a.label < b.label;
              });
    return out;
}

void require_pattern_preconditions(const Tower& t, const DirichletCharacter& chi, i64 p) {
    if (!t.base_is_rationals() || !t.middle().is_rationals())
        throw precondition_error("valuation pattern: middle field must be Q");
    const AbelianField& l = t.top();
    if (l.conductor() != p || !is_prime(p))
        throw precondition_error("valuation pattern: top must have prime conductor p");
    i64 ell = l.degree();
    if (ell < 3 || !is_prime(ell)) throw precondition_error("valuation pattern: [L:Q] must be an odd prime");
    if ((p - 1) % ell != 0) throw precondition_error("valuation pattern: p = 1 mod ell required");
    if (chi.order() != ell) throw precondition_error("valuation pattern: character must be faithful");
}

} // namespace

ResolventReport verify_valuation_pattern(const Tower& t, const DirichletCharacter& chi, i64 p,
                                         ValuationOptions opts) {
    require_pattern_preconditions(t, chi, p);
    const AbelianField& l = t.top();
    const i64 ell = l.degree();

    ResolventReport rep;
    rep.ell = ell;
    rep.p = p;
    rep.chi_order = chi.order();
    rep.chi_conductor = chi.conductor();
    rep.disc_ok = [&] {
        mpz_class want;
        mpz_ui_pow_ui(want.get_mpz_t(), (unsigned long)p, (unsigned long)(ell - 1));
        return period_basis_discriminant(l) == want;
    }();

    IdealRunResult run = ideal_above_ramified_p(l, chi, opts);
    rep.primes = run.primes;
    rep.twist_ok = run.twist_ok;
    rep.gauss_norm_ok = run.gauss_norm_ok;

    // locate the anchor: the root r with valuation j at the prime whose root
    // is r^j, for all j
    std::unordered_map<i64, i64> val_at_root;
    for (const auto& e : rep.primes) val_at_root[e.root] = e.q_valuation;
    std::vector<i64> anchors;
    for (const auto& e : rep.primes) {
        bool all = true;
        for (i64 j = 1; j < ell && all; ++j) {
            auto it = val_at_root.find(powmod(e.root, j, p));
            if (it == val_at_root.end() || it->second != j) all = false;
        }
        if (all) anchors.push_back(e.root);
    }
    rep.statement_c = anchors.size() == 1;
    if (rep.statement_c) {
        rep.base_root = anchors[0];
        rep.statement_a = val_at_root[rep.base_root] == 1;
        rep.statement_b = true; // the anchor condition is exactly (B)
    }

    // eta = gamma matching: with u0 the canonical primitive root and chi(u0) =
    // zeta_ell^{t0}, the matched prime is the one whose root c satisfies
    // c^{t0} = u0^{(p-1)/ell} mod p
    i64 u0 = l.level()->generators().at(0);
    i64 t0 = chi.value_exponent(u0);
    rep.eta_gamma_root = powmod(u0, ((p - 1) / ell) * invmod(t0, ell) % (p - 1), p);
    if (rep.statement_c) {
        for (i64 j = 1; j < ell; ++j)
            if (powmod(rep.eta_gamma_root, j, p) == rep.base_root) {
                rep.translate = j;
                break;
            }
    }

    rep.pass = rep.disc_ok && rep.twist_ok && rep.gauss_norm_ok && rep.statement_a &&
               rep.statement_b && rep.statement_c;
    return rep;
}

ResolventReport verify_valuation_pattern(i64 ell, i64 p, ValuationOptions opts) {
    AbelianField l = AbelianField::cyclic_subfield(p, ell);
    Tower t(AbelianField::rationals(), AbelianField::rationals(), l);
    return verify_valuation_pattern(t, canonical_faithful_character(l), p, opts);
}

std::vector<i64> resolvent_ideal_above_p(const Tower& t, const DirichletCharacter& chi, i64 p,
                                         ValuationOptions opts) {
    const AbelianField& l = t.top();
    if (!t.base_is_rationals() || !t.middle().is_rationals())
        throw precondition_error("resolvent_ideal_above_p: middle field must be Q");
    if (!is_prime(l.conductor()))
        throw precondition_error("resolvent_ideal_above_p: prime-conductor top required");

    if (p == l.conductor()) {
        auto run = ideal_above_ramified_p(l, chi, opts);
        std::vector<i64> out;
        for (const auto& e : run.primes) out.push_back(e.q_valuation);
        return out;
    }

    // p unramified in the ambient ring: direct valuation runs
    const i64 s = chi.order();
    const i64 m = l.conductor() * (s > 1 ? s : 1);
    if (m % p == 0) throw precondition_error("resolvent_ideal_above_p: p ramifies in the ambient");
    auto periods = gaussian_periods(l, m);
    std::vector<CycInt> res;
    for (const auto& eta : periods) res.push_back(resolvent(eta, chi, t));
    auto primes = split_prime(p, m);
    std::vector<i64> out;
    for (const auto& prime : primes) {
        i64 mn = -1;
        for (const auto& r : res) {
            if (r.is_zero()) continue;
            i64 v = valuation_unramified(r, prime, opts);
            if (mn < 0 || v < mn) mn = v;
        }
        out.push_back(mn < 0 ? 0 : mn);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Norm compatibility

NormCompatReport verify_norm_compat(const AbelianField& ltilde, const AbelianField& l, i64 p,
                                    ValuationOptions opts) {
    if (l.conductor() != p || ltilde.conductor() != p || !is_prime(p))
        throw precondition_error("norm_compat: fields must have prime conductor p");
    if (!l.contains(ltilde)) throw precondition_error("norm_compat: Ltilde must lie in L");
    const i64 s = l.degree();
    const i64 st = ltilde.degree();
    if (st < 1 || s % st != 0) throw precondition_error("norm_compat: degree mismatch");
    const i64 t = s / st;
    auto fac = factorize(s);
    if (fac.size() != 1) throw precondition_error("norm_compat: [L:Q] must be a prime power");
    const i64 ell = fac[0].first;
    if (ell == 2) throw precondition_error("norm_compat: ell must be odd");

    NormCompatReport rep;
    rep.ell = ell;
    rep.p = p;
    rep.t = t;
    rep.s = s;

    DirichletCharacter chi = canonical_faithful_character(l);
    DirichletCharacter chi_tilde = chi.power(t);
    if (!chi_tilde.is_trivial_on(ltilde.fixing_subgroup_at(p)))
        throw error("norm_compat: chi^t does not factor through Gal(Ltilde/Q)");

    // both ideals run in the same ambient Z[zeta_{s p}]; the induced character
    // has order st, and its zeta lives in Z[zeta_s]
    const i64 m = s * p;
    Tower t_l(AbelianField::rationals(), AbelianField::rationals(), l);
    Tower t_lt(AbelianField::rationals(), AbelianField::rationals(), ltilde);

    auto run_ideal = [&](const AbelianField& field, const DirichletCharacter& character) {
        auto periods = gaussian_periods(field, m);
        std::vector<CycInt> res;
        for (const auto& eta : periods)
            res.push_back(resolvent(eta, character, field == l ? t_l : t_lt));
        // twist rule: all generators are unit multiples; verify then use one
        auto level = field.level();
        i64 g0 = level->generators().at(0);
        for (std::size_t b = 0; b < res.size(); ++b) {
            i64 exp = character.order() == 1
                          ? 0
                          : character.value_exponent(powmod(g0, (i64)b, p));
            CycInt expected = character.order() == 1
                                  ? res[0]
                                  : CycInt::zeta_power(m, (m / character.order()) * exp) * res[0];
            if (!(res[b] == expected)) throw error("norm_compat: twist rule violated");
        }
        return relative_norm(res[0], s);
    };

    CycInt y_l = run_ideal(l, chi);
    CycInt y_lt = run_ideal(ltilde, chi_tilde);

    auto primes = split_prime(p, s);
    const i64 e_top = (p - 1) / s;  // e(ambient prime over L(zeta_s) prime)
    const i64 e_sub = (p - 1) / st; // over Ltilde(zeta_s)
    rep.literal_pass = true;
    rep.congruent_mod_ell = true;
    for (const auto& prime : primes) {
        i64 big_l = valuation_unramified(y_l, prime, opts);
        i64 big_lt = valuation_unramified(y_lt, prime, opts);
        if (big_l % e_top != 0 || big_lt % e_sub != 0)
            throw error("norm_compat: valuation not divisible by the ramification ratio");
        rep.labels.push_back(prime.label);
        rep.v_top.push_back(big_l / e_top);
        rep.v_sub.push_back(big_lt / e_sub);
        if (rep.v_top.back() != rep.v_sub.back()) rep.literal_pass = false;
        if ((rep.v_top.back() - rep.v_sub.back()) % ell != 0) rep.congruent_mod_ell = false;
    }
    rep.pass = rep.literal_pass;
    return rep;
}

NormCompatReport verify_norm_compat(i64 ell, i64 m, i64 p, ValuationOptions opts) {
    i64 s = 1;
    for (i64 i = 0; i < m; ++i) s *= ell;
    AbelianField l = AbelianField::cyclic_subfield(p, s);
    AbelianField lt = AbelianField::cyclic_subfield(p, s / ell);
    return verify_norm_compat(lt, l, p, opts);
}

} // namespace nibtower
