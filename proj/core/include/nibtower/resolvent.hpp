#pragma once

#include "nibtower/cyclotomic.hpp"
#include "nibtower/tower.hpp"

namespace nibtower {

/// Q-rational idempotent of Q[G] for a Galois orbit of characters of an
/// abstract finite abelian group G. Coefficients are exact rationals indexed
/// by the group elements in odometer order.
struct IdempotentDescriptor {
    i64 character_order = 1; // values generate Q(zeta_order)
    std::vector<std::vector<i64>> orbit; // dual tuples, sorted
    std::vector<mpq_class> coefficients;
};

std::vector<GroupVec> enumerate_group(const AbelianGroupStructure& g);
std::vector<mpq_class> group_algebra_mul(const AbelianGroupStructure& g,
                                         const std::vector<mpq_class>& a,
                                         const std::vector<mpq_class>& b);
std::vector<IdempotentDescriptor> rational_idempotents(const AbelianGroupStructure& g);

/// Resolvent sum over Gal(top/middle) of chi(g^{-1}) g(alpha), where chi is a
/// character of X_top viewed on the relative Galois group and alpha lives in
/// an ambient ring Z[zeta_m] with cond(top) | m and order(chi) | m.
CycInt resolvent(const CycInt& alpha, const DirichletCharacter& chi, const Tower& t);

/// Gaussian periods of a subfield of prime conductor, indexed by powers of
/// the canonical primitive root; an integral basis in the tame totally
/// ramified case (checked via the discriminant).
std::vector<CycInt> gaussian_periods(const AbelianField& l, i64 ambient);
mpz_class period_basis_discriminant(const AbelianField& l);

/// The canonical faithful character of a cyclic-subfield quotient: sends the
/// canonical generator of (Z/pZ)^x to zeta_degree.
DirichletCharacter canonical_faithful_character(const AbelianField& l);

struct PrimeValuationEntry {
    i64 label = 0;         // constant term of the prime's factor
    i64 root = 0;          // zeta mod the prime (degree-1 factors)
    i64 big_valuation = 0; // at the ambient cyclotomic level
    i64 q_valuation = 0;   // at the level of L(zeta_s)
};

struct ResolventReport {
    i64 ell = 0, p = 0;
    i64 chi_order = 0, chi_conductor = 0;
    std::vector<PrimeValuationEntry> primes; // label-sorted
    bool disc_ok = false;
    bool gauss_norm_ok = false;
    bool twist_ok = false;
    bool statement_a = false;
    bool statement_b = false;
    bool statement_c = false;
    i64 base_root = 0;      // root of the prime carrying valuation 1
    i64 eta_gamma_root = 0; // root singled out by the eta = gamma congruence
    i64 translate = 1;      // base_root = eta_gamma_root^translate mod p
    bool pass = false;
};

/// Checks the valuation statements for the resolvent ideal of chi above p:
/// valuation 1 at the anchor prime, valuation i at its i-th power translate,
/// and the full above-p vector equal to the theta pattern (1..ell-1), with
/// the absolute normalization determined by computation and reported.
ResolventReport verify_valuation_pattern(const Tower& t, const DirichletCharacter& chi, i64 p,
                                         ValuationOptions opts = {});
/// Convenience: the degree-ell subfield of conductor p with its canonical
/// faithful character.
ResolventReport verify_valuation_pattern(i64 ell, i64 p, ValuationOptions opts = {});

/// Above-p exponent vector (min valuations over an integral-basis run of
/// resolvents) at the primes above p, label-sorted.
std::vector<i64> resolvent_ideal_above_p(const Tower& t, const DirichletCharacter& chi, i64 p,
                                         ValuationOptions opts = {});

struct NormCompatReport {
    i64 ell = 0, p = 0;
    i64 t = 1;              // [L : Ltilde]
    i64 s = 1;              // [L : Q]
    std::vector<i64> labels;
    std::vector<i64> v_top; // resolvent-ideal valuations of L's chi at L(zeta_s) level
    std::vector<i64> v_sub; // same for Ltilde's induced character at Ltilde(zeta_s) level
    bool literal_pass = false;      // v_sub == v_top prime-by-prime
    bool congruent_mod_ell = false; // v_sub = v_top (mod ell)
    bool pass = false;              // literal form
};

/// Norm compatibility of the resolvent ideals of chi (faithful on L/Q) and
/// the character induced by chi^t on Ltilde, above the totally ramified p.
NormCompatReport verify_norm_compat(const AbelianField& ltilde, const AbelianField& l, i64 p,
                                    ValuationOptions opts = {});
/// Convenience: L the degree-ell^m subfield of conductor p, Ltilde its
/// degree-ell^{m-1} subfield.
NormCompatReport verify_norm_compat(i64 ell, i64 m, i64 p, ValuationOptions opts = {});

} // namespace nibtower
