#pragma once

#include <gmpxx.h>

#include <vector>

#include "nibtower/arith.hpp"

namespace nibtower {

/// Dense integer polynomial, little-endian coefficients.
using Poly = std::vector<mpz_class>;

namespace polyz {
void trim(Poly& p);
int degree(const Poly& p); // -1 for zero
Poly mul(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
/// Division by a monic divisor over Z; returns remainder, quotient optional.
Poly rem_monic(const Poly& num, const Poly& den);
} // namespace polyz

/// m-th cyclotomic polynomial (cached).
const Poly& cyclotomic_poly(i64 m);

i64 mobius(i64 n);

/// Exact element of Z[zeta_m]: integer coordinates in the power basis
/// zeta^0..zeta^{phi(m)-1}, i.e. reduced mod Phi_m. Immutable value type.
class CycInt {
public:
    explicit CycInt(i64 m); // zero
    static CycInt integer(i64 m, mpz_class v);
    static CycInt zeta_power(i64 m, i64 k);
    static CycInt from_coeffs(i64 m, Poly coeffs); // reduces mod Phi_m

    i64 conductor() const { return m_; }
    const Poly& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_rational() const;
    mpz_class rational_value() const; // requires is_rational()

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt negate() const;
    bool operator==(const CycInt& o) const { return m_ == o.m_ && c_ == o.c_; }

    /// sigma_a: zeta -> zeta^a, gcd(a, m) = 1.
    CycInt galois(i64 a) const;
    CycInt conj() const { return galois(-1); }

private:
    i64 m_;
    Poly c_; // length phi(m)
};

/// Trace to Q (sum over all Galois conjugates), via the closed form for
/// traces of roots of unity.
mpz_class absolute_trace(const CycInt& x);
/// Norm to Q as the product over all Galois conjugates; asserts rationality.
mpz_class absolute_norm(const CycInt& x);
/// Norm to Z[zeta_sub]: product over sigma_a with a = 1 mod m_sub (m_sub | m).
CycInt relative_norm(const CycInt& x, i64 m_sub);
/// Rewrite x in the power basis of Z[zeta_sub]; x must lie in that subring.
CycInt express_in_subfield(const CycInt& x, i64 m_sub);

/// A prime of Z[zeta_m] above p (p not dividing m), named by its irreducible
/// factor of Phi_m mod p.
struct PrimeAbove {
    i64 p = 0;
    i64 m = 1;
    i64 f = 1;                // residue degree = ord of p mod m
    std::vector<i64> factor;  // monic, little-endian, coefficients in [0, p)
    i64 label = 0;            // constant term (stable cross-run identity)

    bool operator==(const PrimeAbove& o) const {
        return p == o.p && m == o.m && factor == o.factor;
    }
};

/// All primes above p in Z[zeta_m], p not dividing m; deterministic order
/// (lexicographic on factor coefficients).
std::vector<PrimeAbove> split_prime(i64 p, i64 m);

/// The prime sigma_a(P).
PrimeAbove galois_image_of_prime(const PrimeAbove& prime, i64 a);

struct ValuationOptions {
    int initial_precision = 8;
    int precision_cap = 512;
};

/// Valuation of x at P (p unramified, i.e. p not dividing m), certified by
/// Hensel lifting of P's factor; doubles working precision up to the cap.
i64 valuation_unramified(const CycInt& x, const PrimeAbove& prime, ValuationOptions opts = {});

/// Valuation at the unique prime above `below` when the ambient conductor is
/// m = m_sub * p^t with p not dividing m_sub (`below` lives at level m_sub):
/// computed as v_below(N(x)) with N the relative norm to Z[zeta_{m_sub}],
/// valid by total ramification of the p-layer.
i64 valuation_ramified_layer(const CycInt& x, i64 p, const PrimeAbove& below,
                             ValuationOptions opts = {});

} // namespace nibtower
