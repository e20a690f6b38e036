#pragma once

#include "nibtower/abelian.hpp"

namespace nibtower {

/// Element of (Z/mZ)[Delta] for Delta = (Z/ellZ)^x, ell an odd prime.
/// Coefficient index j-1 corresponds to the basis element delta_j.
/// modulus 0 means coefficients over Z.
struct GroupRingElement {
    i64 ell = 3;
    i64 modulus = 0;
    std::vector<i64> coeffs;

    static GroupRingElement zero(i64 ell, i64 modulus = 0);
    /// Coefficient of delta_i^{-1} (i.e. of delta_{i^{-1} mod ell}).
    i64 coeff_at_delta_inv(i64 i) const;
    i64 coeff_at_delta(i64 j) const;

    GroupRingElement reduced(i64 m) const;
    GroupRingElement add(const GroupRingElement& o) const;
    GroupRingElement mul(const GroupRingElement& o) const;
    /// Left action of delta_g.
    GroupRingElement translate(i64 g) const;
    GroupRingElement scale(i64 c) const;

    bool operator==(const GroupRingElement& o) const = default;
};

/// theta = sum_{i=1..ell-1} i * delta_i^{-1} over Z.
GroupRingElement theta(i64 ell);

/// (g - delta_g) * theta has all coefficients divisible by ell; this returns
/// the quotient by ell (coefficients over Z). g = 2 gives the element whose
/// nonzero coefficients sit at delta_j^{-1}, j > (ell-1)/2.
GroupRingElement twisted_theta_over_ell(i64 ell, i64 g);

/// Minus projection: delta_{ell-i}^{-1} -> -delta_i^{-1}; result indexed by
/// delta_1^{-1}..delta_{(ell-1)/2}^{-1}. m = 0 keeps coefficients over Z.
std::vector<i64> minus_project(const GroupRingElement& x, i64 m);

/// Invariant factors of <u_-, v_-> inside (Z/rZ)^{(ell-1)/2}, where u comes
/// from ell*theta and v from (2-delta_2)*theta after division by ell.
AbelianGroupStructure ideal_minus_type(i64 ell, i64 r);

/// 2x2 determinant of the (delta_1, delta_g) coefficients of (u_-, v_-) for
/// the pair (theta, (g-delta_g)theta)/ell. Equals 2(g-1)^2; g = 2 recovers
/// the plain pair with determinant 2.
i64 det_certificate(i64 ell, i64 g);

/// Order of the minus projection of theta (ell = 3) in (Z/3qZ)[Delta]^-.
i64 theta_minus_order(i64 q);

} // namespace nibtower
