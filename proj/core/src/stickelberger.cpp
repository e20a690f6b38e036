#include "nibtower/stickelberger.hpp"

#include <numeric>

namespace nibtower {

namespace {
void require_odd_prime(i64 ell) {
    if (ell < 3 || !is_prime(ell) || ell % 2 == 0)
        throw precondition_error("ell must be an odd prime");
}
i64 norm_mod(i64 x, i64 m) {
    if (m == 0) return x;
    x %= m;
    if (x < 0) x += m;
    return x;
}
} // namespace

GroupRingElement GroupRingElement::zero(i64 ell, i64 modulus) {
    require_odd_prime(ell);
    return {ell, modulus, std::vector<i64>(ell - 1, 0)};
}

i64 GroupRingElement::coeff_at_delta(i64 j) const {
    j %= ell;
    if (j < 0) j += ell;
    if (j == 0) throw precondition_error("delta index must be a unit mod ell");
    return coeffs[j - 1];
}

i64 GroupRingElement::coeff_at_delta_inv(i64 i) const {
    return coeff_at_delta(invmod(i, ell));
}

GroupRingElement GroupRingElement::reduced(i64 m) const {
    GroupRingElement out{ell, m, coeffs};
    for (auto& c : out.coeffs) c = norm_mod(c, m);
    return out;
}

GroupRingElement GroupRingElement::add(const GroupRingElement& o) const {
    if (ell != o.ell || modulus != o.modulus) throw precondition_error("group ring mismatch");
    GroupRingElement out = *this;
    for (i64 j = 0; j < ell - 1; ++j) out.coeffs[j] = norm_mod(coeffs[j] + o.coeffs[j], modulus);
    return out;
}

GroupRingElement GroupRingElement::mul(const GroupRingElement& o) const {
    if (ell != o.ell || modulus != o.modulus) throw precondition_error("group ring mismatch");
    GroupRingElement out = zero(ell, modulus);
    for (i64 a = 1; a < ell; ++a)
        for (i64 b = 1; b < ell; ++b) {
            i64 j = (a * b) % ell;
            out.coeffs[j - 1] = norm_mod(out.coeffs[j - 1] + coeffs[a - 1] * o.coeffs[b - 1],
                                         modulus);
        }
    return out;
}

GroupRingElement GroupRingElement::translate(i64 g) const {
    g %= ell;
    if (g < 0) g += ell;
    if (g == 0) throw precondition_error("translate: g must be a unit mod ell");
    GroupRingElement out = zero(ell, modulus);
    for (i64 j = 1; j < ell; ++j) out.coeffs[(g * j) % ell - 1] = coeffs[j - 1];
    return out;
}

GroupRingElement GroupRingElement::scale(i64 c) const {
    GroupRingElement out = *this;
    for (auto& x : out.coeffs) x = norm_mod(x * c, modulus);
    return out;
}

GroupRingElement theta(i64 ell) {
    require_odd_prime(ell);
    GroupRingElement t = GroupRingElement::zero(ell, 0);
    for (i64 i = 1; i < ell; ++i) t.coeffs[invmod(i, ell) - 1] = i;
    return t;
}

GroupRingElement twisted_theta_over_ell(i64 ell, i64 g) {
    require_odd_prime(ell);
    GroupRingElement th = theta(ell);
    GroupRingElement x = th.scale(g).add(th.translate(g).scale(-1)); // (g - delta_g) * theta
    for (auto& c : x.coeffs) {
        if (c % ell != 0) throw error("twisted theta: coefficient not divisible by ell");
        c /= ell;
    }
    return x;
}

std::vector<i64> minus_project(const GroupRingElement& x, i64 m) {
    const i64 ell = x.ell;
    const i64 half = (ell - 1) / 2;
    std::vector<i64> out(half);
    for (i64 i = 1; i <= half; ++i)
        out[i - 1] = norm_mod(x.coeff_at_delta_inv(i) - x.coeff_at_delta_inv(ell - i), m);
    return out;
}

AbelianGroupStructure ideal_minus_type(i64 ell, i64 r) {
    require_odd_prime(ell);
    if (ell <= 3) throw precondition_error("ideal_minus_type: ell must exceed 3");
    if (r < 3 || !is_prime(r)) throw precondition_error("ideal_minus_type: r must be an odd prime");
    std::vector<i64> u = minus_project(theta(ell), r);
    std::vector<i64> v = minus_project(twisted_theta_over_ell(ell, 2), r);
    std::vector<i64> factors((ell - 1) / 2, r);
    return subgroup_structure(factors, {u, v});
}

i64 det_certificate(i64 ell, i64 g) {
    require_odd_prime(ell);
    bool known = (g == 2 || g == 3 || g == 5 || g == 17 || g == 257 || g == 65537);
    if (!known) throw precondition_error("det_certificate: g must be 2 or a Fermat prime");
    if (ell <= g * g) throw precondition_error("det_certificate: requires ell > g^2");
    std::vector<i64> u = minus_project(theta(ell), 0);
    std::vector<i64> v = minus_project(twisted_theta_over_ell(ell, g), 0);
    // coefficients at delta_1^{-1} and delta_g^{-1}
    return u[0] * v[g - 1] - u[g - 1] * v[0];
}

i64 theta_minus_order(i64 q) {
    if (q == 3 || q == 2 || !is_prime(q))
        throw precondition_error("theta_minus_order: q must be an odd prime distinct from 3");
    const i64 m = 3 * q;
    std::vector<i64> t = minus_project(theta(3).reduced(m), m);
    // additive order of the single minus coordinate in Z/m
    i64 c = t[0];
    if (c == 0) return 1;
    return m / std::gcd(m, c);
}

} // namespace nibtower
