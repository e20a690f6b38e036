#include "nibtower/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace nibtower {

// ---------------------------------------------------------------------------
// Integer polynomial helpers

namespace polyz {

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) {
    for (int i = (int)p.size() - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;
}

Poly mul(const Poly& a, const Poly& b) {
    if (degree(a) < 0 || degree(b) < 0) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    trim(out);
    return out;
}

Poly sub(const Poly& a, const Poly& b) {
    Poly out = a;
    if (out.size() < b.size()) out.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    trim(out);
    return out;
}

Poly rem_monic(const Poly& num, const Poly& den) {
    int dd = degree(den);
    if (dd < 0 || den[dd] != 1) throw error("rem_monic: divisor not monic");
    Poly r = num;
    trim(r);
    while (degree(r) >= dd) {
        int dr = degree(r);
        mpz_class c = r[dr];
        for (int i = 0; i <= dd; ++i) r[dr - dd + i] -= c * den[i];
        trim(r);
    }
    return r;
}

} // namespace polyz

i64 mobius(i64 n) {
    i64 m = 1;
    for (auto [p, e] : factorize(n)) {
        (void)p;
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

const Poly& cyclotomic_poly(i64 m) {
    static std::mutex mu;
    static std::map<i64, Poly> cache;
    if (m < 1) throw precondition_error("cyclotomic_poly: m >= 1");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    // Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e, filled bottom-up
    for (i64 d : divisors(m)) {
        if (cache.count(d)) continue;
        Poly num(d + 1, 0);
        num[0] = -1;
        num[d] = 1;
        for (i64 e : divisors(d)) {
            if (e == d) continue;
            const Poly& phi_e = cache.at(e);
            int de = polyz::degree(phi_e);
            int dn = polyz::degree(num);
            Poly q(dn - de + 1, 0);
            Poly r = num;
            for (int i = dn - de; i >= 0; --i) {
                mpz_class c = r[i + de]; // phi_e monic
                q[i] = c;
                if (c == 0) continue;
                for (int j = 0; j <= de; ++j) r[i + j] -= c * phi_e[j];
            }
            polyz::trim(r);
            if (!r.empty()) throw error("cyclotomic_poly: inexact division");
            num = std::move(q);
        }
        cache.emplace(d, std::move(num));
    }
    return cache.at(m);
}

// ---------------------------------------------------------------------------
// CycInt

CycInt::CycInt(i64 m) : m_(m) {
    if (m < 1) throw precondition_error("CycInt: conductor >= 1");
    c_.assign(euler_phi(m), 0);
}

CycInt CycInt::integer(i64 m, mpz_class v) {
    CycInt x(m);
    x.c_[0] = std::move(v);
    return x;
}

CycInt CycInt::zeta_power(i64 m, i64 k) {
    k %= m;
    if (k < 0) k += m;
    Poly p(k + 1, 0);
    p[k] = 1;
    return from_coeffs(m, std::move(p));
}

CycInt CycInt::from_coeffs(i64 m, Poly coeffs) {
    CycInt x(m);
    Poly r = polyz::rem_monic(coeffs, cyclotomic_poly(m));
    for (std::size_t i = 0; i < r.size(); ++i) x.c_[i] = std::move(r[i]);
    return x;
}

bool CycInt::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool CycInt::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

mpz_class CycInt::rational_value() const {
    if (!is_rational()) throw error("CycInt: not rational");
    return c_[0];
}

CycInt CycInt::operator+(const CycInt& o) const {
    if (m_ != o.m_) throw precondition_error("CycInt: conductor mismatch");
    CycInt x(m_);
    for (std::size_t i = 0; i < c_.size(); ++i) x.c_[i] = c_[i] + o.c_[i];
    return x;
}

CycInt CycInt::operator-(const CycInt& o) const {
    if (m_ != o.m_) throw precondition_error("CycInt: conductor mismatch");
    CycInt x(m_);
    for (std::size_t i = 0; i < c_.size(); ++i) x.c_[i] = c_[i] - o.c_[i];
    return x;
}

CycInt CycInt::negate() const {
    CycInt x(m_);
    for (std::size_t i = 0; i < c_.size(); ++i) x.c_[i] = -c_[i];
    return x;
}

CycInt CycInt::operator*(const CycInt& o) const {
    if (m_ != o.m_) throw precondition_error("CycInt: conductor mismatch");
    return from_coeffs(m_, polyz::mul(c_, o.c_));
}

CycInt CycInt::galois(i64 a) const {
    a %= m_;
    if (a < 0) a += m_;
    if (m_ == 1) return *this;
    if (std::gcd(a, m_) != 1) throw precondition_error("galois: exponent not coprime");
    Poly big(m_, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        big[(a * (i64)i) % m_] += c_[i];
    }
    return from_coeffs(m_, std::move(big));
}

mpz_class absolute_trace(const CycInt& x) {
    const i64 m = x.conductor();
    const i64 phim = euler_phi(m);
    mpz_class acc = 0;
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
        if (x.coeffs()[i] == 0) continue;
        i64 d = m / std::gcd((i64)i, m); // order of zeta^i
        acc += x.coeffs()[i] * mobius(d) * (phim / euler_phi(d));
    }
    return acc;
}

mpz_class absolute_norm(const CycInt& x) {
    const i64 m = x.conductor();
    CycInt acc = CycInt::integer(m, 1);
    for (i64 a = 1; a <= m; ++a) {
        if (std::gcd(a, m) != 1) continue;
        acc = acc * x.galois(a);
    }
    return acc.rational_value();
}

CycInt express_in_subfield(const CycInt& x, i64 m_sub) {
    const i64 m = x.conductor();
    if (m_sub < 1 || m % m_sub != 0)
        throw precondition_error("express_in_subfield: m_sub must divide m");
    if (m == m_sub) return x;
    const i64 stride = m / m_sub;
    const std::size_t rows = (std::size_t)euler_phi(m);
    const std::size_t cols = (std::size_t)euler_phi(m_sub);

    std::vector<Poly> basis(cols);
    for (std::size_t j = 0; j < cols; ++j)
        basis[j] = CycInt::zeta_power(m, stride * (i64)j).coeffs();

    std::vector<std::vector<mpq_class>> aug(rows, std::vector<mpq_class>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = mpq_class(basis[j][i]);
        aug[i][cols] = mpq_class(x.coeffs()[i]);
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (aug[i][col] != 0) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(aug[rank], aug[piv]);
        mpq_class inv = aug[rank][col];
        for (std::size_t j = col; j <= cols; ++j) aug[rank][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || aug[i][col] == 0) continue;
            mpq_class f = aug[i][col];
            for (std::size_t j = col; j <= cols; ++j) aug[i][j] -= f * aug[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank != cols) throw error("express_in_subfield: degenerate basis");
    for (std::size_t i = rank; i < rows; ++i)
        if (aug[i][cols] != 0) throw error("express_in_subfield: element not in subring");

    Poly c(cols, 0);
    for (std::size_t r = 0; r < rank; ++r) {
        mpq_class v = aug[r][cols];
        if (v.get_den() != 1) throw error("express_in_subfield: non-integral coordinate");
        c[pivot_col[r]] = v.get_num();
    }
    return CycInt::from_coeffs(m_sub, std::move(c));
}

CycInt relative_norm(const CycInt& x, i64 m_sub) {
    const i64 m = x.conductor();
    if (m_sub < 1 || m % m_sub != 0)
        throw precondition_error("relative_norm: m_sub must divide m");
    CycInt acc = CycInt::integer(m, 1);
    for (i64 a = 1; a <= m; ++a) {
        if (std::gcd(a, m) != 1) continue;
        if (a % m_sub != 1 % m_sub) continue;
        acc = acc * x.galois(a);
    }
    return express_in_subfield(acc, m_sub);
}

// ---------------------------------------------------------------------------
// Polynomials mod p (i64 coefficients) for factoring Phi_m

namespace {

using PolyP = std::vector<i64>;

void pp_trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP pp_mul(const PolyP& a, const PolyP& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    PolyP out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    pp_trim(out);
    return out;
}

PolyP pp_rem(PolyP a, const PolyP& b, i64 p) {
    pp_trim(a);
    PolyP bb = b;
    pp_trim(bb);
    if (bb.empty()) throw error("pp_rem: division by zero");
    i64 lead_inv = invmod(bb.back(), p);
    while (a.size() >= bb.size() && !a.empty()) {
        i64 c = mulmod(a.back(), lead_inv, p);
        std::size_t shift = a.size() - bb.size();
        for (std::size_t i = 0; i < bb.size(); ++i)
            a[shift + i] = ((a[shift + i] - mulmod(c, bb[i], p)) % p + p) % p;
        pp_trim(a);
    }
    return a;
}

// quotient of exact division
PolyP pp_divide_exact(const PolyP& a, const PolyP& b, i64 p) {
    PolyP r = a, bb = b;
    pp_trim(r);
    pp_trim(bb);
    i64 lead_inv = invmod(bb.back(), p);
    PolyP q(r.size() >= bb.size() ? r.size() - bb.size() + 1 : 0, 0);
    while (r.size() >= bb.size() && !r.empty()) {
        i64 c = mulmod(r.back(), lead_inv, p);
        std::size_t shift = r.size() - bb.size();
        q[shift] = c;
        for (std::size_t i = 0; i < bb.size(); ++i)
            r[shift + i] = ((r[shift + i] - mulmod(c, bb[i], p)) % p + p) % p;
        pp_trim(r);
    }
    if (!r.empty()) throw error("pp_divide_exact: inexact");
    pp_trim(q);
    return q;
}

PolyP pp_gcd(PolyP a, PolyP b, i64 p) {
    pp_trim(a);
    pp_trim(b);
    while (!b.empty()) {
        PolyP r = pp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        i64 inv = invmod(a.back(), p);
        for (auto& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

PolyP pp_powmod(const PolyP& base, mpz_class e, const PolyP& mod, i64 p) {
    PolyP result{1};
    PolyP b = pp_rem(base, mod, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = pp_rem(pp_mul(result, b, p), mod, p);
        b = pp_rem(pp_mul(b, b, p), mod, p);
        e >>= 1;
    }
    return result;
}

struct SplitRng {
    std::uint64_t state;
    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 16;
    }
};

// equal-degree factorization: all irreducible factors of f have degree d
void pp_equal_degree(PolyP f, i64 d, i64 p, SplitRng& rng, std::vector<PolyP>& out) {
    pp_trim(f);
    if ((i64)f.size() - 1 == d) {
        i64 inv = invmod(f.back(), p);
        for (auto& c : f) c = mulmod(c, inv, p);
        out.push_back(std::move(f));
        return;
    }
    while (true) {
        PolyP a(f.size() - 1);
        for (auto& c : a) c = (i64)(rng.next() % (std::uint64_t)p);
        pp_trim(a);
        if (a.empty()) continue;
        PolyP g;
        if (p == 2) {
            // additive trace map a + a^2 + ... + a^{2^{d-1}}
            PolyP t = pp_rem(a, f, 2), acc = t;
            for (i64 i = 1; i < d; ++i) {
                t = pp_rem(pp_mul(t, t, 2), f, 2);
                acc.resize(std::max(acc.size(), t.size()), 0);
                for (std::size_t j = 0; j < t.size(); ++j) acc[j] ^= t[j];
                pp_trim(acc);
            }
            g = pp_gcd(f, acc, 2);
        } else {
            mpz_class e;
            mpz_ui_pow_ui(e.get_mpz_t(), (unsigned long)p, (unsigned long)d);
            e = (e - 1) / 2;
            PolyP b = pp_powmod(a, e, f, p); // = +-1 mod each factor
            if (b.empty()) {
                b = PolyP{p - 1};
            } else {
                b[0] = (b[0] - 1 + p) % p;
                pp_trim(b);
            }
            g = pp_gcd(f, b, p);
        }
        if (g.size() > 1 && g.size() < f.size()) {
            pp_equal_degree(g, d, p, rng, out);
            pp_equal_degree(pp_divide_exact(f, g, p), d, p, rng, out);
            return;
        }
    }
}

PolyP phi_mod_p(i64 m, i64 p) {
    const Poly& phi = cyclotomic_poly(m);
    PolyP f(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        mpz_class r = phi[i] % p;
        if (r < 0) r += p;
        f[i] = (i64)r.get_si();
    }
    pp_trim(f);
    return f;
}

} // namespace

std::vector<PrimeAbove> split_prime(i64 p, i64 m) {
    if (!is_prime(p)) throw precondition_error("split_prime: p must be prime");
    if (m > 1 && m % p == 0) throw precondition_error("split_prime: p divides m");
    PolyP f = phi_mod_p(m, p);
    i64 ord = (m == 1) ? 1 : multiplicative_order(p % m, m);
    if (((i64)f.size() - 1) % ord != 0) throw error("split_prime: degree bookkeeping failed");

    SplitRng rng{(std::uint64_t)(p * 1000003 + m) * 2654435761ULL + 1};
    std::vector<PolyP> factors;
    pp_equal_degree(f, ord, p, rng, factors);
    std::sort(factors.begin(), factors.end());

    std::vector<PrimeAbove> out;
    for (auto& g : factors) {
        PrimeAbove prime;
        prime.p = p;
        prime.m = m;
        prime.f = ord;
        prime.label = g.empty() ? 0 : g[0];
        prime.factor = std::move(g);
        out.push_back(std::move(prime));
    }
    if ((i64)out.size() != euler_phi(m) / ord) throw error("split_prime: wrong factor count");
    return out;
}

PrimeAbove galois_image_of_prime(const PrimeAbove& prime, i64 a) {
    const i64 m = prime.m, p = prime.p;
    a %= m;
    if (a < 0) a += m;
    if (m == 1) return prime;
    if (std::gcd(a, m) != 1) throw precondition_error("galois_image_of_prime: a not coprime");
    PolyP phip = phi_mod_p(m, p);
    // sigma_a(P) is named by the factor of gcd(Phi, h(y^a) mod Phi)
    PolyP ya = pp_powmod(PolyP{0, 1}, mpz_class(a), phip, p);
    PolyP acc{}; // Horner evaluation of h at ya, mod (Phi, p)
    for (int i = (int)prime.factor.size() - 1; i >= 0; --i) {
        acc = pp_rem(pp_mul(acc, ya, p), phip, p);
        if (prime.factor[i] != 0) {
            if (acc.empty()) acc = PolyP{prime.factor[i]};
            else acc[0] = (acc[0] + prime.factor[i]) % p;
            pp_trim(acc);
        }
    }
    PolyP g = pp_gcd(phip, acc, p);
    if ((i64)g.size() - 1 != prime.f) throw error("galois_image_of_prime: wrong factor degree");
    PrimeAbove out = prime;
    out.label = g.empty() ? 0 : g[0];
    out.factor = std::move(g);
    return out;
}

// ---------------------------------------------------------------------------
// Hensel lifting and valuations

namespace {

// polynomials with mpz coefficients normalized to [0, q)
Poly pz_normalize(const Poly& a, const mpz_class& q) {
    Poly out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        mpz_fdiv_r(out[i].get_mpz_t(), a[i].get_mpz_t(), q.get_mpz_t());
    polyz::trim(out);
    return out;
}

Poly pz_mul(const Poly& a, const Poly& b, const mpz_class& q) {
    return pz_normalize(polyz::mul(a, b), q);
}

Poly pz_add(const Poly& a, const Poly& b, const mpz_class& q) {
    Poly out = a;
    if (out.size() < b.size()) out.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return pz_normalize(out, q);
}

Poly pz_sub(const Poly& a, const Poly& b, const mpz_class& q) {
    return pz_normalize(polyz::sub(a, b), q);
}

void pz_divmod_monic(const Poly& num, const Poly& den, const mpz_class& q, Poly& quot,
                     Poly& rem) {
    int dd = polyz::degree(den);
    if (dd < 0 || den[dd] != 1) throw error("pz_divmod_monic: divisor not monic");
    Poly r = pz_normalize(num, q);
    quot.assign(polyz::degree(r) >= dd ? polyz::degree(r) - dd + 1 : 0, 0);
    while (polyz::degree(r) >= dd) {
        int dr = polyz::degree(r);
        mpz_class c = r[dr];
        quot[dr - dd] = c;
        for (int i = 0; i <= dd; ++i) {
            r[dr - dd + i] -= c * den[i];
            mpz_fdiv_r(r[dr - dd + i].get_mpz_t(), r[dr - dd + i].get_mpz_t(), q.get_mpz_t());
        }
        polyz::trim(r);
    }
    rem = std::move(r);
}

Poly pz_rem_monic(const Poly& num, const Poly& den, const mpz_class& q) {
    Poly quot, rem;
    pz_divmod_monic(num, den, q, quot, rem);
    return rem;
}

// extended euclid mod p: a*x + b*y = 1 for coprime x, y
void pp_bezout(const PolyP& x, const PolyP& y, i64 p, PolyP& a, PolyP& b) {
    PolyP r0 = x, r1 = y;
    PolyP s0{1}, s1{}, t0{}, t1{1};
    pp_trim(r0);
    pp_trim(r1);
    while (!r1.empty()) {
        PolyP q;
        {
            PolyP r = r0;
            i64 lead_inv = invmod(r1.back(), p);
            q.assign(r.size() >= r1.size() ? r.size() - r1.size() + 1 : 0, 0);
            while (r.size() >= r1.size() && !r.empty()) {
                i64 c = mulmod(r.back(), lead_inv, p);
                std::size_t shift = r.size() - r1.size();
                q[shift] = c;
                for (std::size_t i = 0; i < r1.size(); ++i)
                    r[shift + i] = ((r[shift + i] - mulmod(c, r1[i], p)) % p + p) % p;
                pp_trim(r);
            }
            pp_trim(q);
            r0 = std::move(r1);
            r1 = std::move(r);
        }
        auto step = [&](PolyP& u0, PolyP& u1) {
            PolyP qu = pp_mul(q, u1, p);
            PolyP res = u0;
            res.resize(std::max(res.size(), qu.size()), 0);
            for (std::size_t i = 0; i < qu.size(); ++i) res[i] = ((res[i] - qu[i]) % p + p) % p;
            pp_trim(res);
            u0 = std::move(u1);
            u1 = std::move(res);
        };
        step(s0, s1);
        step(t0, t1);
    }
    if (r0.size() != 1) throw error("pp_bezout: inputs not coprime");
    i64 inv = invmod(r0[0], p);
    for (auto& c : s0) c = mulmod(c, inv, p);
    for (auto& c : t0) c = mulmod(c, inv, p);
    a = std::move(s0);
    b = std::move(t0);
}

struct LiftedFactor {
    mpz_class q;  // p^exponent
    int exponent;
    Poly h; // monic factor lift, Phi = h * cofactor mod q
};

LiftedFactor hensel_lift_factor(i64 p, i64 m, const std::vector<i64>& factor, int target_exp) {
    const Poly& phi = cyclotomic_poly(m);

    Poly h(factor.size());
    for (std::size_t i = 0; i < factor.size(); ++i) h[i] = factor[i];
    polyz::trim(h);

    PolyP phip = phi_mod_p(m, p);
    PolyP g0 = pp_divide_exact(phip, factor, p);
    PolyP a0, b0;
    pp_bezout(factor, g0, p, a0, b0); // a0*h + b0*g = 1 mod p

    auto widen = [](const PolyP& v) {
        Poly out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
        polyz::trim(out);
        return out;
    };
    Poly g = widen(g0), a = widen(a0), b = widen(b0);

    mpz_class q = p;
    int exp = 1;
    while (exp < target_exp) {
        mpz_class q2 = q * q;
        Poly phi_q2 = pz_normalize(phi, q2);
        // h' = h + (b*e mod h) with e = Phi - h*g; cofactor recomputed exactly
        Poly e = pz_sub(phi_q2, pz_mul(h, g, q2), q2);
        Poly dh = pz_rem_monic(pz_mul(b, e, q2), h, q2);
        Poly h2 = pz_add(h, dh, q2);
        Poly g2, rem;
        pz_divmod_monic(phi_q2, h2, q2, g2, rem);
        if (!rem.empty()) throw error("hensel_lift_factor: lift verification failed");
        h = std::move(h2);
        g = std::move(g2);
        // Bezout update: r = 1 - a*h - b*g; a' = a + (a r mod g); b' = b + (a r div g) h + b r
        Poly one{1};
        Poly r = pz_sub(pz_sub(one, pz_mul(a, h, q2), q2), pz_mul(b, g, q2), q2);
        Poly ar = pz_mul(a, r, q2);
        Poly d, da;
        pz_divmod_monic(ar, g, q2, d, da);
        Poly a2 = pz_add(a, da, q2);
        Poly b2 = pz_add(pz_add(b, pz_mul(d, h, q2), q2), pz_mul(b, r, q2), q2);
        a = std::move(a2);
        b = std::move(b2);
        q = std::move(q2);
        exp *= 2;
    }
    return {std::move(q), exp, std::move(h)};
}

} // namespace

i64 valuation_unramified(const CycInt& x, const PrimeAbove& prime, ValuationOptions opts) {
    if (x.is_zero()) throw zero_element_error("valuation of zero");
    if (x.conductor() != prime.m) throw precondition_error("valuation: conductor mismatch");
    if (prime.m > 1 && prime.m % prime.p == 0)
        throw precondition_error("valuation_unramified: p ramifies");

    int exp = opts.initial_precision;
    while (true) {
        LiftedFactor lf = hensel_lift_factor(prime.p, prime.m, prime.factor, exp);
        Poly r = pz_rem_monic(pz_normalize(x.coeffs(), lf.q), lf.h, lf.q);
        i64 v = -1;
        for (const auto& c : r) {
            if (c == 0) continue;
            mpz_class t = c;
            i64 vc = 0;
            while (mpz_divisible_ui_p(t.get_mpz_t(), (unsigned long)prime.p)) {
                mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), (unsigned long)prime.p);
                ++vc;
            }
            if (v < 0 || vc < v) v = vc;
        }
        if (v >= 0 && v < lf.exponent) return v;
        if (exp >= opts.precision_cap)
            throw precision_exceeded_error("valuation_unramified: precision cap " +
                                           std::to_string(opts.precision_cap) + " reached");
        exp = std::min((i64)opts.precision_cap, (i64)exp * 2);
    }
}

i64 valuation_ramified_layer(const CycInt& x, i64 p, const PrimeAbove& below,
                             ValuationOptions opts) {
    if (x.is_zero()) throw zero_element_error("valuation of zero");
    const i64 m = x.conductor();
    const i64 m_sub = below.m;
    if (below.p != p) throw precondition_error("valuation_ramified_layer: prime mismatch");
    if (m % m_sub != 0 || (m_sub > 1 && m_sub % p == 0))
        throw precondition_error("valuation_ramified_layer: unsupported conductor shape");
    i64 layer = m / m_sub;
    if (layer == 1) return valuation_unramified(x, below, opts);
    while (layer % p == 0) layer /= p;
    if (layer != 1)
        throw precondition_error("valuation_ramified_layer: ambient must be m_sub * p^t");

    // v_P(x) = v_below(N(x)) by total ramification of the p-layer
    CycInt y = relative_norm(x, m_sub);
    return valuation_unramified(y, below, opts);
}

} // namespace nibtower
