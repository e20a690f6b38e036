#include "nibtower/arith.hpp"

#include <algorithm>
#include <numeric>

namespace nibtower {

i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm64(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    i64 g = std::gcd(a, b);
    __int128 r = (__int128)(a / g) * b;
    if (r > (__int128)INT64_MAX || r < -(__int128)INT64_MAX)
        throw error("lcm64: overflow");
    return (i64)(r < 0 ? -r : r);
}

i64 mulmod(i64 a, i64 b, i64 m) {
    if (m <= 0) throw error("mulmod: nonpositive modulus");
    __int128 r = (__int128)a * b % m;
    if (r < 0) r += m;
    return (i64)r;
}

i64 powmod(i64 base, i64 exp, i64 m) {
    if (m <= 0) throw error("powmod: nonpositive modulus");
    if (exp < 0) throw error("powmod: negative exponent");
    i64 r = 1 % m;
    i64 b = base % m;
    if (b < 0) b += m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        exp >>= 1;
    }
    return r;
}

i64 invmod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a0 = a % m;
    if (a0 < 0) a0 += m;
    i64 b = a0;
    // extended euclid on (m, a mod m)
    while (b != 0) {
        i64 q = g / b;
        i64 t = g - q * b; g = b; b = t;
        t = x - q * x1; x = x1; x1 = t;
    }
    if (g != 1) throw error("invmod: not invertible");
    x %= m;
    if (x < 0) x += m;
    return x;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    // deterministic Miller-Rabin for 64-bit range
    i64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        i64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::pair<i64, i64>> factorize(i64 n) {
    if (n < 1) throw error("factorize: n must be >= 1");
    std::vector<std::pair<i64, i64>> out;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            i64 e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

i64 euler_phi(i64 n) {
    i64 r = 1;
    for (auto [p, e] : factorize(n)) {
        i64 pe = 1;
        for (i64 i = 1; i < e; ++i) pe *= p;
        r *= pe * (p - 1);
    }
    return r;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> out{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t sz = out.size();
        i64 pe = 1;
        for (i64 i = 1; i <= e; ++i) {
            pe *= p;
            for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 padic_valuation(i64 n, i64 p) {
    if (n == 0) throw error("padic_valuation: zero");
    i64 v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

i64 strip_prime(i64 n, i64 p) {
    while (n % p == 0) n /= p;
    return n;
}

i64 odd_part(i64 n) { return strip_prime(n, 2); }

i64 crt(const std::vector<i64>& residues, const std::vector<i64>& moduli) {
    if (residues.size() != moduli.size()) throw error("crt: size mismatch");
    i64 m = 1, x = 0;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        i64 mi = moduli[i], ri = residues[i] % mi;
        if (ri < 0) ri += mi;
        if (std::gcd(m, mi) != 1) throw error("crt: moduli not coprime");
        // x' = x mod m, x' = ri mod mi
        i64 t = mulmod((ri - x % mi + mi) % mi, invmod(m % mi, mi), mi);
        __int128 nx = (__int128)x + (__int128)t * m;
        m *= mi;
        x = (i64)(nx % m);
    }
    return x;
}

i64 multiplicative_order(i64 a, i64 n) {
    if (n == 1) return 1;
    a %= n;
    if (a < 0) a += n;
    if (std::gcd(a, n) != 1) throw error("multiplicative_order: not a unit");
    i64 ord = euler_phi(n);
    for (auto [p, e] : factorize(ord)) {
        for (i64 i = 0; i < e; ++i) {
            if (powmod(a, ord / p, n) == 1) ord /= p;
            else break;
        }
    }
    return ord;
}

i64 primitive_root(i64 pk) {
    if (pk == 1) return 1; // trivial group
    if (pk == 2) return 1;
    if (pk == 4) return 3;
    auto f = factorize(pk);
    if (f.size() != 1 || f[0].first == 2)
        throw error("primitive_root: modulus must be odd prime power, 1, 2 or 4");
    i64 p = f[0].first;
    i64 phi_p = p - 1;
    auto qs = factorize(phi_p);
    i64 g = 0;
    for (i64 c = 2; c < p; ++c) {
        bool ok = true;
        for (auto [q, e] : qs) {
            (void)e;
            if (powmod(c, phi_p / q, p) == 1) { ok = false; break; }
        }
        if (ok) { g = c; break; }
    }
    if (f[0].second == 1) return g;
    // lift to p^k: g works unless g^(p-1) = 1 mod p^2
    if (powmod(g, p - 1, p * p) == 1) g += p;
    return g;
}

} // namespace nibtower
