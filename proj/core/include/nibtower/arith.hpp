#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nibtower/errors.hpp"

namespace nibtower {

using i64 = std::int64_t;

i64 gcd64(i64 a, i64 b);
i64 lcm64(i64 a, i64 b); // throws on overflow

/// (a * b) mod m without overflow, m > 0.
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 base, i64 exp, i64 m);
/// Inverse of a mod m; throws if gcd(a, m) != 1.
i64 invmod(i64 a, i64 m);

bool is_prime(i64 n);
/// Prime factorization as (p, exponent) pairs, p ascending. n >= 1.
std::vector<std::pair<i64, i64>> factorize(i64 n);
i64 euler_phi(i64 n);
/// All positive divisors, ascending.
std::vector<i64> divisors(i64 n);
/// Largest e with p^e | n.
i64 padic_valuation(i64 n, i64 p);
/// n with all factors of p removed.
i64 strip_prime(i64 n, i64 p);
/// Odd part of n.
i64 odd_part(i64 n);

/// x with x = r[i] mod m[i] for pairwise coprime m[i]; result mod prod(m).
i64 crt(const std::vector<i64>& residues, const std::vector<i64>& moduli);

/// Multiplicative order of a mod n; requires gcd(a, n) = 1.
i64 multiplicative_order(i64 a, i64 n);
/// Smallest primitive root mod p^k (p odd prime) or mod 1, 2, 4.
i64 primitive_root(i64 pk);

} // namespace nibtower
