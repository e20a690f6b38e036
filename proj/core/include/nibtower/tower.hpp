#pragma once

#include <optional>

#include "nibtower/dirichlet.hpp"

namespace nibtower {

struct RelativeRamification {
    i64 e_lower = 1; // e_{p, K/k}
    i64 e_upper = 1; // e_{p, L/K}
    bool operator==(const RelativeRamification&) const = default;
};

/// A validated chain base <= middle <= top of absolutely abelian fields with
/// its relative ramification table (rational primes, per the stated labeling
/// convention).
class Tower {
public:
    Tower(AbelianField base, AbelianField middle, AbelianField top);

    const AbelianField& base() const { return base_; }
    const AbelianField& middle() const { return middle_; }
    const AbelianField& top() const { return top_; }
    bool base_is_rationals() const { return base_.is_rationals(); }
    i64 degree_top_over_middle() const { return top_.degree() / middle_.degree(); }
    i64 degree_middle_over_base() const { return middle_.degree() / base_.degree(); }

    /// Primes ramified in top/base, with (e_{p,K/k}, e_{p,L/K}).
    const std::map<i64, RelativeRamification>& ramification_table() const { return table_; }

private:
    AbelianField base_, middle_, top_;
    std::map<i64, RelativeRamification> table_;
};

struct DisjointRamificationResult {
    bool disjoint = true;
    std::vector<i64> witnesses; // primes ramified in both layers
};
DisjointRamificationResult has_disjoint_ramification(const Tower& t);

/// M(L/K) at the rational-prime granularity, with the complex-conjugation
/// action recorded explicitly (identity permutation in both the totally real
/// and the CM case handled here).
struct RamModule {
    std::vector<i64> primes;
    std::vector<i64> orders;
    std::vector<std::size_t> j_action;
    bool top_is_cm = false;
};
RamModule ramification_module(const Tower& t);

/// Strip from every character of X_top its components at primes in S; the
/// fixed field of the resulting character group. (Level: conductor of top.)
AbelianField strip_ramified_components(const AbelianField& top, const std::vector<i64>& s);

/// The canonical complement candidate over Q: strip the middle layer's
/// ramified primes from X_top and test the splitting conditions.
std::optional<AbelianField> canonical_split(const Tower& t);

struct SplitnessVerdict {
    bool split = false;
    std::optional<AbelianField> complement;
    std::string method; // "canonical" or "oracle"
};
/// Decides arithmetic splitness; over Q via the canonical construction, over
/// other bases by exhaustive subgroup enumeration.
SplitnessVerdict is_arithmetically_split(const Tower& t, i64 subgroup_bound = 200);

/// Ground truth by enumeration of all intermediate fields k <= F <= L.
bool exhaustive_split_oracle(const Tower& t, i64 subgroup_bound = 200);
std::optional<AbelianField> exhaustive_split_witness(const Tower& t, i64 subgroup_bound = 200);

/// Gal(top/middle) as an abstract group (dual of X_top / X_middle).
AbelianGroupStructure relative_galois_structure(const AbelianField& middle,
                                                const AbelianField& top);

/// Fields K <= L_i <= L with Gal(L_i/K) cyclic of prime-power order and
/// L = compositum of the L_i, following the invariant-factor decomposition of
/// X_L/X_K with a deterministic generator choice.
std::vector<AbelianField> cyclic_prime_power_decomposition(const Tower& t);

} // namespace nibtower
