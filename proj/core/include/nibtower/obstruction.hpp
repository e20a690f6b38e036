#pragma once

#include <optional>
#include <string>

#include "nibtower/tower.hpp"

namespace nibtower {

enum class VerdictStatus { NoWNIB, NoNIB, MustBeArithSplit, ArithSplit, HypothesesNotMet };
std::string to_string(VerdictStatus s);

/// One verified (or failed) hypothesis; the id plus embedded key=value pairs
/// make the entry replayable against the field/tower primitives.
struct TraceEntry {
    std::string hypothesis;
    bool ok = false;
    std::string detail;
};

struct ObstructionWitness {
    std::optional<i64> p;
    std::optional<i64> ell;
    std::optional<i64> q;
    std::optional<i64> g;
    std::string condition; // "a", "a-prime", "b", ...
    std::optional<AbelianField> reduced_top;  // the cyclic ell-power layer with e_p = ell
    std::optional<AbelianField> complement;   // L' for splitness verdicts
    std::vector<i64> d_subgroup;              // D <= (Z/ellZ)^x when computed
};

struct Verdict {
    VerdictStatus status = VerdictStatus::HypothesesNotMet;
    std::string theorem;
    ObstructionWitness witness;
    std::vector<TraceEntry> trace;
};

struct ObstructionOptions {
    bool allow_condition_a_prime = false; // accept (a') when (a) fails
    bool per_factor_condition_b = false;  // per-factor weakening in the split pipeline
    i64 subgroup_bound = 200;
};

/// Non-existence of a weak normal integral basis from a common ramified prime
/// with an odd lower layer and an odd prime ell in the upper layer.
Verdict check_nownib1(const Tower& t, const ObstructionOptions& opts = {});

/// The variant for [top : middle] an odd prime with p totally ramified there.
Verdict check_nownib2(const Tower& t, const ObstructionOptions& opts = {});

struct ConditionAPrimeResult {
    bool holds = false;
    i64 g = 0;                   // admissible base (2 or a Fermat prime), 0 if none
    std::vector<i64> d_subgroup; // D <= (Z/ellZ)^x
    bool linearly_disjoint_over_base = false;
};
/// The weakened disjointness condition: top linearly disjoint from
/// base(zeta_ell), and some g in {2,3,5,17,257,65537} with ell > g^2 lies in D.
ConditionAPrimeResult condition_a_prime(const Tower& t, i64 ell, i64 p);

/// Lifts a nownib1 verdict for a cyclic ell-power layer to fields between
/// (top, top(zeta_ell)) and (middle, middle(zeta_ell)) of equal relative degree.
Verdict check_corollary_lift(const Tower& t, const AbelianField& l1, const AbelianField& k1,
                             const ObstructionOptions& opts = {});

/// If the tower's hypotheses hold, any WNIB forces disjoint ramification;
/// returns NoWNIB when the tower is in fact not disjointly ramified.
Verdict wnib_forces_disjoint_ram(const Tower& t, const ObstructionOptions& opts = {});

/// Full split pipeline over Q: ArithSplit with the complement when the tower
/// splits (an NIB then exists); otherwise NoNIB with a per-factor mechanical
/// certificate when a common ramified prime survives the zeta_ell stripping,
/// or MustBeArithSplit when the tower is disjointly ramified but unsplit.
Verdict nib_split_decision(const Tower& t, const ObstructionOptions& opts = {});

/// Strip from every character of X_F the prime-to-ell-order component of its
/// ell-conductor part ("remove Q(zeta_ell)").
AbelianField remove_zeta_ell(const AbelianField& f, i64 ell);

/// Re-checks every trace entry against the underlying primitives.
bool replay_trace(const Verdict& v, const Tower& t);

} // namespace nibtower
