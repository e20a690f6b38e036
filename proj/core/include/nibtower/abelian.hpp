#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "nibtower/arith.hpp"

namespace nibtower {

/// A finite abelian group in invariant-factor form: Z/d1 x ... x Z/dk with
/// d1 | d2 | ... and every di > 1.  `generators` are exponent-vector
/// representatives with respect to some ambient basis; `generator_residues`
/// is filled for multiplicative groups mod n.
struct AbelianGroupStructure {
    std::vector<i64> invariant_factors;
    std::vector<std::vector<i64>> generators;
    std::vector<i64> generator_residues;

    i64 order() const;
    i64 exponent() const; // largest invariant factor, 1 if trivial
    bool is_trivial() const { return invariant_factors.empty(); }

    bool operator==(const AbelianGroupStructure& o) const {
        return invariant_factors == o.invariant_factors;
    }
};

/// True iff the group has at most one invariant factor.
bool is_cyclic(const AbelianGroupStructure& g);

/// Element of a finite abelian group in invariant-factor coordinates.
using GroupVec = std::vector<i64>;

/// The multiplicative group (Z/nZ)^x with a fixed invariant-factor generator
/// basis.  Moduli n = 2 mod 4 are normalized to n/2 (same group, canonical
/// conductors).  Instances are immutable and shared.
class UnitGroup {
public:
    static std::shared_ptr<const UnitGroup> make(i64 n);

    i64 modulus() const { return n_; }
    i64 order() const { return phi_; }
    i64 exponent() const { return orders_.empty() ? 1 : orders_.back(); }
    /// Generator residues; generators()[i] has multiplicative order
    /// invariant_factors()[i], and the group is their direct product.
    const std::vector<i64>& generators() const { return gens_; }
    const std::vector<i64>& invariant_factors() const { return orders_; }

    bool is_unit(i64 a) const;
    /// Exponent vector of a unit with respect to the generator basis.
    const std::vector<i64>& dlog(i64 a) const;
    /// Product of generators()[i]^e[i] mod n.
    i64 from_exponents(const std::vector<i64>& e) const;
    /// All units, ascending. (For modulus 1 this is {0}, the class of every
    /// integer.)
    const std::vector<i64>& units() const { return units_; }
    i64 reduce(i64 a) const; // representative in [0, n)

private:
    explicit UnitGroup(i64 n);
    i64 n_ = 1;
    i64 phi_ = 1;
    std::vector<i64> gens_;
    std::vector<i64> orders_;
    std::vector<i64> units_;
    std::unordered_map<i64, std::vector<i64>> dlog_;
};

/// Structure of (Z/nZ)^x. For n = 2 mod 4 the canonical modulus n/2 is used.
AbelianGroupStructure unit_group_structure(i64 n);

/// A subgroup of (Z/nZ)^x, canonicalized by its sorted element list.
class Subgroup {
public:
    Subgroup(std::shared_ptr<const UnitGroup> ambient, const std::vector<i64>& generators);
    static Subgroup trivial(std::shared_ptr<const UnitGroup> ambient);
    static Subgroup full(std::shared_ptr<const UnitGroup> ambient);
    /// Trusted constructor from a closed, sorted element list.
    static Subgroup from_sorted_elements(std::shared_ptr<const UnitGroup> ambient,
                                         std::vector<i64> elements);

    const std::shared_ptr<const UnitGroup>& ambient() const { return ambient_; }
    const std::vector<i64>& elements() const { return elements_; }
    const std::vector<i64>& given_generators() const { return gens_; }
    i64 order() const { return (i64)elements_.size(); }
    bool contains(i64 a) const;
    bool contains(const Subgroup& other) const;
    /// Canonical generating residues (from the invariant-factor basis of the
    /// subgroup); deterministic.
    std::vector<i64> canonical_generators() const;

    bool operator==(const Subgroup& o) const {
        return ambient_->modulus() == o.ambient_->modulus() && elements_ == o.elements_;
    }

private:
    std::shared_ptr<const UnitGroup> ambient_;
    std::vector<i64> gens_;
    std::vector<i64> elements_;
};

Subgroup join(const Subgroup& a, const Subgroup& b);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

/// Invariant factors (and generators) of the subgroup generated inside the
/// ambient group Z/f1 x ... x Z/fk by the given exponent vectors.
AbelianGroupStructure subgroup_structure(const std::vector<i64>& ambient_factors,
                                         const std::vector<std::vector<i64>>& generators);
AbelianGroupStructure subgroup_structure(const Subgroup& s);

/// Structure of (span(numerator) + R) / (span(denominator) + R) where R is the
/// relation lattice of the ambient factors. The denominator span must be
/// contained in the numerator span.
AbelianGroupStructure quotient_structure(const std::vector<i64>& ambient_factors,
                                         const std::vector<std::vector<i64>>& numerator_gens,
                                         const std::vector<std::vector<i64>>& denominator_gens);

/// All subgroups H with lower <= H <= upper, sorted by (order, elements).
/// Throws bound_exceeded_error if the index [upper : lower] exceeds the bound.
std::vector<Subgroup> intermediate_subgroups(const Subgroup& lower, const Subgroup& upper,
                                             i64 index_bound);

} // namespace nibtower
