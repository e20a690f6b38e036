#pragma once

#include <unordered_map>

#include "nibtower/dirichlet.hpp"

namespace nibtower {

/// A class of G-Galois algebras over Q, represented at a finite modulus n as
/// a homomorphism (Z/nZ)^x -> G (images of the unit-group generators).
class GExtension {
public:
    GExtension(std::shared_ptr<const UnitGroup> level, AbelianGroupStructure g,
               std::vector<GroupVec> generator_images);
    static GExtension identity_class(i64 n, AbelianGroupStructure g);

    const std::shared_ptr<const UnitGroup>& level() const { return level_; }
    const AbelianGroupStructure& group() const { return g_; }
    const std::vector<GroupVec>& generator_images() const { return images_; }

    GroupVec apply(i64 a) const;
    i64 conductor() const;
    GExtension lift_to(i64 n) const;
    Subgroup kernel() const;
    bool is_identity_class() const;

private:
    std::shared_ptr<const UnitGroup> level_;
    AbelianGroupStructure g_;
    std::vector<GroupVec> images_;
};

GExtension g_product(const GExtension& a, const GExtension& b);
GExtension g_inverse(const GExtension& a);
/// Class equality (compared after lifting to the lcm of the levels).
bool g_equal(const GExtension& a, const GExtension& b);

struct CoreResult {
    AbelianGroupStructure image;              // structure of G_0
    std::vector<GroupVec> image_generators;   // generators of G_0 inside G
    AbelianField core_field;                  // fixed field of ker(phi)
};
CoreResult core(const GExtension& m);

bool is_unramified(const GExtension& m);
bool is_tame(const GExtension& m);

/// psi agreeing with phi on the prime-to-S components and trivial at S; its
/// conductor is coprime to every prime of S.
GExtension construct_psi(const GExtension& phi, const std::vector<i64>& strip_primes);

/// Restriction of a class to the subgroup fixing K (the base-changed class
/// of K tensor M over K).
class GRestriction {
public:
    GRestriction(std::shared_ptr<const UnitGroup> level, Subgroup domain,
                 AbelianGroupStructure g, std::unordered_map<i64, GroupVec> values);

    const std::shared_ptr<const UnitGroup>& level() const { return level_; }
    const Subgroup& domain() const { return domain_; }
    const AbelianGroupStructure& group() const { return g_; }
    GroupVec apply(i64 a) const;
    GRestriction lift_to(i64 n) const;
    bool is_identity_class() const;

private:
    std::shared_ptr<const UnitGroup> level_;
    Subgroup domain_;
    AbelianGroupStructure g_;
    std::unordered_map<i64, GroupVec> values_;
};

GRestriction base_change(const GExtension& m, const AbelianField& k_field);
GRestriction g_product(const GRestriction& a, const GRestriction& b);
GRestriction g_inverse(const GRestriction& a);
bool g_equal(const GRestriction& a, const GRestriction& b);
bool is_unramified(const GRestriction& m);
bool is_tame(const GRestriction& m);

struct RestrictedCore {
    AbelianGroupStructure image;
    AbelianField core_field;   // as an absolutely abelian field containing K
    i64 relative_degree = 1;   // [core : K] = |image|
};
RestrictedCore core(const GRestriction& m);

/// Exactness at the middle of G -> (GxG)/<(z,-z)> -> (GxGxG)/<(z,-z,0),(0,z,-z)>
/// with the maps x -> (x,-x) and (x,y) -> (0, x+y, 0), for G odd abelian and
/// z running over the given subgroup generators. Checked by full enumeration.
bool amitsur_minus_exact(const AbelianGroupStructure& g, const std::vector<GroupVec>& g0_gens);

/// Invariant-factor shapes of every abelian group of odd order <= bound.
std::vector<AbelianGroupStructure> odd_abelian_groups_up_to(i64 bound);

/// Every subgroup of the abstract group, as sorted element lists.
std::vector<std::vector<GroupVec>> all_abstract_subgroups(const AbelianGroupStructure& g);

} // namespace nibtower
