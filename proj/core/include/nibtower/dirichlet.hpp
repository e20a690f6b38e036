#pragma once

#include <map>
#include <optional>
#include <string>

#include "nibtower/abelian.hpp"

namespace nibtower {

/// A Dirichlet character of (Z/nZ)^x.  Values are abstract root-of-unity
/// exponents; no complex numbers appear anywhere.  With M the exponent of the
/// unit group, the character sends the i-th generator to zeta_M^{t_i}.
class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const UnitGroup> level, std::vector<i64> gen_exponents);

    i64 modulus() const { return level_->modulus(); }
    i64 order() const { return order_; }
    i64 conductor() const { return conductor_; }
    bool is_odd() const;  // chi(-1) = -1
    bool is_even() const { return !is_odd(); }
    bool is_trivial() const { return order_ == 1; }

    /// chi(a) = zeta_M^{result}, M = level exponent.
    i64 value_exponent_at_level(i64 a) const;
    /// chi(a) = zeta_order^{result}.
    i64 value_exponent(i64 a) const;
    bool is_trivial_on(const Subgroup& h) const;

    /// Exponents of zeta_M at the unit-group generators.
    const std::vector<i64>& gen_exponents() const { return t_; }
    /// Exponents of zeta_order at the unit-group generators.
    std::vector<i64> value_exponents() const;
    /// Coordinates in the dual group Prod Z/d_i (c_i with chi(g_i) = zeta_{d_i}^{c_i}).
    std::vector<i64> dual_tuple() const;
    static DirichletCharacter from_dual_tuple(std::shared_ptr<const UnitGroup> level,
                                              const std::vector<i64>& tuple);

    DirichletCharacter power(i64 k) const;
    DirichletCharacter times(const DirichletCharacter& o) const;

    const std::shared_ptr<const UnitGroup>& level() const { return level_; }

    bool operator==(const DirichletCharacter& o) const {
        return modulus() == o.modulus() && t_ == o.t_;
    }
    bool operator<(const DirichletCharacter& o) const { return t_ < o.t_; }

private:
    std::shared_ptr<const UnitGroup> level_;
    std::vector<i64> t_;
    i64 order_ = 1;
    i64 conductor_ = 1;
};

/// All characters of (Z/nZ)^x trivial on H, sorted canonically.
std::vector<DirichletCharacter> annihilator_characters(std::shared_ptr<const UnitGroup> level,
                                                       const Subgroup& h);

/// An absolutely abelian number field, stored at its conductor as the fixing
/// subgroup H of (Z/fZ)^x; the field is the subfield of the f-th cyclotomic
/// field fixed by H.  Equality is literal equality of (conductor, H).
class AbelianField {
public:
    static AbelianField rationals();
    static AbelianField from_fixing_subgroup(i64 n, const std::vector<i64>& generators);
    static AbelianField cyclotomic(i64 n);
    static AbelianField max_real(i64 n);
    /// Degree-d subfield of the p-th cyclotomic field (p prime, d | p-1).
    static AbelianField cyclic_subfield(i64 p, i64 d);
    /// Field cut out by a set of characters at a common level (their common kernel).
    static AbelianField from_characters(std::shared_ptr<const UnitGroup> level,
                                        const std::vector<DirichletCharacter>& chars);
    /// Canonicalize a fixing subgroup given at any level.
    static AbelianField from_subgroup(const Subgroup& h);

    i64 conductor() const { return level_->modulus(); }
    i64 degree() const { return degree_; }
    const Subgroup& fixing_subgroup() const { return fixing_; }
    const std::shared_ptr<const UnitGroup>& level() const { return level_; }
    const std::map<i64, i64>& ramification() const { return ramification_; }

    std::vector<DirichletCharacter> character_group() const;
    bool is_totally_real() const;
    bool is_rationals() const { return conductor() == 1; }
    /// Number of roots of unity in the field.
    i64 roots_of_unity_order() const;

    bool contains(const AbelianField& other) const; // other subfield of this
    /// Fixing subgroup lifted to level N (conductor must divide normalized N).
    Subgroup fixing_subgroup_at(i64 n) const;

    bool operator==(const AbelianField& o) const {
        return conductor() == o.conductor() && fixing_.elements() == o.fixing_.elements();
    }
    bool operator<(const AbelianField& o) const {
        if (conductor() != o.conductor()) return conductor() < o.conductor();
        return fixing_.elements() < o.fixing_.elements();
    }

    std::string describe() const; // short human-readable label

private:
    AbelianField(std::shared_ptr<const UnitGroup> level, Subgroup fixing);
    std::shared_ptr<const UnitGroup> level_;
    Subgroup fixing_;
    i64 degree_ = 1;
    std::map<i64, i64> ramification_;
};

AbelianField compositum(const AbelianField& a, const AbelianField& b);
AbelianField intersection(const AbelianField& a, const AbelianField& b);
bool linearly_disjoint(const AbelianField& a, const AbelianField& b);
bool arithmetically_disjoint(const AbelianField& a, const AbelianField& b);

std::map<i64, i64> ramification_data(const AbelianField& f);
/// e_p (1 if unramified).
i64 ramification_index(const AbelianField& f, i64 p);
/// Residue degree f_p of p (any p); e*f divides the field degree.
i64 residue_degree(const AbelianField& f, i64 p);

bool is_totally_real(const AbelianField& f);
i64 roots_of_unity_order(const AbelianField& f);

struct ZetaQResult {
    bool contained;
    i64 cap_exponent; // 3-power level 3^cap_exponent used for the test
};
/// Whether zeta_q lies in L adjoined all 3-power roots of unity; decided at a
/// finite level whose exponent cap is reported for auditability.
ZetaQResult zeta_q_in_3power_closure(i64 q, const AbelianField& l);

} // namespace nibtower
