#include "nibtower/obstruction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace nibtower {

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::NoWNIB: return "NoWNIB";
        case VerdictStatus::NoNIB: return "NoNIB";
        case VerdictStatus::MustBeArithSplit: return "MustBeArithSplit";
        case VerdictStatus::ArithSplit: return "ArithSplit";
        case VerdictStatus::HypothesesNotMet: return "HypothesesNotMet";
    }
    return "?";
}

namespace {

std::string kv(const std::string& id, std::initializer_list<std::pair<const char*, i64>> args) {
    std::ostringstream os;
    os << id;
    for (auto& [k, v] : args) os << ' ' << k << '=' << v;
    return os.str();
}

std::vector<i64> odd_prime_divisors(i64 n) {
    std::vector<i64> out;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        if (p % 2 == 1) out.push_back(p);
    }
    return out;
}

bool top_layer_tame(const Tower& t) {
    for (auto& [p, rel] : t.ramification_table())
        if (rel.e_upper > 1 && rel.e_upper % p == 0) return false;
    return true;
}

void require_common_preconditions(const Tower& t) {
    if (!t.middle().is_totally_real())
        throw precondition_error("obstruction: middle field must be totally real");
    if (!top_layer_tame(t))
        throw precondition_error("obstruction: top layer must be tame");
}

// condition (a): middle linearly disjoint from Q(zeta_ell) over Q
bool condition_a(const Tower& t, i64 ell) {
    return linearly_disjoint(t.middle(), AbelianField::cyclotomic(ell));
}

// condition (b) for ell = 3: an odd prime q | e_lower with zeta_q outside
// top(zeta_{3^infty}); returns the smallest such q
std::optional<i64> condition_b_witness(const Tower& t, i64 e_lower) {
    for (i64 q : odd_prime_divisors(e_lower)) {
        if (!zeta_q_in_3power_closure(q, t.top()).contained) return q;
    }
    return std::nullopt;
}

// the cyclic ell-power layer over the middle field in which p ramifies with
// index exactly ell
std::optional<AbelianField> reduced_layer(const Tower& t, i64 p, i64 ell) {
    const i64 n = t.top().conductor();
    auto level = t.top().level();
    Subgroup hk = t.middle().fixing_subgroup_at(n);
    i64 e_mid = ramification_index(t.middle(), p);

    std::optional<AbelianField> best;
    for (const auto& chi : annihilator_characters(level, t.top().fixing_subgroup())) {
        // order of chi modulo X_middle
        i64 d = 0;
        for (i64 k : divisors(chi.order()))
            if (chi.power(k).is_trivial_on(hk)) { d = k; break; }
        if (d <= 1) continue;
        i64 rest = d;
        while (rest % ell == 0) rest /= ell;
        if (rest != 1) continue; // not an ell-power
        std::vector<i64> kernel;
        for (i64 a : hk.elements())
            if (chi.value_exponent_at_level(a) == 0) kernel.push_back(a);
        AbelianField f = AbelianField::from_subgroup(
            Subgroup::from_sorted_elements(level, std::move(kernel)));
        if (ramification_index(f, p) != ell * e_mid) continue;
        if (!best || f.degree() < best->degree() || (f.degree() == best->degree() && f < *best))
            best = std::move(f);
    }
    return best;
}

struct CandidateResult {
    bool found = false;
    i64 p = 0, ell = 0;
    std::optional<i64> q;
    std::optional<i64> g;
    std::vector<i64> d_subgroup;
    std::string condition;
};

// scans ramified primes for the theorem's hypotheses; fills the trace
CandidateResult scan_candidates(const Tower& t, const ObstructionOptions& opts,
                                bool require_totally_ramified, std::vector<TraceEntry>& trace) {
    CandidateResult out;
    const i64 upper_degree = t.degree_top_over_middle();
    for (auto& [p, rel] : t.ramification_table()) {
        if (odd_part(rel.e_lower) <= 1) {
            trace.push_back({kv("odd-lower-factor", {{"p", p}}), false,
                             "e_lower = " + std::to_string(rel.e_lower) +
                                 " has no nontrivial odd factor"});
            continue;
        }
        trace.push_back({kv("odd-lower-factor", {{"p", p}}), true,
                         "e_lower = " + std::to_string(rel.e_lower)});
        for (i64 ell : odd_prime_divisors(rel.e_upper)) {
            if (require_totally_ramified && rel.e_upper != upper_degree) {
                trace.push_back({kv("totally-ramified", {{"p", p}}), false,
                                 "e_upper = " + std::to_string(rel.e_upper) +
                                     " < [top:middle] = " + std::to_string(upper_degree)});
                continue;
            }
            trace.push_back({kv("ell-divides-upper", {{"p", p}, {"ell", ell}}), true, ""});
            std::string condition = "a";
            std::optional<i64> g_used;
            std::vector<i64> d_sub;
            bool cond_a = condition_a(t, ell);
            trace.push_back({kv("condition-a", {{"ell", ell}}), cond_a,
                             cond_a ? "[middle(zeta_ell):middle] = ell-1"
                                    : "middle meets Q(zeta_ell)"});
            if (!cond_a) {
                if (!opts.allow_condition_a_prime) continue;
                auto ap = condition_a_prime(t, ell, p);
                trace.push_back({kv("condition-a-prime", {{"ell", ell}, {"g", ap.g}}), ap.holds,
                                 ap.holds ? "" : "no admissible g, or top meets base(zeta_ell)"});
                if (!ap.holds) continue;
                condition = "a-prime";
                g_used = ap.g;
                d_sub = ap.d_subgroup;
            }
            std::optional<i64> q;
            if (ell == 3) {
                q = condition_b_witness(t, rel.e_lower);
                trace.push_back({kv("condition-b", {{"ell", ell}, {"q", q ? *q : 0}}),
                                 q.has_value(),
                                 q ? "zeta_q outside top(zeta_{3^infty})"
                                   : "every odd q | e_lower has zeta_q inside top(zeta_{3^infty})"});
                if (!q) continue;
            }
            out.found = true;
            out.p = p;
            out.ell = ell;
            out.q = q;
            out.g = g_used;
            out.condition = condition;
            out.d_subgroup = std::move(d_sub);
            return out;
        }
    }
    return out;
}

} // namespace

ConditionAPrimeResult condition_a_prime(const Tower& t, i64 ell, i64 p) {
    (void)p;
    if (ell < 3 || !is_prime(ell)) throw precondition_error("condition (a'): ell must be an odd prime");
    ConditionAPrimeResult out;
    // D = units mod ell on which every character of X_top of conductor | ell vanishes
    const i64 n = t.top().conductor();
    std::vector<DirichletCharacter> small_chars;
    for (const auto& chi : t.top().character_group())
        if (ell % chi.conductor() == 0) small_chars.push_back(chi);
    for (i64 a = 1; a < ell; ++a) {
        // a unit mod ell, lifted to a unit mod n with the same residue mod ell
        bool in_d = true;
        i64 lift = a;
        if (n % ell == 0) {
            while (std::gcd(lift, n) != 1) lift += ell;
        } else {
            lift = 1; // characters of conductor | ell are trivial when ell is prime to n
        }
        for (const auto& chi : small_chars) {
            i64 x = n % ell == 0 ? lift : 1;
            if (chi.value_exponent_at_level(x) != 0) { in_d = false; break; }
        }
        if (in_d) out.d_subgroup.push_back(a);
    }
    AbelianField base_zeta = compositum(t.base(), AbelianField::cyclotomic(ell));
    out.linearly_disjoint_over_base = intersection(t.top(), base_zeta) == t.base();
    for (i64 g : {2, 3, 5, 17, 257, 65537}) {
        if (ell <= g * g) continue;
        if (std::binary_search(out.d_subgroup.begin(), out.d_subgroup.end(), g % ell)) {
            out.g = g;
            break;
        }
    }
    out.holds = out.linearly_disjoint_over_base && out.g != 0;
    return out;
}

Verdict check_nownib1(const Tower& t, const ObstructionOptions& opts) {
    require_common_preconditions(t);
    Verdict v;
    v.theorem = "nownib1";
    v.trace.push_back({"middle-totally-real", true, ""});
    v.trace.push_back({"tame-top-over-middle", true, ""});
    v.trace.push_back({"odd-factor-reading", true,
                       "nontrivial odd factor read as: some odd prime divides e_lower"});

    CandidateResult c = scan_candidates(t, opts, false, v.trace);
    if (!c.found) {
        v.status = VerdictStatus::HypothesesNotMet;
        return v;
    }
    auto reduced = reduced_layer(t, c.p, c.ell);
    if (!reduced)
        throw error("check_nownib1: no cyclic ell-power layer with e_p = ell (internal)");
    v.trace.push_back({kv("reduced-layer", {{"p", c.p}, {"ell", c.ell}}), true,
                       "conductor " + std::to_string(reduced->conductor()) + ", degree " +
                           std::to_string(reduced->degree())});
    v.status = VerdictStatus::NoWNIB;
    v.witness.p = c.p;
    v.witness.ell = c.ell;
    v.witness.q = c.q;
    v.witness.g = c.g;
    v.witness.condition = c.condition;
    v.witness.d_subgroup = c.d_subgroup;
    v.witness.reduced_top = std::move(*reduced);
    return v;
}

Verdict check_nownib2(const Tower& t, const ObstructionOptions& opts) {
    require_common_preconditions(t);
    i64 degree = t.degree_top_over_middle();
    if (degree < 3 || !is_prime(degree))
        throw precondition_error("check_nownib2: [top:middle] must be an odd prime");
    Verdict v;
    v.theorem = "nownib2";
    v.trace.push_back({"middle-totally-real", true, ""});
    v.trace.push_back({"tame-top-over-middle", true, ""});
    v.trace.push_back({kv("prime-degree", {{"ell", degree}}), true, ""});

    CandidateResult c = scan_candidates(t, opts, true, v.trace);
    if (!c.found) {
        v.status = VerdictStatus::HypothesesNotMet;
        return v;
    }
    v.status = VerdictStatus::NoWNIB;
    v.witness.p = c.p;
    v.witness.ell = c.ell;
    v.witness.q = c.q;
    v.witness.g = c.g;
    v.witness.condition = c.condition;
    v.witness.d_subgroup = c.d_subgroup;
    v.witness.reduced_top = t.top();
    return v;
}

Verdict check_corollary_lift(const Tower& t, const AbelianField& l1, const AbelianField& k1,
                             const ObstructionOptions& opts) {
    Verdict base = check_nownib1(t, opts);
    Verdict v;
    v.theorem = "nownib1-cor";
    if (base.status != VerdictStatus::NoWNIB) {
        v.status = VerdictStatus::HypothesesNotMet;
        v.trace.push_back({"base-nownib1", false, "base tower fails the theorem's hypotheses"});
        return v;
    }
    const i64 ell = *base.witness.ell;
    AbelianGroupStructure gal = relative_galois_structure(t.middle(), t.top());
    bool cyclic_ell_power = is_cyclic(gal);
    if (cyclic_ell_power) {
        i64 o = gal.order();
        while (o % ell == 0) o /= ell;
        cyclic_ell_power = o == 1;
    }
    if (!cyclic_ell_power)
        throw precondition_error("corollary lift: top/middle must be cyclic of ell-power degree");

    AbelianField top_zeta = compositum(t.top(), AbelianField::cyclotomic(ell));
    AbelianField mid_zeta = compositum(t.middle(), AbelianField::cyclotomic(ell));
    if (!(l1.contains(t.top()) && top_zeta.contains(l1)))
        throw precondition_error("corollary lift: need top <= L1 <= top(zeta_ell)");
    if (!(k1.contains(t.middle()) && mid_zeta.contains(k1)))
        throw precondition_error("corollary lift: need middle <= K1 <= middle(zeta_ell)");
    i64 deg_l = l1.degree() / t.top().degree();
    i64 deg_k = k1.degree() / t.middle().degree();
    if (l1.degree() % t.top().degree() != 0 || k1.degree() % t.middle().degree() != 0 ||
        deg_l != deg_k)
        throw precondition_error("corollary lift: [L1:top] must equal [K1:middle]");

    v.status = VerdictStatus::NoWNIB;
    v.witness = base.witness;
    v.trace = base.trace;
    v.trace.push_back({kv("lift-degrees", {{"relative", deg_l}}), true,
                       "L1 conductor " + std::to_string(l1.conductor()) + ", K1 conductor " +
                           std::to_string(k1.conductor())});
    return v;
}

Verdict wnib_forces_disjoint_ram(const Tower& t, const ObstructionOptions& opts) {
    if ((t.top().degree() / t.base().degree()) % 2 == 0)
        throw precondition_error("disjoint-ram proposition: [top:base] must be odd");
    if (!t.base().is_totally_real())
        throw precondition_error("disjoint-ram proposition: base must be totally real");
    if (!top_layer_tame(t)) throw precondition_error("disjoint-ram proposition: top layer must be tame");

    Verdict v;
    v.theorem = "wnib-implies-disjoint-ram";
    v.trace.push_back({"degree-odd", true, ""});
    v.trace.push_back({"tame-top-over-middle", true, ""});

    const i64 upper = t.degree_top_over_middle();
    for (i64 ell : odd_prime_divisors(upper)) {
        bool ok = condition_a(t, ell);
        v.trace.push_back({kv("condition-a", {{"ell", ell}}), ok, ""});
        if (!ok) {
            v.status = VerdictStatus::HypothesesNotMet;
            return v;
        }
    }
    bool cond_ab = upper % 3 != 0;
    v.trace.push_back({"condition-3-free", cond_ab,
                       cond_ab ? "3 does not divide [top:middle]" : "3 divides [top:middle]"});
    if (!cond_ab) {
        bool all_q = true;
        for (i64 q : odd_prime_divisors(t.degree_middle_over_base())) {
            bool outside = !zeta_q_in_3power_closure(q, t.top()).contained;
            v.trace.push_back({kv("condition-b", {{"q", q}}), outside, ""});
            if (!outside) all_q = false;
        }
        if (!all_q) {
            v.status = VerdictStatus::HypothesesNotMet;
            return v;
        }
    }
    (void)opts;

    auto dr = has_disjoint_ramification(t);
    v.trace.push_back({"disjoint-ram", dr.disjoint,
                       dr.disjoint ? "tower has disjoint ramification; no obstruction here"
                                   : "common ramified prime found"});
    if (dr.disjoint) {
        v.status = VerdictStatus::HypothesesNotMet; // hypotheses hold, no obstruction
        return v;
    }
    v.status = VerdictStatus::NoWNIB;
    v.witness.p = dr.witnesses.front();
    v.witness.condition = upper % 3 != 0 ? "a" : "b";
    return v;
}

AbelianField remove_zeta_ell(const AbelianField& f, i64 ell) {
    const i64 n = f.conductor();
    auto level = f.level();
    if (n % ell != 0) return f;
    i64 v = padic_valuation(n, ell);
    i64 ellv = 1;
    for (i64 i = 0; i < v; ++i) ellv *= ell;

    auto strip_to_ell = [&](i64 a) {
        std::vector<i64> residues, moduli;
        for (auto [p, e] : factorize(n)) {
            i64 pe = 1;
            for (i64 i = 0; i < e; ++i) pe *= p;
            moduli.push_back(pe);
            residues.push_back(p == ell ? a % pe : 1);
        }
        return crt(residues, moduli);
    };

    std::vector<DirichletCharacter> stripped;
    for (const auto& chi : f.character_group()) {
        // ell-block component of chi
        std::vector<i64> tprime;
        for (i64 g : level->generators())
            tprime.push_back(chi.value_exponent_at_level(strip_to_ell(g)));
        DirichletCharacter chi_ell(level, std::move(tprime));
        i64 d = chi_ell.order();
        i64 d_ell = 1, rest = d;
        while (rest % ell == 0) {
            rest /= ell;
            d_ell *= ell;
        }
        i64 dprime = d / d_ell;
        // prime-to-ell-order component of the ell-block part
        i64 u = dprime == 1 ? 0 : d_ell * invmod(d_ell % dprime, dprime);
        DirichletCharacter chi_one = chi_ell.power(u);
        stripped.push_back(chi.times(chi_one.power(-1)));
    }
    return AbelianField::from_characters(level, stripped);
}

Verdict nib_split_decision(const Tower& t, const ObstructionOptions& opts) {
    if (!t.base_is_rationals())
        throw precondition_error("nib_split_decision: base must be Q");
    if (t.top().degree() % 2 == 0)
        throw precondition_error("nib_split_decision: [top:Q] must be odd");
    if (!top_layer_tame(t))
        throw precondition_error("nib_split_decision: top layer must be tame");

    Verdict v;
    v.theorem = "nib-split";
    v.trace.push_back({"degree-odd", true, ""});
    v.trace.push_back({"tame-top-over-middle", true, ""});

    SplitnessVerdict split = is_arithmetically_split(t, opts.subgroup_bound);
    v.trace.push_back({"arith-split", split.split, split.method});
    if (split.split) {
        v.status = VerdictStatus::ArithSplit;
        v.witness.complement = split.complement;
        v.trace.push_back({"nib-implied", true,
                           "complement over Q has an NIB; arithmetic disjointness transfers it"});
        auto dr = has_disjoint_ramification(t);
        v.trace.push_back({"disjoint-ram", dr.disjoint, "consistency check"});
        return v;
    }

    // the negative direction needs condition (a) or (b)
    const i64 upper = t.degree_top_over_middle();
    auto factors = cyclic_prime_power_decomposition(t);
    bool conditions_ok = upper % 3 != 0;
    v.trace.push_back({"condition-3-free", conditions_ok, ""});
    if (!conditions_ok) {
        bool ok = true;
        if (opts.per_factor_condition_b) {
            for (const auto& li : factors) {
                i64 rel = li.degree() / t.middle().degree();
                if (rel % 3 != 0) continue;
                for (i64 q : odd_prime_divisors(t.middle().degree())) {
                    bool outside = !zeta_q_in_3power_closure(q, li).contained;
                    v.trace.push_back({kv("condition-b-factor",
                                          {{"q", q}, {"factor_conductor", li.conductor()}}),
                                       outside, ""});
                    if (!outside) ok = false;
                }
            }
        } else {
            for (i64 q : odd_prime_divisors(t.middle().degree())) {
                bool outside = !zeta_q_in_3power_closure(q, t.top()).contained;
                v.trace.push_back({kv("condition-b", {{"q", q}}), outside, ""});
                if (!outside) ok = false;
            }
        }
        conditions_ok = ok;
    }
    if (!conditions_ok) {
        v.status = VerdictStatus::HypothesesNotMet;
        return v;
    }

    // mechanical certificate: a factor with a common ramified prime, pushed
    // through the zeta_ell stripping, the base obstruction, and the lift back
    for (const auto& li : factors) {
        Tower ti(t.base(), t.middle(), li);
        auto dr = has_disjoint_ramification(ti);
        i64 ell = factorize(li.degree() / t.middle().degree())[0].first;
        v.trace.push_back({kv("factor", {{"conductor", li.conductor()}, {"ell", ell}}),
                           true, dr.disjoint ? "disjointly ramified" : "common ramified prime"});
        if (dr.disjoint) continue;
        i64 p = dr.witnesses.front();

        AbelianField l1 = compositum(li, AbelianField::cyclotomic(ell));
        AbelianField k1 = compositum(t.middle(), AbelianField::cyclotomic(ell));
        AbelianField l_stripped = remove_zeta_ell(l1, ell);
        AbelianField k_stripped = remove_zeta_ell(k1, ell);
        bool survives = ramification_index(k_stripped, p) > 1 &&
                        ramification_index(l_stripped, p) > ramification_index(k_stripped, p);
        v.trace.push_back({kv("stripped-ramification", {{"p", p}}), survives,
                           "L' conductor " + std::to_string(l_stripped.conductor()) +
                               ", K' conductor " + std::to_string(k_stripped.conductor())});
        if (!survives) continue;

        Tower stripped(t.base(), k_stripped, l_stripped);
        Verdict base = check_nownib1(stripped, opts);
        v.trace.push_back({kv("stripped-nownib1", {{"p", p}, {"ell", ell}}),
                           base.status == VerdictStatus::NoWNIB, ""});
        if (base.status != VerdictStatus::NoWNIB) continue;
        Verdict lifted = check_corollary_lift(stripped, l1, k1, opts);
        v.trace.push_back({kv("corollary-lift", {{"p", p}, {"ell", ell}}),
                           lifted.status == VerdictStatus::NoWNIB,
                           "no WNIB for the zeta_ell-extended layer"});
        if (lifted.status != VerdictStatus::NoWNIB) continue;

        v.status = VerdictStatus::NoNIB;
        v.witness.p = p;
        v.witness.ell = ell;
        v.witness.q = base.witness.q;
        v.witness.condition = base.witness.condition;
        v.witness.reduced_top = base.witness.reduced_top;
        return v;
    }

    // disjointly ramified but not split: an NIB would force splitness
    v.status = VerdictStatus::MustBeArithSplit;
    v.trace.push_back({"disjoint-but-unsplit", true,
                       "splitness fails while ramification is disjoint; an NIB cannot exist"});
    return v;
}

bool replay_trace(const Verdict& v, const Tower& t) {
    auto parse = [](const std::string& s) {
        std::istringstream is(s);
        std::string id;
        is >> id;
        std::map<std::string, i64> args;
        std::string tok;
        while (is >> tok) {
            auto eq = tok.find('=');
            if (eq != std::string::npos)
                args[tok.substr(0, eq)] = std::stoll(tok.substr(eq + 1));
        }
        return std::make_pair(id, args);
    };
    for (const auto& e : v.trace) {
        auto [id, args] = parse(e.hypothesis);
        bool recomputed;
        if (id == "middle-totally-real") recomputed = t.middle().is_totally_real();
        else if (id == "tame-top-over-middle") recomputed = top_layer_tame(t);
        else if (id == "degree-odd")
            recomputed = (t.top().degree() / t.base().degree()) % 2 == 1;
        else if (id == "odd-lower-factor")
            recomputed = odd_part(t.ramification_table().at(args.at("p")).e_lower) > 1;
        else if (id == "ell-divides-upper")
            recomputed = t.ramification_table().at(args.at("p")).e_upper % args.at("ell") == 0;
        else if (id == "totally-ramified")
            recomputed = t.ramification_table().at(args.at("p")).e_upper ==
                         t.degree_top_over_middle();
        else if (id == "prime-degree")
            recomputed = t.degree_top_over_middle() == args.at("ell") &&
                         is_prime(args.at("ell"));
        else if (id == "condition-a") recomputed = condition_a(t, args.at("ell"));
        else if (id == "condition-a-prime")
            recomputed = condition_a_prime(t, args.at("ell"), 0).holds;
        else if (id == "condition-b")
            recomputed = !zeta_q_in_3power_closure(args.at("q"), t.top()).contained;
        else if (id == "condition-3-free") recomputed = t.degree_top_over_middle() % 3 != 0;
        else if (id == "arith-split") recomputed = is_arithmetically_split(t).split;
        else if (id == "disjoint-ram") recomputed = has_disjoint_ramification(t).disjoint;
        else if (id == "reduced-layer") {
            if (!v.witness.reduced_top) return false;
            recomputed = t.top().contains(*v.witness.reduced_top) &&
                         v.witness.reduced_top->contains(t.middle()) &&
                         ramification_index(*v.witness.reduced_top, args.at("p")) ==
                             args.at("ell") * ramification_index(t.middle(), args.at("p"));
        } else {
            continue; // informational entries (provenance of sub-runs etc.)
        }
        if (recomputed != e.ok) return false;
    }
    return true;
}

} // namespace nibtower
