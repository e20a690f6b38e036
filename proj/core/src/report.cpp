#include "nibtower/report.hpp"

#include <sstream>

#include <json.hpp>

namespace nibtower {

using json = nlohmann::ordered_json;

namespace {

json field_spec_object(const AbelianField& f) {
    json j;
    j["modulus"] = f.conductor();
    j["fixing_subgroup"] = f.fixing_subgroup().elements();
    return j;
}

json field_summary(const AbelianField& f) {
    json j = field_spec_object(f);
    j["degree"] = f.degree();
    j["description"] = f.describe();
    return j;
}

} // namespace

AbelianField parse_field_spec(const std::string& spec) {
    std::string s = spec;
    // trim
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n')) s.pop_back();
    if (s.empty()) throw precondition_error("empty field spec");
    if (s.front() == '{') {
        json j = json::parse(s);
        i64 n = j.at("modulus").get<i64>();
        std::vector<i64> gens;
        if (j.contains("fixing_subgroup")) gens = j.at("fixing_subgroup").get<std::vector<i64>>();
        for (auto& [key, value] : j.items()) {
            (void)value;
            if (key != "modulus" && key != "fixing_subgroup")
                throw precondition_error("field spec: unknown field '" + key + "'");
        }
        return AbelianField::from_fixing_subgroup(n, gens);
    }
    if (s == "Q" || s == "q") return AbelianField::rationals();
    auto split = [&](const std::string& x) {
        std::vector<std::string> parts;
        std::stringstream ss(x);
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        return parts;
    };
    auto parts = split(s);
    auto as_int = [](const std::string& x) {
        std::size_t pos = 0;
        i64 v = std::stoll(x, &pos);
        if (pos != x.size()) throw precondition_error("field spec: bad integer '" + x + "'");
        return v;
    };
    if (parts.size() == 2 && parts[0] == "cyclotomic")
        return AbelianField::cyclotomic(as_int(parts[1]));
    if (parts.size() == 2 && parts[0] == "maxreal") return AbelianField::max_real(as_int(parts[1]));
    if (parts.size() == 3 && parts[0] == "cyclic_subfield")
        return AbelianField::cyclic_subfield(as_int(parts[1]), as_int(parts[2]));
    throw precondition_error("unrecognized field spec: " + spec);
}

Tower parse_tower_spec(const std::string& json_text) {
    json j = json::parse(json_text);
    auto get_field = [&](const char* key, const AbelianField& fallback) {
        if (!j.contains(key)) return fallback;
        const auto& v = j.at(key);
        if (v.is_string()) return parse_field_spec(v.get<std::string>());
        return parse_field_spec(v.dump());
    };
    AbelianField base = get_field("base", AbelianField::rationals());
    if (!j.contains("middle") || !j.contains("top"))
        throw precondition_error("tower spec: 'middle' and 'top' are required");
    AbelianField middle = get_field("middle", base);
    AbelianField top = get_field("top", middle);
    return Tower(std::move(base), std::move(middle), std::move(top));
}

GExtension parse_gextension_spec(const std::string& json_text) {
    json j = json::parse(json_text);
    i64 n = j.at("modulus").get<i64>();
    AbelianGroupStructure g;
    g.invariant_factors = j.at("group").get<std::vector<i64>>();
    auto images = j.at("images").get<std::vector<std::vector<i64>>>();
    auto level = UnitGroup::make(n);
    return GExtension(level, std::move(g), std::move(images));
}

std::string field_info_json(const AbelianField& f) {
    json j;
    j["schema"] = "1";
    j["kind"] = "field";
    j["modulus"] = f.conductor();
    j["conductor"] = f.conductor();
    j["fixing_subgroup"] = f.fixing_subgroup().elements();
    j["degree"] = f.degree();
    j["totally_real"] = f.is_totally_real();
    j["roots_of_unity"] = f.roots_of_unity_order();
    json ram = json::object();
    for (auto [p, e] : f.ramification()) ram[std::to_string(p)] = e;
    j["ramification"] = ram;
    json chars = json::array();
    for (const auto& chi : f.character_group()) {
        json c;
        c["order"] = chi.order();
        c["conductor"] = chi.conductor();
        c["odd"] = chi.is_odd();
        c["value_exponents"] = chi.value_exponents();
        chars.push_back(c);
    }
    j["characters"] = chars;
    j["description"] = f.describe();
    return j.dump(2);
}

std::string tower_analysis_json(const Tower& t) {
    json j;
    j["schema"] = "1";
    j["kind"] = "tower";
    j["base"] = field_summary(t.base());
    j["middle"] = field_summary(t.middle());
    j["top"] = field_summary(t.top());
    json table = json::object();
    for (auto& [p, rel] : t.ramification_table()) {
        table[std::to_string(p)] = {{"e_lower", rel.e_lower}, {"e_upper", rel.e_upper}};
    }
    j["ramification_table"] = table;
    auto dr = has_disjoint_ramification(t);
    j["disjoint_ramification"] = {{"disjoint", dr.disjoint}, {"witnesses", dr.witnesses}};
    auto m = ramification_module(t);
    j["ram_module"] = {{"primes", m.primes},
                       {"orders", m.orders},
                       {"j_action", m.j_action},
                       {"top_is_cm", m.top_is_cm}};
    return j.dump(2);
}

std::string splitness_json(const Tower& t, const SplitnessVerdict& v,
                           std::optional<bool> oracle_verdict) {
    json j;
    j["schema"] = "1";
    j["kind"] = "splitness";
    j["split"] = v.split;
    j["method"] = v.method;
    if (v.complement) j["complement"] = field_summary(*v.complement);
    if (oracle_verdict) {
        j["oracle"] = *oracle_verdict;
        j["oracle_agrees"] = *oracle_verdict == v.split;
    }
    (void)t;
    return j.dump(2);
}

std::string verdict_json(const Verdict& v) {
    json j;
    j["schema"] = "1";
    j["kind"] = "verdict";
    j["status"] = to_string(v.status);
    j["theorem"] = v.theorem;
    json w = json::object();
    if (v.witness.p) w["p"] = *v.witness.p;
    if (v.witness.ell) w["l"] = *v.witness.ell;
    if (v.witness.q) w["q"] = *v.witness.q;
    if (v.witness.g) w["g"] = *v.witness.g;
    if (!v.witness.condition.empty()) w["condition"] = v.witness.condition;
    if (!v.witness.d_subgroup.empty()) w["d_subgroup"] = v.witness.d_subgroup;
    if (v.witness.reduced_top) w["reduced_layer"] = field_summary(*v.witness.reduced_top);
    if (v.witness.complement) w["complement"] = field_summary(*v.witness.complement);
    j["witness"] = w;
    json trace = json::array();
    for (const auto& e : v.trace) {
        json te;
        te["hypothesis"] = e.hypothesis;
        te["ok"] = e.ok;
        if (!e.detail.empty()) te["detail"] = e.detail;
        trace.push_back(te);
    }
    j["trace"] = trace;
    return j.dump(2);
}

std::string minuspart_json(i64 ell, std::optional<i64> r, std::optional<i64> g,
                           std::optional<i64> q) {
    json j;
    j["schema"] = "1";
    j["kind"] = "minuspart";
    j["l"] = ell;
    GroupRingElement th = theta(ell);
    j["theta"] = th.coeffs;
    j["u_minus"] = minus_project(th, 0);
    if (ell > 3) j["v_minus"] = minus_project(twisted_theta_over_ell(ell, 2), 0);
    if (r) {
        auto s = ideal_minus_type(ell, *r);
        j["r"] = *r;
        j["minus_ideal_type"] = s.invariant_factors;
        j["cyclic"] = is_cyclic(s);
    }
    if (g) {
        j["g"] = *g;
        j["v_minus_g"] = minus_project(twisted_theta_over_ell(ell, *g), 0);
        j["det"] = det_certificate(ell, *g);
    } else if (ell > 3) {
        j["det"] = det_certificate(ell, 2);
    }
    if (q) {
        j["q"] = *q;
        j["theta_minus_order"] = theta_minus_order(*q);
    }
    return j.dump(2);
}

std::string resolvent_report_json(const ResolventReport& r) {
    json j;
    j["schema"] = "1";
    j["kind"] = "resolvent_pattern";
    j["l"] = r.ell;
    j["p"] = r.p;
    j["chi"] = {{"order", r.chi_order}, {"conductor", r.chi_conductor}};
    json primes = json::array();
    for (const auto& e : r.primes)
        primes.push_back({{"label", e.label},
                          {"root", e.root},
                          {"valuation_ambient", e.big_valuation},
                          {"valuation", e.q_valuation}});
    j["primes"] = primes;
    j["checks"] = {{"discriminant", r.disc_ok},
                   {"gauss_norm", r.gauss_norm_ok},
                   {"twist", r.twist_ok},
                   {"A", r.statement_a},
                   {"B", r.statement_b},
                   {"C", r.statement_c}};
    j["base_root"] = r.base_root;
    j["eta_gamma_root"] = r.eta_gamma_root;
    j["translate"] = r.translate;
    j["pass"] = r.pass;
    return j.dump(2);
}

std::string norm_compat_json(const NormCompatReport& r) {
    json j;
    j["schema"] = "1";
    j["kind"] = "norm_compat";
    j["l"] = r.ell;
    j["p"] = r.p;
    j["t"] = r.t;
    j["s"] = r.s;
    j["labels"] = r.labels;
    j["v_top"] = r.v_top;
    j["v_sub"] = r.v_sub;
    j["literal_pass"] = r.literal_pass;
    j["congruent_mod_l"] = r.congruent_mod_ell;
    j["pass"] = r.pass;
    return j.dump(2);
}

std::string idempotents_json(const AbelianGroupStructure& g) {
    json j;
    j["schema"] = "1";
    j["kind"] = "idempotents";
    j["group"] = g.invariant_factors;
    json items = json::array();
    for (const auto& d : rational_idempotents(g)) {
        json it;
        it["character_order"] = d.character_order;
        it["orbit"] = d.orbit;
        json coeffs = json::array();
        for (const auto& c : d.coefficients) coeffs.push_back(c.get_str());
        it["coefficients"] = coeffs;
        items.push_back(it);
    }
    j["idempotents"] = items;
    return j.dump(2);
}

std::string gextension_json(const GExtension& m, const std::string& role) {
    json j;
    j["schema"] = "1";
    j["kind"] = role;
    j["modulus"] = m.level()->modulus();
    j["group"] = m.group().invariant_factors;
    j["images"] = m.generator_images();
    j["conductor"] = m.conductor();
    j["identity"] = m.is_identity_class();
    auto c = core(m);
    j["core"] = {{"image", c.image.invariant_factors},
                 {"field", field_summary(c.core_field)}};
    j["unramified"] = is_unramified(m);
    j["tame"] = is_tame(m);
    return j.dump(2);
}

std::string grestriction_core_json(const GRestriction& m) {
    json j;
    j["schema"] = "1";
    j["kind"] = "base_change";
    j["modulus"] = m.level()->modulus();
    j["group"] = m.group().invariant_factors;
    j["identity"] = m.is_identity_class();
    auto c = core(m);
    j["core"] = {{"image", c.image.invariant_factors},
                 {"field", field_summary(c.core_field)},
                 {"relative_degree", c.relative_degree}};
    j["unramified"] = is_unramified(m);
    j["tame"] = is_tame(m);
    return j.dump(2);
}

std::string amitsur_json(const AbelianGroupStructure& g, const std::vector<GroupVec>& g0_gens,
                         bool exact) {
    json j;
    j["schema"] = "1";
    j["kind"] = "amitsur";
    j["group"] = g.invariant_factors;
    j["subgroup_generators"] = g0_gens;
    j["exact"] = exact;
    return j.dump(2);
}

namespace {
void render_lines(const json& j, const std::string& prefix, std::ostringstream& os) {
    if (j.is_object()) {
        for (auto& [k, v] : j.items())
            render_lines(v, prefix.empty() ? k : prefix + "." + k, os);
    } else if (j.is_array()) {
        bool scalar = true;
        for (auto& v : j)
            if (!v.is_primitive()) scalar = false;
        if (scalar) {
            os << prefix << ": " << j.dump() << '\n';
        } else {
            int i = 0;
            for (auto& v : j) render_lines(v, prefix + "[" + std::to_string(i++) + "]", os);
        }
    } else {
        os << prefix << ": " << j.dump() << '\n';
    }
}
} // namespace

std::string render_text(const std::string& json_payload) {
    json j = json::parse(json_payload);
    std::ostringstream os;
    render_lines(j, "", os);
    return os.str();
}

} // namespace nibtower
