// nibtower: analyze towers of absolutely abelian fields via Dirichlet
// character groups; decide normal-integral-basis obstructions and arithmetic
// splitness; verify resolvent-ideal valuation patterns by exact computation.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "nibtower/report.hpp"

using namespace nibtower;

namespace {

struct GlobalOptions {
    std::string format = "json";
    i64 bound_subgroups = 200;
    int hensel_cap = 512;
    int jobs = 1;
};

void emit(const GlobalOptions& g, const std::string& payload) {
    if (g.format == "text")
        std::cout << render_text(payload);
    else
        std::cout << payload << '\n';
}

// exit code 2 signals a negative or inconclusive verdict (distinguishable in
// the payload); 0 a definite one
int negative_exit(bool negative) { return negative ? 2 : 0; }

Tower tower_from(const std::string& base, const std::string& middle, const std::string& top) {
    return Tower(parse_field_spec(base), parse_field_spec(middle), parse_field_spec(top));
}

std::vector<i64> parse_int_list(const std::string& s) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoll(tok));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tower analyzer for abelian fields: character groups, "
                 "integral-basis obstructions, splitness, resolvent valuations"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--format", g.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--bound-subgroups", g.bound_subgroups, "subgroup enumeration cap");
    app.add_option("--hensel-cap", g.hensel_cap, "p-adic working precision cap");
    app.add_option("--jobs", g.jobs, "parallel workers for batch commands");

    int exit_code = 0;

    // field info
    auto* field = app.add_subcommand("field", "field-level queries");
    auto* field_info = field->add_subcommand("info", "conductor, degree, characters, ramification");
    std::string fi_spec;
    field_info->add_option("--spec", fi_spec, "field spec (JSON or preset)");
    field_info->add_option("--preset", fi_spec, "preset field spec");
    field_info->callback([&] { emit(g, field_info_json(parse_field_spec(fi_spec))); });

    // tower analyze / split / batch
    auto* tower = app.add_subcommand("tower", "tower-level queries");
    std::string t_base = "Q", t_middle, t_top, t_file;
    bool t_oracle = false;
    auto add_tower_opts = [&](CLI::App* cmd, bool required = true) {
        cmd->add_option("--base", t_base, "base field spec (default Q)");
        auto* m = cmd->add_option("--middle", t_middle, "middle field spec");
        auto* t = cmd->add_option("--top", t_top, "top field spec");
        if (required) {
            m->required();
            t->required();
        }
    };
    auto* tower_analyze = tower->add_subcommand("analyze", "ramification table and M(L/K)");
    add_tower_opts(tower_analyze);
    tower_analyze->callback(
        [&] { emit(g, tower_analysis_json(tower_from(t_base, t_middle, t_top))); });

    auto* tower_split = tower->add_subcommand("split", "arithmetic splitness");
    add_tower_opts(tower_split);
    tower_split->add_flag("--oracle", t_oracle, "also run the exhaustive oracle");
    tower_split->callback([&] {
        Tower t = tower_from(t_base, t_middle, t_top);
        SplitnessVerdict v = is_arithmetically_split(t, g.bound_subgroups);
        std::optional<bool> oracle;
        if (t_oracle) oracle = exhaustive_split_oracle(t, g.bound_subgroups);
        emit(g, splitness_json(t, v, oracle));
        exit_code = negative_exit(!v.split);
    });

    auto* tower_batch = tower->add_subcommand("batch", "analyze a JSON array of tower specs");
    tower_batch->add_option("--file", t_file, "input file")->required();
    tower_batch->callback([&] {
        std::ifstream in(t_file);
        if (!in) throw std::runtime_error("cannot open " + t_file);
        std::stringstream buf;
        buf << in.rdbuf();
        nlohmann::ordered_json arr = nlohmann::ordered_json::parse(buf.str());
        if (!arr.is_array()) throw std::runtime_error("batch input must be a JSON array");
        std::vector<std::string> items(arr.size());
        auto work = [&](std::size_t i) {
            Tower t = parse_tower_spec(arr[i].dump());
            SplitnessVerdict v = is_arithmetically_split(t, g.bound_subgroups);
            nlohmann::ordered_json one;
            one["analysis"] = nlohmann::ordered_json::parse(tower_analysis_json(t));
            one["splitness"] = nlohmann::ordered_json::parse(splitness_json(t, v, std::nullopt));
            items[i] = one.dump();
        };
        if (g.jobs > 1) {
            std::vector<std::future<void>> futures;
            std::atomic<std::size_t> next{0};
            for (int w = 0; w < g.jobs; ++w)
                futures.push_back(std::async(std::launch::async, [&] {
                    for (std::size_t i = next++; i < items.size(); i = next++) work(i);
                }));
            for (auto& f : futures) f.get();
        } else {
            for (std::size_t i = 0; i < items.size(); ++i) work(i);
        }
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (auto& s : items) out.push_back(nlohmann::ordered_json::parse(s));
        nlohmann::ordered_json payload;
        payload["schema"] = "1";
        payload["kind"] = "tower_batch";
        payload["items"] = out;
        emit(g, payload.dump(2));
    });

    // obstruct
    auto* obstruct = app.add_subcommand("obstruct", "integral-basis obstruction verdicts");
    bool o_aprime = false, o_perfactor = false;
    auto add_obstruct_opts = [&](CLI::App* cmd) {
        add_tower_opts(cmd);
        cmd->add_flag("--a-prime", o_aprime, "accept the weakened condition (a')");
        cmd->add_flag("--per-factor-b", o_perfactor, "per-factor condition (b) in the pipeline");
    };
    auto run_verdict = [&](auto&& fn) {
        Tower t = tower_from(t_base, t_middle, t_top);
        ObstructionOptions opts;
        opts.allow_condition_a_prime = o_aprime;
        opts.per_factor_condition_b = o_perfactor;
        opts.subgroup_bound = g.bound_subgroups;
        Verdict v = fn(t, opts);
        emit(g, verdict_json(v));
        exit_code = negative_exit(v.status == VerdictStatus::HypothesesNotMet);
    };
    auto* ob1 = obstruct->add_subcommand("nownib1", "common-ramified-prime WNIB obstruction");
    add_obstruct_opts(ob1);
    ob1->callback([&] { run_verdict([](const Tower& t, const ObstructionOptions& o) {
        return check_nownib1(t, o);
    }); });
    auto* ob2 = obstruct->add_subcommand("nownib2", "prime-degree totally ramified variant");
    add_obstruct_opts(ob2);
    ob2->callback([&] { run_verdict([](const Tower& t, const ObstructionOptions& o) {
        return check_nownib2(t, o);
    }); });
    auto* obp = obstruct->add_subcommand("prop", "WNIB forces disjoint ramification");
    add_obstruct_opts(obp);
    obp->callback([&] { run_verdict([](const Tower& t, const ObstructionOptions& o) {
        return wnib_forces_disjoint_ram(t, o);
    }); });
    auto* obs = obstruct->add_subcommand("nibsplit", "NIB if and only if arithmetically split");
    add_obstruct_opts(obs);
    obs->callback([&] { run_verdict([](const Tower& t, const ObstructionOptions& o) {
        return nib_split_decision(t, o);
    }); });

    // minuspart
    auto* minus = app.add_subcommand("minuspart", "group-ring minus-part certificates");
    i64 mp_l = 0;
    i64 mp_r = 0, mp_g = 0, mp_q = 0;
    minus->add_option("--l", mp_l, "odd prime ell")->required();
    minus->add_option("--r", mp_r, "odd prime r for the (r,r) type");
    minus->add_option("--g", mp_g, "2 or a Fermat prime for the determinant");
    minus->add_option("--q", mp_q, "odd prime q for the ell=3 order");
    minus->callback([&] {
        emit(g, minuspart_json(mp_l, mp_r ? std::optional<i64>(mp_r) : std::nullopt,
                               mp_g ? std::optional<i64>(mp_g) : std::nullopt,
                               mp_q ? std::optional<i64>(mp_q) : std::nullopt));
    });

    // resolvent verify / normcompat
    auto* resolvent_cmd = app.add_subcommand("resolvent", "resolvent-ideal valuations");
    i64 rv_l = 0, rv_p = 0, rv_m = 0;
    std::string rv_top;
    auto* rv = resolvent_cmd->add_subcommand("verify", "theta-pattern verification");
    rv->add_option("--l", rv_l, "odd prime ell")->required();
    rv->add_option("--p", rv_p, "prime p = 1 mod ell")->required();
    rv->add_option("--tower", rv_top,
                   "explicit tower spec or top field spec (defaults to cyclic_subfield:p:l)");
    rv->callback([&] {
        ValuationOptions vopts;
        vopts.precision_cap = g.hensel_cap;
        ResolventReport rep;
        if (rv_top.empty()) {
            rep = verify_valuation_pattern(rv_l, rv_p, vopts);
        } else {
            Tower t = rv_top.find("\"middle\"") != std::string::npos
                          ? parse_tower_spec(rv_top)
                          : Tower(AbelianField::rationals(), AbelianField::rationals(),
                                  parse_field_spec(rv_top));
            rep = verify_valuation_pattern(t, canonical_faithful_character(t.top()), rv_p, vopts);
        }
        emit(g, resolvent_report_json(rep));
        exit_code = negative_exit(!rep.pass);
    });
    auto* rn = resolvent_cmd->add_subcommand("normcompat", "norm compatibility of resolvent ideals");
    rn->add_option("--l", rv_l, "odd prime ell")->required();
    rn->add_option("--m", rv_m, "top layer is cyclic of degree ell^m")->required();
    rn->add_option("--p", rv_p, "prime p = 1 mod ell^m")->required();
    rn->callback([&] {
        ValuationOptions vopts;
        vopts.precision_cap = g.hensel_cap;
        NormCompatReport rep = verify_norm_compat(rv_l, rv_m, rv_p, vopts);
        emit(g, norm_compat_json(rep));
        exit_code = negative_exit(!rep.pass);
    });

    // halgebra
    auto* hal = app.add_subcommand("halgebra", "classes of G-Galois algebras over Q");
    std::string h_a, h_b, h_strip, h_group, h_subgens, h_field;
    i64 h_exhaustive = 0;
    auto* hprod = hal->add_subcommand("product", "product of two classes");
    hprod->add_option("--a", h_a)->required();
    hprod->add_option("--b", h_b)->required();
    hprod->callback([&] {
        auto m = g_product(parse_gextension_spec(h_a), parse_gextension_spec(h_b));
        emit(g, gextension_json(m, "product"));
    });
    auto* hop = hal->add_subcommand("op", "inverse class");
    hop->add_option("--a", h_a)->required();
    hop->callback([&] { emit(g, gextension_json(g_inverse(parse_gextension_spec(h_a)), "op")); });
    auto* hcore = hal->add_subcommand("core", "core field and image");
    hcore->add_option("--a", h_a)->required();
    hcore->add_option("--base-change", h_field, "restrict to this field first");
    hcore->callback([&] {
        auto m = parse_gextension_spec(h_a);
        if (!h_field.empty())
            emit(g, grestriction_core_json(base_change(m, parse_field_spec(h_field))));
        else
            emit(g, gextension_json(m, "core"));
    });
    auto* hpsi = hal->add_subcommand("psi", "strip inertia components at the given primes");
    hpsi->add_option("--a", h_a)->required();
    hpsi->add_option("--strip", h_strip, "comma-separated primes")->required();
    hpsi->callback([&] {
        auto m = construct_psi(parse_gextension_spec(h_a), parse_int_list(h_strip));
        emit(g, gextension_json(m, "psi"));
    });
    auto* ham = hal->add_subcommand("amitsur", "minus-complex exactness");
    ham->add_option("--group", h_group, "invariant factors, e.g. 9 or 3,3");
    ham->add_option("--subgroup-gens", h_subgens, "JSON array of exponent vectors");
    ham->add_option("--exhaustive", h_exhaustive,
                    "verify all odd abelian G with |G| <= N and all subgroups");
    ham->callback([&] {
        if (h_exhaustive > 0) {
            bool all_ok = true;
            i64 cases = 0;
            for (const auto& grp : odd_abelian_groups_up_to(h_exhaustive))
                for (const auto& sub : all_abstract_subgroups(grp)) {
                    all_ok = amitsur_minus_exact(grp, sub) && all_ok;
                    ++cases;
                }
            nlohmann::ordered_json payload;
            payload["schema"] = "1";
            payload["kind"] = "amitsur_exhaustive";
            payload["bound"] = h_exhaustive;
            payload["cases"] = cases;
            payload["exact"] = all_ok;
            emit(g, payload.dump(2));
            exit_code = negative_exit(!all_ok);
            return;
        }
        AbelianGroupStructure grp;
        grp.invariant_factors = parse_int_list(h_group);
        std::vector<GroupVec> gens;
        if (!h_subgens.empty())
            gens = nlohmann::json::parse(h_subgens).get<std::vector<GroupVec>>();
        bool ok = amitsur_minus_exact(grp, gens);
        emit(g, amitsur_json(grp, gens, ok));
        exit_code = negative_exit(!ok);
    });

    // allow the global options to appear after a subcommand
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        a->fallthrough();
        for (auto* sub : a->get_subcommands({})) enable_fallthrough(sub);
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const nibtower::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
