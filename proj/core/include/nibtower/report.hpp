#pragma once

#include <optional>
#include <string>

#include "nibtower/galois_algebra.hpp"
#include "nibtower/obstruction.hpp"
#include "nibtower/resolvent.hpp"
#include "nibtower/stickelberger.hpp"

namespace nibtower {

/// Field specs: "Q", "cyclotomic:n", "maxreal:n", "cyclic_subfield:p:d", or a
/// JSON object {"modulus": n, "fixing_subgroup": [a1, ...]}.
AbelianField parse_field_spec(const std::string& spec);

/// Tower spec: {"base": <fieldspec>|"Q", "middle": <fieldspec>, "top": <fieldspec>};
/// field values may be spec strings or JSON objects.
Tower parse_tower_spec(const std::string& json_text);

/// Galois-algebra class spec: {"modulus": n, "group": [d1,...], "images": [[..],..]}.
GExtension parse_gextension_spec(const std::string& json_text);

// All payloads are versioned JSON ("schema": "1") with deterministic key and
// element order; text output renders the same payload.
std::string field_info_json(const AbelianField& f);
std::string tower_analysis_json(const Tower& t);
std::string splitness_json(const Tower& t, const SplitnessVerdict& v,
                           std::optional<bool> oracle_verdict);
std::string verdict_json(const Verdict& v);
std::string minuspart_json(i64 ell, std::optional<i64> r, std::optional<i64> g,
                           std::optional<i64> q);
std::string resolvent_report_json(const ResolventReport& r);
std::string norm_compat_json(const NormCompatReport& r);
std::string idempotents_json(const AbelianGroupStructure& g);
std::string gextension_json(const GExtension& m, const std::string& role);
std::string grestriction_core_json(const GRestriction& m);
std::string amitsur_json(const AbelianGroupStructure& g, const std::vector<GroupVec>& g0_gens,
                         bool exact);

/// Plain-text rendering of a JSON payload (same data, line per leaf).
std::string render_text(const std::string& json_payload);

} // namespace nibtower
