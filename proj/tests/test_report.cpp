#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nibtower/report.hpp"

using namespace nibtower;

TEST_CASE("field spec parsing: presets and JSON") {
    CHECK(parse_field_spec("Q") == AbelianField::rationals());
    CHECK(parse_field_spec("cyclotomic:12") == AbelianField::cyclotomic(12));
    CHECK(parse_field_spec("maxreal:15") == AbelianField::max_real(15));
    CHECK(parse_field_spec("cyclic_subfield:31:15") == AbelianField::cyclic_subfield(31, 15));
    CHECK(parse_field_spec(R"({"modulus": 7, "fixing_subgroup": [6]})") ==
          AbelianField::cyclic_subfield(7, 3));
    CHECK_THROWS_AS(parse_field_spec("maxreal"), precondition_error);
    CHECK_THROWS_AS(parse_field_spec(R"({"modulus": 7, "unknown": 1})"), precondition_error);
}

TEST_CASE("tower spec parsing") {
    Tower t = parse_tower_spec(
        R"({"base": "Q", "middle": "cyclic_subfield:31:3", "top": "cyclic_subfield:31:15"})");
    CHECK(t.middle().degree() == 3);
    CHECK(t.top().degree() == 15);

    Tower t2 = parse_tower_spec(
        R"({"middle": {"modulus": 15, "fixing_subgroup": [14]}, "top": "cyclotomic:15"})");
    CHECK(t2.base() == AbelianField::rationals());
    CHECK(t2.middle() == AbelianField::max_real(15));

    CHECK_THROWS_AS(parse_tower_spec(R"({"middle": "Q"})"), precondition_error);
}

TEST_CASE("gextension spec parsing round-trips through the report") {
    auto m = parse_gextension_spec(R"({"modulus": 7, "group": [3], "images": [[1]]})");
    CHECK(m.conductor() == 7);
    std::string j = gextension_json(m, "core");
    CHECK(j.find("\"conductor\": 7") != std::string::npos);
    CHECK(j.find("\"tame\": true") != std::string::npos);
}

TEST_CASE("payloads are byte-stable across repeated runs") {
    auto f = AbelianField::max_real(21);
    CHECK(field_info_json(f) == field_info_json(AbelianField::max_real(21)));

    Tower t(AbelianField::rationals(), AbelianField::cyclic_subfield(31, 3),
            AbelianField::cyclic_subfield(31, 15));
    CHECK(tower_analysis_json(t) == tower_analysis_json(t));
    CHECK(verdict_json(check_nownib1(t)) == verdict_json(check_nownib1(t)));
    CHECK(minuspart_json(5, 3, 2, 7) == minuspart_json(5, 3, 2, 7));
}

TEST_CASE("text rendering covers the same payload") {
    std::string json = minuspart_json(5, 3, std::nullopt, std::nullopt);
    std::string text = render_text(json);
    CHECK(text.find("minus_ideal_type: [3,3]") != std::string::npos);
    CHECK(text.find("u_minus: [-3,-1]") != std::string::npos);
}
