#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rotchaos/io.hpp"
#include "rotchaos/render.hpp"
#include "rotchaos/replay.hpp"

using namespace rotchaos;

namespace {

Json base_config() {
    return Json::parse(R"({
      "schema_version": 1,
      "map": {"kind": "rigid_twist", "params": {"alpha": "0.3", "tau": "0"}},
      "boxes": {"U0": {"x": ["0", "0.4"], "y": ["0", "0.2"]}, "U1": {"x": ["0", "0.4"], "y": ["0.5", "0.7"]}},
      "n": 1,
      "declared": {"area_preserving": true, "nonwandering": true, "birkhoff_related_ends": true}
    })");
}

std::string config_error_of(const Json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    return "";
}

Json chaos_document(const std::string& path) {
    const RunConfig c = load_config(path);
    const ChaosCertificate cc = certify_chaos(build_map(c), c.box("U0"), c.box("U1"), c.n, c.declared, c.certify);
    return make_document("chaos", c, document_verdict(cc), to_json(cc), {});
}

} // namespace

TEST_CASE("hex floats are exact") {
    CHECK(hex(0.1) == "0x1.999999999999ap-4");
    CHECK(parse_double(Json(hex(0.1)), "v") == 0.1);
    CHECK(parse_double(Json("-0x1p-1074"), "v") == -std::ldexp(1.0, -1074));
    const Box2 b{Interval(0.1, 0.3), Interval(-2.5, std::nextafter(1.0, 2.0))};
    CHECK(box_from_json(to_json(b), "b") == b);
}

TEST_CASE("decimal parameters are enclosed") {
    const Interval g = parse_parameter(Json("9.8"), "g");
    CHECK(g.lo() < g.hi());
    CHECK(g.contains(9.8));
    CHECK(std::nextafter(g.lo(), 10.0) == g.hi());
    CHECK(parse_parameter(Json("1"), "l") == Interval(1.0));
    CHECK(parse_parameter(Json("0x1.4p+1"), "T") == Interval(2.5));
}

TEST_CASE("configuration errors name the field") {
    Json j = base_config();
    j["map"]["params"]["beta"] = "1";
    CHECK(config_error_of(j).find("map.params.beta") != std::string::npos);

    j = base_config();
    j["declared"].erase("birkhoff_related_ends");
    CHECK(config_error_of(j).find("declared.birkhoff_related_ends") != std::string::npos);

    j = base_config();
    j["surprise"] = 1;
    CHECK(config_error_of(j).find("surprise") != std::string::npos);

    j = base_config();
    j["boxes"]["U0"]["x"] = Json::array({"0.4", "0"});
    CHECK_FALSE(config_error_of(j).empty());

    j = base_config();
    j["map"] = Json::parse(R"({"kind": "pendulum", "params": {"g": "9.8", "l": "1", "A": "3", "T": "2.5", "omega": "1"}})");
    CHECK_FALSE(config_error_of(j).empty());
}

TEST_CASE("configuration echo round-trips") {
    for (const char* path : {"configs/pendulum.json", "configs/standard_markov.json", "configs/standard_chain.json",
                             "configs/standard_explore.json"}) {
        const RunConfig c = load_config(path);
        const Json echo = to_json(c);
        CHECK(to_json(parse_config(echo)) == echo);
    }
}

TEST_CASE("documents round-trip and replay") {
    const Json doc = chaos_document("configs/standard_k6.json");
    CHECK(doc.at("verdict") == "Certified");
    check_document(doc);
    CHECK(to_json(chaos_from_json(doc.at("evidence"))) == doc.at("evidence"));

    const ReplayReport r = replay(doc);
    CHECK(r.agrees);
    CHECK(r.enclosures_recomputed);
    CHECK(r.claimed == Verdict::Certified);

    Json bumped = doc;
    bumped["schema_version"] = kSchemaVersion + 1;
    try {
        replay(bumped);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaMismatch);
    }

    Json tampered = doc;
    Json& w = tampered["evidence"]["visit_01"]["witness"]["seed"]["x"][0];
    w = hex(std::nextafter(parse_double(w, "w"), -1e300) - 1e-3);
    const ReplayReport t = replay(tampered);
    CHECK_FALSE(t.agrees);
    CHECK_FALSE(t.mismatches.empty());

    Json verdict = doc;
    verdict["evidence"]["theorem_applied"] = "A";
    CHECK_FALSE(replay(verdict).agrees);
}

TEST_CASE("replay re-derives refutations") {
    const RunConfig c = load_config("configs/rigid_rotation.json");
    const ChaosCertificate cc = certify_chaos(build_map(c), c.box("U0"), c.box("U1"), c.n, c.declared, c.certify);
    CHECK(cc.theorem_applied == Theorem::None);
    const Json doc = make_document("chaos", c, document_verdict(cc), to_json(cc), {});
    const ReplayReport r = replay(doc);
    CHECK(r.agrees);
    Json lie = doc;
    lie["verdict"] = "Certified";
    CHECK_FALSE(replay(lie).agrees);
}

TEST_CASE("render") {
    const Json doc = chaos_document("configs/standard_k6.json");
    for (View v : {View::Annulus, View::Cover}) {
        const std::string svg = render_svg(doc, v);
        CHECK(svg.starts_with("<?xml"));
        CHECK(svg.find("viewBox") != std::string::npos);
        CHECK(svg.ends_with("</svg>\n"));
        CHECK(svg.find("U0 and its iterates 1..1") != std::string::npos);
    }
    const std::string plain = render_svg(read_json_file("configs/rigid_rotation.json"), View::Cover);
    CHECK(plain.find("iterates") == std::string::npos);
    CHECK(plain.find("<polygon") != std::string::npos);
    CHECK_THROWS_AS(view_from_string("torus"), Error);
}
