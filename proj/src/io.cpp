#include "rotchaos/io.hpp"

#include <cfenv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace rotchaos {

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::ConfigError, path + ": " + what);
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaMismatch, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Parses a whole string as a double with the given rounding mode.
std::optional<double> strtod_rounded(const std::string& s, int mode) {
    if (s.empty()) return std::nullopt;
    const int saved = std::fegetround();
    std::fesetround(mode);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    std::fesetround(saved);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

bool is_hex_text(const std::string& s) {
    const std::size_t at = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    return s.size() > at + 1 && s[at] == '0' && (s[at + 1] == 'x' || s[at + 1] == 'X');
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) config_error(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* a : keys) known = known || k == a;
        if (!known) config_error(join(path, k), "unknown field");
    }
}

template <class T>
T get_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) config_error(path, "expected an integer");
    return j.get<T>();
}

bool get_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) config_error(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
    if (!j.is_string()) config_error(path, "expected a string");
    return j.get<std::string>();
}

// Schema-side accessors for certificate documents.
const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) schema_error(join(path, key), "missing");
    return *it;
}

template <class T>
T num(const Json& j, const char* key, const std::string& path) {
    const Json& v = field(j, key, path);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) schema_error(join(path, key), "expected a boolean");
    } else {
        if (!v.is_number_integer()) schema_error(join(path, key), "expected an integer");
    }
    return v.get<T>();
}

std::string str(const Json& j, const char* key, const std::string& path) {
    const Json& v = field(j, key, path);
    if (!v.is_string()) schema_error(join(path, key), "expected a string");
    return v.get<std::string>();
}

const Json& arr(const Json& j, const char* key, const std::string& path) {
    const Json& v = field(j, key, path);
    if (!v.is_array()) schema_error(join(path, key), "expected an array");
    return v;
}

double hex_value(const Json& j, const std::string& path) {
    if (!j.is_string() || !is_hex_text(j.get<std::string>())) schema_error(path, "expected hex-float text");
    const auto v = strtod_rounded(j.get<std::string>(), FE_TONEAREST);
    if (!v) schema_error(path, "malformed hex-float");
    return *v;
}

Interval interval_value(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) schema_error(path, "expected an endpoint pair");
    const double lo = hex_value(j[0], index(path, 0));
    const double hi = hex_value(j[1], index(path, 1));
    if (!(lo <= hi)) schema_error(path, "reversed endpoints");
    return Interval(lo, hi);
}

Box2 box_value(const Json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 2) schema_error(path, "expected {x, y}");
    return {interval_value(field(j, "x", path), join(path, "x")), interval_value(field(j, "y", path), join(path, "y"))};
}

LiftedBox lifted_value(const Json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 3) schema_error(path, "expected {x, y, shift}");
    return {{interval_value(field(j, "x", path), join(path, "x")), interval_value(field(j, "y", path), join(path, "y"))},
            num<long>(j, "shift", path)};
}

std::optional<Box2> optional_box(const Json& j, const char* key, const std::string& path) {
    const Json& v = field(j, key, path);
    if (v.is_null()) return std::nullopt;
    return box_value(v, join(path, key));
}

Json optional_json(const std::optional<Box2>& b) { return b ? to_json(*b) : Json(nullptr); }

std::vector<long> long_list(const Json& j, const char* key, const std::string& path) {
    std::vector<long> out;
    const Json& a = arr(j, key, path);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number_integer()) schema_error(index(join(path, key), i), "expected an integer");
        out.push_back(a[i].get<long>());
    }
    return out;
}

const char* method_name(FlowMethod m) { return m == FlowMethod::Lohner ? "lohner" : "box"; }

} // namespace

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) config_error(path, "expected a number");
    const auto v = strtod_rounded(j.get<std::string>(), FE_TONEAREST);
    if (!v || !std::isfinite(*v)) config_error(path, "malformed number '" + j.get<std::string>() + "'");
    return *v;
}

Interval parse_parameter(const Json& j, const std::string& path) {
    if (j.is_array()) {
        if (j.size() != 2) config_error(path, "expected an endpoint pair");
        const double lo = parse_double(j[0], index(path, 0));
        const double hi = parse_double(j[1], index(path, 1));
        if (!(lo <= hi)) config_error(path, "reversed endpoints");
        return Interval(lo, hi);
    }
    std::string text;
    if (j.is_number_integer() || j.is_number_float()) text = j.dump();
    else if (j.is_string()) text = j.get<std::string>();
    else config_error(path, "expected a number");
    if (is_hex_text(text)) return Interval(parse_double(Json(text), path));
    const auto lo = strtod_rounded(text, FE_DOWNWARD);
    const auto hi = strtod_rounded(text, FE_UPWARD);
    if (!lo || !hi || !std::isfinite(*lo) || !std::isfinite(*hi)) config_error(path, "malformed number '" + text + "'");
    return Interval(*lo, *hi);
}

Json to_json(const Interval& v) { return Json::array({hex(v.lo()), hex(v.hi())}); }

Json to_json(const Box2& b) { return Json{{"x", to_json(b.x)}, {"y", to_json(b.y)}}; }

Json to_json(const LiftedBox& b) {
    return Json{{"x", to_json(b.planar.x)}, {"y", to_json(b.planar.y)}, {"shift", b.shift}};
}

Box2 box_from_json(const Json& j, const std::string& path) { return box_value(j, path); }

LiftedBox lifted_from_json(const Json& j, const std::string& path) { return lifted_value(j, path); }

const Interval& MapConfig::param(const std::string& name) const {
    for (const auto& [k, v] : params)
        if (k == name) return v;
    throw Error(ErrorCode::ConfigError, "map.params." + name + ": missing");
}

const Box2& RunConfig::box(const std::string& name) const {
    for (const auto& [k, v] : boxes)
        if (k == name) return v;
    throw Error(ErrorCode::ConfigError, "boxes." + name + ": missing");
}

namespace {

Box2 config_box(const Json& j, const std::string& path) {
    allow_keys(j, path, {"x", "y"});
    Box2 b;
    for (const char* axis : {"x", "y"}) {
        const std::string p = join(path, axis);
        if (!j.contains(axis)) config_error(p, "missing");
        const Json& e = j.at(axis);
        if (!e.is_array() || e.size() != 2) config_error(p, "expected [lo, hi]");
        const double lo = parse_double(e[0], index(p, 0));
        const double hi = parse_double(e[1], index(p, 1));
        if (!(lo <= hi)) config_error(p, "reversed endpoints");
        (axis[0] == 'x' ? b.x : b.y) = Interval(lo, hi);
    }
    return b;
}

MapConfig parse_map(const Json& j) {
    allow_keys(j, "map", {"kind", "params", "circumference", "lift_offset"});
    MapConfig m;
    if (!j.contains("kind")) config_error("map.kind", "missing");
    const std::string kind = get_string(j.at("kind"), "map.kind");
    std::vector<const char*> names;
    if (kind == "standard") {
        m.kind = MapKind::StandardMap;
        names = {"K"};
    } else if (kind == "rigid_twist") {
        m.kind = MapKind::RigidTwist;
        names = {"alpha", "tau"};
    } else if (kind == "pendulum") {
        m.kind = MapKind::Pendulum;
        names = {"g", "l", "A"};
    } else {
        config_error("map.kind", "unknown map kind '" + kind + "'");
    }
    if (!j.contains("params")) config_error("map.params", "missing");
    const Json& p = j.at("params");
    if (!p.is_object()) config_error("map.params", "expected an object");
    for (const auto& [k, v] : p.items()) {
        bool known = false;
        for (const char* n : names) known = known || k == n;
        if (m.kind == MapKind::Pendulum && (k == "T" || k == "omega")) known = true;
        if (!known) config_error("map.params." + k, "unknown parameter for kind " + kind);
    }
    for (const char* n : names) {
        if (!p.contains(n)) config_error(std::string("map.params.") + n, "missing");
        m.params.emplace_back(n, parse_parameter(p.at(n), std::string("map.params.") + n));
    }
    if (m.kind == MapKind::Pendulum) {
        const bool has_t = p.contains("T"), has_w = p.contains("omega");
        if (has_t == has_w) config_error("map.params", "give exactly one of T and omega");
        if (has_t) {
            m.period = parse_double(p.at("T"), "map.params.T");
        } else {
            const double w = parse_parameter(p.at("omega"), "map.params.omega").mid();
            if (!(w > 0.0)) config_error("map.params.omega", "must be positive");
            m.period = 2.0 * M_PI / w;
        }
        if (!(m.period > 0.0) || !std::isfinite(m.period)) config_error("map.params", "forcing period must be positive");
        if (!(m.param("l").lo() > 0.0)) config_error("map.params.l", "must be positive");
    }
    if (j.contains("circumference")) {
        const std::string c = get_string(j.at("circumference"), "map.circumference");
        const std::string expected = m.kind == MapKind::Pendulum ? "2pi" : "1";
        if (c != expected) config_error("map.circumference", "kind " + kind + " lives on L = " + expected);
    }
    if (j.contains("lift_offset")) m.lift_offset = get_int<long>(j.at("lift_offset"), "map.lift_offset");
    return m;
}

void parse_settings(const Json& j, RunConfig& c) {
    allow_keys(j, "settings", {"integration", "subdivision", "witness", "visit", "markov", "explore"});
    if (j.contains("integration")) {
        const Json& s = j.at("integration");
        const std::string p = "settings.integration";
        allow_keys(s, p,
                   {"taylor_order", "steps_per_period", "max_steps_per_period", "picard_inflation",
                    "max_picard_retries", "fixed_step", "v_max", "method"});
        auto& i = c.integration;
        if (s.contains("taylor_order")) i.taylor_order = get_int<int>(s.at("taylor_order"), p + ".taylor_order");
        if (s.contains("steps_per_period"))
            i.steps_per_period = get_int<int>(s.at("steps_per_period"), p + ".steps_per_period");
        if (s.contains("max_steps_per_period"))
            i.max_steps_per_period = get_int<int>(s.at("max_steps_per_period"), p + ".max_steps_per_period");
        if (s.contains("picard_inflation"))
            i.picard_inflation = parse_double(s.at("picard_inflation"), p + ".picard_inflation");
        if (s.contains("max_picard_retries"))
            i.max_picard_retries = get_int<int>(s.at("max_picard_retries"), p + ".max_picard_retries");
        if (s.contains("fixed_step")) i.fixed_step = get_bool(s.at("fixed_step"), p + ".fixed_step");
        if (s.contains("v_max")) i.v_max = parse_double(s.at("v_max"), p + ".v_max");
        if (s.contains("method")) {
            const std::string m = get_string(s.at("method"), p + ".method");
            if (m == "lohner") i.method = FlowMethod::Lohner;
            else if (m == "box") i.method = FlowMethod::Box;
            else config_error(p + ".method", "expected lohner or box");
        }
        try {
            i.validate();
        } catch (const Error& e) {
            config_error(p, e.what());
        }
    }
    if (j.contains("subdivision")) {
        const Json& s = j.at("subdivision");
        const std::string p = "settings.subdivision";
        allow_keys(s, p, {"target_width", "max_boxes_per_stage", "max_depth", "total_budget"});
        auto& d = c.certify.subdivision;
        if (s.contains("target_width")) d.target_width = parse_double(s.at("target_width"), p + ".target_width");
        if (s.contains("max_boxes_per_stage"))
            d.max_boxes_per_stage = get_int<std::size_t>(s.at("max_boxes_per_stage"), p + ".max_boxes_per_stage");
        if (s.contains("max_depth")) d.max_depth = get_int<int>(s.at("max_depth"), p + ".max_depth");
        if (s.contains("total_budget"))
            d.total_budget = get_int<std::size_t>(s.at("total_budget"), p + ".total_budget");
    }
    if (j.contains("witness")) {
        const Json& s = j.at("witness");
        const std::string p = "settings.witness";
        allow_keys(s, p, {"depth", "grid", "candidates"});
        if (s.contains("depth")) c.certify.witness_depth = get_int<int>(s.at("depth"), p + ".depth");
        if (s.contains("grid")) c.certify.witness_grid = get_int<int>(s.at("grid"), p + ".grid");
        if (s.contains("candidates"))
            c.certify.witness_candidates = get_int<int>(s.at("candidates"), p + ".candidates");
    }
    if (j.contains("visit")) {
        const Json& s = j.at("visit");
        const std::string p = "settings.visit";
        allow_keys(s, p, {"max_m", "grid", "candidates"});
        if (s.contains("max_m")) c.certify.visit_max_m = get_int<int>(s.at("max_m"), p + ".max_m");
        if (s.contains("grid")) c.certify.visit_grid = get_int<int>(s.at("grid"), p + ".grid");
        if (s.contains("candidates")) c.certify.visit_candidates = get_int<int>(s.at("candidates"), p + ".candidates");
    }
    if (j.contains("markov")) {
        const Json& s = j.at("markov");
        const std::string p = "settings.markov";
        allow_keys(s, p, {"pieces", "max_pieces"});
        if (s.contains("pieces")) c.certify.markov_pieces = get_int<int>(s.at("pieces"), p + ".pieces");
        if (s.contains("max_pieces")) c.certify.markov_max_pieces = get_int<int>(s.at("max_pieces"), p + ".max_pieces");
    }
    if (j.contains("explore")) {
        const Json& s = j.at("explore");
        const std::string p = "settings.explore";
        allow_keys(s, p,
                   {"y_range", "nx", "ny", "iterates", "y_bound", "rho_min", "eps", "box_scale", "max_m",
                    "visit_samples", "clearance", "screen_grid", "max_per_shift", "max_pairs"});
        auto& e = c.explore;
        if (s.contains("y_range")) {
            const Json& r = s.at("y_range");
            if (!r.is_array() || r.size() != 2) config_error(p + ".y_range", "expected [lo, hi]");
            e.y_lo = parse_double(r[0], p + ".y_range[0]");
            e.y_hi = parse_double(r[1], p + ".y_range[1]");
        }
        if (s.contains("nx")) e.nx = get_int<int>(s.at("nx"), p + ".nx");
        if (s.contains("ny")) e.ny = get_int<int>(s.at("ny"), p + ".ny");
        if (s.contains("iterates")) e.iterates = get_int<int>(s.at("iterates"), p + ".iterates");
        if (s.contains("y_bound")) e.y_bound = parse_double(s.at("y_bound"), p + ".y_bound");
        if (s.contains("rho_min")) e.rho_min = get_int<long>(s.at("rho_min"), p + ".rho_min");
        auto& q = e.params;
        if (s.contains("eps")) q.eps = parse_double(s.at("eps"), p + ".eps");
        if (s.contains("box_scale")) q.box_scale = parse_double(s.at("box_scale"), p + ".box_scale");
        if (s.contains("max_m")) q.max_m = get_int<int>(s.at("max_m"), p + ".max_m");
        if (s.contains("visit_samples")) q.visit_samples = get_int<int>(s.at("visit_samples"), p + ".visit_samples");
        if (s.contains("clearance")) q.clearance = parse_double(s.at("clearance"), p + ".clearance");
        if (s.contains("screen_grid")) q.screen_grid = get_int<int>(s.at("screen_grid"), p + ".screen_grid");
        if (s.contains("max_per_shift")) q.max_per_shift = get_int<int>(s.at("max_per_shift"), p + ".max_per_shift");
        if (s.contains("max_pairs")) q.max_pairs = get_int<int>(s.at("max_pairs"), p + ".max_pairs");
    }
    try {
        c.certify.validate();
    } catch (const Error& e) {
        config_error("settings", e.what());
    }
}

} // namespace

RunConfig parse_config(const Json& j) {
    allow_keys(j, "", {"schema_version", "map", "boxes", "n", "settings", "declared", "seed", "chain", "markov"});
    if (!j.contains("schema_version")) config_error("schema_version", "missing");
    if (get_int<int>(j.at("schema_version"), "schema_version") != kSchemaVersion)
        throw Error(ErrorCode::SchemaMismatch, "schema_version: expected " + std::to_string(kSchemaVersion));
    RunConfig c;
    if (!j.contains("map")) config_error("map", "missing");
    c.map = parse_map(j.at("map"));
    if (!j.contains("boxes")) config_error("boxes", "missing");
    const Json& boxes = j.at("boxes");
    if (!boxes.is_object()) config_error("boxes", "expected an object of named boxes");
    for (const auto& [name, b] : boxes.items()) c.boxes.emplace_back(name, config_box(b, "boxes." + name));
    if (j.contains("n")) c.n = get_int<int>(j.at("n"), "n");
    if (c.n < 1) config_error("n", "must be at least 1");
    if (j.contains("settings")) parse_settings(j.at("settings"), c);
    if (!j.contains("declared")) config_error("declared", "missing");
    const Json& d = j.at("declared");
    allow_keys(d, "declared", {"area_preserving", "nonwandering", "birkhoff_related_ends"});
    for (const char* k : {"area_preserving", "nonwandering", "birkhoff_related_ends"})
        if (!d.contains(k)) config_error(std::string("declared.") + k, "missing");
    c.declared.area_preserving = get_bool(d.at("area_preserving"), "declared.area_preserving");
    c.declared.nonwandering = get_bool(d.at("nonwandering"), "declared.nonwandering");
    c.declared.birkhoff_related_ends = get_bool(d.at("birkhoff_related_ends"), "declared.birkhoff_related_ends");
    if (j.contains("seed")) c.seed = get_int<std::uint64_t>(j.at("seed"), "seed");
    c.explore.params.seed = c.seed;
    if (j.contains("chain")) {
        const Json& s = j.at("chain");
        allow_keys(s, "chain", {"q", "p", "disks", "exponents"});
        ChainConfig ch;
        for (const char* k : {"q", "p", "disks", "exponents"})
            if (!s.contains(k)) config_error(std::string("chain.") + k, "missing");
        ch.q = get_int<int>(s.at("q"), "chain.q");
        ch.p = get_int<long>(s.at("p"), "chain.p");
        if (!s.at("disks").is_array()) config_error("chain.disks", "expected a list of box names");
        for (std::size_t i = 0; i < s.at("disks").size(); ++i) {
            ch.disks.push_back(get_string(s.at("disks")[i], index("chain.disks", i)));
            c.box(ch.disks.back());
        }
        if (!s.at("exponents").is_array()) config_error("chain.exponents", "expected a list of integers");
        for (std::size_t i = 0; i < s.at("exponents").size(); ++i)
            ch.exponents.push_back(get_int<int>(s.at("exponents")[i], index("chain.exponents", i)));
        c.chain = ch;
    }
    if (j.contains("markov")) {
        const Json& s = j.at("markov");
        allow_keys(s, "markov", {"rect", "frame", "n_iter", "shifts"});
        MarkovConfig mk;
        for (const char* k : {"rect", "n_iter", "shifts"})
            if (!s.contains(k)) config_error(std::string("markov.") + k, "missing");
        mk.rect = get_string(s.at("rect"), "markov.rect");
        c.box(mk.rect);
        mk.n_iter = get_int<int>(s.at("n_iter"), "markov.n_iter");
        if (mk.n_iter < 1) config_error("markov.n_iter", "must be at least 1");
        if (!s.at("shifts").is_array()) config_error("markov.shifts", "expected a list of integers");
        for (std::size_t i = 0; i < s.at("shifts").size(); ++i)
            mk.shifts.push_back(get_int<long>(s.at("shifts")[i], index("markov.shifts", i)));
        if (s.contains("frame")) {
            const Json& f = s.at("frame");
            allow_keys(f, "markov.frame", {"center", "axes"});
            if (!f.contains("center") || !f.at("center").is_array() || f.at("center").size() != 2)
                config_error("markov.frame.center", "expected [x, y]");
            if (!f.contains("axes") || !f.at("axes").is_array() || f.at("axes").size() != 2)
                config_error("markov.frame.axes", "expected [[a00, a01], [a10, a11]]");
            for (int i = 0; i < 2; ++i) {
                mk.frame.center[i] = parse_double(f.at("center")[i], index("markov.frame.center", i));
                const Json& row = f.at("axes")[i];
                if (!row.is_array() || row.size() != 2) config_error(index("markov.frame.axes", i), "expected a row");
                for (int k = 0; k < 2; ++k)
                    mk.frame.axes.a[i][k] = parse_double(row[k], index(index("markov.frame.axes", i), k));
            }
        }
        c.markov = mk;
    }
    return c;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ConfigError, path + ": cannot write");
    out << j.dump(1) << "\n";
    if (!out) throw Error(ErrorCode::ConfigError, path + ": write failed");
}

RunConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

Json to_json(const RunConfig& c) {
    Json params = Json::object();
    for (const auto& [k, v] : c.map.params) params[k] = to_json(v);
    if (c.map.kind == MapKind::Pendulum) params["T"] = hex(c.map.period);
    Json boxes = Json::object();
    for (const auto& [k, v] : c.boxes) boxes[k] = to_json(v);
    const auto& i = c.integration;
    const auto& d = c.certify.subdivision;
    const auto& e = c.explore;
    Json j{{"schema_version", kSchemaVersion},
           {"map",
            {{"kind", to_string(c.map.kind)},
             {"params", params},
             {"circumference", c.map.kind == MapKind::Pendulum ? "2pi" : "1"},
             {"lift_offset", c.map.lift_offset}}},
           {"boxes", boxes},
           {"n", c.n},
           {"settings",
            {{"integration",
              {{"taylor_order", i.taylor_order},
               {"steps_per_period", i.steps_per_period},
               {"max_steps_per_period", i.max_steps_per_period},
               {"picard_inflation", hex(i.picard_inflation)},
               {"max_picard_retries", i.max_picard_retries},
               {"fixed_step", i.fixed_step},
               {"v_max", hex(i.v_max)},
               {"method", method_name(i.method)}}},
             {"subdivision",
              {{"target_width", hex(d.target_width)},
               {"max_boxes_per_stage", d.max_boxes_per_stage},
               {"max_depth", d.max_depth},
               {"total_budget", d.total_budget}}},
             {"witness",
              {{"depth", c.certify.witness_depth},
               {"grid", c.certify.witness_grid},
               {"candidates", c.certify.witness_candidates}}},
             {"visit",
              {{"max_m", c.certify.visit_max_m},
               {"grid", c.certify.visit_grid},
               {"candidates", c.certify.visit_candidates}}},
             {"markov", {{"pieces", c.certify.markov_pieces}, {"max_pieces", c.certify.markov_max_pieces}}},
             {"explore",
              {{"y_range", {hex(e.y_lo), hex(e.y_hi)}},
               {"nx", e.nx},
               {"ny", e.ny},
               {"iterates", e.iterates},
               {"y_bound", hex(e.y_bound)},
               {"rho_min", e.rho_min},
               {"eps", hex(e.params.eps)},
               {"box_scale", hex(e.params.box_scale)},
               {"max_m", e.params.max_m},
               {"visit_samples", e.params.visit_samples},
               {"clearance", hex(e.params.clearance)},
               {"screen_grid", e.params.screen_grid},
               {"max_per_shift", e.params.max_per_shift},
               {"max_pairs", e.params.max_pairs}}}}},
           {"declared",
            {{"area_preserving", c.declared.area_preserving},
             {"nonwandering", c.declared.nonwandering},
             {"birkhoff_related_ends", c.declared.birkhoff_related_ends}}},
           {"seed", c.seed}};
    if (c.chain)
        j["chain"] = {{"q", c.chain->q}, {"p", c.chain->p}, {"disks", c.chain->disks}, {"exponents", c.chain->exponents}};
    if (c.markov) {
        const auto& f = c.markov->frame;
        j["markov"] = {{"rect", c.markov->rect},
                       {"frame",
                        {{"center", {hex(f.center[0]), hex(f.center[1])}},
                         {"axes", Json::array({Json::array({hex(f.axes.a[0][0]), hex(f.axes.a[0][1])}),
                                               Json::array({hex(f.axes.a[1][0]), hex(f.axes.a[1][1])})})}}},
                       {"n_iter", c.markov->n_iter},
                       {"shifts", c.markov->shifts}};
    }
    return j;
}

LiftedAnnulusMap build_map(const RunConfig& c) {
    const MapConfig& m = c.map;
    switch (m.kind) {
    case MapKind::StandardMap: return make_standard_map(m.param("K"), m.lift_offset);
    case MapKind::RigidTwist: return make_rigid_twist(m.param("alpha"), m.param("tau"), m.lift_offset);
    case MapKind::Pendulum: {
        LiftedAnnulusMap base = make_pendulum_period(m.param("g"), m.param("l"), m.param("A"), m.period, c.integration);
        return base.with_lift_offset(m.lift_offset);
    }
    }
    throw Error(ErrorCode::ConfigError, "map.kind: unsupported");
}

// ---- evidence ----

Verdict verdict_from_string(const std::string& s, const std::string& path) {
    if (s == "Certified") return Verdict::Certified;
    if (s == "Refuted") return Verdict::Refuted;
    if (s == "Inconclusive") return Verdict::Inconclusive;
    schema_error(path, "unknown verdict '" + s + "'");
}

namespace {

Json witness_json(const Witness& w) {
    return {{"box", to_json(w.box)}, {"power", w.power}, {"image", to_json(w.image)}, {"frame", w.frame}};
}

Witness witness_value(const Json& j, const std::string& path) {
    Witness w;
    w.box = box_value(field(j, "box", path), join(path, "box"));
    w.power = num<int>(j, "power", path);
    w.image = lifted_value(field(j, "image", path), join(path, "image"));
    w.frame = num<long>(j, "frame", path);
    return w;
}

Json shift_json(const ShiftCertificate& c) {
    Json ws = Json::array();
    for (const auto& w : c.witnesses) ws.push_back(witness_json(w));
    return {{"verdict", to_string(c.verdict)},
            {"reason", c.reason},
            {"k", c.k},
            {"candidate_shifts", c.candidate_shifts},
            {"witnesses", ws},
            {"image_hull", optional_json(c.image_hull)}};
}

ShiftCertificate shift_value(const Json& j, const std::string& path) {
    ShiftCertificate c;
    c.verdict = verdict_from_string(str(j, "verdict", path), join(path, "verdict"));
    c.reason = str(j, "reason", path);
    c.k = num<long>(j, "k", path);
    c.candidate_shifts = long_list(j, "candidate_shifts", path);
    const Json& ws = arr(j, "witnesses", path);
    for (std::size_t i = 0; i < ws.size(); ++i) c.witnesses.push_back(witness_value(ws[i], index(join(path, "witnesses"), i)));
    c.image_hull = optional_box(j, "image_hull", path);
    return c;
}

Json bool_table(const std::vector<std::vector<bool>>& t) {
    Json out = Json::array();
    for (const auto& row : t) out.push_back(Json(row));
    return out;
}

} // namespace

Json to_json(const EnclosureChain& chain) {
    Json out = Json::array();
    for (const auto& s : chain) {
        Json members = Json::array();
        for (const auto& m : s.members)
            members.push_back({{"parent", m.parent}, {"tile", to_json(m.tile)}, {"image", to_json(m.image)}});
        out.push_back({{"stage", s.stage}, {"members", members}});
    }
    return out;
}

EnclosureChain chain_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected a list of stages");
    EnclosureChain chain;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string sp = index(path, i);
        EnclosureSet s;
        s.stage = num<int>(j[i], "stage", sp);
        const Json& members = arr(j[i], "members", sp);
        for (std::size_t k = 0; k < members.size(); ++k) {
            const std::string mp = index(join(sp, "members"), k);
            EnclosureMember m;
            m.parent = num<int>(members[k], "parent", mp);
            m.tile = box_value(field(members[k], "tile", mp), join(mp, "tile"));
            m.image = lifted_value(field(members[k], "image", mp), join(mp, "image"));
            s.members.push_back(m);
        }
        chain.push_back(std::move(s));
    }
    return chain;
}

Json to_json(const DpdCertificate& c) {
    return {{"verdict", to_string(c.verdict)},
            {"reason", c.reason},
            {"n", c.n},
            {"U0", to_json(c.u0)},
            {"U1", to_json(c.u1)},
            {"k0", c.k0},
            {"k1", c.k1},
            {"rho", c.rho ? Json(*c.rho) : Json(nullptr)},
            {"shift0", shift_json(c.shift0)},
            {"shift1", shift_json(c.shift1)},
            {"disjoint", bool_table(c.disjoint)},
            {"inessential0", c.inessential0},
            {"inessential1", c.inessential1},
            {"inessential_method0", c.inessential_method0},
            {"inessential_method1", c.inessential_method1},
            {"failing_stage", c.failing_stage},
            {"chain0", to_json(c.chain0)},
            {"chain1", to_json(c.chain1)}};
}

DpdCertificate dpd_from_json(const Json& j, const std::string& p) {
    DpdCertificate c;
    c.verdict = verdict_from_string(str(j, "verdict", p), p + ".verdict");
    c.reason = str(j, "reason", p);
    c.n = num<int>(j, "n", p);
    c.u0 = box_value(field(j, "U0", p), p + ".U0");
    c.u1 = box_value(field(j, "U1", p), p + ".U1");
    c.k0 = num<long>(j, "k0", p);
    c.k1 = num<long>(j, "k1", p);
    const Json& rho = field(j, "rho", p);
    if (!rho.is_null()) {
        if (!rho.is_number_integer()) schema_error(p + ".rho", "expected an integer or null");
        c.rho = rho.get<long>();
    }
    c.shift0 = shift_value(field(j, "shift0", p), p + ".shift0");
    c.shift1 = shift_value(field(j, "shift1", p), p + ".shift1");
    const Json& t = arr(j, "disjoint", p);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i].is_array()) schema_error(index(p + ".disjoint", i), "expected a row");
        std::vector<bool> row;
        for (std::size_t k = 0; k < t[i].size(); ++k) {
            if (!t[i][k].is_boolean()) schema_error(index(index(p + ".disjoint", i), k), "expected a boolean");
            row.push_back(t[i][k].get<bool>());
        }
        c.disjoint.push_back(row);
    }
    c.inessential0 = num<bool>(j, "inessential0", p);
    c.inessential1 = num<bool>(j, "inessential1", p);
    c.inessential_method0 = str(j, "inessential_method0", p);
    c.inessential_method1 = str(j, "inessential_method1", p);
    c.failing_stage = str(j, "failing_stage", p);
    c.chain0 = chain_from_json(field(j, "chain0", p), p + ".chain0");
    c.chain1 = chain_from_json(field(j, "chain1", p), p + ".chain1");
    return c;
}

Json to_json(const VisitResult& r) {
    Json w = nullptr;
    if (r.witness)
        w = {{"seed", to_json(r.witness->seed)},
             {"m", r.witness->m},
             {"image", to_json(r.witness->final_enclosure)},
             {"frame", r.witness->target_frame}};
    return {{"verdict", to_string(r.verdict)},
            {"reason", r.reason},
            {"witness", w}};
}

namespace {

VisitResult visit_value(const Json& j, const std::string& p) {
    VisitResult r;
    r.verdict = verdict_from_string(str(j, "verdict", p), p + ".verdict");
    r.reason = str(j, "reason", p);
    const Json& w = field(j, "witness", p);
    if (!w.is_null()) {
        const std::string wp = p + ".witness";
        VisitWitness v;
        v.seed = box_value(field(w, "seed", wp), wp + ".seed");
        v.m = num<int>(w, "m", wp);
        v.final_enclosure = lifted_value(field(w, "image", wp), wp + ".image");
        v.target_frame = num<long>(w, "frame", wp);
        r.witness = v;
    }
    return r;
}

Json rational_json(const Rational& r) { return {{"num", r.num}, {"den", r.den}}; }

Rational rational_value(const Json& j, const std::string& p) {
    Rational r;
    r.num = num<long>(j, "num", p);
    r.den = num<long>(j, "den", p);
    if (r.den <= 0) schema_error(p + ".den", "must be positive");
    return r;
}

} // namespace

VisitResult visit_from_json(const Json& j, const std::string& path) { return visit_value(j, path); }

Json to_json(const ChaosCertificate& c) {
    Json interval = nullptr;
    if (c.implied_interval)
        interval = Json::array({rational_json((*c.implied_interval)[0]), rational_json((*c.implied_interval)[1])});
    return {{"theorem_applied", to_string(c.theorem_applied)},
            {"relabeled", c.relabeled},
            {"rho_abs", c.rho_abs},
            {"implied_interval", interval},
            {"reasons", c.reasons},
            {"conclusion", c.conclusion},
            {"declared",
             {{"area_preserving", c.declared.area_preserving},
              {"nonwandering", c.declared.nonwandering},
              {"birkhoff_related_ends", c.declared.birkhoff_related_ends}}},
            {"visit_01", to_json(c.visit_01)},
            {"visit_10", to_json(c.visit_10)},
            {"dpd", to_json(c.dpd)}};
}

ChaosCertificate chaos_from_json(const Json& j) {
    const std::string p = "evidence";
    ChaosCertificate c;
    const std::string t = str(j, "theorem_applied", p);
    if (t == "A") c.theorem_applied = Theorem::A;
    else if (t == "B") c.theorem_applied = Theorem::B;
    else if (t == "None") c.theorem_applied = Theorem::None;
    else schema_error(p + ".theorem_applied", "unknown theorem '" + t + "'");
    c.relabeled = num<bool>(j, "relabeled", p);
    c.rho_abs = num<long>(j, "rho_abs", p);
    const Json& iv = field(j, "implied_interval", p);
    if (!iv.is_null()) {
        if (!iv.is_array() || iv.size() != 2) schema_error(p + ".implied_interval", "expected a pair or null");
        c.implied_interval = std::array<Rational, 2>{rational_value(iv[0], p + ".implied_interval[0]"),
                                                     rational_value(iv[1], p + ".implied_interval[1]")};
    }
    const Json& reasons = arr(j, "reasons", p);
    for (std::size_t i = 0; i < reasons.size(); ++i) {
        if (!reasons[i].is_string()) schema_error(index(p + ".reasons", i), "expected a string");
        c.reasons.push_back(reasons[i].get<std::string>());
    }
    c.conclusion = str(j, "conclusion", p);
    const Json& d = field(j, "declared", p);
    c.declared.area_preserving = num<bool>(d, "area_preserving", p + ".declared");
    c.declared.nonwandering = num<bool>(d, "nonwandering", p + ".declared");
    c.declared.birkhoff_related_ends = num<bool>(d, "birkhoff_related_ends", p + ".declared");
    c.visit_01 = visit_value(field(j, "visit_01", p), p + ".visit_01");
    c.visit_10 = visit_value(field(j, "visit_10", p), p + ".visit_10");
    c.dpd = dpd_from_json(field(j, "dpd", p), p + ".dpd");
    return c;
}

Json to_json(const ChainCertificate& c) {
    Json disks = Json::array(), orbits = Json::array(), connections = Json::array();
    for (const auto& d : c.disks) disks.push_back(to_json(d));
    for (const auto& o : c.orbits) orbits.push_back(to_json(o));
    for (const auto& w : c.connections) connections.push_back(w ? witness_json(*w) : Json(nullptr));
    return {{"verdict", to_string(c.verdict)},
            {"reason", c.reason},
            {"q", c.q},
            {"p", c.p},
            {"disks", disks},
            {"exponents", c.exponents},
            {"disks_disjoint", c.disks_disjoint},
            {"displaced", c.displaced},
            {"conclusion", c.conclusion},
            {"connections", connections},
            {"orbits", orbits}};
}

ChainCertificate chain_certificate_from_json(const Json& j) {
    const std::string p = "evidence";
    ChainCertificate c;
    c.verdict = verdict_from_string(str(j, "verdict", p), p + ".verdict");
    c.reason = str(j, "reason", p);
    c.q = num<int>(j, "q", p);
    c.p = num<long>(j, "p", p);
    const Json& disks = arr(j, "disks", p);
    for (std::size_t i = 0; i < disks.size(); ++i) c.disks.push_back(box_value(disks[i], index(p + ".disks", i)));
    for (long e : long_list(j, "exponents", p)) c.exponents.push_back(static_cast<int>(e));
    c.disks_disjoint = num<bool>(j, "disks_disjoint", p);
    const Json& displaced = arr(j, "displaced", p);
    for (std::size_t i = 0; i < displaced.size(); ++i) {
        if (!displaced[i].is_boolean()) schema_error(index(p + ".displaced", i), "expected a boolean");
        c.displaced.push_back(displaced[i].get<bool>());
    }
    c.conclusion = str(j, "conclusion", p);
    const Json& connections = arr(j, "connections", p);
    for (std::size_t i = 0; i < connections.size(); ++i)
        c.connections.push_back(connections[i].is_null()
                                    ? std::nullopt
                                    : std::optional<Witness>(witness_value(connections[i], index(p + ".connections", i))));
    const Json& orbits = arr(j, "orbits", p);
    for (std::size_t i = 0; i < orbits.size(); ++i) c.orbits.push_back(chain_from_json(orbits[i], index(p + ".orbits", i)));
    return c;
}

Json to_json(const MarkovCertificate& c) {
    Json crossings = Json::array();
    for (const auto& x : c.crossings) {
        Json images = Json::array();
        for (const auto& b : x.images) images.push_back(to_json(b));
        crossings.push_back({{"shift", x.shift},
                             {"verdict", to_string(x.verdict)},
                             {"reason", x.reason},
                             {"orientation", x.orientation},
                             {"pieces", x.pieces},
                             {"left_image", optional_json(x.left_image)},
                             {"right_image", optional_json(x.right_image)},
                             {"images", images}});
    }
    const auto& f = c.frame;
    return {{"rect", to_json(c.rect)},
            {"frame",
             {{"center", {hex(f.center[0]), hex(f.center[1])}},
              {"axes", Json::array({Json::array({hex(f.axes.a[0][0]), hex(f.axes.a[0][1])}),
                                    Json::array({hex(f.axes.a[1][0]), hex(f.axes.a[1][1])})})}}},
            {"n_iter", c.n_iter},
            {"symbols", c.symbols},
            {"horseshoe", c.horseshoe},
            {"entropy_lower_bound", hex(c.entropy_lower_bound)},
            {"crossings", crossings}};
}

MarkovCertificate markov_from_json(const Json& j) {
    const std::string p = "evidence";
    MarkovCertificate c;
    c.rect = box_value(field(j, "rect", p), p + ".rect");
    const Json& f = field(j, "frame", p);
    const Json& center = arr(f, "center", p + ".frame");
    const Json& axes = arr(f, "axes", p + ".frame");
    if (center.size() != 2 || axes.size() != 2) schema_error(p + ".frame", "expected a 2D frame");
    for (int i = 0; i < 2; ++i) {
        c.frame.center[i] = hex_value(center[i], index(p + ".frame.center", i));
        if (!axes[i].is_array() || axes[i].size() != 2) schema_error(index(p + ".frame.axes", i), "expected a row");
        for (int k = 0; k < 2; ++k) c.frame.axes.a[i][k] = hex_value(axes[i][k], index(index(p + ".frame.axes", i), k));
    }
    c.n_iter = num<int>(j, "n_iter", p);
    c.symbols = num<int>(j, "symbols", p);
    c.horseshoe = num<bool>(j, "horseshoe", p);
    c.entropy_lower_bound = hex_value(field(j, "entropy_lower_bound", p), p + ".entropy_lower_bound");
    const Json& crossings = arr(j, "crossings", p);
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        const std::string cp = index(p + ".crossings", i);
        Crossing x;
        x.shift = num<long>(crossings[i], "shift", cp);
        x.verdict = verdict_from_string(str(crossings[i], "verdict", cp), cp + ".verdict");
        x.reason = str(crossings[i], "reason", cp);
        x.orientation = num<int>(crossings[i], "orientation", cp);
        x.pieces = num<int>(crossings[i], "pieces", cp);
        x.left_image = optional_box(crossings[i], "left_image", cp);
        x.right_image = optional_box(crossings[i], "right_image", cp);
        const Json& images = arr(crossings[i], "images", cp);
        for (std::size_t k = 0; k < images.size(); ++k) x.images.push_back(box_value(images[k], index(cp + ".images", k)));
        c.crossings.push_back(std::move(x));
    }
    return c;
}

Json to_json(const CandidatePair& c) {
    Json s01 = Json::array(), s10 = Json::array();
    for (const auto& s : c.seeds_01) s01.push_back({{"point", {s.point[0], s.point[1]}}, {"m", s.m}});
    for (const auto& s : c.seeds_10) s10.push_back({{"point", {s.point[0], s.point[1]}}, {"m", s.m}});
    return {{"boxes", {{"U0", to_json(c.u0)}, {"U1", to_json(c.u1)}}},
            {"n", c.n},
            {"k0", c.k0},
            {"k1", c.k1},
            {"predicted_rho", c.predicted_rho},
            {"robustness", c.robustness},
            {"visits_found", c.visits_found},
            {"visit_seeds_01", s01},
            {"visit_seeds_10", s10}};
}

Json make_document(const std::string& kind, const RunConfig& config, Verdict verdict, Json evidence,
                   const Counters& counters) {
    return {{"schema_version", kSchemaVersion},
            {"kind", kind},
            {"verdict", to_string(verdict)},
            {"config", to_json(config)},
            {"evidence", std::move(evidence)},
            {"counters", {{"evaluations", counters.evaluations}, {"seconds", counters.seconds}}}};
}

void check_document(const Json& doc) {
    if (!doc.is_object()) schema_error("<root>", "expected an object");
    const Json& v = field(doc, "schema_version", "");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        schema_error("schema_version", "expected " + std::to_string(kSchemaVersion));
    const std::string kind = str(doc, "kind", "");
    if (kind != "dpd" && kind != "visit" && kind != "chaos" && kind != "chain" && kind != "markov")
        schema_error("kind", "unknown document kind '" + kind + "'");
    str(doc, "verdict", "");
    field(doc, "config", "");
    field(doc, "evidence", "");
    for (const auto& [k, val] : doc.items())
        if (k != "schema_version" && k != "kind" && k != "verdict" && k != "config" && k != "evidence" &&
            k != "counters")
            schema_error(k, "unknown field");
}

} // namespace rotchaos
