// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
//
// Usage: acceptance [output-dir]   (certificates are written there if given)

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rotchaos/certify.hpp"
#include "rotchaos/explorer.hpp"
#include "rotchaos/io.hpp"
#include "rotchaos/replay.hpp"

using namespace rotchaos;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string out_dir;

void save(const std::string& name, const Json& doc) {
    if (!out_dir.empty()) write_json_file(out_dir + "/" + name, doc);
}

// ---------------------------------------------------------------- pendulum

struct PendulumRun {
    RunConfig config;
    ChaosCertificate chaos;
    double seconds = 0.0;
    bool ran = false;
    std::string error;
};

PendulumRun& pendulum() {
    static PendulumRun run = [] {
        PendulumRun r;
        try {
            r.config = load_config("configs/pendulum.json");
            const auto map = build_map(r.config);
            const auto t0 = Clock::now();
            r.chaos = certify_chaos(map, r.config.box("U0"), r.config.box("U1"), r.config.n, r.config.declared,
                                    r.config.certify);
            r.seconds = since(t0);
            r.ran = true;
            save("pendulum_chaos.json", make_document("chaos", r.config, document_verdict(r.chaos),
                                                      to_json(r.chaos), {0, r.seconds}));
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        return r;
    }();
    return run;
}

void criterion1(Outcome& o) {
    PendulumRun& p = pendulum();
    o.require(p.ran, p.error);
    if (!p.ran) return;
    const RunConfig& c = p.config;
    // Boxes and parameters as published.
    o.require(c.box("U0") == Box2{Interval(2.871046020894, 3.271046020894), Interval(1.092867786346, 1.492867786346)},
              "U0 differs from the published box");
    o.require(c.box("U1") ==
                  Box2{Interval(8.5937151981236, 8.9937151981236), Interval(-6.050373124965, -5.270373124965)},
              "U1 differs from the published box");
    o.require(c.map.param("g").contains(9.8) && c.map.param("l") == Interval(1) && c.map.param("A") == Interval(3) &&
                  c.map.period == 2.5,
              "parameters");
    o.require(c.map.kind == MapKind::Pendulum && c.n == 1, "map kind / n");
    // Budget.
    const auto& s = c.certify.subdivision;
    const auto& integ = c.integration;
    o.require(s.max_boxes_per_stage <= (std::size_t{1} << 14), "stage cap above 2^14");
    o.require(integ.taylor_order <= 8, "Taylor order above 8");
    o.require(integ.max_steps_per_period <= 4096, "step below T/4096");
    std::size_t widest = 0;
    for (const auto* ch : {&p.chaos.dpd.chain0, &p.chaos.dpd.chain1})
        for (const auto& st : *ch) widest = std::max(widest, st.members.size());
    o.require(widest <= (std::size_t{1} << 14), "stage with more than 2^14 members");

    const DpdCertificate& d = p.chaos.dpd;
    o.require(d.verdict == Verdict::Certified, "dpd " + to_string(d.verdict) + " " + d.reason);
    o.require(d.rho && (*d.rho == 4 || *d.rho == -4), "|rho| != 4");
    o.require(d.rho && *d.rho == -4, "signed rho != -4 (derived, U0/U1 as published)");
    o.require(p.seconds <= 600.0, "wall time above 10 minutes");
    o.detail << "dpd " << to_string(d.verdict) << ", k0 = " << d.k0 << ", k1 = " << d.k1
             << ", rho = " << (d.rho ? std::to_string(*d.rho) : "none") << " (|rho| = 4 published), "
             << widest << " boxes max/stage, order " << integ.taylor_order << ", T/" << integ.steps_per_period
             << " initial step, certify-chaos total " << static_cast<int>(p.seconds) << " s";
}

void criterion2(Outcome& o) {
    PendulumRun& p = pendulum();
    o.require(p.ran, p.error);
    if (!p.ran) return;
    const auto check_leg = [&](const VisitResult& v, const Box2& source, const Box2& target, const char* name) {
        o.require(v.verdict == Verdict::Certified && v.witness.has_value(), std::string(name) + " not certified");
        if (!v.witness) return;
        const auto& w = *v.witness;
        const double scale = std::max(source.x.width(), source.y.width());
        o.require(w.m >= 1 && w.m <= 60, std::string(name) + " m outside 1..60");
        o.require(source.interior_contains(w.seed), std::string(name) + " seed not interior");
        o.require(w.seed.width() >= std::ldexp(scale, -46), std::string(name) + " witness narrower than 2^-46");
        o.require(target.interior_contains(in_frame(w.final_enclosure, w.target_frame, Interval::two_pi())),
                  std::string(name) + " image not interior");
        o.detail << name << " m = " << w.m << " (witness " << w.seed.width() / scale << " of scale), ";
    };
    const Box2 u0 = p.config.box("U0"), u1 = p.config.box("U1");
    check_leg(p.chaos.visit_01, u0, u1, "U0->U1");
    check_leg(p.chaos.visit_10, u1, u0, "U1->U0");
    const auto map = build_map(p.config);
    const auto f01 = find_visit_orbit(map, u0, u1, 60, 2000);
    const auto f10 = find_visit_orbit(map, u1, u0, 60, 2000);
    o.require(!f01.empty() && !f10.empty(), "float find_visit_orbit failed");
    o.detail << "float orbits " << f01.size() << " / " << f10.size() << " seeds";
}

void criterion3(Outcome& o) {
    PendulumRun& p = pendulum();
    o.require(p.ran, p.error);
    if (!p.ran) return;
    const ChaosCertificate& c = p.chaos;
    const Declared declared = p.config.declared;
    o.require(declared.area_preserving && declared.birkhoff_related_ends, "config must declare B's hypotheses");
    o.require(c.theorem_applied == Theorem::B, "theorem " + to_string(c.theorem_applied));
    const bool interval_ok = c.implied_interval && (*c.implied_interval)[0] == make_rational(1, 1) &&
                             (*c.implied_interval)[1] == make_rational(3, 1);
    o.require(interval_ok, "implied interval not [1, 3]");
    // Flip each declared hypothesis that holds.
    int flips = 0;
    for (bool Declared::*field : {&Declared::area_preserving, &Declared::nonwandering, &Declared::birkhoff_related_ends}) {
        if (!(declared.*field)) continue;
        Declared d = declared;
        d.*field = false;
        ++flips;
        o.require(assemble_chaos(c.dpd, c.visit_01, c.visit_10, d).theorem_applied == Theorem::None,
                  "flipped hypothesis still applies a theorem");
    }
    const Json doc = make_document("chaos", p.config, document_verdict(c), to_json(c), {});
    const ReplayReport r = replay(doc, false);
    o.require(r.agrees && r.claimed == Verdict::Certified, "shallow replay disagrees");
    o.detail << "theorem " << to_string(c.theorem_applied) << ", implied interval ";
    if (c.implied_interval)
        o.detail << "[" << to_string((*c.implied_interval)[0]) << ", " << to_string((*c.implied_interval)[1]) << "]";
    o.detail << " (length 2 published), " << flips << " flips -> None, replay agrees";
}

// ----------------------------------------------------------- trivial maps

void criterion4(Outcome& o) {
    const RunConfig rigid = load_config("configs/rigid_rotation.json");
    const auto map = build_map(rigid);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int certified = 0;
    double slowest = 0.0;
    for (int i = 0; i < 20; ++i) {
        Box2 u0 = rigid.box("U0"), u1 = rigid.box("U1");
        if (i > 0) {
            const double x0 = u(rng) * 0.5, w0 = 0.1 + 0.3 * u(rng), y0 = 3 * u(rng);
            const double x1 = u(rng) * 0.5, w1 = 0.1 + 0.3 * u(rng), y1 = y0 + 0.3 + 2 * u(rng);
            u0 = Box2{Interval(x0, x0 + w0), Interval(y0, y0 + 0.2)};
            u1 = Box2{Interval(x1, x1 + w1), Interval(y1, y1 + 0.2)};
        }
        const auto t0 = Clock::now();
        const ChaosCertificate c = certify_chaos(map, u0, u1, 1, rigid.declared, rigid.certify);
        slowest = std::max(slowest, since(t0));
        if (c.dpd.verdict == Verdict::Certified) {
            ++certified;
            o.require(c.dpd.rho && *c.dpd.rho == 0, "rigid rotation rho != 0");
        }
        o.require(!c.dpd.rho || *c.dpd.rho == 0, "rho reported nonzero");
        o.require(c.theorem_applied == Theorem::None, "theorem applied to a rigid rotation");
        o.require(document_verdict(c) != Verdict::Certified, "document Certified");
    }
    o.require(certified > 0, "no rigid pair certified as a dpd");

    const RunConfig twist = load_config("configs/integrable_twist.json");
    const auto tmap = build_map(twist);
    const auto t0 = Clock::now();
    const VisitResult a = certify_visit(tmap, twist.box("U0"), twist.box("U1"), twist.certify.visit_max_m, twist.certify);
    const VisitResult b = certify_visit(tmap, twist.box("U1"), twist.box("U0"), twist.certify.visit_max_m, twist.certify);
    slowest = std::max(slowest, since(t0));
    o.require(a.reason == "NoVisitFound" && b.reason == "NoVisitFound", "twist visit not NoVisitFound");
    o.require(slowest < 1.0, "slower than 1 s");
    o.detail << "rigid(0.3, 0): 20 pairs, " << certified << " certified dpd, all rho = 0, theorem None; "
             << "twist visits: " << a.reason << " / " << b.reason << "; slowest " << slowest << " s";
}

// ------------------------------------------------------ standard map, K=6

void criterion5(Outcome& o) {
    const auto t0 = Clock::now();
    const RunConfig cfg = load_config("configs/standard_explore.json");
    const auto map = build_map(cfg);
    const auto& e = cfg.explore;
    const RotationField field = rotation_field(map, e.y_lo, e.y_hi, e.nx, e.ny, e.iterates, e.y_bound);
    const auto pairs = propose_candidates(map, field, e.rho_min, cfg.n, e.params);
    std::optional<ChaosCertificate> found;
    int tried = 0;
    for (const auto& p : pairs) {
        ++tried;
        ChaosCertificate c = certify_chaos(map, p.u0, p.u1, 1, cfg.declared, cfg.certify);
        if (c.dpd.verdict == Verdict::Certified && c.dpd.rho && *c.dpd.rho >= 3 &&
            c.visit_01.verdict == Verdict::Certified && c.visit_10.verdict == Verdict::Certified) {
            found = std::move(c);
            break;
        }
    }
    const double secs = since(t0);
    o.require(found.has_value(), "no candidate certified");
    o.require(!map.uses_ode(), "ODE backend");
    o.require(secs <= 60.0, "slower than 60 s");
    if (found) {
        RunConfig doc_cfg = cfg;
        doc_cfg.boxes = {{"U0", found->dpd.u0}, {"U1", found->dpd.u1}};
        save("standard_k6_chaos.json", make_document("chaos", doc_cfg, document_verdict(*found), to_json(*found), {}));
        o.detail << "K = " << cfg.map.param("K").mid() << ": " << pairs.size() << " proposals, candidate "
                 << tried << " certified, rho = " << *found->dpd.rho << ", visits m = " << found->visit_01.witness->m
                 << " / " << found->visit_10.witness->m << ", theorem " << to_string(found->theorem_applied);
    }
    o.detail << ", " << secs << " s";
}

// --------------------------------------------------------- property suites

int fuzz_intervals() {
    using oracle::Big;
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto draw = [&](double scale) {
        const double a = (2 * unit(rng) - 1) * scale, b = (2 * unit(rng) - 1) * scale;
        return Interval(std::min(a, b), std::max(a, b));
    };
    const auto pick = [&](const Interval& a) {
        const double t = unit(rng);
        return t < 0.05 ? a.lo() : t > 0.95 ? a.hi() : std::clamp(a.lo() + t * (a.hi() - a.lo()), a.lo(), a.hi());
    };
    const auto in = [](const Interval& r, const Big& v) { return Big(r.lo()) <= v && v <= Big(r.hi()); };
    int violations = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double scale = std::ldexp(1.0, static_cast<int>(rng() % 40) - 20);
        const Interval a = draw(scale), b = draw(scale);
        const Big x = pick(a), y = pick(b);
        bool ok = true;
        switch (i % 8) {
        case 0: ok = in(a + b, x + y); break;
        case 1: ok = in(a - b, x - y); break;
        case 2: ok = in(a * b, x * y); break;
        case 3: ok = b.contains(0.0) || in(a / b, x / y); break;
        case 4: ok = in(sqr(a), x * x); break;
        case 5: ok = in(sin(a), boost::multiprecision::sin(x)); break;
        case 6: ok = in(cos(a), boost::multiprecision::cos(x)); break;
        case 7: ok = scale > 64 || in(exp(a), boost::multiprecision::exp(x)); break;
        }
        if (!ok) ++violations;
    }
    return violations;
}

int ode_containment(const RunConfig& cfg, int points) {
    const auto map = build_map(cfg);
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> q(-M_PI, M_PI), v(-6.0, 6.0);
    int violations = 0;
    for (int i = 0; i < points; ++i) {
        const double x = q(rng), y = v(rng);
        const Box2 r = map.image_box(Box2{Interval(x), Interval(y)});
        const auto ref = oracle::flow(oracle::Pendulum{}, x, y, 0.0L, 2.5L, 1e-18L);
        if (!(r.x.lo() <= ref[0] && ref[0] <= r.x.hi() && r.y.lo() <= ref[1] && ref[1] <= r.y.hi())) ++violations;
    }
    return violations;
}

// Exact equivariance and rho lift invariance / antisymmetry on random
// explicit-map configurations.
int equivariance(int configs, int& with_rho) {
    std::mt19937_64 rng(63);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    with_rho = 0;
    for (int i = 0; i < configs; ++i) {
        const bool standard = i % 4 != 3;
        const double k = 4.5 + 3.0 * unit(rng);
        const auto map = standard ? make_standard_map(Interval(k)) : make_rigid_twist(Interval(unit(rng)), Interval(0.5));
        const double side = 0.02 + 0.05 * unit(rng);
        // Boxes near the hyperbolic points (1/2, m) of the standard map, on a
        // 2^-40 grid so that integer translates are exact.
        const auto grid = [](double v) { return std::ldexp(std::round(std::ldexp(v, 40)), -40); };
        const auto box_at = [&](double y) {
            const double x = 0.5 + (unit(rng) - 0.5) * side;
            const double yy = y + (unit(rng) - 0.5) * side;
            return Box2{Interval(grid(x - side / 2), grid(x + side / 2)), Interval(grid(yy - side / 2), grid(yy + side / 2))};
        };
        const Box2 u0 = box_at(static_cast<double>(rng() % 3)), u1 = box_at(3.0 + static_cast<double>(rng() % 3));
        const long m = static_cast<long>(rng() % 11) - 5, j = static_cast<long>(rng() % 7) - 3;
        const int power = 1 + static_cast<int>(rng() % 4);

        const LiftedBox a = map.image(LiftedBox{u0, 0}, power);
        const LiftedBox b = map.image(LiftedBox{u0, m}, power);
        const Box2 moved{Interval(u0.x.lo() + static_cast<double>(m), u0.x.hi() + static_cast<double>(m)), u0.y};
        const LiftedBox c = map.image(LiftedBox{moved, 0}, power);
        const LiftedBox d = map.with_lift_offset(j).image(LiftedBox{u0, 0}, power);
        if (!(b.planar == a.planar) || b.shift != a.shift + m) ++violations;
        if (!(c.planar == a.planar) || c.shift != a.shift + m) ++violations;
        if (!(d.planar == a.planar) || d.shift != a.shift + j * power) ++violations;

        const DpdCertificate p = certify_ndpd(map, u0, u1, 1);
        const DpdCertificate q = certify_ndpd(map.with_lift_offset(j), u0, u1, 1);
        const DpdCertificate r = certify_ndpd(map, u1, u0, 1);
        if (p.verdict != q.verdict || p.verdict != r.verdict || p.rho.has_value() != q.rho.has_value() ||
            p.rho.has_value() != r.rho.has_value())
            ++violations;
        if (p.rho && q.rho && r.rho) {
            ++with_rho;
            if (*p.rho != *q.rho || *r.rho != -*p.rho || q.k0 != p.k0 + j || q.k1 != p.k1 + j) ++violations;
        }
    }
    return violations;
}

int isotonicity(int cases) {
    const RunConfig cfg = load_config("configs/pendulum.json");
    VectorFieldSpec field;
    field.g = cfg.map.param("g");
    field.l = cfg.map.param("l");
    field.amplitude = cfg.map.param("A");
    field.period = cfg.map.period;
    IntegrationSettings s = cfg.integration;
    s.method = FlowMethod::Box;
    s.fixed_step = true;
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < cases; ++i) {
        const double x = -3 + 6 * unit(rng), y = -4 + 8 * unit(rng), w = std::ldexp(1.0, -8 - static_cast<int>(rng() % 12));
        const Box2 outer{Interval(x, x + w), Interval(y, y + w)};
        const double a = x + w * 0.5 * unit(rng), b = y + w * 0.5 * unit(rng);
        const Box2 inner{Interval(a, a + w * 0.5 * unit(rng)), Interval(b, b + w * 0.5 * unit(rng))};
        try {
            const Box2 fo = flow_time_T(field, outer, s);
            const Box2 fi = flow_time_T(field, inner, s);
            if (!fo.contains(fi)) ++violations;
        } catch (const Error&) {
            // Failing on the outer box is allowed; it encloses nothing.
        }
    }
    return violations;
}

// Corrupts single evidence leaves of a Certified document; every corruption
// must make replay disagree or reject the document.
int mutation_soundness(const Json& doc, int count, std::string& first_survivor) {
    std::vector<Json::json_pointer> leaves;
    std::function<void(const Json&, const Json::json_pointer&)> walk = [&](const Json& j, const Json::json_pointer& p) {
        if (j.is_object())
            for (const auto& [k, v] : j.items()) walk(v, p / k);
        else if (j.is_array())
            for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], p / i);
        else
            leaves.push_back(p);
    };
    walk(doc.at("evidence"), Json::json_pointer("/evidence"));
    std::mt19937_64 rng(65);
    std::shuffle(leaves.begin(), leaves.end(), rng);
    int survivors = 0;
    for (int i = 0; i < count && i < static_cast<int>(leaves.size()); ++i) {
        Json bad = doc;
        Json& v = bad[leaves[i]];
        const bool up = rng() % 2 == 0;
        if (v.is_boolean()) v = !v.get<bool>();
        else if (v.is_number_integer()) v = v.get<long>() + (up ? 1 : -1);
        else if (v.is_string() && v.get<std::string>().find("0x") != std::string::npos) {
            const double x = parse_double(v, "mutation");
            const double delta = std::max(std::abs(x) * 1e-6, 1e-9);
            v = hex(up ? x + delta : x - delta);
        } else if (v.is_string()) v = v.get<std::string>() + "?";
        else v = 0;
        bool accepted = false;
        try {
            const ReplayReport r = replay(bad, false);
            accepted = r.agrees;
        } catch (const Error&) {
        }
        if (accepted) {
            ++survivors;
            if (first_survivor.empty()) first_survivor = leaves[i].to_string();
        }
    }
    return survivors;
}

void criterion6(Outcome& o) {
    auto t0 = Clock::now();
    const int a = fuzz_intervals();
    o.require(a == 0, "interval fuzz violations");
    o.detail << "(a) 1e6 samples, " << a << " violations, " << static_cast<int>(since(t0)) << " s; ";

    t0 = Clock::now();
    const int b = ode_containment(load_config("configs/pendulum.json"), 100);
    o.require(b == 0, "ODE containment violations");
    o.detail << "(b) 100 points, " << b << " outside, " << static_cast<int>(since(t0)) << " s; ";

    int with_rho = 0;
    const int c = equivariance(100, with_rho);
    o.require(c == 0, "equivariance violations");
    o.require(with_rho > 0, "no configuration with a certified rho");
    o.detail << "(c) 100 configs (" << with_rho << " with rho), " << c << " violations; ";

    const int d = isotonicity(100);
    o.require(d == 0, "isotonicity violations");
    o.detail << "(d) 100 nested pairs, " << d << " violations; ";

    const RunConfig cfg = load_config("configs/standard_k6.json");
    const ChaosCertificate cc =
        certify_chaos(build_map(cfg), cfg.box("U0"), cfg.box("U1"), cfg.n, cfg.declared, cfg.certify);
    const Json doc = make_document("chaos", cfg, document_verdict(cc), to_json(cc), {});
    o.require(doc.at("verdict") == "Certified", "mutation base not Certified");
    o.require(replay(doc).agrees, "unmodified document does not replay");
    std::string survivor;
    const int e = mutation_soundness(doc, 50, survivor);
    o.require(e == 0, "mutation accepted at " + survivor);
    o.detail << "(e) 50 mutations, " << e << " accepted";
}

// ------------------------------------------------------- Markov and chain

void criterion7(Outcome& o) {
    // Markov: rectangle from the float oracle.
    const auto t0 = Clock::now();
    const std::vector<long> shifts{0, 1};
    const oracle::MarkovRect r = oracle::locate_markov_rect(6.0, shifts);
    o.require(r.margin > 0.0, "oracle found no crossing rectangle");
    MarkovFrame frame;
    frame.center = {r.cx, r.cy};
    frame.axes.a = {{{std::cos(r.t1), std::cos(r.t2)}, {std::sin(r.t1), std::sin(r.t2)}}};
    const Box2 rect{Interval(-r.a, r.a), Interval(-r.b, r.b)};
    const auto sm6 = make_standard_map(Interval(6));
    const MarkovCertificate m = certify_markov(sm6, rect, 1, shifts, {}, frame);
    o.require(m.horseshoe && m.symbols == 2, "Markov crossings not certified");
    o.require(m.entropy_lower_bound >= std::log(2.0), "entropy annotation below log 2");
    o.require(m.n_iter == 1, "period");
    o.detail << "Markov: center (" << r.cx << ", " << r.cy << "), float margin " << r.margin << ", symbols "
             << m.symbols << ", entropy >= " << m.entropy_lower_bound << " (" << since(t0) << " s); ";

    // Chain: disks from the float oracle around the elliptic point (1/2, 0).
    const double k = 1.5;
    const auto oc = oracle::locate_chain(k, {0.65, 0.0}, 2, 0.05);
    o.require(oc.has_value(), "chain oracle found no return");
    if (!oc) return;
    const auto sq = [&](oracle::Pt c) { return Box2{Interval(c[0] - oc->half, c[0] + oc->half), Interval(c[1] - oc->half, c[1] + oc->half)}; };
    const auto sm = make_standard_map(Interval(k));
    const std::vector<Box2> disks{sq(oc->c0), sq(oc->c1)};
    const std::vector<int> exps{oc->m0, oc->m1};
    const ChainCertificate good = certify_chain(sm, 1, 0, disks, exps);
    o.require(good.verdict == Verdict::Certified, "oracle chain " + to_string(good.verdict) + " " + good.reason);
    o.detail << "chain: exponents {" << oc->m0 << ", " << oc->m1 << "} " << to_string(good.verdict);

    // Tampered variants; the float oracle confirms each really breaks the chain.
    int bad_exp = oc->m1 + 1;
    while (oracle::float_connection(k, oc->c1, oc->c0, oc->half, bad_exp)) ++bad_exp;
    const oracle::Pt fixed{0.5, 0.0};
    const oracle::Pt far{oc->c1[0], 0.45};
    struct Variant {
        std::string name;
        int q;
        long p;
        std::vector<Box2> disks;
        std::vector<int> exps;
        bool genuinely_invalid;
    };
    const std::vector<Variant> variants{
        {"overlap", 1, 0, {disks[0], sq({oc->c0[0] + oc->half, oc->c0[1]})}, exps, true},
        {"wrong exponent", 1, 0, disks, {oc->m0, bad_exp}, !oracle::float_connection(k, oc->c1, oc->c0, oc->half, bad_exp)},
        {"wrong p", 1, 1, disks, exps, true},
        {"disk on the fixed point", 1, 0, {sq(fixed), disks[1]}, exps,
         std::abs(oracle::standard(k, fixed)[0] - fixed[0]) < oc->half},
        {"unreachable disk", 1, 0, {disks[0], sq(far)}, exps,
         !oracle::float_connection(k, oc->c0, far, oc->half, oc->m0)},
        {"reversed order", 1, 0, {disks[1], disks[0]}, exps,
         !oracle::float_connection(k, oc->c1, oc->c0, oc->half, oc->m0)},
        {"q = 0", 0, 0, disks, exps, true},
        {"missing exponent", 1, 0, disks, {oc->m0}, true},
    };
    int rejected = 0;
    for (const auto& v : variants) {
        o.require(v.genuinely_invalid, v.name + ": oracle does not confirm the tamper");
        const ChainCertificate t = certify_chain(sm, v.q, v.p, v.disks, v.exps);
        if (t.verdict != Verdict::Certified) ++rejected;
        else o.require(false, v.name + " certified");
    }
    o.detail << ", " << rejected << "/" << variants.size() << " tampered variants rejected";
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) out_dir = argv[1];
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"1 pendulum dpd reproduction", criterion1},
        {"2 pendulum visits", criterion2},
        {"3 pendulum theorem application", criterion3},
        {"4 trivial rejections", criterion4},
        {"5 derived standard-map instance", criterion5},
        {"6 property suites", criterion6},
        {"7 Markov and chain certificates", criterion7},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str(),
                    since(t0));
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
