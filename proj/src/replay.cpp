#include "rotchaos/replay.hpp"

#include <map>
#include <set>

namespace rotchaos {

namespace {

struct Checker {
    const LiftedAnnulusMap& map;
    bool recompute;
    std::vector<std::string>& out;

    void fail(const std::string& path, const std::string& what) { out.push_back(path + ": " + what); }

    // Do `tiles` form exactly the bisection tree of `box` that the
    // subdivision produces?
    bool partitions(const Box2& box, const std::vector<Box2>& tiles) {
        if (tiles.empty()) return false;
        if (tiles.size() == 1 && tiles[0] == box) return true;
        if (!(box.width() > 0.0)) return false;
        const Axis axis = box.x.width() >= box.y.width() ? Axis::X : Axis::Y;
        std::pair<Box2, Box2> halves;
        try {
            halves = split(box, axis);
        } catch (const Error&) {
            return false;
        }
        std::vector<Box2> a, b;
        for (const auto& t : tiles) {
            if (t == box) return false;
            if (halves.first.contains(t)) a.push_back(t);
            else if (halves.second.contains(t)) b.push_back(t);
            else return false;
        }
        return partitions(halves.first, a) && partitions(halves.second, b);
    }

    void image_matches(const LiftedBox& stored, const LiftedBox& source, int power, long offset,
                       const std::string& path) {
        if (!recompute) {
            const LiftedBox canon = canonicalize(stored.planar, map.circumference());
            if (canon.shift != 0 || !(canon.planar == stored.planar)) fail(path, "image not in canonical form");
            return;
        }
        try {
            LiftedBox img = map.image(source, power);
            img.shift -= offset;
            if (!(img == stored)) fail(path, "stored image differs from the recomputed enclosure");
        } catch (const Error& e) {
            fail(path, std::string("recomputation failed: ") + e.what());
        }
    }

    void chain(const EnclosureChain& c, const Box2& source, int length, const std::string& path) {
        if (static_cast<int>(c.size()) != length + 1) {
            fail(path, "expected " + std::to_string(length + 1) + " stages");
            return;
        }
        for (std::size_t s = 0; s < c.size(); ++s)
            if (c[s].stage != static_cast<int>(s)) fail(path + "[" + std::to_string(s) + "].stage", "out of order");
        const auto& first = c[0].members;
        if (first.size() != 1 || first[0].parent != -1 || !(first[0].tile == source) ||
            !(first[0].image == canonicalize(source, map.circumference())))
            fail(path + "[0]", "stage 0 must be the source box");
        for (std::size_t s = 1; s < c.size(); ++s) {
            const std::string sp = path + "[" + std::to_string(s) + "]";
            const auto& prev = c[s - 1].members;
            std::map<int, std::vector<Box2>> children;
            for (std::size_t i = 0; i < c[s].members.size(); ++i) {
                const auto& m = c[s].members[i];
                const std::string mp = sp + ".members[" + std::to_string(i) + "]";
                if (m.parent < 0 || m.parent >= static_cast<int>(prev.size())) {
                    fail(mp + ".parent", "out of range");
                    continue;
                }
                children[m.parent].push_back(m.tile);
                image_matches(m.image, LiftedBox{m.tile, prev[m.parent].image.shift}, 1, 0, mp + ".image");
            }
            for (std::size_t p = 0; p < prev.size(); ++p)
                if (!partitions(prev[p].image.planar, children[static_cast<int>(p)]))
                    fail(sp, "tiles of parent " + std::to_string(p) + " do not partition its image");
        }
    }

    void witness(const Witness& w, const Box2& source, bool interior, int power, long offset, const Box2& target,
                 const std::string& path) {
        if (w.power != power) fail(path + ".power", "expected " + std::to_string(power));
        if (interior ? !source.interior_contains(w.box) : !source.contains(w.box))
            fail(path + ".box", "not inside the source box");
        image_matches(w.image, LiftedBox{w.box, 0}, power, offset, path + ".image");
        if (!target.interior_contains(in_frame(w.image, w.frame, map.circumference())))
            fail(path, "image not inside the target interior");
    }

    void shift(const ShiftCertificate& s, const Box2& u, const std::string& path) {
        for (std::size_t i = 0; i < s.witnesses.size(); ++i) {
            witness(s.witnesses[i], u, false, 1, 0, u, path + ".witnesses[" + std::to_string(i) + "]");
            if (i > 0 && !(s.witnesses[i - 1].frame < s.witnesses[i].frame))
                fail(path + ".witnesses", "frames must be distinct and increasing");
        }
    }

    void dpd(const DpdCertificate& c, const std::string& path) {
        if (c.chain0.empty() && c.chain1.empty()) return;
        chain(c.chain0, c.u0, c.n, path + ".chain0");
        chain(c.chain1, c.u1, c.n, path + ".chain1");
        shift(c.shift0, c.u0, path + ".shift0");
        shift(c.shift1, c.u1, path + ".shift1");
    }

    void visit(const VisitResult& r, const Box2& source, const Box2& target, int max_m, const std::string& path) {
        if (!r.witness) return;
        const auto& w = *r.witness;
        if (w.m < 1 || w.m > max_m) fail(path + ".witness.m", "outside 1..max_m");
        witness(Witness{w.seed, w.m, w.final_enclosure, w.target_frame}, source, true, w.m, 0, target,
                path + ".witness");
    }
};

void compare(const Json& stored, const Json& derived, const std::string& path, std::vector<std::string>& out) {
    for (const auto& op : Json::diff(stored, derived)) {
        out.push_back(path + op["path"].get<std::string>() + ": stored value disagrees with the re-derived one");
        if (out.size() > 200) return;
    }
}

} // namespace

Verdict document_verdict(const ChaosCertificate& c) {
    if (c.theorem_applied != Theorem::None) return Verdict::Certified;
    if (c.dpd.verdict == Verdict::Refuted) return Verdict::Refuted;
    return Verdict::Inconclusive;
}

Verdict document_verdict(const MarkovCertificate& c) {
    return c.horseshoe ? Verdict::Certified : Verdict::Inconclusive;
}

Verdict document_verdict(const std::vector<VisitLeg>& legs) {
    if (legs.empty()) return Verdict::Inconclusive;
    for (const auto& l : legs)
        if (l.result.verdict != Verdict::Certified) return Verdict::Inconclusive;
    return Verdict::Certified;
}

Json to_json(const std::vector<VisitLeg>& legs) {
    Json out = Json::array();
    for (const auto& l : legs) out.push_back({{"source", l.source}, {"target", l.target}, {"result", to_json(l.result)}});
    return {{"legs", out}};
}

std::vector<VisitLeg> visit_legs_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("legs") || !j.at("legs").is_array())
        throw Error(ErrorCode::SchemaMismatch, "evidence.legs: expected a list");
    std::vector<VisitLeg> out;
    const Json& legs = j.at("legs");
    for (std::size_t i = 0; i < legs.size(); ++i) {
        const std::string p = "evidence.legs[" + std::to_string(i) + "]";
        const Json& l = legs[i];
        if (!l.is_object() || !l.contains("source") || !l.at("source").is_string() || !l.contains("target") ||
            !l.at("target").is_string() || !l.contains("result"))
            throw Error(ErrorCode::SchemaMismatch, p + ": expected {source, target, result}");
        out.push_back({l.at("source").get<std::string>(), l.at("target").get<std::string>(),
                       visit_from_json(l.at("result"), p + ".result")});
    }
    return out;
}

ReplayReport replay(const Json& doc, bool deep) {
    check_document(doc);
    ReplayReport r;
    r.claimed = verdict_from_string(doc.at("verdict").get<std::string>(), "verdict");
    RunConfig config;
    try {
        config = parse_config(doc.at("config"));
    } catch (const Error& e) {
        throw Error(ErrorCode::SchemaMismatch, std::string("config: ") + e.what());
    }
    const LiftedAnnulusMap map = build_map(config);
    const Interval& circumference = map.circumference();
    r.enclosures_recomputed = deep || !map.uses_ode();
    Checker check{map, r.enclosures_recomputed, r.mismatches};
    const std::string kind = doc.at("kind").get<std::string>();
    const Json& ev = doc.at("evidence");
    Verdict derived = Verdict::Inconclusive;

    const auto redecide_dpd = [&](DpdCertificate d) {
        if (!d.chain0.empty() || !d.chain1.empty()) decide(d, circumference);
        return d;
    };
    const auto config_pair = [&](const DpdCertificate& d, const std::string& path) {
        if (!(d.u0 == config.box("U0")) || !(d.u1 == config.box("U1")))
            check.fail(path, "boxes differ from the configuration");
        if (d.n != config.n) check.fail(path + ".n", "differs from the configuration");
    };

    if (kind == "dpd") {
        const DpdCertificate c = dpd_from_json(ev);
        config_pair(c, "evidence");
        check.dpd(c, "evidence");
        const DpdCertificate d = redecide_dpd(c);
        compare(ev, to_json(d), "evidence", r.mismatches);
        derived = d.verdict;
    } else if (kind == "visit") {
        std::vector<VisitLeg> legs = visit_legs_from_json(ev);
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const std::string p = "evidence.legs[" + std::to_string(i) + "].result";
            check.visit(legs[i].result, config.box(legs[i].source), config.box(legs[i].target),
                        config.certify.visit_max_m, p);
            decide(legs[i].result);
        }
        compare(ev, to_json(legs), "evidence", r.mismatches);
        derived = document_verdict(legs);
    } else if (kind == "chaos") {
        const ChaosCertificate c = chaos_from_json(ev);
        config_pair(c.dpd, "evidence.dpd");
        check.dpd(c.dpd, "evidence.dpd");
        const int max_m = config.certify.visit_max_m;
        check.visit(c.visit_01, c.dpd.u0, c.dpd.u1, max_m, "evidence.visit_01");
        check.visit(c.visit_10, c.dpd.u1, c.dpd.u0, max_m, "evidence.visit_10");
        VisitResult v01 = c.visit_01, v10 = c.visit_10;
        decide(v01);
        decide(v10);
        const ChaosCertificate d = assemble_chaos(redecide_dpd(c.dpd), v01, v10, config.declared);
        compare(ev, to_json(d), "evidence", r.mismatches);
        derived = document_verdict(d);
    } else if (kind == "chain") {
        const ChainCertificate c = chain_certificate_from_json(ev);
        if (!config.chain) throw Error(ErrorCode::SchemaMismatch, "config.chain: missing");
        std::vector<Box2> disks;
        for (const auto& name : config.chain->disks) disks.push_back(config.box(name));
        if (c.q != config.chain->q || c.p != config.chain->p || c.exponents != config.chain->exponents ||
            c.disks != disks)
            check.fail("evidence", "chain data differ from the configuration");
        ChainCertificate d = c;
        decide(d, circumference);
        if (d.verdict != Verdict::Refuted) {
            for (std::size_t i = 0; i < c.orbits.size() && i < c.disks.size(); ++i)
                check.chain(c.orbits[i], c.disks[i], c.q, "evidence.orbits[" + std::to_string(i) + "]");
            for (std::size_t i = 0; i < c.connections.size() && i < c.disks.size(); ++i) {
                if (!c.connections[i]) continue;
                const int m = c.exponents[i];
                check.witness(*c.connections[i], c.disks[i], false, c.q * m, static_cast<long>(m) * c.p,
                              c.disks[(i + 1) % c.disks.size()], "evidence.connections[" + std::to_string(i) + "]");
                if (c.connections[i]->frame != 0) check.fail("evidence.connections", "frame must be 0");
            }
        }
        compare(ev, to_json(d), "evidence", r.mismatches);
        derived = d.verdict;
    } else {
        const MarkovCertificate c = markov_from_json(ev);
        if (!config.markov) throw Error(ErrorCode::SchemaMismatch, "config.markov: missing");
        const auto& mk = *config.markov;
        const std::set<long> shifts(mk.shifts.begin(), mk.shifts.end());
        std::set<long> stored;
        for (const auto& x : c.crossings) stored.insert(x.shift);
        if (!(c.rect == config.box(mk.rect)) || c.n_iter != mk.n_iter || c.frame.center != mk.frame.center ||
            c.frame.axes.a != mk.frame.axes.a || stored != shifts || stored.size() != c.crossings.size())
            check.fail("evidence", "Markov data differ from the configuration");
        if (r.enclosures_recomputed)
            for (std::size_t i = 0; i < c.crossings.size(); ++i) {
                const auto& x = c.crossings[i];
                try {
                    const Crossing again = check_crossing(map, c.rect, c.frame, c.n_iter, x.shift, x.pieces);
                    if (again.images != x.images)
                        check.fail("evidence.crossings[" + std::to_string(i) + "].images",
                                   "stored images differ from the recomputed enclosures");
                } catch (const Error& e) {
                    check.fail("evidence.crossings[" + std::to_string(i) + "]", e.what());
                }
            }
        MarkovCertificate d = c;
        decide(d);
        compare(ev, to_json(d), "evidence", r.mismatches);
        derived = document_verdict(d);
    }
    if (derived != r.claimed) check.fail("verdict", "document claims " + to_string(r.claimed) + ", evidence gives " +
                                                        to_string(derived));
    r.agrees = r.mismatches.empty();
    return r;
}

} // namespace rotchaos
