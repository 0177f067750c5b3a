#include "rotchaos/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rotchaos/parallel.hpp"

namespace rotchaos {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string to_string(Theorem t) {
    switch (t) {
    case Theorem::A: return "A";
    case Theorem::B: return "B";
    case Theorem::None: return "None";
    }
    return "None";
}

Rational make_rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZeroInterval, "zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num < 0 ? -num : num, den);
    return {num / g, den / g};
}

std::string to_string(const Rational& r) {
    return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

void CertifySettings::validate() const {
    subdivision.validate();
    if (witness_depth < 1 || witness_depth > 60)
        throw Error(ErrorCode::InvalidParameter, "witness_depth must be in [1, 60]");
    if (witness_grid < 1 || witness_candidates < 1 || visit_grid < 1 || visit_candidates < 1)
        throw Error(ErrorCode::InvalidParameter, "seed grids and candidate counts must be positive");
    if (visit_max_m < 1) throw Error(ErrorCode::InvalidParameter, "visit_max_m must be positive");
    if (markov_pieces < 1 || markov_max_pieces < markov_pieces)
        throw Error(ErrorCode::InvalidParameter, "markov piece counts out of order");
}

bool admissible(int n, long rho_abs) {
    return (n >= 3 && rho_abs >= 1) || (n >= 2 && rho_abs >= 2) || (n >= 1 && rho_abs >= 3);
}

namespace {

using Point = std::array<double, 2>;

std::pair<long, long> frame_range(const Box2& image, const Box2& target, const Interval& circumference) {
    const Interval lo = (Interval(image.x.lo()) - Interval(target.x.hi())) / circumference;
    const Interval hi = (Interval(image.x.hi()) - Interval(target.x.lo())) / circumference;
    return {static_cast<long>(std::floor(lo.lo())) - 1, static_cast<long>(std::ceil(hi.hi())) + 1};
}

bool inside_frame(const LiftedBox& image, const Box2& target, long frame, const Interval& circumference) {
    return target.interior_contains(in_frame(image, frame, circumference));
}

// Relative depth of p inside b: positive iff p is interior.
double depth_in(const Point& p, const Box2& b) {
    const double dx = std::min(p[0] - b.x.lo(), b.x.hi() - p[0]) / (0.5 * b.x.width());
    const double dy = std::min(p[1] - b.y.lo(), b.y.hi() - p[1]) / (0.5 * b.y.width());
    return std::min(dx, dy);
}

std::vector<Point> grid_points(const Box2& b, int n) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pts.push_back({b.x.lo() + (i + 0.5) / n * (b.x.hi() - b.x.lo()),
                           b.y.lo() + (j + 0.5) / n * (b.y.hi() - b.y.lo())});
    return pts;
}

struct WitnessQuery {
    Box2 source;
    bool interior_source = false;
    int power = 1;
    long offset = 0;
    Box2 target;
    std::optional<long> frame;
};

std::optional<Witness> shrink_witness(const LiftedAnnulusMap& map, const WitnessQuery& q, const Point& seed,
                                      int depth) {
    const Interval& circumference = map.circumference();
    const double scale = std::max(q.source.x.hi() - q.source.x.lo(), q.source.y.hi() - q.source.y.lo());
    for (int level = 1; level <= depth; ++level) {
        const double half = std::ldexp(scale, -level - 1);
        const Box2 raw{Interval(seed[0] - half, seed[0] + half), Interval(seed[1] - half, seed[1] + half)};
        const auto clipped = intersect(raw, q.source);
        if (!clipped) continue;
        const Box2 w = *clipped;
        if (q.interior_source && !q.source.interior_contains(w)) continue;
        LiftedBox image;
        try {
            image = map.image(LiftedBox{w, 0}, q.power);
        } catch (const Error&) {
            continue;
        }
        image.shift -= q.offset;
        if (q.frame) {
            if (inside_frame(image, q.target, *q.frame, circumference))
                return Witness{w, q.power, image, *q.frame};
            continue;
        }
        const Box2 abs = absolute(image, circumference);
        // Too wide for any translate of the target; also keeps the frame loop short.
        if (!(abs.x.width() < q.target.x.width()) || !q.target.y.interior_contains(abs.y)) continue;
        const auto [lo, hi] = frame_range(abs, q.target, circumference);
        for (long j = lo; j <= hi; ++j)
            if (inside_frame(image, q.target, j, circumference)) return Witness{w, q.power, image, j};
    }
    return std::nullopt;
}

// Float seeds p in source with F^power(p) - offset L inside target + frame L,
// deepest first, after the source midpoint.
std::vector<Point> image_seeds(const LiftedAnnulusMap& map, const WitnessQuery& q, int grid, int count) {
    const double period = map.circumference().mid();
    std::vector<std::pair<double, Point>> scored;
    for (const auto& p : grid_points(q.source, grid)) {
        auto z = map.iterate_float(p[0], p[1], q.power);
        z[0] -= static_cast<double>(q.offset) * period;
        double best = -1.0;
        if (q.frame) {
            best = depth_in({z[0] - static_cast<double>(*q.frame) * period, z[1]}, q.target);
        } else {
            const double j = std::floor((z[0] - q.target.x.lo()) / period);
            best = depth_in({z[0] - j * period, z[1]}, q.target);
        }
        if (best > 0.0) scored.push_back({best, p});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto mid = q.source.midpoint();
    std::vector<Point> seeds{{mid[0], mid[1]}};
    for (const auto& s : scored) {
        if (static_cast<int>(seeds.size()) >= count + 1) break;
        seeds.push_back(s.second);
    }
    return seeds;
}

std::optional<Witness> find_witness(const LiftedAnnulusMap& map, const WitnessQuery& q,
                                    const CertifySettings& settings) {
    for (const auto& seed : image_seeds(map, q, settings.witness_grid, settings.witness_candidates))
        if (auto w = shrink_witness(map, q, seed, settings.witness_depth)) return w;
    return std::nullopt;
}

ShiftCertificate shift_from_stage(const LiftedAnnulusMap& map, const Box2& u, const EnclosureSet& stage1,
                                  const CertifySettings& settings) {
    ShiftCertificate c;
    for (long k : candidate_shifts(u, stage1, map.circumference())) {
        WitnessQuery q{u, false, 1, 0, u, k};
        if (auto w = find_witness(map, q, settings)) c.witnesses.push_back(*w);
    }
    return c;
}

void check_width(const Box2& b, const Interval& circumference) {
    if (!(b.x.width() < circumference.lo()))
        throw Error(ErrorCode::InvalidParameter, "box x-width must be below the circumference");
}

} // namespace

bool witness_holds(const LiftedAnnulusMap& map, const Box2& w, int power, long offset, const Box2& target,
                   long frame, LiftedBox* image) {
    try {
        LiftedBox img = map.image(LiftedBox{w, 0}, power);
        img.shift -= offset;
        if (image) *image = img;
        return inside_frame(img, target, frame, map.circumference());
    } catch (const Error&) {
        return false;
    }
}

std::vector<long> candidate_shifts(const Box2& u, const EnclosureSet& stage1, const Interval& circumference) {
    std::set<long> out;
    for (const auto& m : stage1.members) {
        const auto [lo, hi] = frame_range(absolute(m.image, circumference), u, circumference);
        for (long j = lo; j <= hi; ++j)
            if (!is_disjoint(in_frame(m.image, j, circumference), u)) out.insert(j);
    }
    return {out.begin(), out.end()};
}

namespace {

void decide_shift(ShiftCertificate& c, const Box2& u, const EnclosureSet& stage1, const Interval& circumference) {
    c.candidate_shifts = candidate_shifts(u, stage1, circumference);
    c.image_hull.reset();
    for (const auto& m : stage1.members) {
        const Box2 abs = absolute(m.image, circumference);
        c.image_hull = c.image_hull ? hull(*c.image_hull, abs) : abs;
    }
    decide(c);
}

} // namespace

void decide(ShiftCertificate& c) {
    c.verdict = Verdict::Inconclusive;
    c.reason.clear();
    c.k = c.witnesses.empty() ? 0 : c.witnesses.front().frame;
    if (c.candidate_shifts.empty()) {
        c.verdict = Verdict::Refuted;
        c.reason = "RefutedIntersection";
    } else if (c.witnesses.size() >= 2) {
        c.verdict = Verdict::Refuted;
        c.reason = "AmbiguousShift";
    } else if (c.witnesses.empty()) {
        c.reason = "NoWitness";
    } else if (c.candidate_shifts.size() > 1) {
        c.reason = "NotUnique";
    } else {
        c.verdict = Verdict::Certified;
    }
}

bool inessential_by(const EnclosureChain& chain, long k, const Interval& circumference, std::string& method) {
    const EnclosureChain rebased = rebase(chain, k);
    if ((method.empty() || method == "strip") && inessential_union(rebased, circumference)) {
        method = "strip";
        return true;
    }
    // The rebased lifted union is connected: U meets its image under F - kL,
    // hence so does every iterate.
    if ((method.empty() || method == "lift_component") && inessential_lift_component(rebased, circumference)) {
        method = "lift_component";
        return true;
    }
    method.clear();
    return false;
}

ShiftCertificate certify_shift(const LiftedAnnulusMap& map, const Box2& u, const CertifySettings& settings) {
    settings.validate();
    check_width(u, map.circumference());
    try {
        const EnclosureChain chain = eval_chain(map, LiftedBox{u, 0}, 1, settings.subdivision);
        ShiftCertificate c = shift_from_stage(map, u, chain[1], settings);
        decide_shift(c, u, chain[1], map.circumference());
        return c;
    } catch (const Error& e) {
        ShiftCertificate c;
        c.reason = to_string(e.code());
        return c;
    }
}

DpdCertificate certify_ndpd(const LiftedAnnulusMap& map, const Box2& u0, const Box2& u1, int n,
                            const CertifySettings& settings) {
    settings.validate();
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "n must be at least 1");
    const Interval& circumference = map.circumference();
    check_width(u0, circumference);
    check_width(u1, circumference);

    DpdCertificate c;
    c.n = n;
    c.u0 = u0;
    c.u1 = u1;
    try {
        c.failing_stage = "chain U0";
        c.chain0 = eval_chain(map, LiftedBox{u0, 0}, n, settings.subdivision);
        c.failing_stage = "chain U1";
        c.chain1 = eval_chain(map, LiftedBox{u1, 0}, n, settings.subdivision);
        c.failing_stage.clear();
    } catch (const Error& e) {
        c.reason = to_string(e.code());
        return c;
    }

    c.shift0 = shift_from_stage(map, u0, c.chain0[1], settings);
    c.shift1 = shift_from_stage(map, u1, c.chain1[1], settings);
    decide(c, circumference);
    return c;
}

void decide(DpdCertificate& c, const Interval& circumference) {
    const int n = c.n;
    if (static_cast<int>(c.chain0.size()) != n + 1 || static_cast<int>(c.chain1.size()) != n + 1)
        throw Error(ErrorCode::InvalidParameter, "dpd evidence needs chains of length n + 1");
    decide_shift(c.shift0, c.u0, c.chain0[1], circumference);
    decide_shift(c.shift1, c.u1, c.chain1[1], circumference);
    c.k0 = c.shift0.k;
    c.k1 = c.shift1.k;
    const bool shifts_ok = c.shift0.verdict == Verdict::Certified && c.shift1.verdict == Verdict::Certified;
    c.rho.reset();
    if (shifts_ok) c.rho = c.k1 - c.k0;

    c.disjoint.assign(n, std::vector<bool>(n, false));
    bool table_ok = true;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const bool d = annulus_disjoint(c.chain0[i], c.chain1[j], circumference);
            c.disjoint[i - 1][j - 1] = d;
            table_ok = table_ok && d;
        }

    c.inessential_method0.clear();
    c.inessential_method1.clear();
    c.inessential0 = c.shift0.verdict == Verdict::Certified &&
                     inessential_by(c.chain0, c.k0, circumference, c.inessential_method0);
    c.inessential1 = c.shift1.verdict == Verdict::Certified &&
                     inessential_by(c.chain1, c.k1, circumference, c.inessential_method1);

    c.verdict = Verdict::Inconclusive;
    c.failing_stage.clear();
    if (c.shift0.verdict == Verdict::Refuted) {
        c.verdict = Verdict::Refuted;
        c.reason = "U0 shift: " + c.shift0.reason;
    } else if (c.shift1.verdict == Verdict::Refuted) {
        c.verdict = Verdict::Refuted;
        c.reason = "U1 shift: " + c.shift1.reason;
    } else if (!shifts_ok) {
        c.reason = "shift not certified: " + (c.shift0.verdict != Verdict::Certified ? "U0 " + c.shift0.reason
                                                                                    : "U1 " + c.shift1.reason);
    } else if (!table_ok) {
        c.reason = "iterate enclosures overlap";
    } else if (!c.inessential0 || !c.inessential1) {
        c.reason = "inessentiality not certified";
    } else {
        c.verdict = Verdict::Certified;
        c.reason.clear();
    }
}

VisitResult certify_visit(const LiftedAnnulusMap& map, const Box2& source, const Box2& target, int max_m,
                          const CertifySettings& settings) {
    settings.validate();
    if (max_m < 1) throw Error(ErrorCode::InvalidParameter, "max_m must be positive");
    const double period = map.circumference().mid();

    struct Candidate {
        Point seed;
        int m;
        double depth;
    };
    std::vector<Candidate> found;
    const auto seeds = grid_points(source, settings.visit_grid);
    std::vector<std::optional<Candidate>> first_hit(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        Point z = seeds[i];
        for (int m = 1; m <= max_m; ++m) {
            z = map.apply_float(z[0], z[1]);
            if (!std::isfinite(z[0]) || !std::isfinite(z[1])) return;
            const double j = std::floor((z[0] - target.x.lo()) / period);
            const double d = depth_in({z[0] - j * period, z[1]}, target);
            if (d > 0.0) {
                first_hit[i] = Candidate{seeds[i], m, d};
                return;
            }
        }
    });
    for (const auto& h : first_hit)
        if (h) found.push_back(*h);
    std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        return a.m != b.m ? a.m < b.m : a.depth > b.depth;
    });

    VisitResult r;
    for (const auto& cand : found) {
        if (r.candidates_tried >= settings.visit_candidates) break;
        ++r.candidates_tried;
        WitnessQuery q{source, true, cand.m, 0, target, std::nullopt};
        if (auto w = shrink_witness(map, q, cand.seed, settings.witness_depth)) {
            r.witness = VisitWitness{w->box, cand.m, w->image, w->frame};
            break;
        }
    }
    decide(r);
    return r;
}

void decide(VisitResult& r) {
    r.verdict = r.witness ? Verdict::Certified : Verdict::Inconclusive;
    r.reason = r.witness ? "" : "NoVisitFound";
}

ChaosCertificate assemble_chaos(DpdCertificate dpd, VisitResult visit_01, VisitResult visit_10,
                                const Declared& declared) {
    ChaosCertificate c;
    c.dpd = std::move(dpd);
    c.visit_01 = std::move(visit_01);
    c.visit_10 = std::move(visit_10);
    c.declared = declared;
    const int n = c.dpd.n;

    if (c.dpd.verdict != Verdict::Certified) {
        c.reasons.push_back("dpd not certified" + (c.dpd.reason.empty() ? "" : ": " + c.dpd.reason));
        return c;
    }
    const long rho = *c.dpd.rho;
    c.relabeled = rho < 0;
    c.rho_abs = rho < 0 ? -rho : rho;
    if (c.rho_abs == 0) {
        c.reasons.push_back("rho below table threshold");
        return c;
    }
    if (!admissible(n, c.rho_abs)) {
        c.reasons.push_back("(n,rho)=(" + std::to_string(n) + "," + std::to_string(c.rho_abs) + ") not admissible");
        return c;
    }
    // After relabeling, "U0 visits U1" refers to the original U1 -> U0 leg.
    const VisitResult& forward = c.relabeled ? c.visit_10 : c.visit_01;
    const VisitResult& backward = c.relabeled ? c.visit_01 : c.visit_10;
    const bool fwd = forward.verdict == Verdict::Certified;
    const bool bwd = backward.verdict == Verdict::Certified;
    const bool a_ok = declared.nonwandering && fwd;
    const bool b_ok = declared.area_preserving && declared.birkhoff_related_ends && fwd && bwd;
    if (a_ok) {
        c.theorem_applied = Theorem::A;
    } else if (b_ok) {
        c.theorem_applied = Theorem::B;
    } else {
        if (!declared.nonwandering) c.reasons.push_back("A: nonwandering not declared");
        if (!fwd) c.reasons.push_back("visit U0 -> U1 not certified");
        if (!declared.area_preserving) c.reasons.push_back("B: area_preserving not declared");
        if (!declared.birkhoff_related_ends) c.reasons.push_back("B: birkhoff_related_ends not declared");
        if (!bwd) c.reasons.push_back("visit U1 -> U0 not certified");
        return c;
    }
    const Rational lo = make_rational(1, n);
    const Rational hi = make_rational(c.rho_abs * n - 1, n);
    c.implied_interval = std::array<Rational, 2>{lo, hi};
    const std::string interval = "[" + to_string(lo) + ", " + to_string(hi) + "]";
    if (c.theorem_applied == Theorem::A)
        c.conclusion = "f carries a rotational horseshoe whose instability region meets U0 and U1; for some lift F, " +
                       interval + " is contained in the rotation set of F on that region, and every rational "
                                  "number in it is realized by a point of the region";
    else
        c.conclusion = "f carries a rotational horseshoe whose regular instability region is the whole annulus; "
                       "for some lift F, " + interval + " is contained in the rotation set of F";
    return c;
}

ChaosCertificate certify_chaos(const LiftedAnnulusMap& map, const Box2& u0, const Box2& u1, int n,
                               const Declared& declared, const CertifySettings& settings) {
    DpdCertificate dpd = certify_ndpd(map, u0, u1, n, settings);
    VisitResult v01 = certify_visit(map, u0, u1, settings.visit_max_m, settings);
    VisitResult v10 = certify_visit(map, u1, u0, settings.visit_max_m, settings);
    return assemble_chaos(std::move(dpd), std::move(v01), std::move(v10), declared);
}

ChainCertificate certify_chain(const LiftedAnnulusMap& map, int q, long p, const std::vector<Box2>& disks,
                               const std::vector<int>& exponents, const CertifySettings& settings) {
    settings.validate();
    ChainCertificate c;
    c.q = q;
    c.p = p;
    c.disks = disks;
    c.exponents = exponents;
    const Interval& circumference = map.circumference();
    decide(c, circumference);
    if (c.verdict == Verdict::Refuted) return c;

    for (const auto& d : disks) {
        try {
            c.orbits.push_back(eval_chain(map, LiftedBox{d, 0}, q, settings.subdivision));
        } catch (const Error&) {
            c.orbits.clear();
            decide(c, circumference);
            c.reason = "SelfIntersectionNotRefuted: enclosure failure";
            return c;
        }
    }
    decide(c, circumference);
    if (!c.reason.starts_with("NoWitness")) return c;

    for (std::size_t i = 0; i < disks.size(); ++i) {
        const std::size_t next = (i + 1) % disks.size();
        const int m = exponents[i];
        WitnessQuery wq{disks[i], false, q * m, static_cast<long>(m) * p, disks[next], 0L};
        c.connections[i] = find_witness(map, wq, settings);
        if (!c.connections[i]) break;
    }
    decide(c, circumference);
    return c;
}

void decide(ChainCertificate& c, const Interval& circumference) {
    c.verdict = Verdict::Inconclusive;
    c.conclusion.clear();
    c.displaced.clear();
    const auto invalid = [&](const std::string& why) {
        c.verdict = Verdict::Refuted;
        c.reason = "InvalidChain: " + why;
    };
    c.disks_disjoint = false;
    if (c.q < 1) return invalid("q must be at least 1");
    if (c.disks.empty() || c.disks.size() != c.exponents.size())
        return invalid("disks and exponents differ in length");
    for (int m : c.exponents)
        if (m < 1) return invalid("exponents must be positive");
    c.disks_disjoint = true;
    for (std::size_t i = 0; i < c.disks.size(); ++i)
        for (std::size_t j = i + 1; j < c.disks.size(); ++j)
            if (!is_disjoint(c.disks[i], c.disks[j])) c.disks_disjoint = false;
    if (!c.disks_disjoint) return invalid("disks overlap");

    c.connections.resize(c.disks.size());
    if (c.orbits.size() != c.disks.size()) {
        c.reason = "SelfIntersectionNotRefuted: no enclosures";
        return;
    }
    c.displaced.assign(c.disks.size(), false);
    for (std::size_t i = 0; i < c.disks.size(); ++i) {
        const EnclosureChain& orbit = c.orbits[i];
        if (static_cast<int>(orbit.size()) != c.q + 1) continue;
        bool ok = true;
        for (const auto& m : orbit.back().members)
            if (!is_disjoint(in_frame(m.image, c.p, circumference), c.disks[i])) ok = false;
        c.displaced[i] = ok;
    }
    for (std::size_t i = 0; i < c.disks.size(); ++i)
        if (!c.displaced[i]) {
            c.reason = "SelfIntersectionNotRefuted: disk " + std::to_string(i);
            return;
        }
    for (std::size_t i = 0; i < c.disks.size(); ++i)
        if (!c.connections[i]) {
            c.reason = "NoWitness: connection " + std::to_string(i) + " -> " +
                       std::to_string((i + 1) % c.disks.size());
            return;
        }
    c.verdict = Verdict::Certified;
    c.reason.clear();
    c.conclusion = "H = F^" + std::to_string(c.q) + " - (" + std::to_string(c.p) +
                   " L, 0) has a fixed point; f has a periodic point of rotation number " +
                   to_string(make_rational(c.p, c.q));
}

namespace {

AffineSet piece_set(const Box2& u, const MarkovFrame& frame) {
    const IMat2 axes = to_interval(frame.axes);
    const auto um = u.midpoint();
    const IVec2 off = axes * IVec2{Interval(um[0]), Interval(um[1])};
    const Interval zx = Interval(frame.center[0]) + off[0];
    const Interval zy = Interval(frame.center[1]) + off[1];
    AffineSet s;
    s.center = {zx.mid(), zy.mid()};
    s.linear = axes;
    s.initial = {u.x - Interval(um[0]), u.y - Interval(um[1])};
    s.coeffs = {zx - Interval(s.center[0]), zy - Interval(s.center[1])};
    return s;
}

Box2 in_target_coords(const AffineSet& s, const MarkovFrame& frame, long shift, const Interval& circumference) {
    const IMat2 back = inverse_enclosure(frame.axes);
    const IVec2 d{Interval(s.center[0]) - Interval(frame.center[0]) -
                      Interval(static_cast<double>(shift)) * circumference,
                  Interval(s.center[1]) - Interval(frame.center[1])};
    const IVec2 a = back * d;
    const IVec2 b = (back * s.linear) * s.initial;
    const IVec2 e = (back * to_interval(s.frame)) * s.coeffs;
    return {a[0] + b[0] + e[0], a[1] + b[1] + e[1]};
}

std::vector<Box2> split_grid(const Box2& b, int nx, int ny) {
    std::vector<Box2> out;
    out.reserve(static_cast<std::size_t>(nx) * ny);
    const auto cut = [](const Interval& v, int n, int i) {
        const double lo = i == 0 ? v.lo() : v.lo() + (v.hi() - v.lo()) * i / n;
        const double hi = i == n - 1 ? v.hi() : v.lo() + (v.hi() - v.lo()) * (i + 1) / n;
        return Interval(lo, std::max(lo, hi));
    };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) out.push_back({cut(b.x, nx, i), cut(b.y, ny, j)});
    return out;
}

} // namespace

std::vector<Box2> crossing_pieces(const Box2& rect, int pieces) {
    if (pieces < 1) throw Error(ErrorCode::InvalidParameter, "pieces must be positive");
    const Box2 left{Interval(rect.x.lo()), rect.y};
    const Box2 right{Interval(rect.x.hi()), rect.y};
    std::vector<Box2> all;
    for (const auto* side : {&left, &right})
        for (const auto& b : split_grid(*side, 1, pieces)) all.push_back(b);
    for (const auto& b : split_grid(rect, pieces, pieces)) all.push_back(b);
    return all;
}

Crossing check_crossing(const LiftedAnnulusMap& map, const Box2& rect, const MarkovFrame& frame, int n_iter,
                        long shift, int pieces) {
    Crossing c;
    c.shift = shift;
    c.pieces = pieces;
    const Interval& circumference = map.circumference();
    const std::vector<Box2> all = crossing_pieces(rect, pieces);
    std::vector<std::optional<Box2>> images(all.size());
    parallel_for(all.size(), [&](std::size_t i) {
        try {
            const AffineSet img = map.image_set(piece_set(all[i], frame), n_iter);
            images[i] = in_target_coords(img, frame, shift, circumference);
        } catch (const Error&) {
        }
    });
    bool complete = true;
    for (const auto& img : images)
        if (!img) complete = false;
    if (complete)
        for (const auto& img : images) c.images.push_back(*img);
    decide(c, rect);
    return c;
}

void decide(Crossing& c, const Box2& rect) {
    c.verdict = Verdict::Inconclusive;
    c.orientation = 0;
    c.left_image.reset();
    c.right_image.reset();
    const std::size_t n_side = c.pieces < 1 ? 0 : static_cast<std::size_t>(c.pieces);
    if (n_side == 0 || c.images.size() != 2 * n_side + n_side * n_side) {
        c.reason = "NotCrossing: enclosure failure";
        return;
    }
    bool l_left = true, l_right = true, r_left = true, r_right = true;
    for (std::size_t i = 0; i < n_side; ++i) {
        const Box2& l = c.images[i];
        const Box2& r = c.images[n_side + i];
        c.left_image = c.left_image ? hull(*c.left_image, l) : l;
        c.right_image = c.right_image ? hull(*c.right_image, r) : r;
        l_left = l_left && l.x.hi() < rect.x.lo();
        l_right = l_right && l.x.lo() > rect.x.hi();
        r_left = r_left && r.x.hi() < rect.x.lo();
        r_right = r_right && r.x.lo() > rect.x.hi();
    }
    if (l_left && r_right) c.orientation = 1;
    else if (l_right && r_left) c.orientation = -1;
    if (c.orientation == 0) {
        c.reason = "NotCrossing: sides do not straddle the target";
        return;
    }
    // Only the part of the image over the target's x-range must sit in the band.
    for (std::size_t i = 2 * n_side; i < c.images.size(); ++i) {
        const Box2& b = c.images[i];
        if (b.x.hi() < rect.x.lo() || b.x.lo() > rect.x.hi()) continue;
        if (!rect.y.interior_contains(b.y)) {
            c.reason = "NotCrossing: image leaves the band";
            return;
        }
    }
    c.verdict = Verdict::Certified;
    c.reason.clear();
}

void decide(MarkovCertificate& c) {
    c.symbols = 0;
    std::set<long> seen;
    for (auto& x : c.crossings) {
        decide(x, c.rect);
        if (x.verdict == Verdict::Certified && seen.insert(x.shift).second) ++c.symbols;
    }
    c.horseshoe = c.symbols >= 2;
    c.entropy_lower_bound = c.horseshoe ? std::log(static_cast<double>(c.symbols)) / c.n_iter : 0.0;
}

MarkovCertificate certify_markov(const LiftedAnnulusMap& map, const Box2& rect, int n_iter,
                                 const std::vector<long>& shifts, const CertifySettings& settings,
                                 const MarkovFrame& frame) {
    settings.validate();
    if (n_iter < 1) throw Error(ErrorCode::InvalidParameter, "n_iter must be at least 1");
    if (!(rect.x.width() > 0.0) || !(rect.y.width() > 0.0))
        throw Error(ErrorCode::InvalidParameter, "Markov rectangle must have nonempty interior");
    MarkovCertificate c;
    c.rect = rect;
    c.frame = frame;
    c.n_iter = n_iter;
    const std::set<long> distinct(shifts.begin(), shifts.end());
    for (long s : distinct) {
        Crossing best;
        for (int pieces = settings.markov_pieces; pieces <= settings.markov_max_pieces; pieces *= 2) {
            best = check_crossing(map, rect, frame, n_iter, s, pieces);
            if (best.verdict == Verdict::Certified) break;
        }
        c.crossings.push_back(std::move(best));
    }
    decide(c);
    return c;
}

} // namespace rotchaos
