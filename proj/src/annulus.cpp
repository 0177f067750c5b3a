#include "rotchaos/annulus.hpp"

#include <algorithm>
#include <cmath>

namespace rotchaos {

Box2 in_frame(const LiftedBox& b, long frame, const Interval& circumference) {
    return translate_x(b.planar, b.shift - frame, circumference);
}

LiftedBox canonicalize(const Box2& b, const Interval& circumference) {
    const double period = circumference.mid();
    long k = static_cast<long>(std::floor(b.x.mid() / period));
    Box2 out = translate_x(b, -k, circumference);
    // Correct for rounding right at the cut.
    if (out.x.mid() < 0.0) {
        --k;
        out = translate_x(b, -k, circumference);
    } else if (out.x.mid() >= period) {
        ++k;
        out = translate_x(b, -k, circumference);
    }
    return {out, k};
}

std::pair<Box2, long> reduce(const Box2& b, const Interval& circumference) {
    if (!(b.x.width() < circumference.lo()))
        throw Error(ErrorCode::TooWide, "box x-width is not below the circumference");
    const LiftedBox lb = canonicalize(b, circumference);
    return {lb.planar, lb.shift};
}

Box2 EnclosureSet::planar_hull() const {
    Box2 h = members.front().image.planar;
    for (const auto& m : members) h = hull(h, m.image.planar);
    return h;
}

double EnclosureSet::max_width() const {
    double w = 0.0;
    for (const auto& m : members) w = std::max(w, m.image.planar.width());
    return w;
}

EnclosureChain rebase(const EnclosureChain& chain, long k) {
    EnclosureChain out = chain;
    for (auto& stage : out)
        for (auto& m : stage.members) m.image.shift -= static_cast<long>(stage.stage) * k;
    return out;
}

namespace {

struct Sorted {
    std::vector<Box2> boxes;
    double max_width = 0.0;
};

Sorted sort_by_x(std::vector<Box2> boxes) {
    Sorted s;
    std::sort(boxes.begin(), boxes.end(),
              [](const Box2& p, const Box2& q) { return p.x.lo() < q.x.lo(); });
    for (const auto& b : boxes) s.max_width = std::max(s.max_width, b.x.width());
    s.boxes = std::move(boxes);
    return s;
}

bool overlaps_any(const Box2& probe, const Sorted& s) {
    // Candidates have x.lo in [probe.lo - max_width, probe.hi].
    const double from = probe.x.lo() - s.max_width - 1e-300;
    auto it = std::lower_bound(s.boxes.begin(), s.boxes.end(), from,
                               [](const Box2& b, double v) { return b.x.lo() < v; });
    // The subtraction above is not directed; step back a little further.
    while (it != s.boxes.begin() && std::prev(it)->x.hi() >= probe.x.lo()) --it;
    for (; it != s.boxes.end() && it->x.lo() <= probe.x.hi(); ++it)
        if (!is_disjoint(*it, probe)) return true;
    return false;
}

Box2 hull_of(const std::vector<Box2>& v) {
    Box2 h = v.front();
    for (const auto& b : v) h = hull(h, b);
    return h;
}

} // namespace

bool any_translate_overlap(const std::vector<Box2>& a, const std::vector<Box2>& b,
                           const Interval& circumference, long m_lo, long m_hi, bool skip_zero) {
    if (a.empty() || b.empty()) return false;
    const Sorted sa = sort_by_x(a);
    for (long m = m_lo; m <= m_hi; ++m) {
        if (m == 0 && skip_zero) continue;
        for (const auto& box : b)
            if (overlaps_any(translate_x(box, m, circumference), sa)) return true;
    }
    return false;
}

namespace {

// Range of m for which a and b + m L may share x values.
std::pair<long, long> translate_range(const Box2& ha, const Box2& hb, const Interval& circumference) {
    const Interval lo = (Interval(ha.x.lo()) - Interval(hb.x.hi())) / circumference;
    const Interval hi = (Interval(ha.x.hi()) - Interval(hb.x.lo())) / circumference;
    return {static_cast<long>(std::floor(lo.lo())) - 1, static_cast<long>(std::ceil(hi.hi())) + 1};
}

std::vector<Box2> images(const EnclosureSet& s) {
    std::vector<Box2> v;
    v.reserve(s.members.size());
    for (const auto& m : s.members) v.push_back(m.image.planar);
    return v;
}

std::vector<Box2> absolute_images(const EnclosureChain& chain, const Interval& circumference) {
    std::vector<Box2> v;
    for (const auto& stage : chain)
        for (const auto& m : stage.members) v.push_back(absolute(m.image, circumference));
    return v;
}

} // namespace

bool annulus_disjoint(const EnclosureSet& a, const EnclosureSet& b, const Interval& circumference) {
    if (a.members.empty() || b.members.empty()) return true;
    const auto va = images(a);
    const auto vb = images(b);
    for (const auto* v : {&va, &vb})
        for (const auto& box : *v)
            if (!(box.x.width() < circumference.lo())) return false;
    const auto [m_lo, m_hi] = translate_range(hull_of(va), hull_of(vb), circumference);
    return !any_translate_overlap(va, vb, circumference, m_lo, m_hi, false);
}

bool inessential_union(const EnclosureChain& chain, const Interval& circumference) {
    const auto v = absolute_images(chain, circumference);
    if (v.empty()) return true;
    return hull_of(v).x.width() < circumference.lo();
}

bool inessential_lift_component(const EnclosureChain& chain, const Interval& circumference) {
    const auto v = absolute_images(chain, circumference);
    if (v.empty()) return true;
    const Box2 h = hull_of(v);
    const auto [m_lo, m_hi] = translate_range(h, h, circumference);
    return !any_translate_overlap(v, v, circumference, m_lo, m_hi, true);
}

} // namespace rotchaos
