#pragma once

// Covering-space bookkeeping for the annulus R^2 / (x ~ x + L).

#include <utility>
#include <vector>

#include "rotchaos/interval.hpp"

namespace rotchaos {

// The lifted set planar + shift * (L, 0). `planar` is normally the canonical
// representative (x midpoint in [0, L)).
struct LiftedBox {
    Box2 planar;
    long shift = 0;

    friend bool operator==(const LiftedBox&, const LiftedBox&) = default;
};

// planar + (shift - frame) * L, outward rounded.
Box2 in_frame(const LiftedBox& b, long frame, const Interval& circumference);
inline Box2 absolute(const LiftedBox& b, const Interval& circumference) {
    return in_frame(b, 0, circumference);
}

// (b - k L, k) with the midpoint of the result's x range in [0, L).
// Throws TooWide when width(b.x) >= L.
std::pair<Box2, long> reduce(const Box2& b, const Interval& circumference);
// Same as reduce without the width precondition.
LiftedBox canonicalize(const Box2& b, const Interval& circumference);

struct EnclosureMember {
    // Index of the member of the previous stage this tile was cut from; -1
    // for the source box itself.
    int parent = -1;
    // Sub-box of the parent's image (parent's planar frame, parent's shift).
    Box2 tile;
    LiftedBox image;
};

// Finite union of lifted boxes covering F^stage of a source box.
struct EnclosureSet {
    int stage = 0;
    std::vector<EnclosureMember> members;
    bool budget_exhausted = false;

    Box2 planar_hull() const;
    double max_width() const;
};

using EnclosureChain = std::vector<EnclosureSet>;

// Stage i shifted by -i*k: the chain of the lift F - k L.
EnclosureChain rebase(const EnclosureChain& chain, long k);

// true => the annulus projections of A and B are disjoint.
bool annulus_disjoint(const EnclosureSet& a, const EnclosureSet& b, const Interval& circumference);

// true => the projected union of the chain is inessential: the hull of all
// lifted members spans an x range shorter than L.
bool inessential_union(const EnclosureChain& chain, const Interval& circumference);

// true => the projected union is inessential, provided the lifted union is
// connected (consecutive stages of a rebased chain intersect). The covering
// union is checked to be disjoint from all of its nonzero translates.
bool inessential_lift_component(const EnclosureChain& chain, const Interval& circumference);

// Pairwise test: does some box of `a` meet some box of `b` translated by m L
// for an m in [m_lo, m_hi], skipping m = 0 when `skip_zero`?
bool any_translate_overlap(const std::vector<Box2>& a, const std::vector<Box2>& b,
                           const Interval& circumference, long m_lo, long m_hi, bool skip_zero);

} // namespace rotchaos
