#pragma once

// Sets {center + linear * r0 + frame * r : r0 in initial, r in coeffs} used to
// carry enclosures through long compositions without re-boxing at every step.
// `linear` accumulates the Jacobians applied to the starting box; `coeffs`
// collects the local errors in an orthonormal frame.

#include <array>

#include "rotchaos/interval.hpp"

namespace rotchaos {

using IVec2 = std::array<Interval, 2>;

struct IMat2 {
    std::array<std::array<Interval, 2>, 2> a{};

    static IMat2 identity();
};

struct Mat2 {
    std::array<std::array<double, 2>, 2> a{{{1.0, 0.0}, {0.0, 1.0}}};
};

IVec2 operator*(const IMat2& m, const IVec2& v);
IMat2 operator*(const IMat2& m, const IMat2& n);
IMat2 to_interval(const Mat2& m);
Mat2 midpoint(const IMat2& m);
// Rigorous enclosure of the inverse of a point matrix.
IMat2 inverse_enclosure(const Mat2& m);

struct AffineSet {
    std::array<double, 2> center{};
    IMat2 linear = IMat2::identity();
    IVec2 initial{};
    Mat2 frame{};
    IVec2 coeffs{};

    Box2 hull() const;
};

AffineSet affine_from_box(const Box2& b);

// Given an enclosure `image_of_center` of the image of the center and an
// interval Jacobian valid over the hull of `s`, returns a parallelepiped
// enclosing the image of `s`. The new frame is the Q factor of the midpoint
// of (jacobian * frame), with the longer column pivoted first.
AffineSet propagate(const AffineSet& s, const Box2& image_of_center, const IMat2& jacobian);

} // namespace rotchaos
