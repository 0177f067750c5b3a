#include "rotchaos/affine_set.hpp"

#include <cmath>

namespace rotchaos {

IMat2 IMat2::identity() {
    IMat2 m;
    m.a[0][0] = Interval(1.0);
    m.a[1][1] = Interval(1.0);
    return m;
}

IVec2 operator*(const IMat2& m, const IVec2& v) {
    return {m.a[0][0] * v[0] + m.a[0][1] * v[1], m.a[1][0] * v[0] + m.a[1][1] * v[1]};
}

IMat2 operator*(const IMat2& m, const IMat2& n) {
    IMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.a[i][j] = m.a[i][0] * n.a[0][j] + m.a[i][1] * n.a[1][j];
    return r;
}

IMat2 to_interval(const Mat2& m) {
    IMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.a[i][j] = Interval(m.a[i][j]);
    return r;
}

Mat2 midpoint(const IMat2& m) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.a[i][j] = m.a[i][j].mid();
    return r;
}

IMat2 inverse_enclosure(const Mat2& m) {
    const IMat2 im = to_interval(m);
    const Interval det = im.a[0][0] * im.a[1][1] - im.a[0][1] * im.a[1][0];
    IMat2 r;
    r.a[0][0] = im.a[1][1] / det;
    r.a[0][1] = -im.a[0][1] / det;
    r.a[1][0] = -im.a[1][0] / det;
    r.a[1][1] = im.a[0][0] / det;
    return r;
}

Box2 AffineSet::hull() const {
    const IVec2 spread = linear * initial;
    const IVec2 error = to_interval(frame) * coeffs;
    return {Interval(center[0]) + spread[0] + error[0], Interval(center[1]) + spread[1] + error[1]};
}

AffineSet affine_from_box(const Box2& b) {
    AffineSet s;
    s.center = b.midpoint();
    s.initial = {b.x - Interval(s.center[0]), b.y - Interval(s.center[1])};
    s.coeffs = {Interval(0.0), Interval(0.0)};
    return s;
}

namespace {

Mat2 orthonormal_frame(const Mat2& m) {
    const double n0 = std::hypot(m.a[0][0], m.a[1][0]);
    const double n1 = std::hypot(m.a[0][1], m.a[1][1]);
    const int lead = n0 >= n1 ? 0 : 1;
    const double n = lead == 0 ? n0 : n1;
    Mat2 q;
    if (!(n > 0.0) || !std::isfinite(n)) return q;
    const double c = m.a[0][lead] / n;
    const double s = m.a[1][lead] / n;
    q.a[0][0] = c;
    q.a[1][0] = s;
    q.a[0][1] = -s;
    q.a[1][1] = c;
    return q;
}

} // namespace

AffineSet propagate(const AffineSet& s, const Box2& image_of_center, const IMat2& jacobian) {
    const IMat2 stretched = jacobian * to_interval(s.frame);
    AffineSet out;
    out.linear = jacobian * s.linear;
    out.initial = s.initial;
    out.center = image_of_center.midpoint();
    out.frame = orthonormal_frame(midpoint(stretched));
    const IVec2 residual = {image_of_center.x - Interval(out.center[0]),
                            image_of_center.y - Interval(out.center[1])};
    const IMat2 back = inverse_enclosure(out.frame);
    const IVec2 a = (back * stretched) * s.coeffs;
    const IVec2 b = back * residual;
    out.coeffs = {a[0] + b[0], a[1] + b[1]};
    return out;
}

} // namespace rotchaos
