#include "rotchaos/interval.hpp"

#include <cmath>
#include <limits>

namespace rotchaos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude FMA residuals may be inexact (gradual underflow), so
// directed results fall back to an unconditional one-ulp step.
constexpr double kTiny = 0x1p-968;

[[noreturn]] void overflow(const char* op) {
    throw Error(ErrorCode::Overflow, std::string("non-finite result in ") + op);
}

double checked(double v, const char* op) {
    if (!std::isfinite(v)) overflow(op);
    return v;
}

// Exact error of the rounded sum s = fl(a + b).
double two_sum_err(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

} // namespace

double next_up(double x) { return checked(std::nextafter(x, kInf), "next_up"); }
double next_down(double x) { return checked(std::nextafter(x, -kInf), "next_down"); }

double add_down(double a, double b) {
    const double s = checked(a + b, "add");
    return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) {
    const double s = checked(a + b, "add");
    return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
    const double p = checked(a * b, "mul");
    if (a == 0.0 || b == 0.0) return 0.0;
    if (std::fabs(p) < kTiny) return next_down(p);
    return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
    const double p = checked(a * b, "mul");
    if (a == 0.0 || b == 0.0) return 0.0;
    if (std::fabs(p) < kTiny) return next_up(p);
    return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

namespace {

// Sign of (a / b - fl(a / b)).
int div_residual_sign(double a, double b, double q) {
    const double r = std::fma(-q, b, a);
    if (r == 0.0) return 0;
    return ((r > 0.0) == (b > 0.0)) ? 1 : -1;
}

} // namespace

double div_down(double a, double b) {
    const double q = checked(a / b, "div");
    if (a == 0.0) return 0.0;
    if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
    return div_residual_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
    const double q = checked(a / b, "div");
    if (a == 0.0) return 0.0;
    if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
    return div_residual_sign(a, b, q) > 0 ? next_up(q) : q;
}

Interval make_unchecked(double lo, double hi) { return Interval(lo, hi, Interval::Unchecked{}); }

Interval::Interval(double v) : lo_(v), hi_(v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Overflow, "non-finite interval endpoint");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorCode::Overflow, "non-finite interval endpoint");
    if (!(lo <= hi)) throw Error(ErrorCode::InvalidInterval, "lower endpoint exceeds upper");
}

double Interval::mid() const noexcept {
    const double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
}

double Interval::mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const noexcept {
    if (lo_ <= 0.0 && 0.0 <= hi_) return 0.0;
    return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval Interval::pi() {
    // 0x1.921fb54442d18p+1 is the binary64 value just below pi.
    constexpr double lo = 0x1.921fb54442d18p+1;
    return make_unchecked(lo, std::nextafter(lo, kInf));
}

Interval Interval::two_pi() {
    const Interval p = pi();
    return make_unchecked(2.0 * p.lo(), 2.0 * p.hi());
}

Interval operator+(const Interval& a, const Interval& b) {
    return make_unchecked(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
    return make_unchecked(sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo()));
}

Interval operator-(const Interval& a) { return make_unchecked(-a.hi(), -a.lo()); }

Interval operator+(const Interval& a, double b) { return a + Interval(b); }
Interval operator*(double a, const Interval& b) { return Interval(a) * b; }

Interval operator*(const Interval& a, const Interval& b) {
    if (a.lo() >= 0.0 && b.lo() >= 0.0)
        return make_unchecked(mul_down(a.lo(), b.lo()), mul_up(a.hi(), b.hi()));
    const double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()),
                                mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())});
    const double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()),
                                mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())});
    return make_unchecked(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains(0.0)) throw Error(ErrorCode::DivisionByZeroInterval, "divisor contains zero");
    const double lo = std::min({div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()),
                                div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())});
    const double hi = std::max({div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()),
                                div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())});
    return make_unchecked(lo, hi);
}

Interval sqr(const Interval& a) {
    if (a.lo() >= 0.0) return make_unchecked(mul_down(a.lo(), a.lo()), mul_up(a.hi(), a.hi()));
    if (a.hi() <= 0.0) return make_unchecked(mul_down(a.hi(), a.hi()), mul_up(a.lo(), a.lo()));
    return make_unchecked(0.0, std::max(mul_up(a.lo(), a.lo()), mul_up(a.hi(), a.hi())));
}

namespace {

// True when phase + 2*pi*k may lie in x for some integer k.
bool may_hit_lattice(const Interval& x, const Interval& phase) {
    const Interval tp = Interval::two_pi();
    const double first = ((Interval(x.lo()) - phase) / tp).lo();
    const double last = ((Interval(x.hi()) - phase) / tp).hi();
    return std::ceil(first) <= std::floor(last);
}

double widen_down(double v) { return std::nextafter(std::nextafter(v, -kInf), -kInf); }
double widen_up(double v) { return std::nextafter(std::nextafter(v, kInf), kInf); }

template <class Fn>
Interval periodic_range(const Interval& a, Fn fn, const Interval& max_phase,
                        const Interval& min_phase) {
    if (a.width() >= Interval::two_pi().lo()) return Interval::unit();
    const double f1 = fn(a.lo());
    const double f2 = fn(a.hi());
    double lo = widen_down(std::min(f1, f2));
    double hi = widen_up(std::max(f1, f2));
    if (may_hit_lattice(a, max_phase)) hi = 1.0;
    if (may_hit_lattice(a, min_phase)) lo = -1.0;
    return make_unchecked(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval half(const Interval& a) { return make_unchecked(0.5 * a.lo(), 0.5 * a.hi()); }

} // namespace

Interval sin(const Interval& a) {
    const Interval half_pi = half(Interval::pi());
    return periodic_range(a, [](double v) { return std::sin(v); }, half_pi, -half_pi);
}

Interval cos(const Interval& a) {
    return periodic_range(a, [](double v) { return std::cos(v); }, Interval(0.0), Interval::pi());
}

Interval exp(const Interval& a) {
    const double e1 = std::exp(a.lo());
    const double e2 = std::exp(a.hi());
    if (!std::isfinite(e2)) overflow("exp");
    return make_unchecked(std::max(0.0, widen_down(e1)), checked(widen_up(e2), "exp"));
}

Interval hull(const Interval& a, const Interval& b) {
    return make_unchecked(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) return std::nullopt;
    return make_unchecked(lo, hi);
}

bool is_disjoint(const Interval& a, const Interval& b) { return a.hi() < b.lo() || b.hi() < a.lo(); }

Interval inflate(const Interval& a, double eps) {
    return make_unchecked(sub_down(a.lo(), eps), add_up(a.hi(), eps));
}

Box2 hull(const Box2& a, const Box2& b) { return {hull(a.x, b.x), hull(a.y, b.y)}; }

std::optional<Box2> intersect(const Box2& a, const Box2& b) {
    auto x = intersect(a.x, b.x);
    auto y = intersect(a.y, b.y);
    if (!x || !y) return std::nullopt;
    return Box2{*x, *y};
}

bool is_disjoint(const Box2& a, const Box2& b) { return is_disjoint(a.x, b.x) || is_disjoint(a.y, b.y); }

std::pair<Box2, Box2> split(const Box2& b, Axis axis) {
    const Interval& iv = axis == Axis::X ? b.x : b.y;
    if (iv.is_point()) throw Error(ErrorCode::InvalidParameter, "split along a zero-width axis");
    const double m = iv.mid();
    const Interval left = make_unchecked(iv.lo(), m);
    const Interval right = make_unchecked(m, iv.hi());
    if (axis == Axis::X) return {Box2{left, b.y}, Box2{right, b.y}};
    return {Box2{b.x, left}, Box2{b.x, right}};
}

Box2 inflate(const Box2& b, double eps) { return {inflate(b.x, eps), inflate(b.y, eps)}; }

Box2 translate_x(const Box2& b, long shift, const Interval& period) {
    if (shift == 0) return b;
    return {b.x + Interval(static_cast<double>(shift)) * period, b.y};
}

} // namespace rotchaos
