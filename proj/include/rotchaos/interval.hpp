#pragma once

// Directed-rounded interval arithmetic over binary64.
//
// All operations run in the default round-to-nearest mode. Directed results
// are obtained from error-free transformations (TwoSum, FMA residuals): an
// endpoint is stepped to the next representable value only when the nearest
// result is known to be on the wrong side of the exact value. Elementary
// functions are evaluated with the C library and widened by two ulps.

#include <algorithm>
#include <array>
#include <optional>
#include <utility>

#include "rotchaos/error.hpp"

namespace rotchaos {

double next_up(double x);
double next_down(double x);

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);

class Interval {
  public:
    constexpr Interval() = default;
    explicit Interval(double v);
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    // Upper bound on hi - lo.
    double width() const { return sub_up(hi_, lo_); }
    // A representable point inside the interval.
    double mid() const noexcept;
    // max |x| over the interval.
    double mag() const noexcept;
    double mig() const noexcept;

    bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }
    bool contains(const Interval& o) const noexcept { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool interior_contains(const Interval& o) const noexcept { return lo_ < o.lo_ && o.hi_ < hi_; }
    bool is_point() const noexcept { return lo_ == hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

    static Interval pi();
    static Interval two_pi();
    // Full range of sin/cos.
    static Interval unit() { return Interval(-1.0, 1.0); }

  private:
    struct Unchecked {};
    constexpr Interval(double lo, double hi, Unchecked) : lo_(lo), hi_(hi) {}
    friend Interval make_unchecked(double lo, double hi);

    double lo_ = 0.0;
    double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator+(const Interval& a, double b);
Interval operator*(double a, const Interval& b);
inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

Interval sqr(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval exp(const Interval& a);

Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);
bool is_disjoint(const Interval& a, const Interval& b);
// Grows both endpoints outward by eps (outward-rounded).
Interval inflate(const Interval& a, double eps);

// Axis-aligned box. `x` is the annular coordinate, `y` the vertical one.
struct Box2 {
    Interval x;
    Interval y;

    friend bool operator==(const Box2&, const Box2&) = default;

    double width() const { return std::max(x.width(), y.width()); }
    std::array<double, 2> midpoint() const { return {x.mid(), y.mid()}; }
    bool contains(const Box2& o) const { return x.contains(o.x) && y.contains(o.y); }
    bool contains(double px, double py) const { return x.contains(px) && y.contains(py); }
    bool interior_contains(const Box2& o) const {
        return x.interior_contains(o.x) && y.interior_contains(o.y);
    }
};

enum class Axis { X, Y };

Box2 hull(const Box2& a, const Box2& b);
std::optional<Box2> intersect(const Box2& a, const Box2& b);
bool is_disjoint(const Box2& a, const Box2& b);
// Bisects at the midpoint of the chosen axis; throws InvalidParameter when
// that axis has zero width.
std::pair<Box2, Box2> split(const Box2& b, Axis axis);
Box2 inflate(const Box2& b, double eps);
// Translates the x interval by `shift` copies of `period` (outward rounded).
Box2 translate_x(const Box2& b, long shift, const Interval& period);

} // namespace rotchaos
