#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rotchaos/interval.hpp"

using namespace rotchaos;
using oracle::Big;

namespace {

bool encloses(const Interval& r, const Big& v) { return Big(r.lo()) <= v && v <= Big(r.hi()); }

Interval random_interval(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    const double a = u(rng), b = u(rng);
    return Interval(std::min(a, b), std::max(a, b));
}

double sample(std::mt19937_64& rng, const Interval& a) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double t = u(rng);
    if (t < 0.05) return a.lo();
    if (t > 0.95) return a.hi();
    return std::clamp(a.lo() + t * (a.hi() - a.lo()), a.lo(), a.hi());
}

} // namespace

TEST_CASE("endpoint arithmetic") {
    CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
    CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));
    CHECK(Interval(-2, -1) * Interval(-3, 4) == Interval(-8, 6));
    CHECK(Interval(1, 2) - Interval(3, 4) == Interval(-3, -1));
    CHECK(sqr(Interval(-2, 1)) == Interval(0, 4));
}

TEST_CASE("invalid and unbounded inputs") {
    CHECK_THROWS_AS(Interval(2, 1), Error);
    CHECK_THROWS_AS(Interval(std::nan(""), 1), Error);
    CHECK_THROWS_AS(Interval(1) / Interval(-1, 1), Error);
    CHECK_THROWS_AS(Interval(1e308) * Interval(1e308), Error);
}

TEST_CASE("rounding is outward") {
    const Interval third = Interval(1) / Interval(3);
    CHECK(third.lo() < third.hi());
    CHECK(encloses(third, Big(1) / 3));
    const Interval s = Interval(0.1) + Interval(0.2);
    CHECK(encloses(s, Big(0.1) + Big(0.2)));
    CHECK(s.lo() < s.hi());
}

TEST_CASE("elementary functions") {
    const Interval half_pi = Interval::pi() * Interval(0.5);
    const Interval s = sin(Interval(0.0, half_pi.hi()));
    CHECK(s.contains(Interval(0, 1)));
    CHECK(s.hi() <= std::nextafter(std::nextafter(1.0, 2.0), 2.0));
    const Interval c = cos(Interval(0.0));
    CHECK(c.contains(1.0));
    CHECK(c.width() <= 4 * std::numeric_limits<double>::epsilon());
    CHECK(encloses(Interval::pi(), boost::math::constants::pi<Big>()));
    CHECK(encloses(Interval::two_pi(), 2 * boost::math::constants::pi<Big>()));
    CHECK(sin(Interval(0, 100)) == Interval(-1, 1));
}

TEST_CASE("sin, cos, exp contain high-precision values on random intervals") {
    std::mt19937_64 rng(7);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const double scale = i % 3 == 0 ? 1e-3 : (i % 3 == 1 ? 4.0 : 60.0);
        const Interval a = random_interval(rng, scale);
        const double x = sample(rng, a);
        if (!encloses(sin(a), boost::multiprecision::sin(Big(x)))) ++violations;
        if (!encloses(cos(a), boost::multiprecision::cos(Big(x)))) ++violations;
        if (scale < 10 && !encloses(exp(a), boost::multiprecision::exp(Big(x)))) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("arithmetic fuzz") {
    std::mt19937_64 rng(11);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const Interval a = random_interval(rng, 1e3), b = random_interval(rng, 1e3);
        const Big x = sample(rng, a), y = sample(rng, b);
        if (!encloses(a + b, x + y)) ++violations;
        if (!encloses(a - b, x - y)) ++violations;
        if (!encloses(a * b, x * y)) ++violations;
        if (!b.contains(0.0) && !encloses(a / b, x / y)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("boxes") {
    const Box2 a{Interval(0, 1), Interval(0, 1)};
    CHECK(hull(a, Box2{Interval(2, 3), Interval(0, 1)}) == Box2{Interval(0, 3), Interval(0, 1)});
    CHECK(is_disjoint(a, Box2{Interval(1.5, 2), Interval(0, 1)}));
    CHECK_FALSE(is_disjoint(a, Box2{Interval(1, 2), Interval(0, 1)}));
    const auto [l, r] = split(Box2{Interval(0, 2), Interval(0, 1)}, Axis::X);
    CHECK(l == Box2{Interval(0, 1), Interval(0, 1)});
    CHECK(r == Box2{Interval(1, 2), Interval(0, 1)});
    CHECK_THROWS_AS(split(Box2{Interval(1), Interval(0, 1)}, Axis::X), Error);
}
