#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "rotchaos/maps.hpp"

using namespace rotchaos;

namespace {

const PendulumMap& pendulum_of(const LiftedAnnulusMap& m) { return std::get<PendulumMap>(m.backend()); }

bool contains_point(const Box2& b, long double x, long double y) {
    return b.x.lo() <= x && x <= b.x.hi() && b.y.lo() <= y && y <= b.y.hi();
}

} // namespace

TEST_CASE("pendulum construction") {
    const auto m = make_pendulum(Interval(9.8), Interval(1), Interval(3), 4.0 * M_PI / 5.0);
    CHECK(pendulum_of(m).field.period == 2.5);
    CHECK(m.circumference() == Interval::two_pi());
    CHECK(m.uses_ode());
    CHECK_THROWS_AS(make_pendulum(Interval(9.8), Interval(0), Interval(3), 1.0), Error);
    CHECK_THROWS_AS(make_pendulum(Interval(9.8), Interval(1), Interval(3), -1.0), Error);
}

TEST_CASE("free rotor time-T map is the integrable twist") {
    IntegrationSettings s;
    s.taylor_order = 6;
    s.steps_per_period = 16;
    const auto m = make_pendulum_period(Interval(0), Interval(1), Interval(0), 2.5, s);
    const Box2 r = m.image_box(Box2{Interval(0.0), Interval(2.0)});
    CHECK(r.x.contains(5.0));
    CHECK(r.y.contains(2.0));
    CHECK(r.width() < 1e-12);
}

TEST_CASE("unforced pendulum preserves energy") {
    IntegrationSettings s;
    s.taylor_order = 8;
    s.steps_per_period = 64;
    const auto m = make_pendulum_period(Interval(9.8), Interval(1), Interval(0), 2.5, s);
    const Box2 r = m.image_box(Box2{Interval(1.0), Interval(0.5)});
    const Interval energy = sqr(r.y) * Interval(0.5) - Interval(9.8) * cos(r.x);
    const double e0 = 0.125 - 9.8 * std::cos(1.0);
    CHECK(energy.lo() <= e0 + 1e-12);
    CHECK(energy.hi() >= e0 - 1e-12);
    CHECK(energy.width() < 1e-5);
}

TEST_CASE("explicit maps") {
    const auto rigid = make_rigid_twist(Interval(0.3), Interval(0));
    const auto z = rigid.apply_float(0.0, 0.0);
    CHECK(z[0] == doctest::Approx(0.3));
    CHECK(z[1] == 0.0);

    const Box2 r = rigid.image_box(Box2{Interval(0, 0.1), Interval(0, 0.1)}, 2);
    CHECK(r.x.contains(Interval(0.6, 0.7)));
    CHECK(r.x.width() < 0.1 + 1e-12);
    CHECK(r.y == Interval(0, 0.1));

    const auto sm0 = make_standard_map(Interval(0));
    const Box2 s = sm0.image_box(Box2{Interval(0, 0.1), Interval(1, 1.1)});
    CHECK(s.x.contains(Interval(1.0, 1.2)));
    CHECK(s.x.width() < 0.2 + 1e-12);
    CHECK(s.y.contains(Interval(1, 1.1)));
    const auto w = sm0.apply_float(0.25, 0.5);
    CHECK(w[0] == doctest::Approx(0.75));
    CHECK(w[1] == doctest::Approx(0.5));
}

TEST_CASE("standard map image encloses float orbits") {
    const auto sm = make_standard_map(Interval(6));
    const Box2 b{Interval(0.40, 0.41), Interval(0.10, 0.11)};
    for (int power : {1, 3, 6}) {
        const Box2 r = sm.image_box(b, power);
        for (int i = 0; i <= 10; ++i)
            for (int j = 0; j <= 10; ++j) {
                const auto z = oracle::standard_iter(6.0, {0.40 + 0.001 * i, 0.10 + 0.001 * j}, power);
                CHECK(r.contains(z[0], z[1]));
            }
    }
}

TEST_CASE("lift equivariance is exact") {
    const auto sm = make_standard_map(Interval(1.5));
    const Box2 b{Interval(0.2, 0.25), Interval(0.1, 0.12)};
    const LiftedBox a = sm.image(LiftedBox{b, 0}, 3);
    const LiftedBox c = sm.image(LiftedBox{b, 5}, 3);
    CHECK(a.planar == c.planar);
    CHECK(c.shift == a.shift + 5);
    const LiftedBox d = sm.with_lift_offset(2).image(LiftedBox{b, 0}, 3);
    CHECK(d.planar == a.planar);
    CHECK(d.shift == a.shift + 6);
}

TEST_CASE("pendulum point image contains the reference orbit") {
    IntegrationSettings s;
    s.taylor_order = 8;
    s.steps_per_period = 128;
    const auto m = make_pendulum_period(Interval(9.8), Interval(1), Interval(3), 2.5, s);
    const Box2 r = m.image_box(Box2{Interval(3.0), Interval(1.2)});
    const auto ref = oracle::flow(oracle::Pendulum{}, 3.0L, 1.2L, 0.0L, 2.5L);
    CHECK(contains_point(r, ref[0], ref[1]));
    CHECK(r.width() < 1e-6);
}

TEST_CASE("eval_chain covers the images") {
    const auto sm = make_standard_map(Interval(6));
    SubdivisionSettings s;
    s.target_width = 0.05;
    const Box2 b{Interval(0.46, 0.52), Interval(-0.06, 0.0)};
    const EnclosureChain ch = eval_chain(sm, LiftedBox{b, 0}, 2, s);
    REQUIRE(ch.size() == 3);
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) {
            const auto z = oracle::standard_iter(6.0, {0.46 + 0.006 * i, -0.06 + 0.006 * j}, 2);
            bool inside = false;
            for (const auto& mem : ch[2].members) inside |= absolute(mem.image, sm.circumference()).contains(z[0], z[1]);
            CHECK(inside);
        }
    for (const auto& mem : ch[2].members) CHECK(mem.image.planar.width() <= 0.05);

    s.max_boxes_per_stage = 4;
    CHECK_THROWS_AS(eval_lift(sm, LiftedBox{b, 0}, 2, s), Error);
}
