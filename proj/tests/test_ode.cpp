#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "rotchaos/ode.hpp"

using namespace rotchaos;

namespace {

VectorFieldSpec pendulum_field() {
    VectorFieldSpec f;
    f.g = Interval(9.8);
    f.l = Interval(1.0);
    f.amplitude = Interval(3.0);
    f.period = 2.5;
    return f;
}

IntegrationSettings pendulum_settings() {
    IntegrationSettings s;
    s.taylor_order = 8;
    s.steps_per_period = 128;
    return s;
}

bool holds(const Box2& b, long double x, long double y) {
    return b.x.lo() <= x && x <= b.x.hi() && b.y.lo() <= y && y <= b.y.hi();
}

} // namespace

TEST_CASE("a-priori enclosure") {
    VectorFieldSpec zero;
    zero.g = Interval(0.0);
    zero.period = 2.5;
    const Box2 rest{Interval(0.5), Interval(0.0)};
    const PicardReport z = a_priori_enclosure(zero, rest, Interval(0.0), 0.1);
    CHECK(z.enclosure.contains(rest));
    CHECK(z.enclosure.width() < 1e-9);

    const Box2 moving{Interval(0.0), Interval(1.0)};
    const PicardReport r = a_priori_enclosure(zero, moving, Interval(0.0), 0.1);
    CHECK(r.enclosure.contains(Box2{Interval(0, 0.1), Interval(1.0)}));

    const VectorFieldSpec f = pendulum_field();
    const PicardReport p = a_priori_enclosure(f, Box2{Interval(3.0), Interval(1.2)}, Interval(0.0), 2.5 / 256);
    CHECK(p.retries <= 3);
    CHECK(p.enclosure.contains(Box2{Interval(3.0), Interval(1.2)}));
}

TEST_CASE("linear test field: quarter period of the harmonic oscillator") {
    VectorFieldSpec f;
    f.g = Interval(1.0);
    f.l = Interval(1.0);
    f.amplitude = Interval(0.0);
    f.period = 2.0 * M_PI;
    f.linearized = true;
    IntegrationSettings s;
    s.taylor_order = 8;
    s.steps_per_period = 64;
    const Box2 r = flow_fraction(f, Box2{Interval(1.0), Interval(0.0)}, 1, 4, s);
    const long double t = static_cast<long double>(2.0 * M_PI) / 4.0L;
    CHECK(holds(r, std::cos(t), -std::sin(t)));
    CHECK(r.contains(0.0, -1.0));
    CHECK(r.width() < 1e-12);
}

TEST_CASE("time-T map on trivial fields") {
    VectorFieldSpec zero;
    zero.g = Interval(0.0);
    zero.period = 2.5;
    IntegrationSettings s;
    s.steps_per_period = 8;
    const Box2 b{Interval(0.25, 0.5), Interval(0.0)};
    const Box2 r = flow_time_T(zero, b, s);
    CHECK(r.contains(b));
    CHECK(r.x.width() < 0.25 + 1e-12);

    const Box2 rotor = flow_time_T(zero, Box2{Interval(0.0), Interval(2.0)}, s);
    CHECK(rotor.contains(5.0, 2.0));
    CHECK(rotor.width() < 1e-12);
}

TEST_CASE("pendulum parameters: U0 midpoint") {
    const VectorFieldSpec f = pendulum_field();
    const double x = (2.871046020894 + 3.271046020894) / 2, y = (1.092867786346 + 1.492867786346) / 2;
    const Box2 r = flow_time_T(f, Box2{Interval(x), Interval(y)}, pendulum_settings());
    const auto ref = oracle::flow(oracle::Pendulum{}, x, y, 0.0L, 2.5L);
    CHECK(holds(r, ref[0], ref[1]));
    CHECK(r.width() <= 1e-6);
}

TEST_CASE("random points stay inside their enclosures") {
    const VectorFieldSpec f = pendulum_field();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> q(-M_PI, M_PI), v(-5.0, 5.0);
    for (int i = 0; i < 20; ++i) {
        const double x = q(rng), y = v(rng);
        const Box2 r = flow_time_T(f, Box2{Interval(x), Interval(y)}, pendulum_settings());
        const auto ref = oracle::flow(oracle::Pendulum{}, x, y, 0.0L, 2.5L);
        CHECK(holds(r, ref[0], ref[1]));
    }
}

TEST_CASE("box method is inclusion isotone at fixed steps") {
    const VectorFieldSpec f = pendulum_field();
    IntegrationSettings s = pendulum_settings();
    s.method = FlowMethod::Box;
    s.fixed_step = true;
    s.steps_per_period = 256;
    const Box2 outer{Interval(1.0, 1.001), Interval(0.5, 0.501)};
    const Box2 inner{Interval(1.0002, 1.0005), Interval(0.5001, 0.5004)};
    const Box2 a = flow_fraction(f, outer, 1, 8, s);
    const Box2 b = flow_fraction(f, inner, 1, 8, s);
    CHECK(a.contains(b));
}
