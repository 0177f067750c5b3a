#pragma once

// Validated enclosures for the periodically forced pendulum
//   q'' = -(g/l) sin q + A sin(omega t),   omega = 2 pi / T,
// written as the autonomized first-order system (q, v, t)' = (v, a(q, t), 1).

#include <string>

#include "rotchaos/affine_set.hpp"
#include "rotchaos/interval.hpp"

namespace rotchaos {

struct VectorFieldSpec {
    std::string name = "pendulum";
    Interval g{9.8};
    Interval l{1.0};
    Interval amplitude{0.0};
    // Forcing period; the Poincare map is the time-`period` map.
    double period = 1.0;
    // Test hook: replaces sin q by q (the linearization at q = 0).
    bool linearized = false;

    Interval g_over_l() const { return g / l; }
    Interval omega() const { return Interval::two_pi() / Interval(period); }
    // Non-rigorous midpoint values, for float orbits.
    double g_over_l_mid() const { return g.mid() / l.mid(); }
    double omega_mid() const;

    void validate() const;
};

enum class FlowMethod {
    // Taylor steps composed on parallelepipeds (QR frames).
    Lohner,
    // Taylor steps composed on plain boxes.
    Box,
};

struct IntegrationSettings {
    int taylor_order = 4;
    // h_init = T / steps_per_period, h_min = T / max_steps_per_period.
    int steps_per_period = 256;
    int max_steps_per_period = 4096;
    double picard_inflation = 1.1;
    int max_picard_retries = 8;
    bool fixed_step = false;
    double v_max = 12.0;
    FlowMethod method = FlowMethod::Lohner;

    void validate() const;
};

struct FlowStep {
    Box2 rough;
    Box2 tight;
    Interval t_span;
};

struct PicardReport {
    Box2 enclosure;
    int retries = 0;
};

// Box B with b + [0,h] * field(B, [t0, t0+h]) contained in B, so B encloses
// every solution starting in b over the step. Throws PicardFailure.
PicardReport a_priori_enclosure(const VectorFieldSpec& field, const Box2& b, const Interval& t0,
                                double h, const IntegrationSettings& settings = {});

// One interval Taylor step on a box; the Lagrange remainder is evaluated on
// the a-priori enclosure.
FlowStep taylor_step(const VectorFieldSpec& field, const Box2& b, const Interval& t0, double h,
                     int order, const IntegrationSettings& settings = {});

// Time-T map enclosure of b starting at t = 0.
Box2 flow_time_T(const VectorFieldSpec& field, const Box2& b, const IntegrationSettings& settings);

// Enclosure after `periods` forcing periods. Lohner mode keeps the
// parallelepiped across period boundaries.
AffineSet flow_periods(const VectorFieldSpec& field, const AffineSet& start, int periods,
                       const IntegrationSettings& settings);
Box2 flow_periods(const VectorFieldSpec& field, const Box2& b, int periods,
                  const IntegrationSettings& settings);

// Enclosure of the flow from t = 0 to t = T * num / den, den a power of two.
Box2 flow_fraction(const VectorFieldSpec& field, const Box2& b, long num, long den,
                   const IntegrationSettings& settings);
// Same, starting at t = T * start_num / den.
Box2 flow_between(const VectorFieldSpec& field, const Box2& b, long start_num, long end_num,
                  long den, const IntegrationSettings& settings);

// Non-rigorous classical RK4 with fixed steps, for orbit search.
std::array<double, 2> flow_float(const VectorFieldSpec& field, double q, double v, double t0,
                                 double duration, int steps);

} // namespace rotchaos
