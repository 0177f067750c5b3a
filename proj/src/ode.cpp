#include "rotchaos/ode.hpp"

#include <algorithm>
#include <cmath>

namespace rotchaos {

namespace {

constexpr int kMaxOrder = 20;
// Times are tracked as integer multiples of T / 2^kGridBits.
constexpr int kGridBits = 20;
constexpr long kGrid = 1L << kGridBits;

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

const std::array<Interval, kMaxOrder + 2>& reciprocals() {
    static const auto table = [] {
        std::array<Interval, kMaxOrder + 2> t{};
        for (int k = 1; k < kMaxOrder + 2; ++k) t[k] = Interval(1.0) / Interval(k);
        return t;
    }();
    return table;
}

// First-order jet in the initial condition (q0, v0).
struct Jet {
    Interval val;
    Interval dq;
    Interval dv;
};

Jet operator+(const Jet& a, const Jet& b) { return {a.val + b.val, a.dq + b.dq, a.dv + b.dv}; }
Jet operator-(const Jet& a) { return {-a.val, -a.dq, -a.dv}; }
Jet operator*(const Interval& s, const Jet& a) { return {s * a.val, s * a.dq, s * a.dv}; }
Jet operator*(const Jet& a, const Interval& s) { return s * a; }
Jet operator*(const Jet& a, const Jet& b) {
    return {a.val * b.val, a.dq * b.val + a.val * b.dq, a.dv * b.val + a.val * b.dv};
}
Jet operator+(const Jet& a, const Interval& s) { return {a.val + s, a.dq, a.dv}; }

void sin_cos(const Interval& x, Interval& s, Interval& c) {
    s = sin(x);
    c = cos(x);
}

void sin_cos(const Jet& x, Jet& s, Jet& c) {
    const Interval sv = sin(x.val);
    const Interval cv = cos(x.val);
    s = {sv, cv * x.dq, cv * x.dv};
    c = {cv, -(sv * x.dq), -(sv * x.dv)};
}

struct FieldConstants {
    Interval neg_gl;
    Interval amp;
    Interval omega;
    bool linearized;

    explicit FieldConstants(const VectorFieldSpec& f)
        : neg_gl(-f.g_over_l()), amp(f.amplitude), omega(f.omega()), linearized(f.linearized) {}
};

// Taylor coefficients q[0..order], v[0..order] of the solution through
// (q0, v0) at time t0. `t0` may be an interval (for remainder terms).
template <class S>
void coefficients(const FieldConstants& fc, const S& q0, const S& v0, const Interval& t0, int order,
                  std::array<S, kMaxOrder + 1>& q, std::array<S, kMaxOrder + 1>& v) {
    const auto& inv = reciprocals();
    std::array<S, kMaxOrder + 1> s{}, c{};
    std::array<Interval, kMaxOrder + 1> fs{}, fc_{};
    q[0] = q0;
    v[0] = v0;
    sin_cos(q0, s[0], c[0]);
    const Interval phase = fc.omega * t0;
    fs[0] = sin(phase);
    fc_[0] = cos(phase);
    for (int k = 0; k < order; ++k) {
        const int n = k + 1;
        q[n] = inv[n] * v[k];
        v[n] = inv[n] * (fc.neg_gl * (fc.linearized ? q[k] : s[k]) + fc.amp * fs[k]);
        if (n == order) break;
        S ss = Interval(n) * q[n] * c[0];
        S cc = Interval(n) * q[n] * s[0];
        for (int j = 1; j < n; ++j) {
            ss = ss + Interval(j) * q[j] * c[n - j];
            cc = cc + Interval(j) * q[j] * s[n - j];
        }
        s[n] = inv[n] * ss;
        c[n] = -(inv[n] * cc);
        fs[n] = inv[n] * (fc.omega * fc_[k]);
        fc_[n] = -(inv[n] * (fc.omega * fs[k]));
    }
}

template <class S>
S horner(const std::array<S, kMaxOrder + 1>& coef, int degree, const Interval& h) {
    S acc = coef[degree];
    for (int k = degree - 1; k >= 0; --k) acc = acc * h + coef[k];
    return acc;
}

Interval power(const Interval& h, int n) {
    Interval r(1.0);
    for (int i = 0; i < n; ++i) r = r * h;
    return r;
}

Box2 picard_image(const FieldConstants& fc, const Box2& b, const Box2& guess, const Interval& forcing,
                  const Interval& h_range) {
    const Interval acc = fc.neg_gl * (fc.linearized ? guess.x : sin(guess.x)) + fc.amp * forcing;
    return {b.x + h_range * guess.y, b.y + h_range * acc};
}

void check_order(int order) {
    if (order < 1 || order > kMaxOrder)
        throw Error(ErrorCode::InvalidParameter, "taylor order must lie in [1, 20]");
}

} // namespace

double VectorFieldSpec::omega_mid() const { return 2.0 * M_PI / period; }

void VectorFieldSpec::validate() const {
    if (!(l.lo() > 0.0)) throw Error(ErrorCode::InvalidParameter, "pendulum length must be positive");
    if (!(period > 0.0) || !std::isfinite(period))
        throw Error(ErrorCode::InvalidParameter, "forcing period must be positive and finite");
}

void IntegrationSettings::validate() const {
    check_order(taylor_order);
    if (!is_power_of_two(steps_per_period) || !is_power_of_two(max_steps_per_period) ||
        steps_per_period > max_steps_per_period || max_steps_per_period > kGrid)
        throw Error(ErrorCode::InvalidParameter,
                    "steps per period must be powers of two with h_min <= h_init <= T");
    if (!(picard_inflation > 1.0)) throw Error(ErrorCode::InvalidParameter, "picard inflation must exceed 1");
    if (max_picard_retries < 0) throw Error(ErrorCode::InvalidParameter, "negative picard retries");
    if (!(v_max > 0.0)) throw Error(ErrorCode::InvalidParameter, "v_max must be positive");
}

PicardReport a_priori_enclosure(const VectorFieldSpec& field, const Box2& b, const Interval& t0,
                                double h, const IntegrationSettings& settings) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "step must be positive");
    const FieldConstants fc(field);
    const Interval h_range(0.0, h);
    const Interval t_range = hull(t0, t0 + Interval(h));
    const Interval forcing = sin(fc.omega * t_range);

    // |sin q| <= 1 bounds the acceleration for every state; this tube is an
    // enclosure of all solutions without any iteration. The linear test field
    // has no such bound and starts from a padded Euler tube instead.
    const Interval q_range = fc.linearized
                                 ? inflate(b.x + h_range * b.y, h * (1.0 + b.y.mag() + b.x.mag()))
                                 : Interval::unit();
    const Interval acc_bound = fc.neg_gl * q_range + fc.amp * forcing;
    Box2 guess;
    guess.y = b.y + h_range * acc_bound;
    guess.x = b.x + h_range * guess.y;

    PicardReport report;
    Box2 image = picard_image(fc, b, guess, forcing, h_range);
    while (!guess.contains(image)) {
        if (report.retries >= settings.max_picard_retries)
            throw Error(ErrorCode::PicardFailure, "a-priori enclosure not verified");
        ++report.retries;
        const Box2 merged = hull(guess, image);
        const double grow = (settings.picard_inflation - 1.0) * 0.5;
        guess = {inflate(merged.x, grow * merged.x.width() + 1e-300),
                 inflate(merged.y, grow * merged.y.width() + 1e-300)};
        image = picard_image(fc, b, guess, forcing, h_range);
    }
    // Each Picard image of a valid enclosure is again valid.
    for (int i = 0; i < 2; ++i) {
        guess = *intersect(guess, image);
        image = picard_image(fc, b, guess, forcing, h_range);
    }
    report.enclosure = *intersect(guess, image);
    return report;
}

namespace {

Box2 remainder_term(const FieldConstants& fc, const Box2& rough, const Interval& t0, double h,
                    int order) {
    std::array<Interval, kMaxOrder + 1> q{}, v{};
    const Interval t_range = hull(t0, t0 + Interval(h));
    coefficients(fc, rough.x, rough.y, t_range, order, q, v);
    const Interval hp = power(Interval(h), order);
    return {q[order] * hp, v[order] * hp};
}

void check_bounds(const Box2& b, double v_max) {
    if (b.y.mag() > v_max)
        throw Error(ErrorCode::BoundsExceeded, "enclosure left the phase-space band |v| <= v_max");
}

} // namespace

FlowStep taylor_step(const VectorFieldSpec& field, const Box2& b, const Interval& t0, double h,
                     int order, const IntegrationSettings& settings) {
    check_order(order);
    const FieldConstants fc(field);
    const Box2 rough = a_priori_enclosure(field, b, t0, h, settings).enclosure;
    std::array<Interval, kMaxOrder + 1> q{}, v{};
    coefficients(fc, b.x, b.y, t0, order - 1, q, v);
    const Interval hh(h);
    const Box2 rem = remainder_term(fc, rough, t0, h, order);
    Box2 tight{horner(q, order - 1, hh) + rem.x, horner(v, order - 1, hh) + rem.y};
    // The exact endpoint set lies in both enclosures.
    if (auto both = intersect(tight, rough)) tight = *both;
    return {rough, tight, hull(t0, t0 + hh)};
}

namespace {

AffineSet lohner_step(const FieldConstants& fc, const VectorFieldSpec& field, const AffineSet& s,
                      const Interval& t0, double h, const IntegrationSettings& settings) {
    const int order = settings.taylor_order;
    const Box2 hull_box = s.hull();
    const Box2 rough = a_priori_enclosure(field, hull_box, t0, h, settings).enclosure;
    check_bounds(rough, settings.v_max);
    const Interval hh(h);

    std::array<Interval, kMaxOrder + 1> q{}, v{};
    coefficients(fc, Interval(s.center[0]), Interval(s.center[1]), t0, order - 1, q, v);
    const Box2 rem = remainder_term(fc, rough, t0, h, order);
    const Box2 center_image{horner(q, order - 1, hh) + rem.x, horner(v, order - 1, hh) + rem.y};

    std::array<Jet, kMaxOrder + 1> jq{}, jv{};
    const Jet q0{hull_box.x, Interval(1.0), Interval(0.0)};
    const Jet v0{hull_box.y, Interval(0.0), Interval(1.0)};
    coefficients(fc, q0, v0, t0, order - 1, jq, jv);
    const Jet pq = horner(jq, order - 1, hh);
    const Jet pv = horner(jv, order - 1, hh);
    // Remainder of the variational equation: D(coefficient_p) on the rough
    // enclosure times a bound on the variational solution V over the step.
    // |Df| <= M := max(1, g/l) in the max-row norm, so |V - I| <= e^{M h} - 1.
    std::array<Jet, kMaxOrder + 1> rq{}, rv{};
    const Interval t_range = hull(t0, t0 + hh);
    coefficients(fc, Jet{rough.x, Interval(1.0), Interval(0.0)},
                 Jet{rough.y, Interval(0.0), Interval(1.0)}, t_range, order, rq, rv);
    const double lip = std::max(1.0, fc.neg_gl.mag());
    const double spread = (exp(Interval(lip) * hh) - Interval(1.0)).hi();
    IMat2 vbound;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            vbound.a[i][j] = Interval(i == j ? 1.0 : 0.0) + Interval(-spread, spread);
    const Interval hp = power(hh, order);
    IMat2 drem;
    drem.a[0][0] = rq[order].dq * hp;
    drem.a[0][1] = rq[order].dv * hp;
    drem.a[1][0] = rv[order].dq * hp;
    drem.a[1][1] = rv[order].dv * hp;
    const IMat2 rem_jac = drem * vbound;

    IMat2 jac;
    jac.a[0][0] = pq.dq + rem_jac.a[0][0];
    jac.a[0][1] = pq.dv + rem_jac.a[0][1];
    jac.a[1][0] = pv.dq + rem_jac.a[1][0];
    jac.a[1][1] = pv.dv + rem_jac.a[1][1];
    return propagate(s, center_image, jac);
}

Box2 box_step(const VectorFieldSpec& field, const Box2& b, const Interval& t0, double h,
              const IntegrationSettings& settings) {
    const FlowStep st = taylor_step(field, b, t0, h, settings.taylor_order, settings);
    check_bounds(st.rough, settings.v_max);
    return st.tight;
}

// Integrates from grid position `from` to `to` (units of T / 2^kGridBits).
template <class State, class Step>
State integrate(const VectorFieldSpec& field, State state, long from, long to,
                const IntegrationSettings& settings, Step step) {
    field.validate();
    settings.validate();
    const double unit = std::ldexp(field.period, -kGridBits);
    const long init_units = kGrid / settings.steps_per_period;
    const long min_units = kGrid / settings.max_steps_per_period;
    long h_units = init_units;
    long pos = from;
    while (pos < to) {
        long cur = std::min(h_units, to - pos);
        // Stay aligned with the step grid.
        while (pos % cur != 0) cur /= 2;
        const Interval t0 = Interval(static_cast<double>(pos)) * Interval(unit);
        const double h = static_cast<double>(cur) * unit;
        try {
            state = step(state, t0, h);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PicardFailure) throw;
            if (settings.fixed_step || cur / 2 < min_units)
                throw Error(ErrorCode::IntegrationFailure, "step size fell below h_min");
            h_units = cur / 2;
            continue;
        }
        pos += cur;
        if (h_units < init_units && pos % (2 * h_units) == 0) h_units *= 2;
    }
    return state;
}

long grid_position(long num, long den) {
    if (!is_power_of_two(den) || den > kGrid || num < 0)
        throw Error(ErrorCode::InvalidParameter, "time fraction must be num / 2^k");
    return num * (kGrid / den);
}

Box2 flow_grid(const VectorFieldSpec& field, const Box2& b, long from, long to,
               const IntegrationSettings& settings) {
    const FieldConstants fc(field);
    if (settings.method == FlowMethod::Box) {
        return integrate(field, b, from, to, settings, [&](const Box2& s, const Interval& t0, double h) {
            return box_step(field, s, t0, h, settings);
        });
    }
    const AffineSet out = integrate(field, affine_from_box(b), from, to, settings,
                                    [&](const AffineSet& s, const Interval& t0, double h) {
                                        return lohner_step(fc, field, s, t0, h, settings);
                                    });
    return out.hull();
}

} // namespace

Box2 flow_time_T(const VectorFieldSpec& field, const Box2& b, const IntegrationSettings& settings) {
    return flow_grid(field, b, 0, kGrid, settings);
}

AffineSet flow_periods(const VectorFieldSpec& field, const AffineSet& start, int periods,
                       const IntegrationSettings& settings) {
    const FieldConstants fc(field);
    AffineSet s = start;
    // The field is T-periodic in time; each period restarts at t = 0.
    for (int p = 0; p < periods; ++p) {
        s = integrate(field, s, 0, kGrid, settings, [&](const AffineSet& st, const Interval& t0, double h) {
            return lohner_step(fc, field, st, t0, h, settings);
        });
    }
    return s;
}

Box2 flow_periods(const VectorFieldSpec& field, const Box2& b, int periods,
                  const IntegrationSettings& settings) {
    if (settings.method == FlowMethod::Box) {
        Box2 cur = b;
        for (int p = 0; p < periods; ++p) cur = flow_time_T(field, cur, settings);
        return cur;
    }
    return flow_periods(field, affine_from_box(b), periods, settings).hull();
}

Box2 flow_fraction(const VectorFieldSpec& field, const Box2& b, long num, long den,
                   const IntegrationSettings& settings) {
    return flow_grid(field, b, 0, grid_position(num, den), settings);
}

Box2 flow_between(const VectorFieldSpec& field, const Box2& b, long start_num, long end_num,
                  long den, const IntegrationSettings& settings) {
    return flow_grid(field, b, grid_position(start_num, den), grid_position(end_num, den), settings);
}

std::array<double, 2> flow_float(const VectorFieldSpec& field, double q, double v, double t0,
                                 double duration, int steps) {
    const double gl = field.g_over_l_mid();
    const double amp = field.amplitude.mid();
    const double w = field.omega_mid();
    const double h = duration / steps;
    auto acc = [&](double qq, double t) {
        return -gl * (field.linearized ? qq : std::sin(qq)) + amp * std::sin(w * t);
    };
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        const double k1q = v, k1v = acc(q, t);
        const double k2q = v + 0.5 * h * k1v, k2v = acc(q + 0.5 * h * k1q, t + 0.5 * h);
        const double k3q = v + 0.5 * h * k2v, k3v = acc(q + 0.5 * h * k2q, t + 0.5 * h);
        const double k4q = v + h * k3v, k4v = acc(q + h * k3q, t + h);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t = t0 + (i + 1) * h;
    }
    return {q, v};
}

} // namespace rotchaos
