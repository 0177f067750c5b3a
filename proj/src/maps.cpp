#include "rotchaos/maps.hpp"

#include <cmath>
#include <optional>

#include "rotchaos/parallel.hpp"

namespace rotchaos {

std::string to_string(MapKind kind) {
    switch (kind) {
    case MapKind::StandardMap: return "standard";
    case MapKind::RigidTwist: return "rigid_twist";
    case MapKind::Pendulum: return "pendulum";
    }
    return "unknown";
}

LiftedAnnulusMap::LiftedAnnulusMap(Backend backend, long lift_offset)
    : backend_(std::move(backend)), lift_offset_(lift_offset),
      circumference_(std::holds_alternative<PendulumMap>(backend_) ? Interval::two_pi() : Interval(1.0)) {
    if (const auto* p = std::get_if<PendulumMap>(&backend_)) {
        p->field.validate();
        p->integration.validate();
    }
}

MapKind LiftedAnnulusMap::kind() const {
    switch (backend_.index()) {
    case 0: return MapKind::StandardMap;
    case 1: return MapKind::RigidTwist;
    default: return MapKind::Pendulum;
    }
}

LiftedAnnulusMap LiftedAnnulusMap::with_lift_offset(long offset) const {
    return LiftedAnnulusMap(backend_, offset);
}

namespace {

IMat2 jacobian(const StandardMap& m, const Box2& b) {
    const Interval kc = m.k * cos(Interval::two_pi() * b.x);
    IMat2 j;
    j.a[0][0] = Interval(1.0) + kc;
    j.a[0][1] = Interval(1.0);
    j.a[1][0] = kc;
    j.a[1][1] = Interval(1.0);
    return j;
}

IMat2 jacobian(const RigidTwist& m, const Box2&) {
    IMat2 j = IMat2::identity();
    j.a[0][1] = m.tau;
    return j;
}

Box2 natural(const StandardMap& m, const Box2& b) {
    const Interval y = b.y + m.k / Interval::two_pi() * sin(Interval::two_pi() * b.x);
    return {b.x + y, y};
}

Box2 natural(const RigidTwist& m, const Box2& b) { return {b.x + m.alpha + m.tau * b.y, b.y}; }

template <class M>
Box2 explicit_image(const M& m, const Box2& b) {
    const Box2 direct = natural(m, b);
    if (b.x.is_point() && b.y.is_point()) return direct;
    const auto c = b.midpoint();
    const Box2 at_center = natural(m, Box2{Interval(c[0]), Interval(c[1])});
    const IVec2 d = jacobian(m, b) * IVec2{b.x - Interval(c[0]), b.y - Interval(c[1])};
    const Box2 mean_value{at_center.x + d[0], at_center.y + d[1]};
    return *intersect(direct, mean_value);
}

template <class M>
AffineSet explicit_step(const M& m, const AffineSet& s) {
    const Box2 center{Interval(s.center[0]), Interval(s.center[1])};
    return propagate(s, natural(m, center), jacobian(m, s.hull()));
}

} // namespace

Box2 LiftedAnnulusMap::step_box(const Box2& b) const {
    return std::visit(
        [&](const auto& m) -> Box2 {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PendulumMap>)
                return flow_periods(m.field, b, 1, m.integration);
            else
                return explicit_image(m, b);
        },
        backend_);
}

AffineSet LiftedAnnulusMap::step_set(const AffineSet& s) const {
    return std::visit(
        [&](const auto& m) -> AffineSet {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PendulumMap>)
                return flow_periods(m.field, s, 1, m.integration);
            else
                return explicit_step(m, s);
        },
        backend_);
}

Box2 LiftedAnnulusMap::image_box(const Box2& b, int power) const {
    if (power < 0) throw Error(ErrorCode::InvalidParameter, "negative power");
    if (power > 1) return image_set(affine_from_box(b), power).hull();
    const Box2 out = power == 1 ? step_box(b) : b;
    if (lift_offset_ == 0 || power == 0) return out;
    return translate_x(out, lift_offset_, circumference_);
}

AffineSet LiftedAnnulusMap::image_set(const AffineSet& s, int power) const {
    if (power < 0) throw Error(ErrorCode::InvalidParameter, "negative power");
    AffineSet cur = s;
    for (int i = 0; i < power; ++i) cur = step_set(cur);
    if (lift_offset_ != 0 && power > 0) {
        const Interval dx = Interval(static_cast<double>(power * lift_offset_)) * circumference_;
        // Fold the translation into the error terms, keeping the center a point.
        const Interval moved = Interval(cur.center[0]) + dx;
        cur.center[0] = moved.mid();
        const IVec2 residual{moved - Interval(cur.center[0]), Interval(0.0)};
        const IVec2 back = inverse_enclosure(cur.frame) * residual;
        cur.coeffs = {cur.coeffs[0] + back[0], cur.coeffs[1] + back[1]};
    }
    return cur;
}

LiftedBox LiftedAnnulusMap::image(const LiftedBox& b, int power) const {
    const LiftedBox source = canonicalize(b.planar, circumference_);
    Box2 planar = source.planar;
    if (power == 1) {
        planar = step_box(source.planar);
    } else if (power > 1) {
        AffineSet s = affine_from_box(source.planar);
        for (int i = 0; i < power; ++i) s = step_set(s);
        planar = s.hull();
    }
    LiftedBox out = canonicalize(planar, circumference_);
    out.shift += b.shift + source.shift + power * lift_offset_;
    return out;
}

std::array<double, 2> LiftedAnnulusMap::apply_float(double x, double y) const {
    std::array<double, 2> r = std::visit(
        [&](const auto& m) -> std::array<double, 2> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, StandardMap>) {
                const double yn = y + m.k.mid() / (2.0 * M_PI) * std::sin(2.0 * M_PI * x);
                return {x + yn, yn};
            } else if constexpr (std::is_same_v<M, RigidTwist>) {
                return {x + m.alpha.mid() + m.tau.mid() * y, y};
            } else {
                return flow_float(m.field, x, y, 0.0, m.field.period, m.float_steps);
            }
        },
        backend_);
    r[0] += static_cast<double>(lift_offset_) * circumference_.mid();
    return r;
}

std::array<double, 2> LiftedAnnulusMap::iterate_float(double x, double y, int n) const {
    std::array<double, 2> p{x, y};
    for (int i = 0; i < n; ++i) p = apply_float(p[0], p[1]);
    return p;
}

LiftedAnnulusMap make_standard_map(const Interval& k, long lift_offset) {
    return LiftedAnnulusMap(StandardMap{k}, lift_offset);
}

LiftedAnnulusMap make_rigid_twist(const Interval& alpha, const Interval& tau, long lift_offset) {
    return LiftedAnnulusMap(RigidTwist{alpha, tau}, lift_offset);
}

LiftedAnnulusMap make_pendulum_period(const Interval& g, const Interval& l, const Interval& amplitude,
                                      double period, const IntegrationSettings& integration) {
    if (!(l.lo() > 0.0)) throw Error(ErrorCode::InvalidParameter, "pendulum length must be positive");
    if (!(period > 0.0) || !std::isfinite(period))
        throw Error(ErrorCode::InvalidParameter, "forcing period must be positive");
    PendulumMap p;
    p.field.g = g;
    p.field.l = l;
    p.field.amplitude = amplitude;
    p.field.period = period;
    p.integration = integration;
    return LiftedAnnulusMap(p);
}

LiftedAnnulusMap make_pendulum(const Interval& g, const Interval& l, const Interval& amplitude,
                               double omega, const IntegrationSettings& integration) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw Error(ErrorCode::InvalidParameter, "forcing frequency must be positive");
    return make_pendulum_period(g, l, amplitude, 2.0 * M_PI / omega, integration);
}

void SubdivisionSettings::validate() const {
    if (!(target_width > 0.0)) throw Error(ErrorCode::InvalidParameter, "target_width must be positive");
    if (max_boxes_per_stage == 0) throw Error(ErrorCode::InvalidParameter, "max_boxes_per_stage must be positive");
    if (max_depth < 0) throw Error(ErrorCode::InvalidParameter, "max_depth must be nonnegative");
}

namespace {

struct Item {
    int parent;
    Box2 tile;
    int depth;
};

bool is_enclosure_failure(ErrorCode c) {
    return c == ErrorCode::IntegrationFailure || c == ErrorCode::BoundsExceeded ||
           c == ErrorCode::PicardFailure || c == ErrorCode::Overflow;
}

EnclosureSet next_stage(const LiftedAnnulusMap& map, const EnclosureSet& prev,
                        const SubdivisionSettings& settings, EvalCounters& counters) {
    EnclosureSet out;
    out.stage = prev.stage + 1;
    std::vector<Item> level;
    for (std::size_t i = 0; i < prev.members.size(); ++i)
        level.push_back({static_cast<int>(i), prev.members[i].image.planar, 0});

    std::size_t committed = level.size();
    while (!level.empty()) {
        std::vector<std::optional<LiftedBox>> images(level.size());
        std::vector<std::optional<Error>> errors(level.size());
        parallel_for(level.size(), [&](std::size_t i) {
            const long shift = prev.members[level[i].parent].image.shift;
            try {
                images[i] = map.image(LiftedBox{level[i].tile, shift}, 1);
            } catch (const Error& e) {
                errors[i] = e;
            }
        });
        counters.evaluations += level.size();

        std::vector<Item> next;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const Item& it = level[i];
            if (errors[i] && !is_enclosure_failure(errors[i]->code())) throw *errors[i];
            const bool failed = !images[i].has_value();
            if (failed) ++counters.failures;
            const bool wants_split = failed || images[i]->planar.width() > settings.target_width;
            const bool budget_left =
                settings.total_budget == 0 || counters.evaluations + next.size() + 2 <= settings.total_budget;
            const bool can_split = it.depth < settings.max_depth &&
                                   committed + 1 <= settings.max_boxes_per_stage && budget_left &&
                                   it.tile.width() > 0.0;
            if (wants_split && can_split) {
                const Axis axis = it.tile.x.width() >= it.tile.y.width() ? Axis::X : Axis::Y;
                const auto [a, b] = split(it.tile, axis);
                next.push_back({it.parent, a, it.depth + 1});
                next.push_back({it.parent, b, it.depth + 1});
                ++committed;
                continue;
            }
            if (failed)
                throw Error(errors[i]->code(),
                            "no enclosure for a sub-box at the subdivision limit: " + std::string(errors[i]->what()));
            if (wants_split) out.budget_exhausted = true;
            out.members.push_back({it.parent, it.tile, *images[i]});
        }
        level = std::move(next);
    }
    if (prev.budget_exhausted) out.budget_exhausted = true;
    return out;
}

} // namespace

EnclosureChain eval_chain(const LiftedAnnulusMap& map, const LiftedBox& source, int n,
                          const SubdivisionSettings& settings, EvalCounters* counters) {
    settings.validate();
    if (n < 0) throw Error(ErrorCode::InvalidParameter, "negative chain length");
    EvalCounters local;
    EvalCounters& c = counters ? *counters : local;
    EnclosureChain chain;
    EnclosureSet first;
    first.stage = 0;
    const LiftedBox start = canonicalize(source.planar, map.circumference());
    first.members.push_back({-1, source.planar, {start.planar, start.shift + source.shift}});
    chain.push_back(std::move(first));
    for (int i = 1; i <= n; ++i) chain.push_back(next_stage(map, chain.back(), settings, c));
    return chain;
}

EnclosureSet eval_lift(const LiftedAnnulusMap& map, const LiftedBox& source, int power,
                       const SubdivisionSettings& settings, EvalCounters* counters) {
    EnclosureChain chain = eval_chain(map, source, power, settings, counters);
    if (chain.back().budget_exhausted)
        throw Error(ErrorCode::BudgetExhausted, "image enclosure too wide at the sub-box cap");
    return std::move(chain.back());
}

} // namespace rotchaos
