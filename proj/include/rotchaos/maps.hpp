#pragma once

// Lifted annulus maps F with F(x + L, y) = F(x, y) + (L, 0), and adaptive
// image enclosures built from them.

#include <array>
#include <cstddef>
#include <string>
#include <variant>

#include "rotchaos/affine_set.hpp"
#include "rotchaos/annulus.hpp"
#include "rotchaos/interval.hpp"
#include "rotchaos/ode.hpp"

namespace rotchaos {

// x' = x + y', y' = y + K/(2 pi) sin(2 pi x), on L = 1.
struct StandardMap {
    Interval k;
};

// x' = x + alpha + tau y, y' = y, on L = 1.
struct RigidTwist {
    Interval alpha;
    Interval tau;
};

// Time-T map of the forced pendulum, on L = 2 pi.
struct PendulumMap {
    VectorFieldSpec field;
    IntegrationSettings integration;
    // RK4 steps per period for float orbits.
    int float_steps = 256;
};

enum class MapKind { StandardMap, RigidTwist, Pendulum };

std::string to_string(MapKind kind);

class LiftedAnnulusMap {
  public:
    using Backend = std::variant<StandardMap, RigidTwist, PendulumMap>;

    explicit LiftedAnnulusMap(Backend backend, long lift_offset = 0);

    const Backend& backend() const { return backend_; }
    MapKind kind() const;
    const Interval& circumference() const { return circumference_; }
    long lift_offset() const { return lift_offset_; }
    LiftedAnnulusMap with_lift_offset(long offset) const;
    bool uses_ode() const { return kind() == MapKind::Pendulum; }

    // Enclosure of F^power(b), b and result in absolute planar coordinates.
    Box2 image_box(const Box2& b, int power = 1) const;
    // Parallelepiped propagation of F^power; keeps wrapping low over many
    // iterates.
    AffineSet image_set(const AffineSet& s, int power) const;
    // Image with exact shift bookkeeping. The input is reduced to its
    // canonical representative first, so image(b) and image(b shifted by m)
    // differ exactly by m in the shift.
    LiftedBox image(const LiftedBox& b, int power = 1) const;

    // Non-rigorous lifted orbit.
    std::array<double, 2> apply_float(double x, double y) const;
    std::array<double, 2> iterate_float(double x, double y, int n) const;

  private:
    Box2 step_box(const Box2& b) const;
    AffineSet step_set(const AffineSet& s) const;

    Backend backend_;
    long lift_offset_;
    Interval circumference_;
};

LiftedAnnulusMap make_standard_map(const Interval& k, long lift_offset = 0);
LiftedAnnulusMap make_rigid_twist(const Interval& alpha, const Interval& tau, long lift_offset = 0);
// Throws InvalidParameter unless l > 0 and omega > 0. The forcing period is
// 2 pi / omega rounded to the nearest double.
LiftedAnnulusMap make_pendulum(const Interval& g, const Interval& l, const Interval& amplitude,
                               double omega, const IntegrationSettings& integration = {});
LiftedAnnulusMap make_pendulum_period(const Interval& g, const Interval& l,
                                      const Interval& amplitude, double period,
                                      const IntegrationSettings& integration = {});

struct SubdivisionSettings {
    // Sub-boxes are split until their image enclosure is at most this wide.
    double target_width = 0.05;
    std::size_t max_boxes_per_stage = std::size_t{1} << 14;
    int max_depth = 40;
    // Cap on image evaluations per call; 0 means unlimited.
    std::size_t total_budget = 0;

    void validate() const;
};

struct EvalCounters {
    std::size_t evaluations = 0;
    std::size_t failures = 0;
};

// Stages 0..n of the chain of images of `source` under F.
EnclosureChain eval_chain(const LiftedAnnulusMap& map, const LiftedBox& source, int n,
                          const SubdivisionSettings& settings, EvalCounters* counters = nullptr);

// Covering of F^power(source). Throws BudgetExhausted when the stage cap is
// hit before every image reaches the target width, or when the total budget
// runs out.
EnclosureSet eval_lift(const LiftedAnnulusMap& map, const LiftedBox& source, int power,
                       const SubdivisionSettings& settings, EvalCounters* counters = nullptr);

} // namespace rotchaos
