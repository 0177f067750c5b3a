#pragma once

// Float-precision reconnaissance. Nothing here is rigorous; its output only
// seeds the certifier.

#include <array>
#include <cstdint>
#include <vector>

#include "rotchaos/interval.hpp"
#include "rotchaos/maps.hpp"

namespace rotchaos {

// (x_N - x_0) / (N L): mean lifted displacement per iterate in circumference
// units. Throws OrbitEscaped when |y| exceeds y_bound.
double estimate_rotation(const LiftedAnnulusMap& map, const std::array<double, 2>& point, int n,
                         double y_bound = 1e6);

struct RotationField {
    double y_lo = 0.0, y_hi = 1.0;
    int nx = 0, ny = 0;
    int iterates = 0;
    double circumference = 1.0;
    // Row-major by y then x; NaN where the orbit escaped.
    std::vector<double> values;
    // Per-point error bound (max lifted displacement span) / (N L).
    std::vector<double> error_bound;

    std::array<double, 2> point(int ix, int iy) const;
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

RotationField rotation_field(const LiftedAnnulusMap& map, double y_lo, double y_hi, int nx, int ny, int iterates,
                             double y_bound = 1e6);

struct ExplorerParams {
    // Fractions of the circumference.
    double eps = 0.05;
    double box_scale = 0.06;
    int max_m = 60;
    int visit_samples = 2000;
    // Minimum relative depth of a visit landing inside the target.
    double clearance = 0.1;
    // Grid per axis for the float pre-screen of each box.
    int screen_grid = 12;
    int max_per_shift = 4;
    int max_pairs = 8;
    std::uint64_t seed = 1;
};

struct VisitSeed {
    std::array<double, 2> point;
    int m = 0;
    double clearance = 0.0;
};

struct CandidatePair {
    Box2 u0, u1;
    int n = 1;
    long k0 = 0, k1 = 0;
    long predicted_rho = 0;
    std::vector<VisitSeed> seeds_01, seeds_10;
    // Smallest float margin among the screened conditions, in units of L.
    double robustness = 0.0;
    bool visits_found = false;
};

// Throws NoCandidates when nothing survives the screen.
std::vector<CandidatePair> propose_candidates(const LiftedAnnulusMap& map, const RotationField& field, long rho_min,
                                              int n, const ExplorerParams& params = {});

std::vector<VisitSeed> find_visit_orbit(const LiftedAnnulusMap& map, const Box2& source, const Box2& target,
                                        int max_m, int samples, const ExplorerParams& params = {});

} // namespace rotchaos
