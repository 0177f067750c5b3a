#include "rotchaos/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include "rotchaos/parallel.hpp"

namespace rotchaos {

double estimate_rotation(const LiftedAnnulusMap& map, const std::array<double, 2>& point, int n, double y_bound) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "iterate count must be positive");
    std::array<double, 2> z = point;
    for (int i = 0; i < n; ++i) {
        z = map.apply_float(z[0], z[1]);
        if (!(std::abs(z[1]) <= y_bound)) throw Error(ErrorCode::OrbitEscaped, "orbit left |y| <= y_bound");
    }
    return (z[0] - point[0]) / (n * map.circumference().mid());
}

std::array<double, 2> RotationField::point(int ix, int iy) const {
    const double x = (ix + 0.5) / nx * circumference;
    const double y = ny == 1 ? 0.5 * (y_lo + y_hi) : y_lo + (y_hi - y_lo) * iy / (ny - 1);
    return {x, y};
}

RotationField rotation_field(const LiftedAnnulusMap& map, double y_lo, double y_hi, int nx, int ny, int iterates,
                             double y_bound) {
    if (nx < 1 || ny < 1 || iterates < 1 || !(y_hi >= y_lo))
        throw Error(ErrorCode::InvalidParameter, "bad rotation field grid");
    RotationField f;
    f.y_lo = y_lo;
    f.y_hi = y_hi;
    f.nx = nx;
    f.ny = ny;
    f.iterates = iterates;
    f.circumference = map.circumference().mid();
    const std::size_t total = static_cast<std::size_t>(nx) * ny;
    f.values.assign(total, std::numeric_limits<double>::quiet_NaN());
    f.error_bound.assign(total, std::numeric_limits<double>::quiet_NaN());
    parallel_for(total, [&](std::size_t idx) {
        const auto p = f.point(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
        std::array<double, 2> z = p;
        double lo = p[0], hi = p[0];
        for (int i = 0; i < iterates; ++i) {
            z = map.apply_float(z[0], z[1]);
            if (!(std::abs(z[1]) <= y_bound)) return;
            lo = std::min(lo, z[0]);
            hi = std::max(hi, z[0]);
        }
        f.values[idx] = (z[0] - p[0]) / (iterates * f.circumference);
        f.error_bound[idx] = (hi - lo) / (iterates * f.circumference);
    });
    return f;
}

namespace {

using Point = std::array<double, 2>;

double relative_depth(const Point& p, const Box2& b) {
    const double dx = std::min(p[0] - b.x.lo(), b.x.hi() - p[0]) / (0.5 * (b.x.hi() - b.x.lo()));
    const double dy = std::min(p[1] - b.y.lo(), b.y.hi() - p[1]) / (0.5 * (b.y.hi() - b.y.lo()));
    return std::min(dx, dy);
}

struct NearReturn {
    Point p;
    long k;
    double residual;
    double rotation;
};

Box2 box_around(const Point& p, double side) {
    return {Interval(p[0] - 0.5 * side, p[0] + 0.5 * side), Interval(p[1] - 0.5 * side, p[1] + 0.5 * side)};
}

// Float orbits of a sample grid of `b`, stages 0..n.
std::vector<std::vector<Point>> clouds(const LiftedAnnulusMap& map, const Box2& b, int n, int grid) {
    std::vector<std::vector<Point>> out(n + 1);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            Point z{b.x.lo() + (b.x.hi() - b.x.lo()) * i / (grid - 1),
                    b.y.lo() + (b.y.hi() - b.y.lo()) * j / (grid - 1)};
            out[0].push_back(z);
            for (int s = 1; s <= n; ++s) {
                z = map.apply_float(z[0], z[1]);
                out[s].push_back(z);
            }
        }
    return out;
}

double annulus_distance(const std::vector<Point>& a, const std::vector<Point>& b, double period) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a)
        for (const auto& q : b) {
            double dx = std::fmod(std::abs(p[0] - q[0]), period);
            dx = std::min(dx, period - dx);
            best = std::min(best, std::hypot(dx, p[1] - q[1]));
        }
    return best;
}

// Smallest screened margin, in units of L; negative when a condition fails.
double screen(const LiftedAnnulusMap& map, const Box2& u0, long k0, const Box2& u1, long k1, int n, int grid) {
    const double period = map.circumference().mid();
    const auto c0 = clouds(map, u0, n, grid);
    const auto c1 = clouds(map, u1, n, grid);
    double margin = std::numeric_limits<double>::infinity();
    const auto self_return = [&](const std::vector<std::vector<Point>>& c, const Box2& u, long k) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& z : c[1])
            best = std::max(best, relative_depth({z[0] - k * period, z[1]}, u) * 0.5 * (u.x.hi() - u.x.lo()));
        return best / period;
    };
    const auto strip = [&](const std::vector<std::vector<Point>>& c, long k) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int s = 0; s <= n; ++s)
            for (const auto& z : c[s]) {
                lo = std::min(lo, z[0] - s * k * period);
                hi = std::max(hi, z[0] - s * k * period);
            }
        return (period - (hi - lo)) / period;
    };
    margin = std::min({margin, self_return(c0, u0, k0), self_return(c1, u1, k1), strip(c0, k0), strip(c1, k1)});
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) margin = std::min(margin, annulus_distance(c0[i], c1[j], period) / period);
    return margin;
}

} // namespace

std::vector<VisitSeed> find_visit_orbit(const LiftedAnnulusMap& map, const Box2& source, const Box2& target,
                                        int max_m, int samples, const ExplorerParams& params) {
    if (samples < 1) throw Error(ErrorCode::InvalidParameter, "samples must be positive");
    const double period = map.circumference().mid();
    std::vector<Point> starts;
    const int grid = std::max(1, static_cast<int>(std::sqrt(samples / 2.0)));
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            starts.push_back({source.x.lo() + (i + 0.5) / grid * (source.x.hi() - source.x.lo()),
                              source.y.lo() + (j + 0.5) / grid * (source.y.hi() - source.y.lo())});
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> ux(source.x.lo(), source.x.hi()), uy(source.y.lo(), source.y.hi());
    while (static_cast<int>(starts.size()) < samples) starts.push_back({ux(rng), uy(rng)});

    std::vector<std::optional<VisitSeed>> hits(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        if (!(relative_depth(starts[i], source) > 0.0)) return;
        Point z = starts[i];
        for (int m = 1; m <= max_m; ++m) {
            z = map.apply_float(z[0], z[1]);
            if (!std::isfinite(z[0]) || !std::isfinite(z[1])) return;
            const double j = std::floor((z[0] - target.x.lo()) / period);
            const double d = relative_depth({z[0] - j * period, z[1]}, target);
            if (d >= params.clearance) {
                hits[i] = VisitSeed{starts[i], m, d};
                return;
            }
        }
    });
    std::vector<VisitSeed> out;
    for (const auto& h : hits)
        if (h) out.push_back(*h);
    std::stable_sort(out.begin(), out.end(),
                     [](const VisitSeed& a, const VisitSeed& b) { return a.clearance > b.clearance; });
    return out;
}

std::vector<CandidatePair> propose_candidates(const LiftedAnnulusMap& map, const RotationField& field, long rho_min,
                                              int n, const ExplorerParams& params) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "n must be at least 1");
    const double period = map.circumference().mid();
    const double eps = params.eps * period;
    const double side = params.box_scale * period;

    // Near-returning grid points, grouped by translate index.
    std::vector<std::optional<NearReturn>> found(field.values.size());
    parallel_for(field.values.size(), [&](std::size_t idx) {
        if (std::isnan(field.values[idx])) return;
        const auto p = field.point(static_cast<int>(idx % field.nx), static_cast<int>(idx / field.nx));
        const auto z = map.apply_float(p[0], p[1]);
        const long k = std::lround((z[0] - p[0]) / period);
        const double r = std::hypot(z[0] - p[0] - k * period, z[1] - p[1]);
        if (r < eps) found[idx] = NearReturn{p, k, r, field.values[idx]};
    });
    std::map<long, std::vector<NearReturn>> by_shift;
    for (const auto& f : found)
        if (f) by_shift[f->k].push_back(*f);

    // Best residual first, suppressing points within one box of a kept one.
    for (auto& [k, list] : by_shift) {
        std::stable_sort(list.begin(), list.end(),
                         [](const NearReturn& a, const NearReturn& b) { return a.residual < b.residual; });
        std::vector<NearReturn> kept;
        for (const auto& c : list) {
            bool close = false;
            for (const auto& o : kept) {
                double dx = std::fmod(std::abs(c.p[0] - o.p[0]), period);
                dx = std::min(dx, period - dx);
                if (dx < side && std::abs(c.p[1] - o.p[1]) < side) close = true;
            }
            if (!close) kept.push_back(c);
            if (static_cast<int>(kept.size()) >= params.max_per_shift) break;
        }
        list = std::move(kept);
    }

    std::vector<CandidatePair> pairs;
    for (const auto& [ka, la] : by_shift)
        for (const auto& [kb, lb] : by_shift) {
            if (kb - ka < rho_min || kb == ka) continue;
            for (const auto& a : la)
                for (const auto& b : lb) {
                    CandidatePair c;
                    c.u0 = box_around(a.p, side);
                    c.u1 = box_around(b.p, side);
                    c.n = n;
                    c.k0 = ka;
                    c.k1 = kb;
                    c.predicted_rho = std::lround(b.rotation - a.rotation);
                    c.robustness = screen(map, c.u0, ka, c.u1, kb, n, params.screen_grid);
                    if (c.robustness > 0.0) pairs.push_back(c);
                }
        }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const CandidatePair& a, const CandidatePair& b) { return a.robustness > b.robustness; });
    if (static_cast<int>(pairs.size()) > params.max_pairs) pairs.resize(params.max_pairs);
    for (auto& c : pairs) {
        c.seeds_01 = find_visit_orbit(map, c.u0, c.u1, params.max_m, params.visit_samples, params);
        c.seeds_10 = find_visit_orbit(map, c.u1, c.u0, params.max_m, params.visit_samples, params);
        c.visits_found = !c.seeds_01.empty() && !c.seeds_10.empty();
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const CandidatePair& a, const CandidatePair& b) {
        return a.visits_found != b.visits_found ? a.visits_found : a.robustness > b.robustness;
    });
    if (pairs.empty()) throw Error(ErrorCode::NoCandidates, "no candidate pair survived the float screen");
    return pairs;
}

} // namespace rotchaos
