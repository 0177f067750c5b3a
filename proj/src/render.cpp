#include "rotchaos/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rotchaos {

View view_from_string(const std::string& s) {
    if (s == "annulus") return View::Annulus;
    if (s == "cover") return View::Cover;
    throw Error(ErrorCode::ConfigError, "view: expected annulus or cover, got '" + s + "'");
}

namespace {

using Pt = std::array<double, 2>;

struct Shape {
    std::vector<Pt> poly;
    int family = 0;
    int stage = 0;
    bool outline = false;
};

struct Family {
    std::string name;
    Box2 source;
    EnclosureChain chain;
    std::vector<Pt> polygon;  // non-empty for Markov rectangles
};

const char* kColors[] = {"#1f77b4", "#e377c2", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#bcbd22"};

std::vector<Pt> rect_poly(const Box2& b) {
    return {{b.x.lo(), b.y.lo()}, {b.x.hi(), b.y.lo()}, {b.x.hi(), b.y.hi()}, {b.x.lo(), b.y.hi()}};
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::vector<Family> families_of(const Json& input, double& circumference) {
    std::vector<Family> out;
    const bool is_doc = input.contains("kind");
    const RunConfig config = parse_config(is_doc ? input.at("config") : input);
    circumference = config.map.kind == MapKind::Pendulum ? 2.0 * M_PI : 1.0;
    if (!is_doc) {
        for (const auto& [name, b] : config.boxes) out.push_back({name, b, {}, {}});
        return out;
    }
    const std::string kind = input.at("kind").get<std::string>();
    const Json& ev = input.at("evidence");
    if (kind == "dpd" || kind == "chaos") {
        const DpdCertificate d = kind == "dpd" ? dpd_from_json(ev) : dpd_from_json(ev.at("dpd"), "evidence.dpd");
        out.push_back({"U0", d.u0, d.chain0, {}});
        out.push_back({"U1", d.u1, d.chain1, {}});
    } else if (kind == "chain") {
        const ChainCertificate c = chain_certificate_from_json(ev);
        for (std::size_t i = 0; i < c.disks.size(); ++i)
            out.push_back({"V" + std::to_string(i), c.disks[i], i < c.orbits.size() ? c.orbits[i] : EnclosureChain{}, {}});
    } else if (kind == "markov") {
        const MarkovCertificate m = markov_from_json(ev);
        Family f{"R", m.rect, {}, {}};
        for (const auto& u : rect_poly(m.rect)) {
            const auto& a = m.frame.axes.a;
            f.polygon.push_back({m.frame.center[0] + a[0][0] * u[0] + a[0][1] * u[1],
                                 m.frame.center[1] + a[1][0] * u[0] + a[1][1] * u[1]});
        }
        out.push_back(f);
    } else {
        for (const auto& [name, b] : config.boxes) out.push_back({name, b, {}, {}});
    }
    return out;
}

} // namespace

std::string render_svg(const Json& input, View view) {
    double L = 1.0;
    const std::vector<Family> fams = families_of(input, L);
    const Interval period = L == 1.0 ? Interval(1.0) : Interval::two_pi();

    std::vector<Shape> shapes;
    int max_stage = 0;
    for (std::size_t f = 0; f < fams.size(); ++f) {
        const auto& fam = fams[f];
        std::vector<std::pair<int, Box2>> boxes;
        if (fam.chain.empty()) boxes.push_back({0, fam.source});
        for (const auto& stage : fam.chain) {
            max_stage = std::max(max_stage, stage.stage);
            for (const auto& m : stage.members) boxes.push_back({stage.stage, absolute(m.image, period)});
        }
        for (const auto& [stage, b] : boxes) {
            if (!fam.polygon.empty() && stage == 0) {
                shapes.push_back({fam.polygon, static_cast<int>(f), 0, false});
                continue;
            }
            if (view == View::Cover) {
                shapes.push_back({rect_poly(b), static_cast<int>(f), stage, false});
                continue;
            }
            const LiftedBox c = canonicalize(b, period);
            // Copies that reach into [0, L) after folding.
            for (long j = -1; j <= 1; ++j) {
                const Box2 t{Interval(c.planar.x.lo() + j * L, c.planar.x.hi() + j * L), c.planar.y};
                if (t.x.hi() <= 0.0 || t.x.lo() >= L) continue;
                shapes.push_back({rect_poly(t), static_cast<int>(f), stage, false});
            }
        }
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : shapes)
        for (const auto& p : s.poly) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
    if (view == View::Annulus) {
        xmin = std::min(xmin, 0.0);
        xmax = std::max(xmax, L);
    } else {
        // Translates of the source boxes across the drawn x-range.
        for (std::size_t f = 0; f < fams.size(); ++f) {
            if (!fams[f].polygon.empty()) continue;
            const Box2& s = fams[f].source;
            const long lo = static_cast<long>(std::floor((xmin - s.x.hi()) / L));
            const long hi = static_cast<long>(std::ceil((xmax - s.x.lo()) / L));
            for (long j = lo; j <= hi; ++j) {
                if (j == 0) continue;
                const Box2 t{Interval(s.x.lo() + j * L, s.x.hi() + j * L), s.y};
                if (t.x.hi() < xmin || t.x.lo() > xmax) continue;
                shapes.push_back({rect_poly(t), static_cast<int>(f), 0, true});
            }
        }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = L, ymin = -1.0, ymax = 1.0;
    const double pad = 0.05 * std::max({xmax - xmin, ymax - ymin, 1e-9});
    xmin -= pad, xmax += pad, ymin -= pad, ymax += pad;

    const double width_px = 900.0;
    const double scale = width_px / (xmax - xmin);
    const double height_px = std::max(120.0, (ymax - ymin) * scale);
    const double sy = height_px / (ymax - ymin);
    const double legend_h = 24.0 * static_cast<double>(fams.size()) + 16.0;
    const auto X = [&](double x) { return num((x - xmin) * scale); };
    const auto Y = [&](double y) { return num((ymax - y) * sy); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_px) << "\" height=\""
        << num(height_px + legend_h) << "\" viewBox=\"0 0 " << num(width_px) << " " << num(height_px + legend_h)
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << num(width_px) << "\" height=\"" << num(height_px + legend_h)
        << "\" fill=\"white\"/>\n";
    if (view == View::Annulus) {
        svg << "<defs><clipPath id=\"domain\"><rect x=\"" << X(0.0) << "\" y=\"0\" width=\"" << num(L * scale)
            << "\" height=\"" << num(height_px) << "\"/></clipPath></defs>\n";
    }
    svg << "<g stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 3\">\n";
    for (long k = static_cast<long>(std::ceil(xmin / L)); k * L <= xmax; ++k)
        svg << "<line x1=\"" << X(k * L) << "\" y1=\"0\" x2=\"" << X(k * L) << "\" y2=\"" << num(height_px) << "\"/>\n";
    svg << "</g>\n";
    svg << "<g" << (view == View::Annulus ? " clip-path=\"url(#domain)\"" : "") << ">\n";
    // Later stages first, so the boxes themselves stay on top.
    std::vector<std::size_t> order(shapes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return shapes[a].stage > shapes[b].stage;
    });
    for (std::size_t i : order) {
        const Shape& s = shapes[i];
        const char* color = kColors[s.family % 8];
        std::string points;
        for (const auto& p : s.poly) points += X(p[0]) + "," + Y(p[1]) + " ";
        points.pop_back();
        if (s.outline) {
            svg << "<polygon points=\"" << points << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1\" stroke-dasharray=\"3 2\"/>\n";
        } else if (s.stage == 0) {
            svg << "<polygon points=\"" << points << "\" fill=\"" << color << "\" fill-opacity=\"0.9\" stroke=\"black\""
                << " stroke-width=\"1\"/>\n";
        } else {
            const double opacity = 0.55 / std::sqrt(static_cast<double>(s.stage));
            svg << "<polygon points=\"" << points << "\" fill=\"" << color << "\" fill-opacity=\"" << num(opacity)
                << "\" stroke=\"none\"/>\n";
        }
    }
    svg << "</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
    for (std::size_t f = 0; f < fams.size(); ++f) {
        const double y = height_px + 8.0 + 24.0 * static_cast<double>(f);
        svg << "<rect x=\"10\" y=\"" << num(y) << "\" width=\"14\" height=\"14\" fill=\"" << kColors[f % 8] << "\"/>\n";
        svg << "<text x=\"32\" y=\"" << num(y + 12.0) << "\">" << fams[f].name
            << (max_stage > 0 ? " and its iterates 1.." + std::to_string(max_stage) : std::string()) << "</text>\n";
    }
    svg << "<text x=\"" << num(width_px - 10.0) << "\" y=\"" << num(height_px + 20.0) << "\" text-anchor=\"end\">"
        << (view == View::Annulus ? "annulus, L = " : "universal cover, L = ") << (L == 1.0 ? "1" : "2&#960;")
        << "</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace rotchaos
