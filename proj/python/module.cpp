// Python bindings. Documents and configurations cross the boundary as JSON
// text; the package wrapper converts them to and from dicts.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rotchaos/certify.hpp"
#include "rotchaos/explorer.hpp"
#include "rotchaos/io.hpp"
#include "rotchaos/render.hpp"
#include "rotchaos/replay.hpp"

namespace py = pybind11;
using namespace rotchaos;

namespace {

RunConfig config_of(const std::string& text, std::size_t budget) {
    RunConfig c = parse_config(Json::parse(text));
    if (budget > 0) c.certify.subdivision.total_budget = budget;
    return c;
}

// Same documents as the command line tool writes with --out.
std::string certify(const std::string& kind, const std::string& config, std::size_t budget) {
    const RunConfig c = config_of(config, budget);
    const LiftedAnnulusMap map = build_map(c);
    py::gil_scoped_release unlocked;
    if (kind == "dpd") {
        const DpdCertificate d = certify_ndpd(map, c.box("U0"), c.box("U1"), c.n, c.certify);
        return make_document(kind, c, d.verdict, to_json(d), {}).dump();
    }
    if (kind == "visit") {
        std::vector<VisitLeg> legs;
        legs.push_back({"U0", "U1", certify_visit(map, c.box("U0"), c.box("U1"), c.certify.visit_max_m, c.certify)});
        legs.push_back({"U1", "U0", certify_visit(map, c.box("U1"), c.box("U0"), c.certify.visit_max_m, c.certify)});
        return make_document(kind, c, document_verdict(legs), to_json(legs), {}).dump();
    }
    if (kind == "chaos") {
        const ChaosCertificate cc = certify_chaos(map, c.box("U0"), c.box("U1"), c.n, c.declared, c.certify);
        return make_document(kind, c, document_verdict(cc), to_json(cc), {}).dump();
    }
    if (kind == "chain") {
        if (!c.chain) throw Error(ErrorCode::ConfigError, "chain: missing");
        std::vector<Box2> disks;
        for (const auto& n : c.chain->disks) disks.push_back(c.box(n));
        const ChainCertificate cc = certify_chain(map, c.chain->q, c.chain->p, disks, c.chain->exponents, c.certify);
        return make_document(kind, c, cc.verdict, to_json(cc), {}).dump();
    }
    if (kind == "markov") {
        if (!c.markov) throw Error(ErrorCode::ConfigError, "markov: missing");
        const MarkovCertificate m =
            certify_markov(map, c.box(c.markov->rect), c.markov->n_iter, c.markov->shifts, c.certify, c.markov->frame);
        return make_document(kind, c, document_verdict(m), to_json(m), {}).dump();
    }
    throw py::value_error("unknown certificate kind: " + kind);
}

std::string explore(const std::string& config) {
    const RunConfig c = config_of(config, 0);
    const LiftedAnnulusMap map = build_map(c);
    const auto& e = c.explore;
    Json out = Json::array();
    py::gil_scoped_release unlocked;
    const RotationField field = rotation_field(map, e.y_lo, e.y_hi, e.nx, e.ny, e.iterates, e.y_bound);
    for (const auto& p : propose_candidates(map, field, e.rho_min, c.n, e.params)) out.push_back(to_json(p));
    return out.dump();
}

py::dict replay_document(const std::string& doc, bool deep) {
    const Json j = Json::parse(doc);
    ReplayReport r;
    {
        py::gil_scoped_release unlocked;
        r = replay(j, deep);
    }
    py::dict d;
    d["claimed"] = to_string(r.claimed);
    d["agrees"] = r.agrees;
    d["enclosures_recomputed"] = r.enclosures_recomputed;
    d["mismatches"] = r.mismatches;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rigorous certificates of rotational chaos for annulus maps.";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object instance = py::handle(error.ptr())(e.what());
            instance.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), instance.ptr());
        } catch (const nlohmann::json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Interval>(m, "Interval")
        .def(py::init<double>())
        .def(py::init<double, double>())
        .def_property_readonly("lo", &Interval::lo)
        .def_property_readonly("hi", &Interval::hi)
        .def("width", &Interval::width)
        .def("contains", py::overload_cast<double>(&Interval::contains, py::const_))
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def("__repr__", [](const Interval& v) { return "Interval(" + hex(v.lo()) + ", " + hex(v.hi()) + ")"; });
    m.def("sqr", [](const Interval& v) { return rotchaos::sqr(v); });
    m.def("sin", [](const Interval& v) { return rotchaos::sin(v); });
    m.def("cos", [](const Interval& v) { return rotchaos::cos(v); });
    m.def("exp", [](const Interval& v) { return rotchaos::exp(v); });

    m.def("hex", &hex, "Exact hexadecimal form of a double.");
    m.def("certify", &certify, py::arg("kind"), py::arg("config"), py::arg("budget") = 0);
    m.def("explore", &explore, py::arg("config"));
    m.def("replay", &replay_document, py::arg("document"), py::arg("deep") = false);
    m.def("render", [](const std::string& doc, const std::string& view) {
        return render_svg(Json::parse(doc), view_from_string(view));
    }, py::arg("document"), py::arg("view") = "cover");
}
