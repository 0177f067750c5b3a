// rotchaos: certify rotational chaos hypotheses for annulus maps.
//
// Exit codes: 0 Certified, 1 Refuted, 2 Inconclusive, 3 usage or
// configuration error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rotchaos/certify.hpp"
#include "rotchaos/explorer.hpp"
#include "rotchaos/io.hpp"
#include "rotchaos/render.hpp"
#include "rotchaos/replay.hpp"

using namespace rotchaos;

namespace {

constexpr int kUsage = 3;

int exit_code(Verdict v) {
    switch (v) {
    case Verdict::Certified: return 0;
    case Verdict::Refuted: return 1;
    case Verdict::Inconclusive: return 2;
    }
    return 2;
}

struct Options {
    std::string config;
    std::string out;
    std::size_t budget = 0;
    std::string from = "U0", to = "U1";
    bool one_way = false;
    std::string cert;
    bool deep = false;
    std::string input;
    std::string view = "cover";
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig load(const Options& o) {
    RunConfig c = load_config(o.config);
    if (o.budget > 0) c.certify.subdivision.total_budget = o.budget;
    return c;
}

void emit(const Options& o, const Json& doc) {
    if (o.out.empty()) return;
    write_json_file(o.out, doc);
    std::cout << "certificate written to " << o.out << "\n";
}

std::string boxes_line(const DpdCertificate& d) {
    std::string s = "dpd " + to_string(d.verdict);
    if (!d.reason.empty()) s += " (" + d.reason + ")";
    if (d.rho) s += "; k0 = " + std::to_string(d.k0) + ", k1 = " + std::to_string(d.k1) + ", rho = " + std::to_string(*d.rho);
    return s;
}

int run_dpd(const Options& o) {
    const RunConfig c = load(o);
    const LiftedAnnulusMap map = build_map(c);
    const auto t0 = std::chrono::steady_clock::now();
    const DpdCertificate d = certify_ndpd(map, c.box("U0"), c.box("U1"), c.n, c.certify);
    std::cout << boxes_line(d) << "\n";
    std::size_t members = 0;
    for (const auto* ch : {&d.chain0, &d.chain1})
        for (const auto& s : *ch) members += s.members.size();
    emit(o, make_document("dpd", c, d.verdict, to_json(d), {members, seconds_since(t0)}));
    return exit_code(d.verdict);
}

int run_visit(const Options& o) {
    const RunConfig c = load(o);
    const LiftedAnnulusMap map = build_map(c);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<VisitLeg> legs;
    legs.push_back({o.from, o.to, certify_visit(map, c.box(o.from), c.box(o.to), c.certify.visit_max_m, c.certify)});
    if (!o.one_way)
        legs.push_back({o.to, o.from, certify_visit(map, c.box(o.to), c.box(o.from), c.certify.visit_max_m, c.certify)});
    for (const auto& l : legs) {
        std::cout << "visit " << l.source << " -> " << l.target << ": " << to_string(l.result.verdict);
        if (l.result.witness) std::cout << " (m = " << l.result.witness->m << ")";
        if (!l.result.reason.empty()) std::cout << " (" << l.result.reason << ")";
        std::cout << "\n";
    }
    const Verdict v = document_verdict(legs);
    emit(o, make_document("visit", c, v, to_json(legs), {0, seconds_since(t0)}));
    return exit_code(v);
}

int run_chaos(const Options& o) {
    const RunConfig c = load(o);
    const LiftedAnnulusMap map = build_map(c);
    const auto t0 = std::chrono::steady_clock::now();
    const ChaosCertificate cc = certify_chaos(map, c.box("U0"), c.box("U1"), c.n, c.declared, c.certify);
    std::cout << boxes_line(cc.dpd) << "\n";
    std::cout << "visit U0 -> U1: " << to_string(cc.visit_01.verdict) << ", visit U1 -> U0: "
              << to_string(cc.visit_10.verdict) << "\n";
    std::cout << "theorem applied: " << to_string(cc.theorem_applied);
    if (cc.relabeled) std::cout << " (U0 and U1 swapped, rho < 0)";
    std::cout << "\n";
    if (cc.implied_interval)
        std::cout << "implied interval: [" << to_string((*cc.implied_interval)[0]) << ", "
                  << to_string((*cc.implied_interval)[1]) << "]\n"
                  << cc.conclusion << "\n";
    for (const auto& r : cc.reasons) std::cout << "  " << r << "\n";
    const Verdict v = document_verdict(cc);
    emit(o, make_document("chaos", c, v, to_json(cc), {0, seconds_since(t0)}));
    return exit_code(v);
}

int run_chain(const Options& o) {
    const RunConfig c = load(o);
    if (!c.chain) throw Error(ErrorCode::ConfigError, "chain: missing");
    const LiftedAnnulusMap map = build_map(c);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Box2> disks;
    for (const auto& n : c.chain->disks) disks.push_back(c.box(n));
    const ChainCertificate cc = certify_chain(map, c.chain->q, c.chain->p, disks, c.chain->exponents, c.certify);
    std::cout << "chain " << to_string(cc.verdict);
    if (!cc.reason.empty()) std::cout << " (" << cc.reason << ")";
    std::cout << "\n";
    if (!cc.conclusion.empty()) std::cout << cc.conclusion << "\n";
    emit(o, make_document("chain", c, cc.verdict, to_json(cc), {0, seconds_since(t0)}));
    return exit_code(cc.verdict);
}

int run_markov(const Options& o) {
    const RunConfig c = load(o);
    if (!c.markov) throw Error(ErrorCode::ConfigError, "markov: missing");
    const LiftedAnnulusMap map = build_map(c);
    const auto t0 = std::chrono::steady_clock::now();
    const MarkovCertificate m =
        certify_markov(map, c.box(c.markov->rect), c.markov->n_iter, c.markov->shifts, c.certify, c.markov->frame);
    for (const auto& x : m.crossings) {
        std::cout << "shift " << x.shift << ": " << to_string(x.verdict);
        if (!x.reason.empty()) std::cout << " (" << x.reason << ")";
        std::cout << "\n";
    }
    std::cout << "symbols: " << m.symbols << (m.horseshoe ? ", rotational horseshoe" : "") << "\n";
    if (m.horseshoe) std::cout << "entropy >= " << m.entropy_lower_bound << " (annotation)\n";
    const Verdict v = document_verdict(m);
    emit(o, make_document("markov", c, v, to_json(m), {0, seconds_since(t0)}));
    return exit_code(v);
}

int run_explore(const Options& o) {
    const RunConfig c = load(o);
    const LiftedAnnulusMap map = build_map(c);
    const auto& e = c.explore;
    const RotationField field = rotation_field(map, e.y_lo, e.y_hi, e.nx, e.ny, e.iterates, e.y_bound);
    std::vector<CandidatePair> pairs;
    try {
        pairs = propose_candidates(map, field, e.rho_min, c.n, e.params);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::NoCandidates) throw;
        std::cout << "no candidates\n";
        return 2;
    }
    Json out = Json::array();
    for (const auto& p : pairs) {
        out.push_back(to_json(p));
        std::cout << "k0 = " << p.k0 << ", k1 = " << p.k1 << ", predicted rho = " << p.predicted_rho
                  << ", robustness = " << p.robustness << (p.visits_found ? ", visits found" : "") << "\n";
    }
    if (!o.out.empty()) {
        write_json_file(o.out, out);
        std::cout << "candidates written to " << o.out << "\n";
    }
    return 0;
}

int run_replay(const Options& o) {
    Json doc;
    try {
        doc = read_json_file(o.cert);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }
    ReplayReport r;
    try {
        r = replay(doc, o.deep);
    } catch (const Error& e) {
        std::cout << "replay failed: " << e.what() << "\n";
        return 2;
    }
    if (!r.enclosures_recomputed) std::cout << "note: pendulum enclosures taken from the document (use --deep-replay)\n";
    if (!r.agrees) {
        std::cout << "replay mismatch (" << r.mismatches.size() << "):\n";
        for (const auto& m : r.mismatches) std::cout << "  " << m << "\n";
        return 2;
    }
    std::cout << "replay agrees: " << to_string(r.claimed) << "\n";
    return exit_code(r.claimed);
}

int run_render(const Options& o) {
    const Json input = read_json_file(o.input);
    const std::string svg = render_svg(input, view_from_string(o.view));
    std::ofstream out(o.out);
    if (!out || !(out << svg)) throw Error(ErrorCode::ConfigError, o.out + ": cannot write");
    std::cout << "figure written to " << o.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigorous certificates for rotational chaos in annulus maps"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "certificate output path");
        sub->add_option("--budget", o.budget, "cap on image evaluations per enclosure chain");
    };
    auto* explore = app.add_subcommand("explore", "propose candidate boxes (float, non-rigorous)");
    add_common(explore);
    auto* dpd = app.add_subcommand("certify-dpd", "certify the n-dpd conditions for boxes U0, U1");
    add_common(dpd);
    auto* visit = app.add_subcommand("certify-visit", "certify visits between two boxes, both directions");
    add_common(visit);
    visit->add_option("--from", o.from, "source box name");
    visit->add_option("--to", o.to, "target box name");
    visit->add_flag("--one-way", o.one_way, "only from -> to");
    auto* chaos = app.add_subcommand("certify-chaos", "dpd, visits and theorem application");
    add_common(chaos);
    auto* chain = app.add_subcommand("certify-chain", "certify a periodic chain of disks");
    add_common(chain);
    auto* markov = app.add_subcommand("certify-markov", "certify Markovian crossings of a rectangle");
    add_common(markov);
    auto* rep = app.add_subcommand("replay", "re-check a certificate");
    rep->add_option("cert", o.cert, "certificate (JSON)")->required();
    rep->add_flag("--deep-replay", o.deep, "re-integrate ODE enclosures too");
    auto* render = app.add_subcommand("render", "SVG figure of a configuration or certificate");
    render->add_option("input", o.input, "configuration or certificate (JSON)")->required()->check(CLI::ExistingFile);
    render->add_option("--view", o.view, "annulus or cover")->check(CLI::IsMember({"annulus", "cover"}));
    render->add_option("--out", o.out, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*explore) return run_explore(o);
        if (*dpd) return run_dpd(o);
        if (*visit) return run_visit(o);
        if (*chaos) return run_chaos(o);
        if (*chain) return run_chain(o);
        if (*markov) return run_markov(o);
        if (*rep) return run_replay(o);
        if (*render) return run_render(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
