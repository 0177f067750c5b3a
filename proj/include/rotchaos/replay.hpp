#pragma once

// Independent re-check of a certificate document.
//
// Structural evidence (tile partitions, witness inclusions, disjointness and
// strip tests, verdict logic) is always re-checked. Image enclosures of
// explicit maps are recomputed and compared bit for bit. Enclosures of the
// pendulum map are taken from the document unless `deep` is set, in which
// case they are re-integrated.

#include <string>
#include <vector>

#include "rotchaos/io.hpp"

namespace rotchaos {

struct ReplayReport {
    // The verdict the document claims.
    Verdict claimed = Verdict::Inconclusive;
    bool agrees = false;
    bool enclosures_recomputed = false;
    std::vector<std::string> mismatches;
};

// Evidence of a visit document: one leg per direction.
struct VisitLeg {
    std::string source, target;
    VisitResult result;
};

ReplayReport replay(const Json& doc, bool deep = false);

// Top-level verdict of each document kind.
Verdict document_verdict(const ChaosCertificate& c);
Verdict document_verdict(const MarkovCertificate& c);
Verdict document_verdict(const std::vector<VisitLeg>& legs);

Json to_json(const std::vector<VisitLeg>& legs);
std::vector<VisitLeg> visit_legs_from_json(const Json& j);

} // namespace rotchaos
