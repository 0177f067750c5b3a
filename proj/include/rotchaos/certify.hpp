#pragma once

// Three-valued certification of the disjoint-pair-of-disks hypotheses,
// visits, periodic disk chains and Markovian crossings.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rotchaos/affine_set.hpp"
#include "rotchaos/annulus.hpp"
#include "rotchaos/maps.hpp"

namespace rotchaos {

enum class Verdict { Certified, Refuted, Inconclusive };
std::string to_string(Verdict v);

struct CertifySettings {
    SubdivisionSettings subdivision;
    // Witness boxes shrink from half the source scale by halving, at most
    // this many times.
    int witness_depth = 46;
    // Float seed grid per axis and number of seeds shrunk rigorously.
    int witness_grid = 24;
    int witness_candidates = 6;
    int visit_max_m = 60;
    int visit_grid = 64;
    int visit_candidates = 24;
    // Markov pieces per axis: start, then doubled up to the cap.
    int markov_pieces = 16;
    int markov_max_pieces = 512;

    void validate() const;
};

// A box whose rigorous image under F^power - (offset L, 0) lies in the open
// interior of target + (frame L, 0).
struct Witness {
    Box2 box;
    int power = 1;
    LiftedBox image;
    long frame = 0;
};

struct ShiftCertificate {
    Verdict verdict = Verdict::Inconclusive;
    // NoWitness, AmbiguousShift, RefutedIntersection, NotUnique, or an error
    // code name.
    std::string reason;
    long k = 0;
    // Translates met by the outer image enclosure.
    std::vector<long> candidate_shifts;
    // One witness per translate where F(U) provably meets U + k L; frames
    // are distinct and increasing.
    std::vector<Witness> witnesses;
    std::optional<Box2> image_hull;
};

struct DpdCertificate {
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    int n = 1;
    Box2 u0, u1;
    ShiftCertificate shift0, shift1;
    long k0 = 0, k1 = 0;
    std::optional<long> rho;
    EnclosureChain chain0, chain1;
    // disjoint[i-1][j-1]: f^i(U0) and f^j(U1) proven disjoint.
    std::vector<std::vector<bool>> disjoint;
    bool inessential0 = false, inessential1 = false;
    // "strip", "lift_component" or empty.
    std::string inessential_method0, inessential_method1;
    std::string failing_stage;
};

struct VisitWitness {
    Box2 seed;
    int m = 1;
    LiftedBox final_enclosure;
    // The enclosure lies inside target + (target_frame L, 0).
    long target_frame = 0;
};

struct VisitResult {
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    std::optional<VisitWitness> witness;
    // Search statistic; not part of the certificate.
    int candidates_tried = 0;
};

struct Declared {
    bool area_preserving = false;
    bool nonwandering = false;
    bool birkhoff_related_ends = false;
};

enum class Theorem { None, A, B };
std::string to_string(Theorem t);

struct Rational {
    long num = 0;
    long den = 1;
    friend bool operator==(const Rational&, const Rational&) = default;
};
Rational make_rational(long num, long den);
std::string to_string(const Rational& r);

struct ChaosCertificate {
    DpdCertificate dpd;
    VisitResult visit_01, visit_10;
    Declared declared;
    Theorem theorem_applied = Theorem::None;
    // The pair was swapped because rho < 0.
    bool relabeled = false;
    long rho_abs = 0;
    std::optional<std::array<Rational, 2>> implied_interval;
    std::vector<std::string> reasons;
    std::string conclusion;
};

// Admissible (n, |rho|) pairs: n >= 3 and rho >= 1, n >= 2 and rho >= 2, or
// n >= 1 and rho >= 3.
bool admissible(int n, long rho_abs);

struct ChainCertificate {
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    int q = 1;
    long p = 0;
    std::vector<Box2> disks;
    std::vector<int> exponents;
    bool disks_disjoint = false;
    // Enclosure chains of F^q(V_i), one per disk, when computed.
    std::vector<EnclosureChain> orbits;
    // H(V_i) proven disjoint from V_i.
    std::vector<bool> displaced;
    std::vector<std::optional<Witness>> connections;
    std::string conclusion;
};

// Rectangle coordinates u with z = center + axes * u.
struct MarkovFrame {
    std::array<double, 2> center{0.0, 0.0};
    Mat2 axes{};
};

struct Crossing {
    long shift = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    // +1: left side maps left of the target, right side right; -1: swapped.
    int orientation = 0;
    int pieces = 0;
    // Image enclosures in target coordinates: `pieces` left-side pieces,
    // then `pieces` right-side pieces, then the pieces x pieces grid of the
    // rectangle (column-major in x). Empty when an enclosure failed.
    std::vector<Box2> images;
    // Hulls of the side images.
    std::optional<Box2> left_image, right_image;
};

struct MarkovCertificate {
    Box2 rect;
    MarkovFrame frame;
    int n_iter = 1;
    std::vector<Crossing> crossings;
    int symbols = 0;
    bool horseshoe = false;
    // log(symbols) / n_iter when a horseshoe is certified; annotation only.
    double entropy_lower_bound = 0.0;
};

ShiftCertificate certify_shift(const LiftedAnnulusMap& map, const Box2& u,
                               const CertifySettings& settings = {});

DpdCertificate certify_ndpd(const LiftedAnnulusMap& map, const Box2& u0, const Box2& u1, int n,
                            const CertifySettings& settings = {});

VisitResult certify_visit(const LiftedAnnulusMap& map, const Box2& source, const Box2& target,
                          int max_m, const CertifySettings& settings = {});

ChaosCertificate certify_chaos(const LiftedAnnulusMap& map, const Box2& u0, const Box2& u1, int n,
                               const Declared& declared, const CertifySettings& settings = {});
// Applies the hypothesis table to already computed legs.
ChaosCertificate assemble_chaos(DpdCertificate dpd, VisitResult visit_01, VisitResult visit_10,
                                const Declared& declared);

ChainCertificate certify_chain(const LiftedAnnulusMap& map, int q, long p, const std::vector<Box2>& disks,
                               const std::vector<int>& exponents, const CertifySettings& settings = {});

MarkovCertificate certify_markov(const LiftedAnnulusMap& map, const Box2& rect, int n_iter,
                                 const std::vector<long>& shifts, const CertifySettings& settings = {},
                                 const MarkovFrame& frame = {});

// Verdict logic shared by certification and replay. Each fills the verdict,
// reason and derived fields from the evidence already stored.
std::vector<long> candidate_shifts(const Box2& u, const EnclosureSet& stage1, const Interval& circumference);
void decide(ShiftCertificate& c);
void decide(DpdCertificate& c, const Interval& circumference);
void decide(ChainCertificate& c, const Interval& circumference);
void decide(VisitResult& r);
// Needs rect, shift, pieces and images.
void decide(Crossing& c, const Box2& rect);
void decide(MarkovCertificate& c);
// Sub-boxes a Markov check evaluates, in the order of Crossing::images.
std::vector<Box2> crossing_pieces(const Box2& rect, int pieces);
// Inessentiality of a chain rebased by k, by the named method ("strip" or
// "lift_component"); an empty method tries both and reports the first that
// holds.
bool inessential_by(const EnclosureChain& chain, long k, const Interval& circumference, std::string& method);

// Rigorous checks used by certification and replay.
// Image of `w` under F^power, shifted back by `offset` circumferences, lies
// in the open interior of target + (frame L, 0).
bool witness_holds(const LiftedAnnulusMap& map, const Box2& w, int power, long offset, const Box2& target,
                   long frame, LiftedBox* image = nullptr);
// Markov crossing of one shift at a fixed subdivision.
Crossing check_crossing(const LiftedAnnulusMap& map, const Box2& rect, const MarkovFrame& frame, int n_iter,
                        long shift, int pieces);

} // namespace rotchaos
