#pragma once

// JSON run configurations and certificate documents. Every interval
// endpoint is written as hex-float text, so documents round-trip bit for bit.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rotchaos/certify.hpp"
#include "rotchaos/explorer.hpp"
#include "rotchaos/maps.hpp"

namespace rotchaos {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string hex(double v);
// Hex-float or decimal text, or a JSON number; nearest binary64.
double parse_double(const Json& j, const std::string& path);
// Decimal text or a JSON number becomes the tightest interval around the
// decimal value; a hex string or an endpoint pair is taken exactly.
Interval parse_parameter(const Json& j, const std::string& path);

Json to_json(const Interval& v);
Json to_json(const Box2& b);
Json to_json(const LiftedBox& b);
Box2 box_from_json(const Json& j, const std::string& path);
LiftedBox lifted_from_json(const Json& j, const std::string& path);

struct MapConfig {
    MapKind kind = MapKind::StandardMap;
    // standard: K; rigid_twist: alpha, tau; pendulum: g, l, A.
    std::vector<std::pair<std::string, Interval>> params;
    // Pendulum forcing period.
    double period = 0.0;
    long lift_offset = 0;

    const Interval& param(const std::string& name) const;
};

struct ChainConfig {
    int q = 1;
    long p = 0;
    std::vector<std::string> disks;
    std::vector<int> exponents;
};

struct MarkovConfig {
    std::string rect;
    MarkovFrame frame;
    int n_iter = 1;
    std::vector<long> shifts;
};

struct ExploreConfig {
    double y_lo = -1.0, y_hi = 1.0;
    int nx = 64, ny = 64;
    int iterates = 50;
    double y_bound = 1e6;
    long rho_min = 3;
    ExplorerParams params;
};

struct RunConfig {
    MapConfig map;
    std::vector<std::pair<std::string, Box2>> boxes;
    int n = 1;
    IntegrationSettings integration;
    CertifySettings certify;
    Declared declared;
    std::uint64_t seed = 1;
    ExploreConfig explore;
    std::optional<ChainConfig> chain;
    std::optional<MarkovConfig> markov;

    // Throws ConfigError naming boxes.<name> when absent.
    const Box2& box(const std::string& name) const;
};

// Throws ConfigError with the offending field path.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);
// Exact echo; parse_config(to_json(c)) reproduces c.
Json to_json(const RunConfig& c);
LiftedAnnulusMap build_map(const RunConfig& c);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Evidence trees. The *_from_json functions throw SchemaMismatch on missing
// or malformed fields.
Json to_json(const EnclosureChain& chain);
EnclosureChain chain_from_json(const Json& j, const std::string& path);
Json to_json(const DpdCertificate& c);
DpdCertificate dpd_from_json(const Json& j, const std::string& path = "evidence");
Json to_json(const VisitResult& r);
VisitResult visit_from_json(const Json& j, const std::string& path = "evidence");
Json to_json(const ChaosCertificate& c);
ChaosCertificate chaos_from_json(const Json& j);
Json to_json(const ChainCertificate& c);
ChainCertificate chain_certificate_from_json(const Json& j);
Json to_json(const MarkovCertificate& c);
MarkovCertificate markov_from_json(const Json& j);
Json to_json(const CandidatePair& c);

struct Counters {
    std::size_t evaluations = 0;
    double seconds = 0.0;
};

// {schema_version, kind, config, verdict, evidence, counters}. `kind` is one
// of dpd, visit, chaos, chain, markov.
Json make_document(const std::string& kind, const RunConfig& config, Verdict verdict, Json evidence,
                   const Counters& counters);
// Checks schema_version and the top-level shape.
void check_document(const Json& doc);

Verdict verdict_from_string(const std::string& s, const std::string& path);

} // namespace rotchaos
