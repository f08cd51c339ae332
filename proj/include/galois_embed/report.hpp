#pragma once

// Run configuration, parsing of the textual inputs and the JSON reports
// written by the command-line tool.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "galois_embed/covers.hpp"

namespace galois_embed {

struct RunConfig {
    Construction construction = Construction::A;
    int d = 2;
    std::string tau = "0.3+1.1i";
    /// One entry per generator, each "p/q,r/s".
    std::vector<std::string> q0{"1/2,0"};
    std::size_t samples = 20;
    std::uint64_t seed = 42;
    Tolerances tol;
    std::size_t order_cap = kDefaultOrderCap;
    unsigned jobs = 1;
    std::string output;
};

// All parsers throw Error(ConfigError).
Construction parse_construction(std::string_view s);
/// "a+bi", "a-bi", "bi", "i"; Im must be positive.
Complex parse_tau(std::string_view s);
Rational parse_rational(std::string_view s);
/// "p/q,r/s"
TorsionCoords parse_generator(std::string_view s);
/// Entries may also hold several generators separated by ';'. "0" or an
/// empty list is the trivial group.
FiniteSubgroupSpec parse_q0(const std::vector<std::string>& generators);
/// Rows separated by ';', entries by whitespace: "2 1;1 2".
IntMatrix parse_matrix(std::string_view s);

/// Overlay the keys of a JSON config onto cfg. Errors name the source and
/// the line of the offending key.
void merge_config_text(RunConfig& cfg, const std::string& text, const std::string& source);
void merge_config_file(RunConfig& cfg, const std::string& path);

/// Validates the config (d, tolerances, samples) and builds the cover.
CoverSpec build_cover(const RunConfig& cfg);

nlohmann::ordered_json config_json(const RunConfig& cfg);
nlohmann::ordered_json construct_json(const RunConfig& cfg, const CoverSpec& spec);
nlohmann::ordered_json verify_json(const RunConfig& cfg, const VerificationReport& report, const CriterionRecord& criterion);
bool verify_pass(const VerificationReport& report, const CriterionRecord& criterion);

/// Two-space indented JSON with doubles written as %.17g.
std::string dump_json(const nlohmann::ordered_json& j);

/// Write to a temporary file in the same directory, then rename over path.
void write_atomic(const std::string& path, const std::string& content);

} // namespace galois_embed
