#pragma once

/**
 * @file report.hpp
 * @brief Run configuration, command dispatch and report emission for the CLI.
 *
 * Every command produces a list of certificates. Reports are JSON objects
 * with sorted keys and a SHA-256 over their own canonical dump, so repeated
 * runs with one configuration give byte-identical output. Timing is only
 * recorded when asked for, since it would break that property.
 */

#include "orbitals/certificate.hpp"
#include "orbitals/clique.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orbitals {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command {
    Rank,
    Suborbits,
    VerifyLemma,
    VerifyTheoremQ5,
    VerifyTheoremQ7,
    VerifyTheoremQ13,
    VerifyTwoClosed,
    VerifyQ17,
    VerifyCrossRatioTable,
    VerifyCliques,
    Scan,
};

std::string_view command_name(Command command);

enum class ReportFormat { Json, Text };

struct RunConfig {
    Command command = Command::Rank;
    std::optional<std::uint32_t> p;
    std::size_t m = 2;
    std::optional<std::size_t> z;
    std::vector<std::uint32_t> mus;
    std::uint32_t max_prime = 500;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t samples = kDefaultSamples;
    std::string lemma;  // VerifyLemma only
    std::optional<std::string> output_path;
    /// Unset means text for rank and suborbits, JSON otherwise.
    std::optional<ReportFormat> format;
    unsigned jobs = 1;
    bool timings = false;
};

/// InvalidConfig for parameter combinations a command cannot use.
void validate(const RunConfig& cfg);

/// The mu values a command would use: --mu if given, else the standard
/// configuration for p in {5, 7, 13, 17}. InvalidConfig when neither applies.
std::vector<std::uint32_t> effective_mus(const RunConfig& cfg);

/// Runs the command. Failures of a claim become refuted certificates; errors
/// in the configuration itself (InvalidConfig, ParameterTooLarge, NotPrime,
/// DegenerateConfig) propagate.
std::vector<Certificate> run_certificates(const RunConfig& cfg);

/// The run_config block echoed into every report.
nlohmann::json run_config_json(const RunConfig& cfg);

/// Deterministic report document, newline-terminated.
std::string emit_report(const std::vector<Certificate>& certs, const RunConfig& cfg, ReportFormat format);

/// Writes the document; IoError when the file cannot be written.
void write_report(const std::string& document, const std::string& path);

/// Full CLI behaviour after parsing: 0 iff every certificate is verified,
/// 1 when some claim failed (its name goes to `err`), 2 for configuration errors.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace orbitals
