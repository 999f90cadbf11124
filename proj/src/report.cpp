#include "orbitals/report.hpp"

#include "orbitals/cayley.hpp"
#include "orbitals/cross_ratio.hpp"
#include "orbitals/group.hpp"
#include "orbitals/parallel.hpp"
#include "orbitals/stabilizer.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace orbitals {

using json = nlohmann::json;

std::string_view command_name(Command command)
{
    switch (command) {
    case Command::Rank: return "rank";
    case Command::Suborbits: return "suborbits";
    case Command::VerifyLemma: return "verify lemma";
    case Command::VerifyTheoremQ5: return "verify theorem-q5";
    case Command::VerifyTheoremQ7: return "verify theorem-q7";
    case Command::VerifyTheoremQ13: return "verify theorem-q13";
    case Command::VerifyTwoClosed: return "verify two-closed";
    case Command::VerifyQ17: return "verify q17";
    case Command::VerifyCrossRatioTable: return "verify cross-ratio-table";
    case Command::VerifyCliques: return "verify cliques";
    case Command::Scan: return "scan";
    }
    return "unknown";
}

namespace {

bool is_config_error(ErrorCode code)
{
    return code == ErrorCode::InvalidConfig || code == ErrorCode::ParameterTooLarge || code == ErrorCode::NotPrime ||
           code == ErrorCode::DegenerateConfig;
}

[[noreturn]] void invalid(const std::string& msg)
{
    throw Error(ErrorCode::InvalidConfig, msg);
}

std::optional<std::uint32_t> theorem_prime(Command c)
{
    switch (c) {
    case Command::VerifyTheoremQ5: return 5;
    case Command::VerifyTheoremQ7: return 7;
    case Command::VerifyTheoremQ13: return 13;
    default: return std::nullopt;
    }
}

bool needs_p(Command c)
{
    switch (c) {
    case Command::Rank:
    case Command::Suborbits:
    case Command::VerifyLemma:
    case Command::VerifyTwoClosed:
    case Command::VerifyCrossRatioTable:
    case Command::VerifyCliques:
        return true;
    default:
        return false;
    }
}

bool uses_mus(Command c)
{
    return c == Command::VerifyLemma || c == Command::VerifyCliques || c == Command::VerifyQ17;
}

std::uint32_t prime_of(const RunConfig& cfg)
{
    if (const auto q = theorem_prime(cfg.command)) {
        return *q;
    }
    if (cfg.command == Command::VerifyQ17) {
        return 17;
    }
    return *cfg.p;
}

json base_parameters(const RunConfig& cfg)
{
    json params = {{"p", prime_of(cfg)}, {"m", cfg.m}};
    return params;
}

/// Runs `body` as one claim. Claim-level failures become refuted certificates.
Certificate attempt(const RunConfig& cfg, const std::string& claim, const json& params,
                    const std::function<Certificate()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Certificate cert;
    try {
        cert = body();
    } catch (const Error& e) {
        if (is_config_error(e.code())) {
            throw;
        }
        cert = refuted_certificate(claim, params, e);
    }
    if (cfg.timings) {
        cert.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return cert;
}

Certificate verified(std::string claim, json params, json evidence)
{
    Certificate cert;
    cert.claim = std::move(claim);
    cert.parameters = std::move(params);
    cert.status = CertStatus::Verified;
    cert.evidence = std::move(evidence);
    return cert;
}

json lambda_classes_json(PrimeModulus mod)
{
    json out = json::array();
    for (const auto& cls : lambda_classes(mod)) {
        out.push_back({{"key", cls.key}, {"members", cls.members}});
    }
    return out;
}

Certificate rank_certificate(const RunConfig& cfg)
{
    const PrimeModulus mod(*cfg.p);
    json params = base_parameters(cfg);
    return attempt(cfg, "rank", params, [&] {
        const std::size_t rank = rank_of(cfg.m, mod);
        json evidence = {{"rank", rank}, {"lambda_classes", lambda_classes_json(mod)}};
        // Cross-check by classifying every tensor when the space is small enough.
        const TensorSpace space(cfg.m, mod);
        std::set<SuborbitLabel> seen;
        for (Vertex u = 0; u < space.size(); ++u) {
            seen.insert(classify_tensor(space.decode(u)));
        }
        if (seen.size() != rank) {
            throw Error(ErrorCode::CertificationFailed, "classification finds " + std::to_string(seen.size()) +
                                                            " suborbits, rank_of gives " + std::to_string(rank));
        }
        evidence["rank_by_classification"] = seen.size();
        return verified("rank", params, evidence);
    });
}

std::vector<SuborbitLabel> all_labels(PrimeModulus mod)
{
    std::vector<SuborbitLabel> labels{SuborbitLabel::zero()};
    const auto rest = nontrivial_labels(mod);
    labels.insert(labels.end(), rest.begin(), rest.end());
    return labels;
}

Certificate partition_certificate(const RunConfig& cfg)
{
    const PrimeModulus mod(*cfg.p);
    json params = base_parameters(cfg);
    return attempt(cfg, "suborbit-partition", params, [&] {
        const TensorSpace space(cfg.m, mod);
        std::vector<bool> seen(space.size(), false);
        json rows = json::array();
        std::uint64_t total = 0;
        for (const auto& label : all_labels(mod)) {
            const auto verts = suborbit_vertices(label, space);
            for (const auto u : verts) {
                if (seen[u]) {
                    throw Error(ErrorCode::CertificationFailed,
                                "vertex " + std::to_string(u) + " lies in two suborbits");
                }
                seen[u] = true;
            }
            total += verts.size();
            rows.push_back({{"label", label.to_string()}, {"size", verts.size()}});
        }
        if (total != space.size()) {
            throw Error(ErrorCode::CertificationFailed, "suborbit sizes sum to " + std::to_string(total) +
                                                            ", not " + std::to_string(space.size()));
        }
        return verified("suborbit-partition", params,
                        {{"suborbits", rows},
                         {"total", total},
                         {"lambda_classes", lambda_classes_json(mod)},
                         {"rank", rows.size()}});
    });
}

Certificate connectivity_certificate(const RunConfig& cfg)
{
    const PrimeModulus mod(*cfg.p);
    json params = base_parameters(cfg);
    return attempt(cfg, "orbital-connectivity", params, [&] {
        json rows = json::array();
        for (const auto& label : nontrivial_labels(mod)) {
            const auto s = orbital_union_set({label}, cfg.m, mod);
            if (!is_connected(s)) {
                throw Error(ErrorCode::CertificationFailed, "orbital digraph " + label.to_string() + " is disconnected");
            }
            rows.push_back({{"label", label.to_string()}, {"out_degree", s.size()}, {"connected", true}});
        }
        return verified("orbital-connectivity", params, {{"orbitals", rows}});
    });
}

json lemma_json(const LemmaCheck& check)
{
    return {{"lemma", check.lemma},
            {"mode", std::string(check_mode_name(check.mode))},
            {"instances_checked", check.instances_checked}};
}

json clique_params(const RunConfig& cfg, const std::vector<std::uint32_t>& mus)
{
    json params = base_parameters(cfg);
    params["mus"] = mus;
    params["seed"] = cfg.seed;
    params["samples"] = cfg.samples;
    return params;
}

Certificate lemma_certificate(const RunConfig& cfg)
{
    const auto mus = effective_mus(cfg);
    json params = clique_params(cfg, mus);
    params["lemma"] = cfg.lemma;
    const MuConfig mc(mus, cfg.m, PrimeModulus(prime_of(cfg)));
    return attempt(cfg, "clique-lemma", params, [&] {
        const LemmaCheck check = verify_clique_lemma(cfg.lemma, mc, cfg.seed, cfg.samples);
        return verified("clique-lemma", params, lemma_json(check));
    });
}

Certificate cliques_certificate(const RunConfig& cfg)
{
    const auto mus = effective_mus(cfg);
    json params = clique_params(cfg, mus);
    const MuConfig mc(mus, cfg.m, PrimeModulus(prime_of(cfg)));
    return attempt(cfg, "clique-axioms", params, [&] {
        const CliqueAxiomReport report = verify_clique_axioms(mc, cfg.seed, cfg.samples);
        json checks = json::array();
        for (const auto& c : report.checks) {
            checks.push_back(lemma_json(c));
        }
        json evidence = {{"mode", std::string(check_mode_name(report.mode))}, {"checks", checks}};
        evidence["census"] = report.census ? json{{"cliques", report.census->cliques},
                                                  {"clique_size", report.census->clique_size}}
                                           : json(nullptr);
        return verified("clique-axioms", params, evidence);
    });
}

Certificate cross_ratio_certificate(const RunConfig& cfg)
{
    const PrimeModulus mod(*cfg.p);
    json params = {{"p", *cfg.p}};
    return attempt(cfg, "cross-ratio-table", params, [&] {
        const RelabelReport table = verify_relabel_table(mod);
        const V4Report v4 = verify_v4_collineations(mod);
        std::uint64_t lambdas = 0;
        for (std::uint32_t l = 1; l < mod.value(); ++l) {
            const FpElement lambda(l, mod);
            const FpElement l4 = lambda * lambda * lambda * lambda;
            if (l4 == FpElement(1, mod)) {
                continue;
            }
            const ProjValue direct = cross_ratio(lambda_quad(lambda));
            const FpElement closed = lambda_cross_ratio(lambda);
            if (direct != ProjPoint::finite(closed.value())) {
                throw Error(ErrorCode::TableViolation, "cross ratio of the lambda quad at lambda = " +
                                                           std::to_string(l) + " is " + direct.to_string() +
                                                           ", closed form gives " + std::to_string(closed.value()));
            }
            ++lambdas;
        }
        return verified("cross-ratio-table", params,
                        {{"table", {{"quads", table.quads}, {"checks", table.checks}}},
                         {"v4_collineations", {{"lambdas", v4.lambdas}, {"checks", v4.checks}}},
                         {"lambda_closed_form", {{"lambdas", lambdas}}}});
    });
}

std::string sha256_hex(const std::string& data)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 computation failed");
    }
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return out.str();
}

std::string text_report(const std::vector<Certificate>& certs, const RunConfig& cfg)
{
    std::ostringstream out;
    if (cfg.command == Command::Rank && certs.size() == 1 && certs.front().status == CertStatus::Verified) {
        out << certs.front().evidence.at("rank").get<std::size_t>() << '\n';
        return out.str();
    }
    out << "orbitals " << kToolVersion << ": " << command_name(cfg.command) << '\n';
    std::array<std::size_t, 3> counts{};
    for (const auto& c : certs) {
        ++counts[static_cast<std::size_t>(c.status)];
        out << "  " << std::left << std::setw(9) << status_name(c.status) << ' ' << c.claim << ' '
            << c.parameters.dump() << '\n';
        if (c.status == CertStatus::Refuted) {
            out << "    " << c.evidence.value("message", "") << '\n';
        } else if (c.claim == "suborbit-partition") {
            for (const auto& row : c.evidence.at("suborbits")) {
                out << "    " << std::setw(6) << row.at("label").get<std::string>() << ' '
                    << row.at("size").get<std::uint64_t>() << '\n';
            }
        } else if (c.claim == "two-closed") {
            const auto& st = c.evidence.at("stabilizers");
            out << "    pair intersection: " << st.at("pair_scalar_classes_times_sign").get<std::size_t>()
                << " elements mod scalars; after " << st.at("refinement").size()
                << " further direction set(s): " << st.at("scalar_classes_times_sign").get<std::size_t>() << '\n';
        } else if (c.claim == "prime-scan") {
            out << "    both obstructed: " << c.evidence.at("both_obstructed").dump() << '\n';
        }
        if (c.elapsed_ms) {
            out << "    elapsed_ms: " << std::fixed << std::setprecision(1) << *c.elapsed_ms << '\n';
        }
    }
    out << "summary: " << counts[0] << " verified, " << counts[1] << " refuted, " << counts[2] << " skipped\n";
    return out.str();
}

}  // namespace

std::vector<std::uint32_t> effective_mus(const RunConfig& cfg)
{
    std::vector<std::uint32_t> mus = cfg.mus;
    if (mus.empty()) {
        const std::uint32_t p = prime_of(cfg);
        if (p == 17) {
            mus = kQ17Mus;
        } else if (p == 5 || p == 7 || p == 13) {
            mus = two_closed_recipe(p).mus;
        } else {
            invalid("--mu is required for p = " + std::to_string(p));
        }
    }
    if (cfg.z && *cfg.z != mus.size()) {
        invalid("--z " + std::to_string(*cfg.z) + " does not match " + std::to_string(mus.size()) + " mu values");
    }
    return mus;
}

void validate(const RunConfig& cfg)
{
    if (cfg.jobs == 0) {
        invalid("--jobs must be at least 1");
    }
    if (cfg.m == 0) {
        invalid("--m must be at least 1");
    }
    if (cfg.samples == 0) {
        invalid("--samples must be at least 1");
    }
    if (cfg.z && *cfg.z != 4 && *cfg.z != 6) {
        invalid("--z must be 4 or 6");
    }
    if (!uses_mus(cfg.command) && (!cfg.mus.empty() || cfg.z)) {
        invalid("--mu and --z only apply to verify lemma, verify cliques and verify q17");
    }
    if (cfg.command != Command::VerifyQ17 && !cfg.mus.empty() && cfg.mus.size() != 4 && cfg.mus.size() != 6) {
        invalid("--mu needs 4 or 6 values");
    }
    if (cfg.z && cfg.mus.empty() && cfg.command != Command::VerifyQ17) {
        invalid("--z requires --mu with matching length");
    }
    if (needs_p(cfg.command) && !cfg.p) {
        invalid(std::string(command_name(cfg.command)) + " requires --p");
    }
    if (const auto q = theorem_prime(cfg.command); q && cfg.p && *cfg.p != *q) {
        invalid(std::string(command_name(cfg.command)) + " is fixed to p = " + std::to_string(*q));
    }
    if (cfg.command == Command::VerifyQ17 && cfg.p && *cfg.p != 17) {
        invalid("verify q17 is fixed to p = 17");
    }
    if (cfg.command == Command::Scan && cfg.p) {
        invalid("scan takes --max-prime, not --p");
    }
    if (cfg.command == Command::VerifyLemma && cfg.lemma.empty()) {
        invalid("verify lemma needs a lemma name");
    }
    if (cfg.p) {
        (void)PrimeModulus(*cfg.p);
    }
    if (uses_mus(cfg.command)) {
        (void)effective_mus(cfg);
    }
}

std::vector<Certificate> run_certificates(const RunConfig& cfg)
{
    validate(cfg);
    switch (cfg.command) {
    case Command::Rank:
        return {rank_certificate(cfg)};
    case Command::Suborbits:
        return {partition_certificate(cfg), connectivity_certificate(cfg)};
    case Command::VerifyLemma:
        return {lemma_certificate(cfg)};
    case Command::VerifyCliques:
        return {cliques_certificate(cfg)};
    case Command::VerifyTheoremQ5:
    case Command::VerifyTheoremQ7:
    case Command::VerifyTheoremQ13: {
        const std::uint32_t p = prime_of(cfg);
        return {attempt(cfg, "not-digraph-group", base_parameters(cfg),
                        [&] { return certify_not_digraph_group(p, cfg.m); })};
    }
    case Command::VerifyTwoClosed: {
        json params = base_parameters(cfg);
        params["seed"] = cfg.seed;
        params["samples"] = cfg.samples;
        return {attempt(cfg, "two-closed", params,
                        [&] { return certify_two_closed(*cfg.p, cfg.m, cfg.seed, cfg.samples); })};
    }
    case Command::VerifyQ17: {
        const auto mus = effective_mus(cfg);
        return {attempt(cfg, "q17-rigidity", clique_params(cfg, mus),
                        [&] { return certify_q17(cfg.m, mus, cfg.seed, cfg.samples); })};
    }
    case Command::VerifyCrossRatioTable:
        return {cross_ratio_certificate(cfg)};
    case Command::Scan:
        return {attempt(cfg, "prime-scan", {{"max_prime", cfg.max_prime}},
                        [&] { return scan_primes(cfg.max_prime); })};
    }
    invalid("unknown command");
}

json run_config_json(const RunConfig& cfg)
{
    json out = {{"command", std::string(command_name(cfg.command))},
                {"m", cfg.m},
                {"seed", cfg.seed},
                {"samples", cfg.samples},
                {"timings", cfg.timings}};
    out["p"] = cfg.p ? json(*cfg.p) : json(nullptr);
    out["z"] = cfg.z ? json(*cfg.z) : json(nullptr);
    out["mus"] = cfg.mus;
    out["max_prime"] = cfg.command == Command::Scan ? json(cfg.max_prime) : json(nullptr);
    out["lemma"] = cfg.command == Command::VerifyLemma ? json(cfg.lemma) : json(nullptr);
    return out;
}

std::string emit_report(const std::vector<Certificate>& certs, const RunConfig& cfg, ReportFormat format)
{
    if (format == ReportFormat::Text) {
        return text_report(certs, cfg);
    }
    json list = json::array();
    std::array<std::size_t, 3> counts{};
    for (const auto& c : certs) {
        list.push_back(to_json(c));
        ++counts[static_cast<std::size_t>(c.status)];
    }
    json doc = {{"tool_version", std::string(kToolVersion)},
                {"run_config", run_config_json(cfg)},
                {"certificates", list},
                {"summary",
                 {{"total", certs.size()}, {"verified", counts[0]}, {"refuted", counts[1]}, {"skipped", counts[2]}}}};
    doc["content_hash"] = sha256_hex(doc.dump());
    return doc.dump(2) + "\n";
}

void write_report(const std::string& document, const std::string& path)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    }
    file << document;
    file.flush();
    if (!file) {
        throw Error(ErrorCode::IoError, "failed writing " + path);
    }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        set_worker_count(cfg.jobs);
        const auto certs = run_certificates(cfg);
        const bool listing = cfg.command == Command::Rank || cfg.command == Command::Suborbits;
        const ReportFormat format = cfg.format.value_or(listing ? ReportFormat::Text : ReportFormat::Json);
        const std::string doc = emit_report(certs, cfg, format);
        if (cfg.output_path) {
            write_report(doc, *cfg.output_path);
        } else {
            out << doc;
        }
        for (const auto& c : certs) {
            if (c.status != CertStatus::Verified) {
                err << "claim not verified: " << c.claim;
                if (c.status == CertStatus::Refuted) {
                    err << ": " << c.evidence.value("message", "");
                }
                err << '\n';
                return 1;
            }
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace orbitals
