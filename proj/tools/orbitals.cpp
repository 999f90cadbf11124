#include "orbitals/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using orbitals::Command;
using orbitals::ReportFormat;
using orbitals::RunConfig;

namespace {

struct Flags {
    std::uint32_t p = 0;
    std::size_t z = 0;
    std::string format;
};

void add_common(CLI::App* sub, RunConfig& cfg, Flags& flags)
{
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", flags.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", cfg.output_path, "write the report to this file");
    sub->add_flag("--timings", cfg.timings, "record elapsed_ms per certificate");
}

void add_prime(CLI::App* sub, Flags& flags, bool required)
{
    auto* opt = sub->add_option("--p", flags.p, "prime");
    if (required) {
        opt->required();
    }
}

void add_m(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--m", cfg.m, "dimension of W")->check(CLI::PositiveNumber);
}

void add_mu(CLI::App* sub, RunConfig& cfg, Flags& flags)
{
    sub->add_option("--z", flags.z, "number of mu values (4 or 6)");
    sub->add_option("--mu", cfg.mus, "mu values a,b,c,d[,e,f]")->delimiter(',');
    sub->add_option("--samples", cfg.samples, "instances per lemma in sampled mode")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certificates for 2-closure of affine tensor groups"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(orbitals::kToolVersion));

    RunConfig cfg;
    Flags flags;
    std::map<CLI::App*, Command> commands;

    auto* rank = app.add_subcommand("rank", "number of suborbits");
    add_prime(rank, flags, true);
    add_m(rank, cfg);
    add_common(rank, cfg, flags);
    commands[rank] = Command::Rank;

    auto* suborbits = app.add_subcommand("suborbits", "suborbit partition and orbital connectivity");
    add_prime(suborbits, flags, true);
    add_m(suborbits, cfg);
    add_common(suborbits, cfg, flags);
    commands[suborbits] = Command::Suborbits;

    auto* scan = app.add_subcommand("scan", "lambda obstructions over primes");
    scan->add_option("--max-prime", cfg.max_prime, "largest prime to classify");
    add_common(scan, cfg, flags);
    commands[scan] = Command::Scan;

    auto* verify = app.add_subcommand("verify", "run a certificate");
    verify->require_subcommand(1);

    auto* lemma = verify->add_subcommand("lemma", "one clique lemma");
    lemma->add_option("name", cfg.lemma, "lemma name")->required();
    add_prime(lemma, flags, true);
    add_m(lemma, cfg);
    add_mu(lemma, cfg, flags);
    add_common(lemma, cfg, flags);
    commands[lemma] = Command::VerifyLemma;

    const std::pair<const char*, Command> theorems[] = {{"theorem-q5", Command::VerifyTheoremQ5},
                                                        {"theorem-q7", Command::VerifyTheoremQ7},
                                                        {"theorem-q13", Command::VerifyTheoremQ13}};
    for (const auto& [name, command] : theorems) {
        auto* sub = verify->add_subcommand(name, "no union of orbitals has automorphism group G");
        add_prime(sub, flags, false);
        add_m(sub, cfg);
        add_common(sub, cfg, flags);
        commands[sub] = command;
    }

    auto* two_closed = verify->add_subcommand("two-closed", "2-closure for p in {5, 7, 13}");
    add_prime(two_closed, flags, true);
    add_m(two_closed, cfg);
    two_closed->add_option("--samples", cfg.samples, "instances per lemma in sampled mode")
        ->check(CLI::PositiveNumber);
    add_common(two_closed, cfg, flags);
    commands[two_closed] = Command::VerifyTwoClosed;

    auto* q17 = verify->add_subcommand("q17", "rigidity of Gamma_1 u Gamma_2 at p = 17");
    add_prime(q17, flags, false);
    add_m(q17, cfg);
    add_mu(q17, cfg, flags);
    add_common(q17, cfg, flags);
    commands[q17] = Command::VerifyQ17;

    auto* table = verify->add_subcommand("cross-ratio-table", "cross ratios under relabelling");
    add_prime(table, flags, true);
    add_common(table, cfg, flags);
    commands[table] = Command::VerifyCrossRatioTable;

    auto* cliques = verify->add_subcommand("cliques", "clique axioms and census");
    add_prime(cliques, flags, true);
    add_m(cliques, cfg);
    add_mu(cliques, cfg, flags);
    add_common(cliques, cfg, flags);
    commands[cliques] = Command::VerifyCliques;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& [sub, command] : commands) {
        if (sub->parsed()) {
            cfg.command = command;
            const auto given = [sub](const char* name) {
                const auto* opt = sub->get_option_no_throw(name);
                return opt != nullptr && opt->count() > 0;
            };
            if (given("--p")) {
                cfg.p = flags.p;
            }
            if (given("--z")) {
                cfg.z = flags.z;
            }
            if (!flags.format.empty()) {
                cfg.format = flags.format == "text" ? ReportFormat::Text : ReportFormat::Json;
            }
        }
    }
    return orbitals::run(cfg, std::cout, std::cerr);
}
