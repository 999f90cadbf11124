#include "orbitals/clique.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <set>

using namespace orbitals;
using orbitals::testing::residue;

namespace {

MuConfig config(std::vector<std::int64_t> mus, std::size_t m, int p)
{
    return MuConfig::from_ints(mus, m, PrimeModulus(p));
}

Tensor random_tensor(std::size_t m, PrimeModulus mod)
{
    Matrix grid(2, m, mod);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            grid.set(r, c, residue(mod.value()));
        }
    }
    return Tensor(std::move(grid));
}

Residues random_w(std::size_t m, PrimeModulus mod)
{
    Residues w(m);
    for (auto& v : w) {
        v = residue(mod.value());
    }
    return w;
}

Tensor plus(const Tensor& a, const Tensor& b)
{
    const PrimeModulus mod = a.modulus();
    Matrix grid(2, a.m(), mod);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < a.m(); ++c) {
            grid.set(r, c, mod.add(a.raw(r, c), b.raw(r, c)));
        }
    }
    return Tensor(std::move(grid));
}

Tensor along(const MuConfig& cfg, std::size_t i, const Residues& w)
{
    const std::array<std::uint32_t, 2> d = {1, cfg.mu(i)};
    return Tensor::simple(d, w, cfg.modulus());
}

/// Oracle: every subset of `size` vertices that is pairwise adjacent, by brute force.
std::size_t brute_force_cliques(const ConnectionSet& s, std::size_t size)
{
    const Vertex n = s.space().size();
    std::size_t found = 0;
    std::vector<Vertex> chosen;
    std::function<void(Vertex)> extend = [&](Vertex from) {
        if (chosen.size() == size) {
            ++found;
            return;
        }
        for (Vertex v = from; v < n; ++v) {
            bool ok = true;
            for (const auto u : chosen) {
                ok = ok && is_arc(u, v, s);
            }
            if (ok) {
                chosen.push_back(v);
                extend(v + 1);
                chosen.pop_back();
            }
        }
    };
    extend(0);
    return found;
}

}  // namespace

TEST(MuConfig, Validation)
{
    EXPECT_ORBITALS_ERROR(config({1, 2, 3}, 2, 7), DegenerateConfig);
    EXPECT_ORBITALS_ERROR(config({1, 2, 3, 1}, 2, 7), DegenerateConfig);
    EXPECT_ORBITALS_ERROR(config({1, 2, 3, 8}, 2, 7), DegenerateConfig);  // 8 = 1 mod 7
    EXPECT_ORBITALS_ERROR(config({1, 2, 3, 4}, 0, 7), DegenerateConfig);
    const MuConfig cfg = config({2, 6, 7, 11}, 2, 13);
    EXPECT_EQ(cfg.z(), 4u);
    EXPECT_EQ(cfg.mu(3), 7u);
    EXPECT_ORBITALS_ERROR((void)cfg.mu(0), IndexOutOfRange);
    EXPECT_ORBITALS_ERROR((void)cfg.mu(5), IndexOutOfRange);
    EXPECT_EQ(cfg.partner(1), 2u);
    EXPECT_EQ(cfg.partner(4), 3u);
    EXPECT_EQ(config({-1, 1, 2, -2}, 2, 7).mus(), (std::vector<std::uint32_t>{6, 1, 2, 5}));
}

TEST(Projections, SimpleTensorsProjectOntoTheirPair)
{
    const MuConfig cfg = config({1, 2, 3, 4, 5, 6}, 3, 11);
    const PrimeModulus mod = cfg.modulus();
    for (int trial = 0; trial < 200; ++trial) {
        const Residues w = random_w(3, mod);
        for (std::size_t i = 1; i <= 6; ++i) {
            const Tensor x = along(cfg, i, w);
            EXPECT_EQ(pi_projection(x, i, cfg), w);
            EXPECT_EQ(pi_projection(x, cfg.partner(i), cfg), Residues(3, 0));
        }
    }
}

TEST(Projections, PairReconstructsTensor)
{
    for (const auto& cfg : {config({1, 2, 3, 4}, 2, 5), config({2, 6, 7, 11}, 3, 13), config({1, 3, 4, 9, 10, 12}, 2, 17)}) {
        for (int trial = 0; trial < 300; ++trial) {
            const Tensor x = random_tensor(cfg.m(), cfg.modulus());
            for (std::size_t i = 1; i <= cfg.z(); i += 2) {
                const Tensor rebuilt =
                    plus(along(cfg, i, pi_projection(x, i, cfg)), along(cfg, i + 1, pi_projection(x, i + 1, cfg)));
                EXPECT_EQ(rebuilt, x);
            }
        }
    }
}

TEST(Projections, RelationCoefficientsMatchClosedForm)
{
    // pi_1 = k1 pi_2 + k2 pi_3 with k1 = (mu4-mu2)/(mu1-mu4), k2 = (mu3-mu4)/(mu1-mu4),
    // worked out by hand from the splitting along (1,2) and (3,4).
    for (const int p : {7, 11, 13}) {
        const PrimeModulus mod(p);
        for (int trial = 0; trial < 50; ++trial) {
            std::set<std::uint32_t> distinct;
            while (distinct.size() < 4) {
                distinct.insert(residue(mod.value()));
            }
            std::vector<std::uint32_t> mus(distinct.begin(), distinct.end());
            std::swap(mus[0], mus[residue(4)]);
            const MuConfig cfg(mus, 2, mod);
            const FpElement m1(mus[0], mod), m2(mus[1], mod), m3(mus[2], mod), m4(mus[3], mod);
            const Kappa k = projection_coeffs(2, 3, 1, cfg);
            EXPECT_EQ(k.k1, (m4 - m2) / (m1 - m4));
            EXPECT_EQ(k.k2, (m3 - m4) / (m1 - m4));
        }
    }
}

TEST(Projections, RelationsHoldOnRandomTensors)
{
    const MuConfig cfg = config({1, 3, 4, 9, 10, 12}, 2, 17);
    const PrimeModulus mod = cfg.modulus();
    for (int trial = 0; trial < 200; ++trial) {
        const Tensor x = random_tensor(2, mod);
        for (std::size_t i = 1; i <= 6; ++i) {
            for (std::size_t j = 1; j <= 6; ++j) {
                if (i == j) {
                    continue;
                }
                const std::size_t k = 1 + residue(6);
                const Kappa c = projection_coeffs(i, j, k, cfg);
                const auto pi = pi_projection(x, i, cfg);
                const auto pj = pi_projection(x, j, cfg);
                const auto pk = pi_projection(x, k, cfg);
                for (std::size_t t = 0; t < 2; ++t) {
                    EXPECT_EQ(pk[t], mod.add(mod.mul(c.k1.value(), pi[t]), mod.mul(c.k2.value(), pj[t])));
                }
            }
        }
    }
    EXPECT_ORBITALS_ERROR(projection_coeffs(2, 2, 1, cfg), DegenerateConfig);
}

TEST(Projections, TwoProjectionsRoundTrip)
{
    const MuConfig cfg = config({2, 6, 7, 11}, 3, 13);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t i = 1 + residue(4);
        const std::size_t j = 1 + (i + residue(3)) % 4;
        ASSERT_NE(i, j);
        const Residues w = random_w(3, cfg.modulus());
        const Residues w2 = random_w(3, cfg.modulus());
        const Tensor x = tensor_from_projections(i, j, w, w2, cfg);
        EXPECT_EQ(pi_projection(x, i, cfg), w);
        EXPECT_EQ(pi_projection(x, j, cfg), w2);
    }
    EXPECT_ORBITALS_ERROR(tensor_from_projections(1, 2, Residues(2, 0), Residues(3, 0), cfg), DimensionMismatch);
}

TEST(EllClique, CosetOfPartnerDirection)
{
    const MuConfig cfg = config({1, 2, 3, 4}, 2, 5);
    const TensorSpace space(2, cfg.modulus());
    const ConnectionSet delta = mu_connection_set(cfg);
    EXPECT_EQ(delta.size(), 4u * 24u);
    for (int trial = 0; trial < 50; ++trial) {
        const Vertex rep = residue(static_cast<std::uint32_t>(space.size()));
        for (std::size_t i = 1; i <= 4; ++i) {
            const auto clique = ell_clique({i, rep}, cfg);
            ASSERT_EQ(clique.size(), 25u);
            EXPECT_TRUE(std::binary_search(clique.begin(), clique.end(), rep));
            const auto pi = pi_projection(space.decode(rep), i, cfg);
            for (std::size_t a = 0; a < clique.size(); ++a) {
                EXPECT_EQ(pi_projection(space.decode(clique[a]), i, cfg), pi);
                for (std::size_t b = a + 1; b < clique.size(); ++b) {
                    EXPECT_TRUE(is_arc(clique[a], clique[b], delta));
                }
            }
        }
    }
    EXPECT_ORBITALS_ERROR(ell_clique({1, space.size()}, cfg), IndexOutOfRange);
}

TEST(CliqueEnumeration, AgreesWithBruteForceOnSmallPlanes)
{
    // With m = 1 the graph lives on the affine plane over GF(p). Besides the
    // lines in the chosen parallel classes it has other p-cliques, so only
    // containment of the lines is asserted on top of the brute-force count.
    for (const auto& cfg : {config({1, 2, 3, 4}, 1, 5), config({0, 1, 3, 5}, 1, 7)}) {
        const ConnectionSet s = mu_connection_set(cfg);
        const std::size_t p = cfg.modulus().value();
        const auto cliques = enumerate_size_cliques(s, p);
        EXPECT_EQ(cliques.size(), brute_force_cliques(s, p));
        EXPECT_GE(cliques.size(), 4 * p);
        for (std::size_t i = 1; i <= 4; ++i) {
            EXPECT_TRUE(std::binary_search(cliques.begin(), cliques.end(), ell_clique({i, 0}, cfg)));
        }
        EXPECT_TRUE(std::is_sorted(cliques.begin(), cliques.end()));
    }
}

TEST(CliqueEnumeration, CensusAtDeskScale)
{
    EXPECT_EQ(enumerate_size_cliques(mu_connection_set(config({1, 2, 3, 4}, 2, 5)), 25).size(), 100u);
    EXPECT_EQ(enumerate_size_cliques(mu_connection_set(config({2, 3, 4, 5}, 2, 7)), 49).size(), 196u);
    EXPECT_ORBITALS_ERROR(enumerate_size_cliques(mu_connection_set(config({1, 2, 3, 4}, 2, 11)), 121),
                          ParameterTooLarge);
}

TEST(CliqueAxioms, ExhaustiveAtSmallPrimes)
{
    for (const auto& cfg : {config({1, 2, 3, 4}, 2, 5), config({2, 3, 4, 5}, 2, 7), config({1, 2, 3, 4, 5, 6}, 2, 7)}) {
        const auto report = verify_clique_axioms(cfg);
        EXPECT_EQ(report.mode, CheckMode::Exhaustive);
        ASSERT_TRUE(report.census.has_value());
        const std::uint64_t q = cfg.modulus().value() * cfg.modulus().value();
        EXPECT_EQ(report.census->cliques, cfg.z() * q);
        EXPECT_EQ(report.census->clique_size, q);
        EXPECT_EQ(report.checks.size(), clique_lemma_names().size());
        for (const auto& check : report.checks) {
            EXPECT_GT(check.instances_checked, 0u) << check.lemma;
        }
    }
}

TEST(CliqueAxioms, SampledModeIsReproducible)
{
    const MuConfig cfg = config({2, 6, 7, 11}, 2, 13);
    const auto a = verify_clique_axioms(cfg, kDefaultSeed, 5000);
    const auto b = verify_clique_axioms(cfg, kDefaultSeed, 5000);
    EXPECT_EQ(a.mode, CheckMode::Sampled);
    EXPECT_FALSE(a.census.has_value());
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t k = 0; k < a.checks.size(); ++k) {
        EXPECT_EQ(a.checks[k].lemma, b.checks[k].lemma);
        EXPECT_EQ(a.checks[k].instances_checked, b.checks[k].instances_checked);
    }
}

TEST(CliqueAxioms, SampledBeyondDeskScale)
{
    // 11^8 vertices cannot be tabulated; the stabiliser check falls back to sampled members.
    const auto report = verify_clique_axioms(config({1, 2, 3, 4, 5, 6}, 4, 11), 7, 2000);
    EXPECT_EQ(report.mode, CheckMode::Sampled);
    for (const auto& check : report.checks) {
        EXPECT_GT(check.instances_checked, 0u) << check.lemma;
    }
}

TEST(CliqueAxioms, SingleLemmaLookup)
{
    const MuConfig small = config({1, 2, 3, 4}, 2, 5);
    EXPECT_EQ(verify_clique_lemma("no-other-cliques", small).instances_checked, 100u);
    EXPECT_ORBITALS_ERROR(verify_clique_lemma("no-such-lemma", small), InvalidConfig);
    EXPECT_ORBITALS_ERROR(verify_clique_lemma("no-other-cliques", config({2, 6, 7, 11}, 2, 13)), ParameterTooLarge);
    const auto check = verify_clique_lemma("local-neighbourhood", config({2, 6, 7, 11}, 2, 13), 1, 10);
    EXPECT_EQ(check.mode, CheckMode::Sampled);
    EXPECT_EQ(check.instances_checked, 10'000u * 4 * 168);
}

TEST(CliqueAxioms, StabilizerOfDirectionsIsExactlyTheSetStabilizer)
{
    // Independent count at p = 5, mu = {1,2,3,4}: the 4-set stabiliser in
    // PGL(2,5) = S5 has order 8, times 4 scalars.
    const MuConfig cfg = config({1, 2, 3, 4}, 2, 5);
    const auto dirs = cfg.directions();
    std::size_t count = 0;
    for_each_gl2(cfg.modulus(), [&](const Matrix& a) {
        bool all = true;
        for (const auto& d : dirs) {
            all = all && std::find(dirs.begin(), dirs.end(), d.image(a)) != dirs.end();
        }
        count += all ? 1 : 0;
    });
    EXPECT_EQ(count, 32u);
    EXPECT_EQ(verify_clique_lemma("linear-stabilizer-permutes-directions", cfg).instances_checked, 480u);
}
