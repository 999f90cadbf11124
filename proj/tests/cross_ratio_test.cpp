#include "orbitals/cross_ratio.hpp"

#include "orbitals/group.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace orbitals;
using orbitals::testing::residue;

namespace {

ProjValue fin(std::uint32_t t)
{
    return ProjPoint::finite(t);
}

const ProjValue kInf = ProjPoint::infinity();

/// Oracle: the slope formula with infinity handled by explicit cases.
std::optional<std::uint32_t> slope_formula(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d,
                                           PrimeModulus mod)
{
    const std::uint32_t num = mod.mul(mod.sub(c, a), mod.sub(d, b));
    const std::uint32_t den = mod.mul(mod.sub(c, b), mod.sub(d, a));
    if (den == 0) {
        return std::nullopt;
    }
    return mod.mul(num, mod.inv(den));
}

ProjQuad random_quad(PrimeModulus mod)
{
    for (;;) {
        std::array<ProjValue, 4> pts = {kInf, kInf, kInf, kInf};
        for (auto& pt : pts) {
            const std::uint32_t t = residue(mod.value() + 1);
            pt = t == mod.value() ? kInf : fin(t);
        }
        try {
            return ProjQuad(pts, mod);
        } catch (const Error&) {
        }
    }
}

}  // namespace

TEST(CrossRatio, KnownValues)
{
    const PrimeModulus seven(7);
    EXPECT_EQ(cross_ratio(ProjQuad({fin(0), fin(1), fin(2), fin(3)}, seven)), fin(6));
    for (std::uint32_t t = 2; t < 7; ++t) {
        EXPECT_EQ(cross_ratio(ProjQuad({kInf, fin(0), fin(1), fin(t)}, seven)), fin(t));
    }
}

TEST(CrossRatio, MatchesSlopeFormulaOnFiniteQuads)
{
    const PrimeModulus mod(11);
    for (std::uint32_t a = 0; a < 11; ++a) {
        for (std::uint32_t b = 0; b < 11; ++b) {
            for (std::uint32_t c = 0; c < 11; ++c) {
                for (std::uint32_t d = 0; d < 11; ++d) {
                    if (a == b || a == c || a == d || b == c || b == d || c == d) {
                        continue;
                    }
                    const auto oracle = slope_formula(a, b, c, d, mod);
                    ASSERT_TRUE(oracle.has_value());
                    ASSERT_EQ(cross_ratio(ProjQuad({fin(a), fin(b), fin(c), fin(d)}, mod)), fin(*oracle));
                }
            }
        }
    }
}

TEST(CrossRatio, NeverZeroOneOrInfinity)
{
    const PrimeModulus mod(13);
    for (int trial = 0; trial < 2000; ++trial) {
        const ProjValue r = cross_ratio(random_quad(mod));
        EXPECT_FALSE(r.is_infinity());
        EXPECT_NE(r.slope(), 0u);
        EXPECT_NE(r.slope(), 1u);
    }
}

TEST(CrossRatio, DegenerateQuadsRejected)
{
    const PrimeModulus mod(5);
    EXPECT_ORBITALS_ERROR(ProjQuad({fin(1), fin(1), fin(2), fin(3)}, mod), DegenerateQuad);
    EXPECT_ORBITALS_ERROR(ProjQuad({kInf, fin(1), kInf, fin(3)}, mod), DegenerateQuad);
    EXPECT_ORBITALS_ERROR(ProjQuad({fin(7), fin(1), fin(2), fin(3)}, mod), DegenerateQuad);
}

TEST(CrossRatio, InvariantUnderFractionalLinearMaps)
{
    for (const int p : {5, 7, 13, 17}) {
        const PrimeModulus mod(p);
        const auto gl2 = gl2_enumerate(mod);
        for (int trial = 0; trial < 250; ++trial) {
            const ProjQuad quad = random_quad(mod);
            const Matrix& a = gl2[residue(static_cast<std::uint32_t>(gl2.size()))];
            const ProjQuad moved({quad[0].image(a), quad[1].image(a), quad[2].image(a), quad[3].image(a)}, mod);
            EXPECT_EQ(cross_ratio(moved), cross_ratio(quad));
        }
    }
}

TEST(Permutations, CycleNotationRoundTrips)
{
    EXPECT_EQ(parse_cycles("()"), kIdentityPerm);
    EXPECT_EQ(parse_cycles("(PQ)"), (Perm4{1, 0, 2, 3}));
    EXPECT_EQ(parse_cycles("(PQRS)"), (Perm4{1, 2, 3, 0}));
    for (const auto& row : relabel_rows()) {
        for (const auto text : row.permutations) {
            EXPECT_EQ(cycle_string(parse_cycles(text)), text);
        }
    }
    EXPECT_ORBITALS_ERROR(parse_cycles("(PP)"), InvalidConfig);
    EXPECT_ORBITALS_ERROR(parse_cycles("(PX)"), InvalidConfig);
    EXPECT_ORBITALS_ERROR(parse_cycles("PQ"), InvalidConfig);
}

TEST(Permutations, RelabellingTwiceComposes)
{
    const PrimeModulus mod(13);
    const ProjQuad quad({fin(2), fin(5), kInf, fin(9)}, mod);
    const Perm4 s = parse_cycles("(PQS)");
    const Perm4 t = parse_cycles("(PR)");
    EXPECT_EQ(permute_quad(permute_quad(quad, s), t).points(), permute_quad(quad, compose(t, s)).points());
}

TEST(RelabelTable, KnownRows)
{
    const PrimeModulus mod(13);
    const ProjValue r = fin(5);
    EXPECT_EQ(permuted_cross_ratio(kIdentityPerm, r, mod), r);
    EXPECT_EQ(permuted_cross_ratio(parse_cycles("(PQ)"), r, mod), fin(mod.inv(5)));
    EXPECT_EQ(permuted_cross_ratio(parse_cycles("(PQS)"), r, mod), fin(mod.inv(mod.sub(1, 5))));
    EXPECT_EQ(permuted_cross_ratio(parse_cycles("(PS)"), r, mod), fin(mod.sub(1, 5)));
    EXPECT_EQ(relabel_form(parse_cycles("(PSRQ)")), CrossRatioForm::ROverRMinusOne);
    EXPECT_EQ(relabel_form(parse_cycles("(QSR)")), CrossRatioForm::RMinusOneOverR);
}

TEST(RelabelTable, ExplicitRelabellingOfStandardQuad)
{
    // With (P,Q,R,S) = (inf, 0, 1, t) the cross-ratio is t; relabelling by
    // (PQS) gives (0, t, 1, inf) whose cross-ratio is 1/(1-t) by hand.
    const PrimeModulus mod(11);
    const ProjQuad quad({kInf, fin(0), fin(1), fin(4)}, mod);
    const ProjQuad moved = permute_quad(quad, parse_cycles("(PQS)"));
    EXPECT_EQ(moved.points(), (std::array<ProjValue, 4>{fin(0), fin(4), fin(1), kInf}));
    EXPECT_EQ(cross_ratio(moved), fin(mod.inv(mod.sub(1, 4))));
}

TEST(RelabelTable, ExhaustiveOverSmallPrimes)
{
    for (const std::uint64_t p : {5, 7, 11, 13}) {
        const auto report = verify_relabel_table(PrimeModulus(static_cast<std::int64_t>(p)));
        EXPECT_EQ(report.quads, (p + 1) * p * (p - 1) * (p - 2));
        EXPECT_EQ(report.checks, 24 * report.quads);
    }
}

TEST(RelabelTable, SixValueOrbit)
{
    const PrimeModulus mod(17);
    for (std::uint32_t r0 = 2; r0 < 17; ++r0) {
        std::set<ProjValue> orbit = {fin(r0)};
        std::vector<ProjValue> frontier = {fin(r0)};
        while (!frontier.empty()) {
            const ProjValue r = frontier.back();
            frontier.pop_back();
            for (const auto form : {CrossRatioForm::Reciprocal, CrossRatioForm::OneMinusR}) {
                const ProjValue next = apply_form(form, r, mod);
                if (orbit.insert(next).second) {
                    frontier.push_back(next);
                }
            }
        }
        std::set<ProjValue> table_values;
        for (const auto& row : relabel_rows()) {
            table_values.insert(apply_form(row.form, fin(r0), mod));
        }
        EXPECT_LE(orbit.size(), 6u);
        EXPECT_EQ(orbit, table_values);
    }
}

TEST(KleinFour, Membership)
{
    EXPECT_TRUE(klein_four_classifier(kIdentityPerm));
    EXPECT_TRUE(klein_four_classifier(parse_cycles("(PQ)(RS)")));
    EXPECT_TRUE(klein_four_classifier(parse_cycles("(PS)(QR)")));
    EXPECT_FALSE(klein_four_classifier(parse_cycles("(PQ)")));
    EXPECT_FALSE(klein_four_classifier(parse_cycles("(PQRS)")));
    int count = 0;
    for (const auto& row : relabel_rows()) {
        for (const auto text : row.permutations) {
            count += klein_four_classifier(parse_cycles(text)) ? 1 : 0;
            EXPECT_EQ(klein_four_classifier(parse_cycles(text)), row.form == CrossRatioForm::R);
        }
    }
    EXPECT_EQ(count, 4);
}

TEST(LambdaQuad, CrossRatioFormula)
{
    for (const int p : {5, 7, 13, 17}) {
        const PrimeModulus mod(p);
        int valid = 0;
        for (std::uint32_t l = 1; l < mod.value(); ++l) {
            const FpElement lambda(l, mod);
            const FpElement l4 = fp_pow(lambda, 4);
            if (l4.value() == 1) {
                EXPECT_ORBITALS_ERROR(lambda_quad(lambda), DegenerateLambda);
                continue;
            }
            ++valid;
            // Oracle: the explicit product (1/l - l)(-1/l + l) / ((1/l + l)(-1/l - l)).
            const FpElement inv = fp_inv(lambda);
            const FpElement expected = ((inv - lambda) * (-inv + lambda)) / ((inv + lambda) * (-inv - lambda));
            EXPECT_EQ(lambda_cross_ratio(lambda), expected);
            EXPECT_EQ(cross_ratio(lambda_quad(lambda)), fin(expected.value()));
        }
        EXPECT_EQ(valid, p % 4 == 1 ? p - 5 : p - 3);
    }
}

TEST(V4Collineations, EachMatrixInducesItsPermutation)
{
    for (const int p : {5, 7, 13, 17}) {
        const PrimeModulus mod(p);
        const auto report = verify_v4_collineations(mod);
        EXPECT_EQ(report.checks, 4 * report.lambdas);
        // Every nonzero lambda has lambda^4 = 1 when p = 5.
        EXPECT_EQ(report.lambdas == 0, p == 5);
    }
}

TEST(V4Collineations, D8InducesExactlyTheKleinFourGroup)
{
    // Scalar multiples of the same matrix induce the same relabelling, so D8
    // (which contains -I) yields each element of V4 twice.
    const PrimeModulus mod(13);
    for (std::uint32_t l : {2u, 3u, 4u}) {
        std::multiset<Perm4> induced;
        for (const auto& g : d8_elements(mod).elements) {
            const auto s = induced_permutation(g, FpElement(l, mod));
            ASSERT_TRUE(s.has_value());
            EXPECT_TRUE(klein_four_classifier(*s));
            induced.insert(*s);
        }
        EXPECT_EQ(induced.size(), 8u);
        EXPECT_EQ(induced.count(kIdentityPerm), 2u);
    }
    EXPECT_FALSE(induced_permutation(Matrix::from_ints(2, 2, {1, 1, 0, 1}, mod), FpElement(2, mod)).has_value());
}
