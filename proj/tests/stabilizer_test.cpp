#include "orbitals/stabilizer.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace orbitals;

namespace {

/// Projective images of the points, computed point by point.
std::size_t brute_pgl_stabilizer_order(const std::vector<ProjPoint>& pts, PrimeModulus mod)
{
    const std::set<ProjPoint> target(pts.begin(), pts.end());
    const auto p = mod.value();
    std::size_t count = 0;
    for (std::uint32_t a = 0; a < p; ++a) {
        for (std::uint32_t b = 0; b < p; ++b) {
            for (std::uint32_t c = 0; c < p; ++c) {
                for (std::uint32_t d = 0; d < p; ++d) {
                    if ((static_cast<std::uint64_t>(a) * d + p * p - static_cast<std::uint64_t>(b) * c % p) % p ==
                        0) {
                        continue;
                    }
                    const Matrix m = Matrix::from_ints(2, 2, {a, b, c, d}, mod);
                    std::set<ProjPoint> img;
                    for (const auto& pt : pts) {
                        img.insert(pt.image(m));
                    }
                    if (img == target) {
                        ++count;
                    }
                }
            }
        }
    }
    return count / (p - 1);
}

std::vector<ProjPoint> lambda_points(std::uint32_t lambda, PrimeModulus mod)
{
    const FpElement l(lambda, mod);
    const FpElement one(1, mod);
    std::set<ProjPoint> s;
    for (const FpElement v : {l, -l, one / l, -(one / l)}) {
        s.insert(ProjPoint::finite(v.value()));
    }
    return {s.begin(), s.end()};
}

bool is_prime(std::uint32_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST(DirectionSet, RejectsEmptyAndDeduplicates)
{
    const PrimeModulus mod(7);
    EXPECT_ORBITALS_ERROR(DirectionSet({}, mod), InvalidConfig);
    const auto ds = DirectionSet::from_slopes({3, 3, -1, 10}, mod);
    EXPECT_EQ(ds.points().size(), 2u);
    EXPECT_EQ(ds.realized().size(), 2u * 6u);
    EXPECT_EQ(ds.slope_list(), (std::vector<std::int64_t>{3, -1}));
}

TEST(DirectionSet, D8ClosureOfSuborbitDirections)
{
    for (const int p : {5, 7, 11, 13}) {
        const PrimeModulus mod(p);
        for (const auto& label : nontrivial_labels(mod)) {
            if (label_directions(label, mod).empty()) {
                continue;
            }
            EXPECT_TRUE(DirectionSet::from_labels({label}, mod).is_d8_closed()) << p << " " << label.to_string();
        }
        EXPECT_FALSE(DirectionSet::from_slopes({2}, mod).is_d8_closed());
    }
}

TEST(Stabilizer, ContainsD8AndScalarsForClosedSets)
{
    for (const int p : {5, 7, 11, 13}) {
        const PrimeModulus mod(p);
        for (const auto& label : nontrivial_labels(mod)) {
            if (label_directions(label, mod).empty()) {
                continue;
            }
            const auto st = setwise_stabilizer_gl2(DirectionSet::from_labels({label}, mod));
            for (const auto& d : d8_elements(mod).elements) {
                for (std::uint32_t k = 1; k < static_cast<std::uint32_t>(p); ++k) {
                    EXPECT_TRUE(std::binary_search(st.elements.begin(), st.elements.end(), d.scaled(k)));
                }
            }
            EXPECT_EQ(st.elements.size() % (8 * (p - 1) / 2), 0u);
        }
    }
}

TEST(Stabilizer, AllDirectionsGiveWholeGroup)
{
    const PrimeModulus mod(5);
    std::vector<std::int64_t> all{-1, 0, 1, 2, 3, 4};
    const auto st = setwise_stabilizer_gl2(DirectionSet::from_slopes(all, mod));
    EXPECT_EQ(st.elements.size(), 480u);
    EXPECT_EQ(st.matrices_checked, 480u);
}

TEST(Stabilizer, IsSubgroup)
{
    const PrimeModulus mod(11);
    const auto st = setwise_stabilizer_gl2(DirectionSet::from_slopes({2, 9, 6, 5}, mod));
    const std::set<Matrix> s(st.elements.begin(), st.elements.end());
    for (const auto& a : st.elements) {
        for (const auto& b : st.elements) {
            EXPECT_TRUE(s.count(mat_mul(a, b)));
        }
    }
    EXPECT_GT(st.closure_products_checked, 0u);
}

TEST(Stabilizer, ReductionModScalars)
{
    const PrimeModulus mod(7);
    const auto d8 = d8_elements(mod).elements;
    std::vector<Matrix> with_scalars;
    for (const auto& d : d8) {
        for (std::uint32_t k = 1; k < 7; ++k) {
            with_scalars.push_back(d.scaled(k));
        }
    }
    std::sort(with_scalars.begin(), with_scalars.end());
    with_scalars.erase(std::unique(with_scalars.begin(), with_scalars.end()), with_scalars.end());
    EXPECT_EQ(reduce_mod_scalars(with_scalars), d8);
    EXPECT_TRUE(equals_d8_mod_scalars(with_scalars));
    EXPECT_ORBITALS_ERROR(reduce_mod_scalars({Matrix::identity(2, mod)}), CertificationFailed);
}

TEST(Stabilizer, PgL2OracleMatchesObstruction)
{
    for (std::uint32_t p = 11; p <= 31; ++p) {
        if (!is_prime(p)) {
            continue;
        }
        const PrimeModulus mod(p);
        for (const std::uint32_t lambda : {2u, 3u, 4u}) {
            const FpElement l(lambda, mod);
            const FpElement l4 = l * l * l * l;
            if (l4 == FpElement(1, mod)) {
                continue;
            }
            const auto pts = lambda_points(lambda, mod);
            ASSERT_EQ(pts.size(), 4u);
            const std::size_t pgl = brute_pgl_stabilizer_order(pts, mod);
            const auto st = setwise_stabilizer_gl2(DirectionSet(pts, mod));
            EXPECT_EQ(reduce_mod_scalars(st.elements).size(), 2 * pgl) << p << " " << lambda;
            EXPECT_EQ(pgl > 4, obstructed_mod(lambda, p)) << p << " " << lambda;
        }
    }
}

TEST(Stabilizer, TwoClosedPairsAtFiveAndSeven)
{
    for (const std::uint32_t p : {5u, 7u}) {
        const auto r = two_closed_recipe(p);
        const auto both = intersect_sorted(setwise_stabilizer_gl2(r.first).elements,
                                           setwise_stabilizer_gl2(r.second).elements);
        EXPECT_TRUE(equals_d8_mod_scalars(both)) << p;
    }
    // {0, inf} with {1, 4} is not a pair of suborbit direction sets at p = 7 and leaves a smaller group.
    const PrimeModulus mod(7);
    const auto both = intersect_sorted(setwise_stabilizer_gl2(DirectionSet::from_slopes({0, -1}, mod)).elements,
                                       setwise_stabilizer_gl2(DirectionSet::from_slopes({1, 4}, mod)).elements);
    EXPECT_FALSE(equals_d8_mod_scalars(both));
}

TEST(Stabilizer, ThirteenPairNeedsAThirdSet)
{
    const auto r = two_closed_recipe(13);
    const auto s2 = setwise_stabilizer_gl2(r.first).elements;
    const auto s3 = setwise_stabilizer_gl2(r.second).elements;
    const auto both = intersect_sorted(s2, s3);
    EXPECT_EQ(reduce_mod_scalars(both).size(), 24u);
    const PrimeModulus mod(13);
    const auto sa = setwise_stabilizer_gl2(DirectionSet::from_labels({SuborbitLabel::a()}, mod)).elements;
    EXPECT_TRUE(equals_d8_mod_scalars(intersect_sorted(both, sa)));
}

TEST(TwoClosed, CertificatesVerify)
{
    for (const std::uint32_t p : {5u, 7u, 13u}) {
        const auto cert = certify_two_closed(p, 2);
        EXPECT_EQ(cert.status, CertStatus::Verified);
        const auto& st = cert.evidence.at("stabilizers");
        EXPECT_EQ(st.at("scalar_classes_times_sign"), 8);
        EXPECT_EQ(st.at("pair_equals_d8").get<bool>(), p != 13) << p;
        EXPECT_EQ(st.at("refinement").size(), p == 13 ? 1u : 0u);
    }
    EXPECT_ORBITALS_ERROR(certify_two_closed(11, 2), InvalidConfig);
    EXPECT_ORBITALS_ERROR(certify_two_closed(5, 1), InvalidConfig);
}

TEST(Q17, RigidityCertificate)
{
    const auto cert = certify_q17(2);
    EXPECT_EQ(cert.status, CertStatus::Verified);
    const auto st = setwise_stabilizer_gl2(DirectionSet::from_slopes({1, 2, 8, 9, 15, 16}, PrimeModulus(17)));
    EXPECT_TRUE(equals_d8_mod_scalars(st.elements));
}

TEST(Q17, DroppingAMuValueFails)
{
    EXPECT_ORBITALS_ERROR(certify_q17(2, {1, 2, 8, 9, 15}), CertificationFailed);
    const auto st = setwise_stabilizer_gl2(DirectionSet::from_slopes({1, 2, 8, 9, 15}, PrimeModulus(17)));
    EXPECT_FALSE(equals_d8_mod_scalars(st.elements));
}

TEST(Obstructions, IntegerValues)
{
    EXPECT_EQ(lambda_obstructions_integer(2), (std::array<std::int64_t, 4>{17, 41, -7, 481}));
    EXPECT_EQ(lambda_obstructions_integer(4), (std::array<std::int64_t, 4>{257, 353, 161, 69121}));
    EXPECT_ORBITALS_ERROR(lambda_obstructions_integer(201), ParameterTooLarge);
}

TEST(Obstructions, ResidueLevel)
{
    const PrimeModulus p41(41);
    const auto v = lambda_obstructions(FpElement(3, p41));
    EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](FpElement e) { return e.is_zero(); }));
    EXPECT_ORBITALS_ERROR(lambda_obstructions(FpElement(0, p41)), DegenerateLambda);
    EXPECT_ORBITALS_ERROR(lambda_obstructions(FpElement(4, PrimeModulus(17))), DegenerateLambda);
    EXPECT_TRUE(obstructed_mod(2, 17));
    EXPECT_FALSE(obstructed_mod(4, 17));
    EXPECT_FALSE(obstructed_mod(2, 19));
    EXPECT_FALSE(obstructed_mod(4, 19));
}

TEST(Scan, ExceptionalPrimes)
{
    const auto r = scan_obstructions(500);
    EXPECT_EQ(r.both_obstructed, (std::vector<std::uint32_t>{7, 13}));
    EXPECT_EQ(r.rigid_via_lambda4, (std::vector<std::uint32_t>{37, 41}));
    EXPECT_EQ(r.rigid_via_lambda2.size(), 87u);
    EXPECT_EQ(r.primes.size(), 95u);
    EXPECT_ORBITALS_ERROR(scan_obstructions(kScanLimit + 1), ParameterTooLarge);
}

TEST(Scan, AgreesWithResidueComputation)
{
    const auto r = scan_obstructions(2000);
    const std::set<std::uint32_t> both(r.both_obstructed.begin(), r.both_obstructed.end());
    for (const auto p : r.primes) {
        if (p < 5) {
            continue;
        }
        const PrimeModulus mod(p);
        bool obstructed[2] = {false, false};
        bool degenerate = false;
        for (int i = 0; i < 2; ++i) {
            try {
                const auto v = lambda_obstructions(FpElement(i == 0 ? 2 : 4, mod));
                obstructed[i] = std::any_of(v.begin(), v.end(), [](FpElement e) { return e.is_zero(); });
            } catch (const Error& e) {
                ASSERT_EQ(e.code(), ErrorCode::DegenerateLambda);
                degenerate = true;
            }
        }
        if (!degenerate) {
            EXPECT_EQ(both.count(p) == 1, obstructed[0] && obstructed[1]) << p;
        }
    }
    const auto cert = scan_primes(500);
    EXPECT_EQ(cert.status, CertStatus::Verified);
}

TEST(Unions, CoverageCounts)
{
    const std::map<std::uint32_t, std::size_t> expected{{5, 14}, {7, 14}, {13, 62}};
    for (const auto& [p, n] : expected) {
        const auto ws = resolve_union_witnesses(p, 2);
        EXPECT_EQ(ws.size(), n) << p;
        std::set<std::string> keys;
        for (const auto& w : ws) {
            EXPECT_TRUE(keys.insert(union_key(w.labels)).second);
            EXPECT_EQ(w.hamming_dirs.has_value(), w.kind == WitnessKind::Hamming);
            if (w.kind == WitnessKind::Linear || w.kind == WitnessKind::GlGlOnB) {
                ASSERT_TRUE(w.matrix.has_value());
            }
            if (w.matrix) {
                EXPECT_FALSE(g0_contains(LinPart::with_identity(*w.matrix, 2)));
            }
        }
    }
    EXPECT_ORBITALS_ERROR(resolve_union_witnesses(11, 2), InvalidConfig);
}

TEST(Manifest, ListedRows)
{
    std::map<std::uint32_t, std::size_t> rows;
    std::vector<std::string> failing;
    for (const auto& e : witness_manifest()) {
        ++rows[e.p];
        if (!manifest_row_verifies(e)) {
            failing.push_back(std::to_string(e.p) + ":" + union_key(e.labels));
            ASSERT_TRUE(e.correction.has_value());
            ManifestEntry fixed = e;
            fixed.a = *e.correction;
            EXPECT_TRUE(manifest_row_verifies(fixed));
        }
    }
    EXPECT_EQ(rows[5], 3u);
    EXPECT_EQ(rows[7], 4u);
    EXPECT_EQ(rows[13], 15u);
    EXPECT_EQ(failing, (std::vector<std::string>{"7:L2", "13:L1+L2+L3"}));
}

TEST(NotDigraphGroup, Certificates)
{
    for (const std::uint32_t p : {5u, 7u, 13u}) {
        const auto cert = certify_not_digraph_group(p, 2);
        EXPECT_EQ(cert.status, CertStatus::Verified);
        EXPECT_EQ(cert.evidence.at("manifest_corrections").size(), p == 5 ? 0u : 1u);
    }
}
