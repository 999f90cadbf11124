#include "orbitals/group.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace orbitals;
using orbitals::testing::residue;

namespace {

Matrix random_invertible(std::size_t n, PrimeModulus mod)
{
    for (;;) {
        Matrix a(n, n, mod);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                a.set(r, c, residue(mod.value()));
            }
        }
        if (!mat_det(a).is_zero()) {
            return a;
        }
    }
}

/// Oracle for m = 2: label from the 2x2 determinant and the column ratio.
std::string label_by_minors(const Tensor& x)
{
    const PrimeModulus mod = x.modulus();
    if (x.is_zero()) {
        return "zero";
    }
    const std::uint32_t det = mod.sub(mod.mul(x.raw(0, 0), x.raw(1, 1)), mod.mul(x.raw(0, 1), x.raw(1, 0)));
    if (det != 0) {
        return "B";
    }
    const std::size_t col = (x.raw(0, 0) != 0 || x.raw(1, 0) != 0) ? 0 : 1;
    const std::uint32_t top = x.raw(0, col);
    const std::uint32_t bottom = x.raw(1, col);
    if (top == 0 || bottom == 0) {
        return "A";
    }
    const std::uint32_t slope = mod.mul(bottom, mod.inv(top));
    std::uint32_t best = slope;
    for (const std::uint32_t c : {mod.neg(slope), mod.inv(slope), mod.neg(mod.inv(slope))}) {
        best = std::min(best, c);
    }
    return "L" + std::to_string(best);
}

}  // namespace

TEST(D8, HasTheEightSignedMonomialMatrices)
{
    for (const auto p : {5, 7, 13, 17}) {
        const PrimeModulus mod(p);
        const D8Group d8 = d8_elements(mod);
        std::set<Matrix> expected;
        for (const std::int64_t s : {1, -1}) {
            for (const std::int64_t t : {1, -1}) {
                expected.insert(Matrix::from_ints(2, 2, {s, 0, 0, t}, mod));
                expected.insert(Matrix::from_ints(2, 2, {0, s, t, 0}, mod));
            }
        }
        EXPECT_EQ(std::set<Matrix>(d8.elements.begin(), d8.elements.end()), expected);
        EXPECT_EQ(d8.elements.size(), 8u);
    }
}

TEST(D8, OrbitsOfBasisVectors)
{
    const PrimeModulus mod(5);
    const auto orbit = orbit_under_d8(VVector{1, 0}, mod);
    const std::set<VVector> expected = {{1, 0}, {4, 0}, {0, 1}, {0, 4}};
    EXPECT_EQ(orbit, expected);
    const auto pairs = orbit_under_d8(VVectorPair{VVector{1, 0}, VVector{0, 1}}, mod);
    EXPECT_EQ(pairs.size(), 8u);
}

TEST(G0, MembershipIgnoresScalarsAndB)
{
    const PrimeModulus mod(13);
    const Matrix swap = Matrix::from_ints(2, 2, {0, 1, 1, 0}, mod);
    EXPECT_TRUE(g0_contains(LinPart{swap.scaled(5), random_invertible(2, mod)}));
    EXPECT_FALSE(g0_contains(LinPart::with_identity(Matrix::from_ints(2, 2, {1, 1, 5, -5}, mod), 2)));
    EXPECT_FALSE(g0_contains(LinPart::with_identity(Matrix::from_ints(2, 2, {1, 0, 0, 2}, mod), 2)));
}

TEST(G0, MembershipCountOverGl2)
{
    // |D8 . Z| = 8 (p - 1) / 2 since -I already lies in D8.
    for (const auto p : {5, 7, 13}) {
        const PrimeModulus mod(p);
        std::size_t count = 0;
        for (const auto& a : gl2_enumerate(mod)) {
            count += g0_contains(LinPart::with_identity(a, 2)) ? 1 : 0;
        }
        EXPECT_EQ(count, 4u * (p - 1)) << p;
    }
}

TEST(LinPart, EquivalenceUnderRescaling)
{
    const PrimeModulus mod(7);
    const Matrix a = random_invertible(2, mod);
    const Matrix b = random_invertible(3, mod);
    EXPECT_TRUE((LinPart{a, b}).equivalent(LinPart{a.scaled(3), b.scaled(mod.inv(3))}));
    EXPECT_FALSE((LinPart{a, b}).equivalent(LinPart{a.scaled(3), b}));
}

TEST(SuborbitLabel, SerializationRoundTrips)
{
    for (const auto& text : {"zero", "A", "B", "L1", "L12"}) {
        EXPECT_EQ(SuborbitLabel::parse(text).to_string(), text);
    }
    EXPECT_ORBITALS_ERROR(SuborbitLabel::parse("L"), InvalidConfig);
    EXPECT_ORBITALS_ERROR(SuborbitLabel::parse("L0"), InvalidConfig);
    EXPECT_ORBITALS_ERROR(SuborbitLabel::parse("C"), InvalidConfig);
    EXPECT_ORBITALS_ERROR(SuborbitLabel::a().lambda_value(), InvalidConfig);
}

TEST(Lambda, CanonicalRepresentative)
{
    const PrimeModulus mod(13);
    EXPECT_EQ(canonical_lambda(FpElement(11, mod)).value(), 2u);
    EXPECT_EQ(canonical_lambda(FpElement(8, mod)).value(), 5u);
    EXPECT_EQ(canonical_lambda(FpElement(12, mod)).value(), 1u);
    EXPECT_ORBITALS_ERROR(canonical_lambda(FpElement(0, mod)), ZeroLambda);
}

TEST(Lambda, CanonicalIsIdempotentAndClassConstant)
{
    for (const auto p : {5, 7, 11, 13, 17, 19}) {
        const PrimeModulus mod(p);
        for (const auto& cls : lambda_classes(mod)) {
            for (const auto l : cls.members) {
                const FpElement c = canonical_lambda(FpElement(l, mod));
                EXPECT_EQ(c.value(), cls.key);
                EXPECT_EQ(canonical_lambda(c), c);
            }
        }
    }
}

TEST(Lambda, ClassesAt13)
{
    const auto classes = lambda_classes(PrimeModulus(13));
    std::vector<std::vector<std::uint32_t>> members;
    for (const auto& c : classes) {
        members.push_back(c.members);
    }
    const std::vector<std::vector<std::uint32_t>> expected = {{1, 12}, {2, 6, 7, 11}, {3, 4, 9, 10}, {5, 8}};
    EXPECT_EQ(members, expected);
}

TEST(Lambda, ClassesAt5And7And17)
{
    const auto keys = [](int p) {
        std::vector<std::uint32_t> out;
        for (const auto& c : lambda_classes(PrimeModulus(p))) {
            out.push_back(c.key);
        }
        return out;
    };
    EXPECT_EQ(keys(5), (std::vector<std::uint32_t>{1, 2}));
    EXPECT_EQ(keys(7), (std::vector<std::uint32_t>{1, 2}));
    EXPECT_EQ(keys(17), (std::vector<std::uint32_t>{1, 2, 3, 4, 5}));
    EXPECT_EQ(lambda_classes(PrimeModulus(17))[1].members, (std::vector<std::uint32_t>{2, 8, 9, 15}));
}

TEST(Rank, KnownValues)
{
    EXPECT_EQ(rank_of(2, PrimeModulus(5)), 5u);
    EXPECT_EQ(rank_of(2, PrimeModulus(7)), 5u);
    EXPECT_EQ(rank_of(2, PrimeModulus(13)), 7u);
    EXPECT_EQ(rank_of(3, PrimeModulus(13)), 7u);
    EXPECT_EQ(rank_of(2, PrimeModulus(17)), 8u);
}

TEST(Rank, MatchesClassCountFormula)
{
    // Classes {+-l, +-1/l} have size 4 except {+-1} and, when -1 is a
    // square, {+-i}; so the class count is (p - 1 + 2 + 2[p=1 mod 4]) / 4.
    for (const int p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
        const int extra = p % 4 == 1 ? 2 : 0;
        const std::size_t classes = static_cast<std::size_t>((p - 1 + 2 + extra) / 4);
        EXPECT_EQ(rank_of(2, PrimeModulus(p)), 3 + classes) << p;
    }
}

TEST(Suborbits, ClassificationMatchesMinorOracle)
{
    for (const auto p : {5, 7}) {
        const TensorSpace space(2, PrimeModulus(p));
        for (Vertex u = 0; u < space.size(); ++u) {
            const Tensor x = space.decode(u);
            ASSERT_EQ(classify_tensor(x).to_string(), label_by_minors(x)) << u;
        }
    }
}

TEST(Suborbits, PartitionAndSizes)
{
    for (const auto p : {5, 7, 13}) {
        const PrimeModulus mod(p);
        const TensorSpace space(2, mod);
        const std::uint64_t q = space.w_size();
        std::vector<int> owner(space.size(), -1);
        std::uint64_t total = 0;
        std::vector<SuborbitLabel> all = {SuborbitLabel::zero()};
        for (const auto& l : nontrivial_labels(mod)) {
            all.push_back(l);
        }
        for (std::size_t idx = 0; idx < all.size(); ++idx) {
            const auto verts = suborbit_vertices(all[idx], space);
            total += verts.size();
            for (const auto u : verts) {
                ASSERT_EQ(owner[u], -1) << "vertex in two suborbits";
                owner[u] = static_cast<int>(idx);
                ASSERT_EQ(classify_tensor(space.decode(u)), all[idx]);
            }
            const std::size_t dirs = label_directions(all[idx], mod).size();
            switch (all[idx].tag()) {
            case SuborbitLabel::Tag::Zero: EXPECT_EQ(verts.size(), 1u); break;
            case SuborbitLabel::Tag::B: EXPECT_EQ(verts.size(), q * q - 1 - (p + 1) * (q - 1)); break;
            default: EXPECT_EQ(verts.size(), dirs * (q - 1));
            }
        }
        EXPECT_EQ(total, static_cast<std::uint64_t>(space.size())) << p;
    }
}

TEST(Suborbits, ClosedUnderNegation)
{
    const PrimeModulus mod(13);
    const TensorSpace space(2, mod);
    for (const auto& l : nontrivial_labels(mod)) {
        const auto verts = suborbit_vertices(l, space);
        for (const auto u : verts) {
            ASSERT_TRUE(std::binary_search(verts.begin(), verts.end(), space.neg(u)));
        }
    }
}

TEST(Suborbits, LambdaOneAt5Has48Elements)
{
    EXPECT_EQ(suborbit_elements(SuborbitLabel::lambda(1), 2, PrimeModulus(5)).size(), 48u);
}

TEST(Suborbits, LabelDirections)
{
    const PrimeModulus mod(7);
    EXPECT_EQ(label_directions(SuborbitLabel::lambda(1), mod),
              (std::vector<ProjPoint>{ProjPoint::finite(1), ProjPoint::finite(6)}));
    EXPECT_EQ(label_directions(SuborbitLabel::a(), mod),
              (std::vector<ProjPoint>{ProjPoint::finite(0), ProjPoint::infinity()}));
    EXPECT_ORBITALS_ERROR(label_directions(SuborbitLabel::lambda(3), mod), InvalidConfig);
}

TEST(G0Action, ClassificationInvariantExhaustiveAt5)
{
    const PrimeModulus mod(5);
    const TensorSpace space(2, mod);
    std::vector<LinPart> sample;
    for (const auto& g : d8_elements(mod).elements) {
        sample.push_back(LinPart{g, random_invertible(2, mod)});
    }
    for (const auto& lin : sample) {
        for (Vertex u = 0; u < space.size(); ++u) {
            const Tensor x = space.decode(u);
            ASSERT_EQ(classify_tensor(lin.apply(x)), classify_tensor(x));
        }
    }
}

TEST(G0Action, ClassificationInvariantRandomAt13)
{
    const PrimeModulus mod(13);
    const auto d8 = d8_elements(mod).elements;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 2 + trial % 2;
        Tensor x(m, mod);
        Matrix grid(2, m, mod);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                grid.set(i, j, residue(13));
            }
        }
        x = Tensor(grid);
        const LinPart lin{d8[residue(8)].scaled(residue(13, 1)), random_invertible(m, mod)};
        ASSERT_EQ(classify_tensor(lin.apply(x)), classify_tensor(x));
    }
}

TEST(G0Action, SameLabelMeansSameOrbitAt5)
{
    const PrimeModulus mod(5);
    const TensorSpace space(2, mod);
    for (const auto& l : nontrivial_labels(mod)) {
        const auto verts = suborbit_vertices(l, space);
        const Tensor x = space.decode(verts.front());
        for (const auto u : verts) {
            const Tensor y = space.decode(u);
            const auto lin = find_g0_element(x, y);
            ASSERT_TRUE(lin.has_value()) << l.to_string() << " " << u;
            EXPECT_TRUE(g0_contains(*lin));
            EXPECT_EQ(lin->apply(x), y);
        }
    }
}

TEST(G0Action, DifferentLabelsAreNotJoined)
{
    const PrimeModulus mod(7);
    const TensorSpace space(2, mod);
    const Tensor a = space.decode(suborbit_vertices(SuborbitLabel::a(), space).front());
    const Tensor b = space.decode(suborbit_vertices(SuborbitLabel::b(), space).front());
    const Tensor l2 = space.decode(suborbit_vertices(SuborbitLabel::lambda(2), space).front());
    EXPECT_FALSE(find_g0_element(a, b).has_value());
    EXPECT_FALSE(find_g0_element(a, l2).has_value());
}
