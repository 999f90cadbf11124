#pragma once

/**
 * @file group.hpp
 * @brief The group G(m,p) = (V (x) W) : (D8 o GL(m,p)) and its suborbits.
 *
 * D8 is generated by diag(1,-1) and the coordinate swap. The point stabilizer
 * G0 = D8 o GL(m,p) has orbits {0}, Delta_A (simple tensors along <e1> or
 * <e2>), Delta_B (non-simple tensors) and Delta_lambda, the simple tensors
 * whose V-factor has slope in {+-lambda, +-lambda^-1}.
 */

#include "orbitals/linalg.hpp"

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace orbitals {

struct D8Group {
    std::vector<Matrix> elements;  // sorted, exactly 8
    PrimeModulus modulus;

    [[nodiscard]] bool contains(const Matrix& a) const;
};

D8Group d8_elements(PrimeModulus p);

/// A o B; two LinParts are equivalent when (A', B') = (kA, k^-1 B).
struct LinPart {
    Matrix a;
    Matrix b;

    [[nodiscard]] static LinPart with_identity(Matrix a, std::size_t m);
    [[nodiscard]] Tensor apply(const Tensor& x) const { return tensor_apply(a, b, x); }
    [[nodiscard]] bool equivalent(const LinPart& other) const;
};

struct AffineElem {
    Tensor translation;
    LinPart linear;

    [[nodiscard]] Tensor apply(const Tensor& x) const { return linear.apply(x) + translation; }
};

using VVector = std::array<std::uint32_t, 2>;
using VVectorPair = std::array<VVector, 2>;

std::set<VVectorPair> orbit_under_d8(const VVectorPair& pair, PrimeModulus p);
std::set<VVector> orbit_under_d8(const VVector& v, PrimeModulus p);

/// True iff k*A lies in D8 for some nonzero k; B never matters.
bool g0_contains(const LinPart& lin);

class SuborbitLabel {
public:
    enum class Tag { Zero, A, B, Lambda };

    static SuborbitLabel zero() { return SuborbitLabel(Tag::Zero, 0); }
    static SuborbitLabel a() { return SuborbitLabel(Tag::A, 0); }
    static SuborbitLabel b() { return SuborbitLabel(Tag::B, 0); }
    /// lambda must already be canonical.
    static SuborbitLabel lambda(std::uint32_t canonical) { return SuborbitLabel(Tag::Lambda, canonical); }
    /// Parses "zero" | "A" | "B" | "L<k>".
    static SuborbitLabel parse(std::string_view text);

    [[nodiscard]] Tag tag() const noexcept { return tag_; }
    [[nodiscard]] std::uint32_t lambda_value() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const SuborbitLabel&, const SuborbitLabel&) = default;
    friend auto operator<=>(const SuborbitLabel&, const SuborbitLabel&) = default;

private:
    SuborbitLabel(Tag tag, std::uint32_t lambda) : tag_(tag), lambda_(lambda) {}
    Tag tag_;
    std::uint32_t lambda_;
};

SuborbitLabel classify_tensor(const Tensor& x);

/// min{lambda, -lambda, lambda^-1, -lambda^-1} as integers; ZeroLambda for 0.
FpElement canonical_lambda(FpElement lambda);

struct LambdaClass {
    std::uint32_t key;
    std::vector<std::uint32_t> members;  // sorted
};

/// Partition of GF(p)* into {+-l, +-l^-1}, sorted by canonical key.
std::vector<LambdaClass> lambda_classes(PrimeModulus p);

/// A, B, then L<key> in key order.
std::vector<SuborbitLabel> nontrivial_labels(PrimeModulus p);

std::size_t rank_of(std::size_t m, PrimeModulus p);

/// The V-directions whose simple tensors make up the label's suborbit:
/// {0, inf} for A and the class members for Lambda. Empty for Zero and B.
std::vector<ProjPoint> label_directions(const SuborbitLabel& label, PrimeModulus p);

/// Sorted vertex indices of a suborbit; requires p^(2m) <= 10^6.
std::vector<Vertex> suborbit_vertices(const SuborbitLabel& label, const TensorSpace& space);
std::vector<Tensor> suborbit_elements(const SuborbitLabel& label, std::size_t m, PrimeModulus p);

/// Some A o B in G0 with x^(A o B) = y, built from D8 and an explicit base
/// change in GL(m,p); nullopt when x and y lie in different suborbits.
std::optional<LinPart> find_g0_element(const Tensor& x, const Tensor& y);

}  // namespace orbitals
