#pragma once

/**
 * @file cayley.hpp
 * @brief Cayley digraphs Cay(V (x) W, S) on the additive group.
 *
 * (x, y) is an arc iff x - y lies in S. Adjacency is never materialized:
 * S is a membership bitmap over the dense vertex numbering.
 */

#include "orbitals/group.hpp"
#include "orbitals/linalg.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace orbitals {

class ConnectionSet {
public:
    /// Throws InvalidConfig if 0 is a member or S is not closed under negation.
    ConnectionSet(TensorSpace space, std::vector<Vertex> members, std::vector<SuborbitLabel> labels = {});

    [[nodiscard]] const TensorSpace& space() const noexcept { return space_; }
    [[nodiscard]] bool contains(Vertex u) const { return bitmap_[u]; }
    [[nodiscard]] std::span<const Vertex> members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] const std::vector<SuborbitLabel>& labels() const noexcept { return labels_; }

    /// Nonzero vertices outside S; labels become the complementary nontrivial labels.
    [[nodiscard]] ConnectionSet complement() const;

    friend bool operator==(const ConnectionSet& a, const ConnectionSet& b) { return a.members_ == b.members_; }

private:
    TensorSpace space_;
    std::vector<Vertex> members_;  // sorted
    std::vector<bool> bitmap_;
    std::vector<SuborbitLabel> labels_;
};

/// Union of the suborbits; EmptyUnion for no labels, InvalidConfig for Zero.
ConnectionSet orbital_union_set(const std::vector<SuborbitLabel>& labels, std::size_t m, PrimeModulus p);

/// (V(x)W with p^(2m) <= 10^6) The nonzero simple tensors along the given directions.
ConnectionSet direction_union_set(const std::vector<ProjPoint>& dirs, const TensorSpace& space);

bool is_arc(Vertex x, Vertex y, const ConnectionSet& s);

/// Breadth-first reachability from 0 with S as steps.
bool is_connected(const ConnectionSet& s);

/// A linear map of V (x) W tabulated on the vertex numbering.
class LinearVertexMap {
public:
    LinearVertexMap(const LinPart& lin, const TensorSpace& space);
    [[nodiscard]] Vertex operator()(Vertex u) const;

private:
    TensorSpace space_;
    std::vector<Residues> basis_images_;  // digits of the image of p^k
};

/// True iff x -> x^(A o B) maps S onto S.
bool preserves_set(const LinPart& lin, const ConnectionSet& s);

class VertexPermutation {
public:
    explicit VertexPermutation(std::vector<Vertex> mapping);
    static VertexPermutation identity(Vertex n);
    static VertexPermutation from_linear(const LinPart& lin, const TensorSpace& space);

    [[nodiscard]] Vertex operator()(Vertex u) const { return mapping_[u]; }
    [[nodiscard]] Vertex size() const noexcept { return static_cast<Vertex>(mapping_.size()); }
    [[nodiscard]] const std::vector<Vertex>& mapping() const noexcept { return mapping_; }
    [[nodiscard]] bool is_permutation() const;
    /// First this, then `next`.
    [[nodiscard]] VertexPermutation then(const VertexPermutation& next) const;
    [[nodiscard]] VertexPermutation inverse() const;

    friend bool operator==(const VertexPermutation&, const VertexPermutation&) = default;

private:
    std::vector<Vertex> mapping_;
};

/// Exhaustive arc check: every arc (x + s, x) maps to an arc. For a bijection
/// of a finite digraph this is equivalent to being an automorphism.
bool is_automorphism(const VertexPermutation& perm, const ConnectionSet& s);

/// Coordinates (a, b) of x = d_X (x) a + d_Y (x) b for a direct sum
/// V (x) W = <d_X> (x) W  +  <d_Y> (x) W.
class HammingCoordinates {
public:
    HammingCoordinates(ProjPoint x_dir, ProjPoint y_dir, const TensorSpace& space);
    /// W-codes (a, b).
    [[nodiscard]] std::pair<std::uint32_t, std::uint32_t> split(Vertex u) const;
    [[nodiscard]] Vertex join(std::uint32_t a, std::uint32_t b) const;

private:
    TensorSpace space_;
    std::array<std::uint32_t, 2> dx_;
    std::array<std::uint32_t, 2> dy_;
    std::array<std::uint32_t, 4> inverse_;  // of the 2x2 matrix with columns d_X, d_Y
};

/// Verifies x -> (pi_X(x), pi_Y(x)) is an isomorphism onto H(2, p^m).
/// BadDecomposition unless S = (X u Y) \ {0} with distinct directions.
bool hamming_check(const ConnectionSet& s, ProjPoint x_dir, ProjPoint y_dir);

struct HammingWitness {
    ProjPoint x_dir;
    ProjPoint y_dir;
    VertexPermutation permutation;
    Vertex nonaffine_u;
    Vertex nonaffine_v;
    std::uint64_t arcs_checked;
};

/// Swaps the W-codes of f1 and 2 f1 in the X-coordinate only. Certified to be
/// an automorphism of Cay(V(x)W, (X u Y)\{0}) that is not affine; throws
/// CertificationFailed otherwise.
HammingWitness hamming_witness(ProjPoint x_dir, ProjPoint y_dir, std::size_t m, PrimeModulus p);

}  // namespace orbitals
