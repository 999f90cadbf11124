#pragma once

/**
 * @file stabilizer.hpp
 * @brief Setwise stabilizers in GL(2,p) and the certificates built on them:
 *        2-closure for p in {5,7,13}, non-representability by digraphs for the
 *        same primes, rigidity of Gamma_1 u Gamma_2 at p = 17 and the
 *        lambda-obstruction scan over primes.
 *
 * A matrix stabilizer of a union of lines always contains the scalars, so
 * comparisons with D8 are made after reducing modulo scalars: each projective
 * class {kA} is represented by the pair {R, -R}, where R is its D8 member if
 * it has one and otherwise the multiple whose first nonzero entry is 1. A
 * stabilizer "equals D8" when this reduced set is exactly the 8 elements of D8.
 */

#include "orbitals/cayley.hpp"
#include "orbitals/certificate.hpp"
#include "orbitals/clique.hpp"
#include "orbitals/group.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbitals {

/// A set of points of PG(1,p), realized as the nonzero vectors on those lines.
class DirectionSet {
public:
    /// Sorted and deduplicated; InvalidConfig when empty.
    DirectionSet(std::vector<ProjPoint> points, PrimeModulus p);
    /// -1 stands for infinity, as in slope_list(); other values are reduced mod p.
    static DirectionSet from_slopes(const std::vector<std::int64_t>& slopes, PrimeModulus p);
    /// Union of label_directions over the labels.
    static DirectionSet from_labels(const std::vector<SuborbitLabel>& labels, PrimeModulus p);

    [[nodiscard]] const std::vector<ProjPoint>& points() const noexcept { return points_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    /// The nonzero vectors on the lines, sorted.
    [[nodiscard]] std::vector<VVector> realized() const;
    [[nodiscard]] bool contains(const VVector& v) const;
    [[nodiscard]] bool is_d8_closed() const;
    /// Slopes as integers with infinity rendered as -1 (for reports).
    [[nodiscard]] std::vector<std::int64_t> slope_list() const;

private:
    std::vector<ProjPoint> points_;
    PrimeModulus mod_;
};

struct StabilizerResult {
    std::vector<Matrix> elements;  // sorted
    std::uint64_t matrices_checked;
    std::uint64_t closure_products_checked;
};

inline constexpr std::uint64_t kClosureProductBudget = 4'000'000;

/// Every A in GL(2,p) with realized^A = realized, by enumerating GL(2,p) and
/// testing each realized vector. The result is checked to be closed under
/// inverses and under products (all pairs while |S|^2 <= kClosureProductBudget,
/// a seeded sample of that many pairs otherwise); CertificationFailed if not.
/// ParameterTooLarge for p > 200.
StabilizerResult setwise_stabilizer_gl2(const DirectionSet& ds);

std::vector<Matrix> intersect_sorted(const std::vector<Matrix>& a, const std::vector<Matrix>& b);

/// The +-representatives of the projective classes of `elements`, sorted.
/// CertificationFailed unless every class appears with all p-1 scalar multiples.
std::vector<Matrix> reduce_mod_scalars(const std::vector<Matrix>& elements);

/// True iff the reduced set is exactly D8.
bool equals_d8_mod_scalars(const std::vector<Matrix>& elements);

/// One row of the witness manifest: a linear map A o I preserving the union.
/// `correction` is set on rows whose listed matrix is known not to preserve it.
struct ManifestEntry {
    std::uint32_t p;
    std::vector<SuborbitLabel> labels;
    Matrix a;
    std::optional<Matrix> correction;
};

/// The listed matrix of a manifest row passes preserves_set and fails g0_contains.
bool manifest_row_verifies(const ManifestEntry& entry, std::size_t m = 2);

/// Witness matrices for p in {5, 7, 13}, parsed from the embedded manifest.
const std::vector<ManifestEntry>& witness_manifest();

/// Stable name of a union, e.g. "A+L1" or "L1+L2+L3+L5".
std::string union_key(const std::vector<SuborbitLabel>& labels);

enum class WitnessKind { Linear, Hamming, GlGlOnB, ComplementRef };

std::string_view witness_kind_name(WitnessKind kind);

struct UnionWitness {
    std::vector<SuborbitLabel> labels;
    WitnessKind kind;
    /// How the witness was obtained: "manifest", "manifest-correction",
    /// "hamming", "shear", "reuse:<key>" for Delta_B-augmented unions,
    /// "complement:<key>".
    std::string source;
    std::optional<Matrix> matrix;  // set for linear witnesses
    std::optional<Matrix> rejected;  // listed manifest matrix that failed verification
    std::optional<std::pair<ProjPoint, ProjPoint>> hamming_dirs;
    std::uint64_t arcs_checked = 0;  // exhaustive arc checks for permutation witnesses
};

/// A verified witness automorphism outside G for every proper nonempty union
/// of nontrivial orbitals, each listed once in a fixed order. Linear witnesses
/// pass preserves_set and fail g0_contains; permutation witnesses pass an
/// exhaustive arc check and fail additivity. CertificationFailed names the
/// first union left without a witness. Requires p in {5,7,13} (InvalidConfig)
/// and p^(2m) <= 10^6 (ParameterTooLarge).
std::vector<UnionWitness> resolve_union_witnesses(std::uint32_t p, std::size_t m);

Certificate certify_not_digraph_group(std::uint32_t p, std::size_t m);

/// The mu-configuration and the pair of direction sets used for p in {5,7,13}.
struct TwoClosedRecipe {
    std::vector<std::uint32_t> mus;
    std::vector<SuborbitLabel> mu_labels;  // the suborbits whose union is Delta
    std::string first_name;
    DirectionSet first;
    std::string second_name;
    DirectionSet second;
};

TwoClosedRecipe two_closed_recipe(std::uint32_t p);

/// Clique axioms for the mu-configuration, then the stabilizer intersection
/// of the two direction sets. The evidence records whether that pair alone
/// reduces to D8 ("pair_equals_d8"); if not, direction sets of the other
/// suborbits are intersected in until it does, and CertificationFailed is
/// thrown if even all of them leave more than D8.
Certificate certify_two_closed(std::uint32_t p, std::size_t m, std::uint64_t seed = kDefaultSeed,
                               std::uint64_t samples = kDefaultSamples);

inline const std::vector<std::uint32_t> kQ17Mus = {1, 2, 8, 9, 15, 16};

/// Stabilizer of the directions first, then the match with the directions of
/// Delta_1 u Delta_2, then the clique axioms.
Certificate certify_q17(std::size_t m, std::uint64_t seed = kDefaultSeed, std::uint64_t samples = kDefaultSamples);
Certificate certify_q17(std::size_t m, const std::vector<std::uint32_t>& mus, std::uint64_t seed = kDefaultSeed,
                        std::uint64_t samples = kDefaultSamples);

/// (lambda^4 + 1, lambda^4 + 6 lambda^2 + 1, lambda^4 - 6 lambda^2 + 1, lambda^8 + 14 lambda^4 + 1).
std::array<FpElement, 4> lambda_obstructions(FpElement lambda);
std::array<std::int64_t, 4> lambda_obstructions_integer(std::int64_t lambda);

/// Some entry of the integer obstruction list is divisible by p.
bool obstructed_mod(std::int64_t lambda, std::uint32_t p);

struct ScanResult {
    std::uint32_t max_prime;
    std::vector<std::uint32_t> primes;
    std::vector<std::uint32_t> both_obstructed;
    std::vector<std::uint32_t> rigid_via_lambda2;  // checked primes where lambda = 2 is clean
    std::vector<std::uint32_t> rigid_via_lambda4;  // checked primes where only lambda = 4 is clean
};

inline constexpr std::uint32_t kScanLimit = 10'000;

/// Classifies every prime <= max_p. ScanViolation if some prime outside
/// {5, 7, 13, 17} has both lambda = 2 and lambda = 4 obstructed, or if the
/// residue-level and integer-level computations disagree.
ScanResult scan_obstructions(std::uint32_t max_p);
Certificate scan_primes(std::uint32_t max_p);

}  // namespace orbitals
