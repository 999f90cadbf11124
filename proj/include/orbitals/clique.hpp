#pragma once

/**
 * @file clique.hpp
 * @brief Projection coordinates pi_i, the coset cliques l_i(x) and a
 *        brute-force check of the clique lemmas for Gamma = Cay(V (x) W, Delta),
 *        Delta = {(e1 + mu_i e2) (x) w : i in I, w != 0}.
 *
 * Indices i run over I = {1, ..., z} as in the usual presentation; they pair
 * up as (1,2), (3,4), (5,6). For the pair (i, i') every x splits uniquely as
 * (e1 + mu_i e2) (x) pi_i(x) + (e1 + mu_i' e2) (x) pi_i'(x).
 */

#include "orbitals/cayley.hpp"
#include "orbitals/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbitals {

class MuConfig {
public:
    /// Throws DegenerateConfig unless z = |mus| is 4 or 6 and the mus are distinct.
    MuConfig(std::vector<std::uint32_t> mus, std::size_t m, PrimeModulus p);
    static MuConfig from_ints(const std::vector<std::int64_t>& mus, std::size_t m, PrimeModulus p);

    [[nodiscard]] std::size_t z() const noexcept { return mus_.size(); }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] const std::vector<std::uint32_t>& mus() const noexcept { return mus_; }
    /// mu_i for i in I; IndexOutOfRange otherwise.
    [[nodiscard]] std::uint32_t mu(std::size_t i) const;
    /// The other member of i's pair.
    [[nodiscard]] std::size_t partner(std::size_t i) const;
    [[nodiscard]] std::vector<ProjPoint> directions() const;

private:
    std::vector<std::uint32_t> mus_;
    std::size_t m_;
    PrimeModulus mod_;
};

using ProjectionVector = Residues;

ProjectionVector pi_projection(const Tensor& x, std::size_t i, const MuConfig& cfg);

struct Kappa {
    FpElement k1;
    FpElement k2;
};

/// (k1, k2) with pi_k(x) = k1 pi_i(x) + k2 pi_j(x) for every x; i != j.
Kappa projection_coeffs(std::size_t i, std::size_t j, std::size_t k, const MuConfig& cfg);

/// The unique x with pi_i(x) = w and pi_j(x) = w2, assembled from pi_1 and pi_2.
Tensor tensor_from_projections(std::size_t i, std::size_t j, const ProjectionVector& w, const ProjectionVector& w2,
                               const MuConfig& cfg);

/// Delta for the configuration as a connection set (needs p^(2m) <= 10^6).
ConnectionSet mu_connection_set(const MuConfig& cfg);

struct CliqueId {
    std::size_t i;
    Vertex rep;
};

/// l_i(rep) = rep + <e1 + mu_i' e2> (x) W, sorted.
std::vector<Vertex> ell_clique(const CliqueId& id, const MuConfig& cfg);

inline constexpr Vertex kFullEnumerationLimit = 10'000;

/// All maximal cliques with at least `target` vertices (Bron-Kerbosch with
/// pivoting, pruned when |R| + |P| < target). Each clique is sorted and the
/// list is sorted. ParameterTooLarge above kFullEnumerationLimit vertices.
std::vector<std::vector<Vertex>> enumerate_size_cliques(const ConnectionSet& s, std::size_t target);

enum class CheckMode { Exhaustive, Sampled };

std::string_view check_mode_name(CheckMode mode);

struct LemmaCheck {
    std::string lemma;
    CheckMode mode;
    std::uint64_t instances_checked;
};

struct CliqueCensus {
    std::uint64_t cliques;
    std::uint64_t clique_size;
};

struct CliqueAxiomReport {
    CheckMode mode;
    std::uint64_t seed;
    std::vector<LemmaCheck> checks;
    std::optional<CliqueCensus> census;  // full mode only
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr std::uint64_t kDefaultSamples = 100'000;

/// Names accepted by verify_clique_lemma, in the order they are checked.
const std::vector<std::string>& clique_lemma_names();

/// Exhaustive when m = 2 and p^4 <= 10^4, otherwise sampled with `samples`
/// seeded instances per lemma. Requires p > z (DegenerateConfig otherwise).
/// Throws LemmaViolation naming the lemma and a counterexample.
CliqueAxiomReport verify_clique_axioms(const MuConfig& cfg, std::uint64_t seed = kDefaultSeed,
                                       std::uint64_t samples = kDefaultSamples);

/// A single lemma from clique_lemma_names(); InvalidConfig for unknown names.
LemmaCheck verify_clique_lemma(const std::string& name, const MuConfig& cfg, std::uint64_t seed = kDefaultSeed,
                               std::uint64_t samples = kDefaultSamples);

}  // namespace orbitals
