#pragma once

/**
 * @file cross_ratio.hpp
 * @brief Cross-ratios on PG(1,p) and how they move under relabelling.
 *
 * A point of the line is a parameter in GF(p) u {inf}, represented by
 * ProjPoint (finite slope t stands for t, infinity for inf). The cross-ratio
 * R(A,B;C,D) = (C-A)(D-B) / ((C-B)(D-A)) is evaluated on homogeneous lifts
 * t -> (1, t), inf -> (0, 1) as det(A,C) det(B,D) / (det(B,C) det(A,D)),
 * so the infinity conventions need no special cases.
 */

#include "orbitals/linalg.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orbitals {

using ProjValue = ProjPoint;

/// Value num/den as a point of GF(p) u {inf}; 0/0 throws DegenerateQuad.
ProjValue proj_value(std::uint32_t num, std::uint32_t den, PrimeModulus mod);

class ProjQuad {
public:
    /// Throws DegenerateQuad unless the four parameters are pairwise distinct.
    ProjQuad(std::array<ProjValue, 4> points, PrimeModulus mod);

    [[nodiscard]] const ProjValue& operator[](std::size_t k) const { return points_[k]; }
    [[nodiscard]] const std::array<ProjValue, 4>& points() const noexcept { return points_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }

private:
    std::array<ProjValue, 4> points_;
    PrimeModulus mod_;
};

ProjValue cross_ratio(const ProjQuad& quad);

/// A relabelling of P, Q, R, S (indices 0..3): perm[k] is the image of label k.
using Perm4 = std::array<std::uint8_t, 4>;

inline constexpr Perm4 kIdentityPerm = {0, 1, 2, 3};

/// Parses cycle notation over the letters P, Q, R, S, e.g. "(PQ)(RS)" or "()".
Perm4 parse_cycles(std::string_view text);
std::string cycle_string(const Perm4& perm);
Perm4 compose(const Perm4& first, const Perm4& second);

/// Element k of the result is quad[perm[k]], i.e. (P^s, Q^s, R^s, S^s).
ProjQuad permute_quad(const ProjQuad& quad, const Perm4& perm);

enum class CrossRatioForm { R, ROverRMinusOne, OneMinusR, Reciprocal, OneOverOneMinusR, RMinusOneOverR };

std::string_view form_name(CrossRatioForm form);
ProjValue apply_form(CrossRatioForm form, const ProjValue& r, PrimeModulus mod);

struct RelabelRow {
    CrossRatioForm form;
    std::array<std::string_view, 4> permutations;
};

/// The six rows relating r = R(P,Q;R,S) to the cross-ratio of the relabelled points.
const std::array<RelabelRow, 6>& relabel_rows();

/// Row lookup over all 24 permutations. The map is validated on first use:
/// every permutation appears exactly once and f(s then t) = f(t) o f(s).
/// Throws TableViolation otherwise.
CrossRatioForm relabel_form(const Perm4& perm);

ProjValue permuted_cross_ratio(const Perm4& perm, const ProjValue& r, PrimeModulus mod);

struct RelabelReport {
    std::uint64_t quads;
    std::uint64_t checks;
};

/// Every ordered quad of distinct points of PG(1,p) under all 24 relabellings.
/// Throws TableViolation on the first mismatch.
RelabelReport verify_relabel_table(PrimeModulus p);

bool klein_four_classifier(const Perm4& perm);

/// The quad (lambda, -lambda, 1/lambda, -1/lambda); DegenerateLambda if lambda^4 is 0 or 1.
ProjQuad lambda_quad(FpElement lambda);

/// (lambda^2 - 1)^2 / (lambda^2 + 1)^2, evaluated directly.
FpElement lambda_cross_ratio(FpElement lambda);

struct V4Collineation {
    Perm4 sigma;
    Matrix m;
};

/// The four matrices of D8 that realise the Klein four-group on (P, Q, R, S).
std::vector<V4Collineation> v4_collineations(PrimeModulus p);

/// The relabelling of lambda_quad(lambda) induced by v -> v * M, or nullopt if
/// M does not permute the four points.
std::optional<Perm4> induced_permutation(const Matrix& m, FpElement lambda);

struct V4Report {
    std::uint64_t lambdas;
    std::uint64_t checks;
};

/// For each valid lambda: every listed M lies in D8 and induces its sigma.
/// Throws TableViolation otherwise.
V4Report verify_v4_collineations(PrimeModulus p);

}  // namespace orbitals
