#pragma once

/**
 * @file linalg.hpp
 * @brief Dense matrices over GF(p), the tensor space V (x) W and its vertex
 *        numbering.
 *
 * Conventions used throughout the library:
 *  - Matrices act on row vectors from the right: v^A = v * A.
 *  - A tensor x in V (x) W (dim V = 2, dim W = m) is stored as a 2 x m grid X
 *    where X(i, j) is the coefficient of e_i (x) f_j.
 *  - The action of A o B on x is Y = A^T * X * B.
 *  - Vertex numbering: x <-> sum_k X_k p^k with k = i*m + j (row-major,
 *    e_1-row first), a dense index in [0, p^(2m)).
 */

#include "orbitals/field.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace orbitals {

using Residues = std::vector<std::uint32_t>;

class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, PrimeModulus mod);

    static Matrix identity(std::size_t n, PrimeModulus mod);
    /// Row-major signed entries, each reduced mod p.
    static Matrix from_ints(std::size_t rows, std::size_t cols, std::initializer_list<std::int64_t> entries,
                            PrimeModulus mod);
    static Matrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, PrimeModulus mod);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }

    [[nodiscard]] std::uint32_t raw(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint32_t v) { data_[r * cols_ + c] = v % mod_.value(); }
    [[nodiscard]] FpElement at(std::size_t r, std::size_t c) const { return {raw(r, c), mod_}; }
    [[nodiscard]] std::span<const std::uint32_t> data() const noexcept { return data_; }

    [[nodiscard]] Matrix scaled(std::uint32_t k) const;
    [[nodiscard]] Matrix transposed() const;
    [[nodiscard]] bool is_zero() const noexcept;

    /// Signed rendering, e.g. "[[1,1],[1,-1]]" style rows of residues.
    [[nodiscard]] std::vector<std::vector<std::int64_t>> to_rows() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;
    friend auto operator<=>(const Matrix& a, const Matrix& b)
    {
        return std::tie(a.rows_, a.cols_, a.data_) <=> std::tie(b.rows_, b.cols_, b.data_);
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    PrimeModulus mod_;
    Residues data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_inv(const Matrix& a);
std::size_t mat_rank(const Matrix& a);
/// Determinant of a square matrix by elimination.
FpElement mat_det(const Matrix& a);
/// Row vector times matrix.
Residues vec_mul(std::span<const std::uint32_t> v, const Matrix& a);

inline constexpr std::uint32_t kGl2EnumerationLimit = 200;

/// Every invertible 2x2 matrix, lexicographic in (a, b, c, d). p <= 200.
std::vector<Matrix> gl2_enumerate(PrimeModulus p);
/// Streaming variant; the callback receives a scratch matrix that is reused.
void for_each_gl2(PrimeModulus p, const std::function<void(const Matrix&)>& visit);

/// A point of PG(1, p): <e1 + slope*e2> for finite slopes, <e2> at infinity.
class ProjPoint {
public:
    static ProjPoint finite(std::uint32_t slope) { return ProjPoint(slope); }
    static ProjPoint infinity() { return ProjPoint(); }
    /// Normalizes a nonzero vector (x, y) of V; throws ZeroTensor for 0.
    static ProjPoint from_vector(std::uint32_t x, std::uint32_t y, PrimeModulus mod);

    [[nodiscard]] bool is_infinity() const noexcept { return !slope_.has_value(); }
    [[nodiscard]] std::uint32_t slope() const { return slope_.value(); }
    /// (1, slope) or (0, 1).
    [[nodiscard]] std::array<std::uint32_t, 2> direction() const;
    /// Image of the point under v -> v * A.
    [[nodiscard]] ProjPoint image(const Matrix& a) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b);

private:
    ProjPoint() = default;
    explicit ProjPoint(std::uint32_t slope) : slope_(slope) {}
    std::optional<std::uint32_t> slope_;
};

class Tensor {
public:
    Tensor(std::size_t m, PrimeModulus mod);
    /// Takes a 2 x m coordinate grid; throws DimensionMismatch otherwise.
    explicit Tensor(Matrix coords);

    static Tensor simple(std::span<const std::uint32_t> v, std::span<const std::uint32_t> w, PrimeModulus mod);
    /// Row-major 2m signed integers (the JSON wire form).
    static Tensor from_ints(std::size_t m, std::span<const std::int64_t> coords, PrimeModulus mod);

    [[nodiscard]] std::size_t m() const noexcept { return coords_.cols(); }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return coords_.modulus(); }
    [[nodiscard]] const Matrix& coords() const noexcept { return coords_; }
    [[nodiscard]] std::uint32_t raw(std::size_t i, std::size_t j) const { return coords_.raw(i, j); }
    [[nodiscard]] Residues row(std::size_t i) const;
    [[nodiscard]] bool is_zero() const noexcept { return coords_.is_zero(); }
    [[nodiscard]] std::vector<std::int64_t> to_ints() const;

    Tensor operator+(const Tensor& rhs) const;
    Tensor operator-(const Tensor& rhs) const;
    Tensor operator-() const;
    [[nodiscard]] Tensor scaled(std::uint32_t k) const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Matrix coords_;
};

/// Coordinates of x^(A o B) = A^T X B.
Tensor tensor_apply(const Matrix& a, const Matrix& b, const Tensor& x);

struct SimpleFactors {
    std::array<std::uint32_t, 2> v;  // first nonzero entry is 1
    Residues w;
};

/// x = v (x) w when rank(x) = 1; nullopt for rank 2; throws ZeroTensor on 0.
std::optional<SimpleFactors> simple_factorize(const Tensor& x);

using Vertex = std::uint32_t;

inline constexpr std::uint64_t kDeskScaleLimit = 1'000'000;

/// Dense mixed-radix numbering of V (x) W.
class TensorSpace {
public:
    /// Throws ParameterTooLarge when p^(2m) exceeds limit.
    TensorSpace(std::size_t m, PrimeModulus mod, std::uint64_t limit = kDeskScaleLimit);

    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return 2 * m_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] std::uint32_t p() const noexcept { return mod_.value(); }
    [[nodiscard]] Vertex size() const noexcept { return size_; }
    /// p^m, the order of W.
    [[nodiscard]] Vertex w_size() const noexcept { return w_size_; }

    [[nodiscard]] Vertex encode(const Tensor& x) const;
    [[nodiscard]] Tensor decode(Vertex u) const;
    [[nodiscard]] Vertex from_digits(std::span<const std::uint32_t> digits) const;
    void digits(Vertex u, std::span<std::uint32_t> out) const;

    [[nodiscard]] Vertex add(Vertex u, Vertex v) const;
    [[nodiscard]] Vertex sub(Vertex u, Vertex v) const;
    [[nodiscard]] Vertex neg(Vertex u) const;
    [[nodiscard]] Vertex scale(std::uint32_t k, Vertex u) const;

    /// Encoding of a W-vector as an integer in [0, p^m).
    [[nodiscard]] std::uint32_t encode_w(std::span<const std::uint32_t> w) const;
    [[nodiscard]] Residues decode_w(std::uint32_t code) const;

private:
    std::size_t m_;
    PrimeModulus mod_;
    Vertex size_;
    Vertex w_size_;
};

}  // namespace orbitals
