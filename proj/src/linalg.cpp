#include "orbitals/linalg.hpp"

#include "orbitals/error.hpp"

#include <sstream>
#include <utility>

namespace orbitals {

Matrix::Matrix(std::size_t rows, std::size_t cols, PrimeModulus mod)
    : rows_(rows), cols_(cols), mod_(mod), data_(rows * cols, 0)
{
}

Matrix Matrix::identity(std::size_t n, PrimeModulus mod)
{
    Matrix out(n, n, mod);
    for (std::size_t i = 0; i < n; ++i) {
        out.data_[i * n + i] = 1;
    }
    return out;
}

Matrix Matrix::from_ints(std::size_t rows, std::size_t cols, std::initializer_list<std::int64_t> entries,
                         PrimeModulus mod)
{
    if (entries.size() != rows * cols) {
        throw Error(ErrorCode::DimensionMismatch, "entry count does not match matrix shape");
    }
    Matrix out(rows, cols, mod);
    std::size_t k = 0;
    for (const std::int64_t e : entries) {
        out.data_[k++] = mod.reduce(e);
    }
    return out;
}

Matrix Matrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows, PrimeModulus mod)
{
    if (rows.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix needs at least one row");
    }
    const std::size_t cols = rows.front().size();
    Matrix out(rows.size(), cols, mod);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            out.data_[r * cols + c] = mod.reduce(rows[r][c]);
        }
    }
    return out;
}

Matrix Matrix::scaled(std::uint32_t k) const
{
    Matrix out = *this;
    for (auto& e : out.data_) {
        e = mod_.mul(e, k % mod_.value());
    }
    return out;
}

Matrix Matrix::transposed() const
{
    Matrix out(cols_, rows_, mod_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out.data_[c * rows_ + r] = data_[r * cols_ + c];
        }
    }
    return out;
}

bool Matrix::is_zero() const noexcept
{
    for (const auto e : data_) {
        if (e != 0) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<std::int64_t>> Matrix::to_rows() const
{
    const std::int64_t p = mod_.value();
    std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            const std::int64_t v = raw(r, c);
            out[r][c] = v > p / 2 ? v - p : v;
        }
    }
    return out;
}

std::string Matrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    const auto rows = to_rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        os << (r ? ",[" : "[");
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            os << (c ? "," : "") << rows[r][c];
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

Matrix mat_mul(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows() || !(a.modulus() == b.modulus())) {
        throw Error(ErrorCode::DimensionMismatch, "cannot multiply " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                                                      "x" + std::to_string(b.cols()));
    }
    const PrimeModulus mod = a.modulus();
    const std::uint64_t p = mod.value();
    Matrix out(a.rows(), b.cols(), mod);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc = (acc + static_cast<std::uint64_t>(a.raw(i, k)) * b.raw(k, j)) % p;
            }
            out.set(i, j, static_cast<std::uint32_t>(acc));
        }
    }
    return out;
}

namespace {

/// In-place row reduction; returns the rank and the product of pivots with
/// the sign of the row swaps folded in.
struct Elimination {
    std::size_t rank = 0;
    std::uint32_t det = 1;
};

Elimination row_reduce(std::vector<Residues>& rows, std::size_t cols, PrimeModulus mod, std::size_t pivot_cols)
{
    Elimination out;
    const std::size_t n = rows.size();
    for (std::size_t c = 0; c < pivot_cols && out.rank < n; ++c) {
        std::size_t pivot = out.rank;
        while (pivot < n && rows[pivot][c] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            out.det = 0;
            continue;
        }
        if (pivot != out.rank) {
            std::swap(rows[pivot], rows[out.rank]);
            out.det = mod.neg(out.det);
        }
        Residues& prow = rows[out.rank];
        out.det = mod.mul(out.det, prow[c]);
        const std::uint32_t inv = mod.inv(prow[c]);
        for (std::size_t k = 0; k < cols; ++k) {
            prow[k] = mod.mul(prow[k], inv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == out.rank || rows[r][c] == 0) {
                continue;
            }
            const std::uint32_t factor = rows[r][c];
            for (std::size_t k = 0; k < cols; ++k) {
                rows[r][k] = mod.sub(rows[r][k], mod.mul(factor, prow[k]));
            }
        }
        ++out.rank;
    }
    if (out.rank < pivot_cols) {
        out.det = 0;
    }
    return out;
}

std::vector<Residues> to_row_vectors(const Matrix& a, std::size_t extra_cols)
{
    std::vector<Residues> rows(a.rows(), Residues(a.cols() + extra_cols, 0));
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            rows[r][c] = a.raw(r, c);
        }
    }
    return rows;
}

}  // namespace

Matrix mat_inv(const Matrix& a)
{
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "only square matrices have inverses");
    }
    const std::size_t n = a.rows();
    auto rows = to_row_vectors(a, n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i][n + i] = 1;
    }
    const Elimination e = row_reduce(rows, 2 * n, a.modulus(), n);
    if (e.rank < n) {
        throw Error(ErrorCode::Singular, "matrix " + a.to_string() + " is singular");
    }
    Matrix out(n, n, a.modulus());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out.set(r, c, rows[r][n + c]);
        }
    }
    return out;
}

std::size_t mat_rank(const Matrix& a)
{
    auto rows = to_row_vectors(a, 0);
    return row_reduce(rows, a.cols(), a.modulus(), a.cols()).rank;
}

FpElement mat_det(const Matrix& a)
{
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "determinant needs a square matrix");
    }
    auto rows = to_row_vectors(a, 0);
    return {row_reduce(rows, a.cols(), a.modulus(), a.cols()).det, a.modulus()};
}

Residues vec_mul(std::span<const std::uint32_t> v, const Matrix& a)
{
    if (v.size() != a.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "vector length does not match matrix rows");
    }
    const PrimeModulus mod = a.modulus();
    Residues out(a.cols(), 0);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        std::uint32_t acc = 0;
        for (std::size_t r = 0; r < v.size(); ++r) {
            acc = mod.add(acc, mod.mul(v[r], a.raw(r, c)));
        }
        out[c] = acc;
    }
    return out;
}

void for_each_gl2(PrimeModulus p, const std::function<void(const Matrix&)>& visit)
{
    const std::uint32_t q = p.value();
    if (q > kGl2EnumerationLimit) {
        throw Error(ErrorCode::ParameterTooLarge, "GL(2,p) enumeration is limited to p <= 200");
    }
    Matrix scratch(2, 2, p);
    for (std::uint32_t a = 0; a < q; ++a) {
        for (std::uint32_t b = 0; b < q; ++b) {
            for (std::uint32_t c = 0; c < q; ++c) {
                for (std::uint32_t d = 0; d < q; ++d) {
                    if (p.sub(p.mul(a, d), p.mul(b, c)) == 0) {
                        continue;
                    }
                    scratch.set(0, 0, a);
                    scratch.set(0, 1, b);
                    scratch.set(1, 0, c);
                    scratch.set(1, 1, d);
                    visit(scratch);
                }
            }
        }
    }
}

std::vector<Matrix> gl2_enumerate(PrimeModulus p)
{
    std::vector<Matrix> out;
    const std::uint64_t q = p.value();
    if (q <= kGl2EnumerationLimit) {
        out.reserve((q * q - 1) * (q * q - q));
    }
    for_each_gl2(p, [&](const Matrix& a) { out.push_back(a); });
    return out;
}

ProjPoint ProjPoint::from_vector(std::uint32_t x, std::uint32_t y, PrimeModulus mod)
{
    if (x == 0 && y == 0) {
        throw Error(ErrorCode::ZeroTensor, "the zero vector spans no projective point");
    }
    if (x == 0) {
        return infinity();
    }
    return finite(mod.mul(y, mod.inv(x)));
}

std::array<std::uint32_t, 2> ProjPoint::direction() const
{
    if (is_infinity()) {
        return {0, 1};
    }
    return {1, *slope_};
}

ProjPoint ProjPoint::image(const Matrix& a) const
{
    const auto d = direction();
    const Residues img = vec_mul(d, a);
    return from_vector(img[0], img[1], a.modulus());
}

std::string ProjPoint::to_string() const
{
    return is_infinity() ? std::string("inf") : std::to_string(*slope_);
}

std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b)
{
    if (a.is_infinity() || b.is_infinity()) {
        return static_cast<int>(a.is_infinity()) <=> static_cast<int>(b.is_infinity());
    }
    return *a.slope_ <=> *b.slope_;
}

Tensor::Tensor(std::size_t m, PrimeModulus mod) : coords_(2, m, mod) {}

Tensor::Tensor(Matrix coords) : coords_(std::move(coords))
{
    if (coords_.rows() != 2 || coords_.cols() < 1) {
        throw Error(ErrorCode::DimensionMismatch, "tensor coordinates must be a 2 x m grid");
    }
}

Tensor Tensor::simple(std::span<const std::uint32_t> v, std::span<const std::uint32_t> w, PrimeModulus mod)
{
    if (v.size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "V has dimension 2");
    }
    Tensor out(w.size(), mod);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            out.coords_.set(i, j, mod.mul(v[i] % mod.value(), w[j] % mod.value()));
        }
    }
    return out;
}

Tensor Tensor::from_ints(std::size_t m, std::span<const std::int64_t> coords, PrimeModulus mod)
{
    if (coords.size() != 2 * m) {
        throw Error(ErrorCode::DimensionMismatch, "serialized tensor needs 2m entries");
    }
    Tensor out(m, mod);
    for (std::size_t k = 0; k < coords.size(); ++k) {
        out.coords_.set(k / m, k % m, mod.reduce(coords[k]));
    }
    return out;
}

Residues Tensor::row(std::size_t i) const
{
    Residues out(m());
    for (std::size_t j = 0; j < m(); ++j) {
        out[j] = raw(i, j);
    }
    return out;
}

std::vector<std::int64_t> Tensor::to_ints() const
{
    std::vector<std::int64_t> out;
    out.reserve(2 * m());
    for (const auto e : coords_.data()) {
        out.push_back(e);
    }
    return out;
}

Tensor Tensor::operator+(const Tensor& rhs) const
{
    if (rhs.m() != m() || !(rhs.modulus() == modulus())) {
        throw Error(ErrorCode::DimensionMismatch, "tensors from different spaces");
    }
    Tensor out(m(), modulus());
    const PrimeModulus mod = modulus();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < m(); ++j) {
            out.coords_.set(i, j, mod.add(raw(i, j), rhs.raw(i, j)));
        }
    }
    return out;
}

Tensor Tensor::operator-() const
{
    return scaled(modulus().value() - 1);
}

Tensor Tensor::operator-(const Tensor& rhs) const
{
    return *this + (-rhs);
}

Tensor Tensor::scaled(std::uint32_t k) const
{
    return Tensor(coords_.scaled(k));
}

Tensor tensor_apply(const Matrix& a, const Matrix& b, const Tensor& x)
{
    if (a.rows() != 2 || a.cols() != 2 || b.rows() != x.m() || b.cols() != x.m() ||
        !(a.modulus() == x.modulus()) || !(b.modulus() == x.modulus())) {
        throw Error(ErrorCode::DimensionMismatch, "A must be 2x2 and B must be m x m over the tensor's field");
    }
    if (mat_det(a).is_zero() || mat_det(b).is_zero()) {
        throw Error(ErrorCode::Singular, "A o B must be invertible");
    }
    return Tensor(mat_mul(mat_mul(a.transposed(), x.coords()), b));
}

std::optional<SimpleFactors> simple_factorize(const Tensor& x)
{
    if (x.is_zero()) {
        throw Error(ErrorCode::ZeroTensor, "the zero tensor has no factorization");
    }
    if (mat_rank(x.coords()) != 1) {
        return std::nullopt;
    }
    const PrimeModulus mod = x.modulus();
    // A rank-1 grid is v^T w; the first nonzero row is a multiple of w.
    const std::size_t lead = x.row(0) == Residues(x.m(), 0) ? 1 : 0;
    SimpleFactors out;
    out.w = x.row(lead);
    if (lead == 1) {
        out.v = {0, 1};
        return out;
    }
    // v = (1, t) with row1 = t * row0.
    std::size_t j = 0;
    while (x.raw(0, j) == 0) {
        ++j;
    }
    out.v = {1, mod.mul(x.raw(1, j), mod.inv(x.raw(0, j)))};
    return out;
}

TensorSpace::TensorSpace(std::size_t m, PrimeModulus mod, std::uint64_t limit) : m_(m), mod_(mod), size_(1), w_size_(1)
{
    if (m < 1) {
        throw Error(ErrorCode::DimensionMismatch, "W needs dimension at least 1");
    }
    std::uint64_t n = 1;
    for (std::size_t k = 0; k < 2 * m; ++k) {
        n *= mod.value();
        if (n > limit) {
            throw Error(ErrorCode::ParameterTooLarge, "p^(2m) exceeds the desk-scale limit of " + std::to_string(limit));
        }
        if (k + 1 == m) {
            w_size_ = static_cast<Vertex>(n);
        }
    }
    size_ = static_cast<Vertex>(n);
}

Vertex TensorSpace::from_digits(std::span<const std::uint32_t> digits) const
{
    Vertex u = 0;
    for (std::size_t k = digits.size(); k-- > 0;) {
        u = u * p() + digits[k];
    }
    return u;
}

void TensorSpace::digits(Vertex u, std::span<std::uint32_t> out) const
{
    const std::uint32_t q = p();
    for (auto& d : out) {
        d = u % q;
        u /= q;
    }
}

Vertex TensorSpace::encode(const Tensor& x) const
{
    if (x.m() != m_ || !(x.modulus() == mod_)) {
        throw Error(ErrorCode::DimensionMismatch, "tensor does not belong to this space");
    }
    return from_digits(x.coords().data());
}

Tensor TensorSpace::decode(Vertex u) const
{
    Residues d(dim());
    digits(u, d);
    Matrix grid(2, m_, mod_);
    for (std::size_t k = 0; k < d.size(); ++k) {
        grid.set(k / m_, k % m_, d[k]);
    }
    return Tensor(std::move(grid));
}

Vertex TensorSpace::add(Vertex u, Vertex v) const
{
    const std::uint32_t q = p();
    Vertex out = 0;
    Vertex place = 1;
    for (std::size_t k = 0; k < dim(); ++k) {
        std::uint32_t d = u % q + v % q;
        if (d >= q) {
            d -= q;
        }
        out += d * place;
        place *= q;
        u /= q;
        v /= q;
    }
    return out;
}

Vertex TensorSpace::neg(Vertex u) const
{
    const std::uint32_t q = p();
    Vertex out = 0;
    Vertex place = 1;
    for (std::size_t k = 0; k < dim(); ++k) {
        const std::uint32_t d = u % q;
        out += (d == 0 ? 0 : q - d) * place;
        place *= q;
        u /= q;
    }
    return out;
}

Vertex TensorSpace::sub(Vertex u, Vertex v) const
{
    return add(u, neg(v));
}

Vertex TensorSpace::scale(std::uint32_t k, Vertex u) const
{
    const std::uint32_t q = p();
    Vertex out = 0;
    Vertex place = 1;
    for (std::size_t i = 0; i < dim(); ++i) {
        out += mod_.mul(k % q, u % q) * place;
        place *= q;
        u /= q;
    }
    return out;
}

std::uint32_t TensorSpace::encode_w(std::span<const std::uint32_t> w) const
{
    std::uint32_t code = 0;
    for (std::size_t k = w.size(); k-- > 0;) {
        code = code * p() + w[k];
    }
    return code;
}

Residues TensorSpace::decode_w(std::uint32_t code) const
{
    Residues w(m_);
    for (auto& d : w) {
        d = code % p();
        code /= p();
    }
    return w;
}

}  // namespace orbitals
