#include "orbitals/group.hpp"

#include "orbitals/error.hpp"

#include <algorithm>
#include <charconv>

namespace orbitals {

bool D8Group::contains(const Matrix& a) const
{
    return std::binary_search(elements.begin(), elements.end(), a);
}

D8Group d8_elements(PrimeModulus p)
{
    const std::vector<Matrix> generators = {
        Matrix::from_ints(2, 2, {1, 0, 0, -1}, p),
        Matrix::from_ints(2, 2, {0, 1, 1, 0}, p),
    };
    std::vector<Matrix> found = {Matrix::identity(2, p)};
    for (std::size_t next = 0; next < found.size(); ++next) {
        for (const auto& g : generators) {
            Matrix product = mat_mul(found[next], g);
            if (std::find(found.begin(), found.end(), product) == found.end()) {
                found.push_back(std::move(product));
            }
        }
    }
    std::sort(found.begin(), found.end());
    return D8Group{std::move(found), p};
}

LinPart LinPart::with_identity(Matrix a, std::size_t m)
{
    const PrimeModulus mod = a.modulus();
    return LinPart{std::move(a), Matrix::identity(m, mod)};
}

bool LinPart::equivalent(const LinPart& other) const
{
    const PrimeModulus mod = a.modulus();
    for (std::uint32_t k = 1; k < mod.value(); ++k) {
        if (a.scaled(k) == other.a && b.scaled(mod.inv(k)) == other.b) {
            return true;
        }
    }
    return false;
}

std::set<VVectorPair> orbit_under_d8(const VVectorPair& pair, PrimeModulus p)
{
    std::set<VVectorPair> out;
    for (const auto& g : d8_elements(p).elements) {
        const Residues first = vec_mul(pair[0], g);
        const Residues second = vec_mul(pair[1], g);
        out.insert(VVectorPair{VVector{first[0], first[1]}, VVector{second[0], second[1]}});
    }
    return out;
}

std::set<VVector> orbit_under_d8(const VVector& v, PrimeModulus p)
{
    std::set<VVector> out;
    for (const auto& g : d8_elements(p).elements) {
        const Residues image = vec_mul(v, g);
        out.insert(VVector{image[0], image[1]});
    }
    return out;
}

bool g0_contains(const LinPart& lin)
{
    const PrimeModulus mod = lin.a.modulus();
    const D8Group d8 = d8_elements(mod);
    for (std::uint32_t k = 1; k < mod.value(); ++k) {
        if (d8.contains(lin.a.scaled(k))) {
            return true;
        }
    }
    return false;
}

SuborbitLabel SuborbitLabel::parse(std::string_view text)
{
    if (text == "zero") {
        return zero();
    }
    if (text == "A") {
        return a();
    }
    if (text == "B") {
        return b();
    }
    if (text.size() > 1 && text.front() == 'L') {
        std::uint32_t value = 0;
        const auto* first = text.data() + 1;
        const auto* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc() && ptr == last && value > 0) {
            return lambda(value);
        }
    }
    throw Error(ErrorCode::InvalidConfig, "unknown suborbit label '" + std::string(text) + "'");
}

std::uint32_t SuborbitLabel::lambda_value() const
{
    if (tag_ != Tag::Lambda) {
        throw Error(ErrorCode::InvalidConfig, "label " + to_string() + " carries no lambda");
    }
    return lambda_;
}

std::string SuborbitLabel::to_string() const
{
    switch (tag_) {
    case Tag::Zero: return "zero";
    case Tag::A: return "A";
    case Tag::B: return "B";
    case Tag::Lambda: return "L" + std::to_string(lambda_);
    }
    return "?";
}

FpElement canonical_lambda(FpElement lambda)
{
    if (lambda.is_zero()) {
        throw Error(ErrorCode::ZeroLambda, "lambda must be nonzero");
    }
    const FpElement inv = fp_inv(lambda);
    const std::uint32_t best = std::min({lambda.value(), (-lambda).value(), inv.value(), (-inv).value()});
    return {best, lambda.modulus()};
}

SuborbitLabel classify_tensor(const Tensor& x)
{
    if (x.is_zero()) {
        return SuborbitLabel::zero();
    }
    const auto factors = simple_factorize(x);
    if (!factors) {
        return SuborbitLabel::b();
    }
    const auto [v0, v1] = factors->v;
    if (v0 == 0 || v1 == 0) {
        return SuborbitLabel::a();
    }
    return SuborbitLabel::lambda(canonical_lambda(FpElement(v1, x.modulus())).value());
}

std::vector<LambdaClass> lambda_classes(PrimeModulus p)
{
    std::vector<LambdaClass> out;
    for (std::uint32_t l = 1; l < p.value(); ++l) {
        const std::uint32_t key = canonical_lambda(FpElement(l, p)).value();
        auto it = std::find_if(out.begin(), out.end(), [key](const LambdaClass& c) { return c.key == key; });
        if (it == out.end()) {
            out.push_back(LambdaClass{key, {}});
            it = std::prev(out.end());
        }
        it->members.push_back(l);
    }
    std::sort(out.begin(), out.end(), [](const LambdaClass& a, const LambdaClass& b) { return a.key < b.key; });
    return out;
}

std::vector<SuborbitLabel> nontrivial_labels(PrimeModulus p)
{
    std::vector<SuborbitLabel> out = {SuborbitLabel::a(), SuborbitLabel::b()};
    for (const auto& c : lambda_classes(p)) {
        out.push_back(SuborbitLabel::lambda(c.key));
    }
    return out;
}

std::size_t rank_of(std::size_t /*m*/, PrimeModulus p)
{
    return 3 + lambda_classes(p).size();
}

std::vector<ProjPoint> label_directions(const SuborbitLabel& label, PrimeModulus p)
{
    switch (label.tag()) {
    case SuborbitLabel::Tag::Zero:
    case SuborbitLabel::Tag::B: return {};
    case SuborbitLabel::Tag::A: return {ProjPoint::finite(0), ProjPoint::infinity()};
    case SuborbitLabel::Tag::Lambda: break;
    }
    const std::uint32_t key = label.lambda_value();
    for (const auto& c : lambda_classes(p)) {
        if (c.key == key) {
            std::vector<ProjPoint> out;
            for (const auto l : c.members) {
                out.push_back(ProjPoint::finite(l));
            }
            return out;
        }
    }
    throw Error(ErrorCode::InvalidConfig, label.to_string() + " is not a canonical lambda label mod " +
                                              std::to_string(p.value()));
}

namespace {

/// Nonzero simple tensors d (x) w for each direction d, as vertices.
void append_direction_vertices(const std::vector<ProjPoint>& dirs, const TensorSpace& space, std::vector<Vertex>& out)
{
    const PrimeModulus mod = space.modulus();
    for (const auto& d : dirs) {
        const auto v = d.direction();
        for (std::uint32_t code = 1; code < space.w_size(); ++code) {
            const Residues w = space.decode_w(code);
            out.push_back(space.encode(Tensor::simple(v, w, mod)));
        }
    }
}

}  // namespace

std::vector<Vertex> suborbit_vertices(const SuborbitLabel& label, const TensorSpace& space)
{
    const PrimeModulus mod = space.modulus();
    std::vector<Vertex> out;
    switch (label.tag()) {
    case SuborbitLabel::Tag::Zero: out.push_back(0); break;
    case SuborbitLabel::Tag::A:
    case SuborbitLabel::Tag::Lambda: append_direction_vertices(label_directions(label, mod), space, out); break;
    case SuborbitLabel::Tag::B: {
        // Complement of the simple tensors (all p+1 directions) and 0.
        std::vector<ProjPoint> all = {ProjPoint::infinity()};
        for (std::uint32_t s = 0; s < mod.value(); ++s) {
            all.push_back(ProjPoint::finite(s));
        }
        std::vector<Vertex> simple;
        append_direction_vertices(all, space, simple);
        std::vector<bool> taken(space.size(), false);
        taken[0] = true;
        for (const auto u : simple) {
            taken[u] = true;
        }
        for (Vertex u = 0; u < space.size(); ++u) {
            if (!taken[u]) {
                out.push_back(u);
            }
        }
        break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Tensor> suborbit_elements(const SuborbitLabel& label, std::size_t m, PrimeModulus p)
{
    const TensorSpace space(m, p);
    std::vector<Tensor> out;
    for (const auto u : suborbit_vertices(label, space)) {
        out.push_back(space.decode(u));
    }
    return out;
}

namespace {

/// Rows of `seed` followed by standard basis vectors that keep the rows
/// independent, until there are `dim` of them.
Matrix complete_basis(const std::vector<Residues>& seed, std::size_t dim, PrimeModulus mod)
{
    std::vector<Residues> rows = seed;
    for (std::size_t k = 0; k < dim && rows.size() < dim; ++k) {
        Residues e(dim, 0);
        e[k] = 1;
        rows.push_back(e);
        Matrix trial(rows.size(), dim, mod);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                trial.set(r, c, rows[r][c]);
            }
        }
        if (mat_rank(trial) < rows.size()) {
            rows.pop_back();
        }
    }
    Matrix out(dim, dim, mod);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            out.set(r, c, rows[r][c]);
        }
    }
    return out;
}

/// B in GL(m) with X * B = Y, or nullopt if the rows of X and Y satisfy
/// different linear relations.
std::optional<Matrix> solve_row_map(const Tensor& x, const Tensor& y)
{
    const PrimeModulus mod = x.modulus();
    const std::size_t m = x.m();
    const std::size_t rank = mat_rank(x.coords());
    if (rank != mat_rank(y.coords())) {
        return std::nullopt;
    }
    if (rank == 0) {
        return Matrix::identity(m, mod);
    }
    std::vector<Residues> from;
    std::vector<Residues> to;
    if (rank == 2) {
        from = {x.row(0), x.row(1)};
        to = {y.row(0), y.row(1)};
    } else {
        const std::size_t lead = x.row(0) == Residues(m, 0) ? 1 : 0;
        from = {x.row(lead)};
        to = {y.row(lead)};
        if (to.front() == Residues(m, 0)) {
            return std::nullopt;
        }
    }
    const Matrix basis_from = complete_basis(from, m, mod);
    const Matrix basis_to = complete_basis(to, m, mod);
    Matrix b = mat_mul(mat_inv(basis_from), basis_to);
    if (!(mat_mul(x.coords(), b) == y.coords())) {
        return std::nullopt;
    }
    return b;
}

}  // namespace

std::optional<LinPart> find_g0_element(const Tensor& x, const Tensor& y)
{
    const PrimeModulus mod = x.modulus();
    const std::size_t m = x.m();
    const Matrix id = Matrix::identity(m, mod);
    for (const auto& g : d8_elements(mod).elements) {
        const Tensor moved = tensor_apply(g, id, x);
        if (auto b = solve_row_map(moved, y)) {
            LinPart lin{g, std::move(*b)};
            if (lin.apply(x) == y) {
                return lin;
            }
        }
    }
    return std::nullopt;
}

}  // namespace orbitals
