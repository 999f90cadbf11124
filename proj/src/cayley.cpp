#include "orbitals/cayley.hpp"

#include "orbitals/error.hpp"

#include <algorithm>
#include <deque>

namespace orbitals {

ConnectionSet::ConnectionSet(TensorSpace space, std::vector<Vertex> members, std::vector<SuborbitLabel> labels)
    : space_(space), members_(std::move(members)), bitmap_(space.size(), false), labels_(std::move(labels))
{
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (const auto u : members_) {
        if (u >= space_.size()) {
            throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(u) + " outside the space");
        }
        bitmap_[u] = true;
    }
    if (!members_.empty() && members_.front() == 0) {
        throw Error(ErrorCode::InvalidConfig, "connection set contains 0");
    }
    for (const auto u : members_) {
        if (!bitmap_[space_.neg(u)]) {
            throw Error(ErrorCode::InvalidConfig, "connection set is not closed under negation");
        }
    }
    std::sort(labels_.begin(), labels_.end());
}

ConnectionSet ConnectionSet::complement() const
{
    std::vector<Vertex> out;
    out.reserve(space_.size() - 1 - members_.size());
    for (Vertex u = 1; u < space_.size(); ++u) {
        if (!bitmap_[u]) {
            out.push_back(u);
        }
    }
    std::vector<SuborbitLabel> rest;
    if (!labels_.empty()) {
        for (const auto& l : nontrivial_labels(space_.modulus())) {
            if (!std::binary_search(labels_.begin(), labels_.end(), l)) {
                rest.push_back(l);
            }
        }
    }
    return ConnectionSet(space_, std::move(out), std::move(rest));
}

ConnectionSet orbital_union_set(const std::vector<SuborbitLabel>& labels, std::size_t m, PrimeModulus p)
{
    if (labels.empty()) {
        throw Error(ErrorCode::EmptyUnion, "union of no suborbits");
    }
    const TensorSpace space(m, p);
    const auto valid = nontrivial_labels(p);
    std::vector<Vertex> members;
    for (const auto& l : labels) {
        if (std::find(valid.begin(), valid.end(), l) == valid.end()) {
            throw Error(ErrorCode::InvalidConfig,
                        "'" + l.to_string() + "' is not a nontrivial suborbit label mod " + std::to_string(p.value()));
        }
        const auto part = suborbit_vertices(l, space);
        members.insert(members.end(), part.begin(), part.end());
    }
    return ConnectionSet(space, std::move(members), labels);
}

ConnectionSet direction_union_set(const std::vector<ProjPoint>& dirs, const TensorSpace& space)
{
    std::vector<Vertex> members;
    for (const auto& d : dirs) {
        const auto v = d.direction();
        for (std::uint32_t code = 1; code < space.w_size(); ++code) {
            members.push_back(space.encode(Tensor::simple(v, space.decode_w(code), space.modulus())));
        }
    }
    return ConnectionSet(space, std::move(members));
}

bool is_arc(Vertex x, Vertex y, const ConnectionSet& s)
{
    const auto& space = s.space();
    if (x >= space.size() || y >= space.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "vertex outside the space");
    }
    return s.contains(space.sub(x, y));
}

bool is_connected(const ConnectionSet& s)
{
    const auto& space = s.space();
    const Vertex n = space.size();
    std::vector<bool> seen(n, false);
    std::deque<Vertex> queue = {0};
    seen[0] = true;
    Vertex reached = 1;
    while (!queue.empty() && reached < n) {
        const Vertex x = queue.front();
        queue.pop_front();
        for (const auto step : s.members()) {
            const Vertex y = space.add(x, step);
            if (!seen[y]) {
                seen[y] = true;
                ++reached;
                queue.push_back(y);
            }
        }
    }
    return reached == n;
}

LinearVertexMap::LinearVertexMap(const LinPart& lin, const TensorSpace& space) : space_(space)
{
    const std::size_t dim = space.dim();
    Residues unit(dim, 0);
    basis_images_.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        std::fill(unit.begin(), unit.end(), 0);
        unit[k] = 1;
        const Tensor image = lin.apply(space.decode(space.from_digits(unit)));
        const auto data = image.coords().data();
        basis_images_.emplace_back(data.begin(), data.end());
    }
}

Vertex LinearVertexMap::operator()(Vertex u) const
{
    const std::size_t dim = space_.dim();
    const PrimeModulus mod = space_.modulus();
    Residues in(dim);
    Residues out(dim, 0);
    space_.digits(u, in);
    for (std::size_t k = 0; k < dim; ++k) {
        if (in[k] == 0) {
            continue;
        }
        const auto& img = basis_images_[k];
        for (std::size_t t = 0; t < dim; ++t) {
            out[t] = mod.add(out[t], mod.mul(in[k], img[t]));
        }
    }
    return space_.from_digits(out);
}

bool preserves_set(const LinPart& lin, const ConnectionSet& s)
{
    const auto& space = s.space();
    if (lin.a.rows() != 2 || lin.b.rows() != space.m()) {
        throw Error(ErrorCode::DimensionMismatch, "linear part does not act on this space");
    }
    if (mat_det(lin.a).is_zero() || mat_det(lin.b).is_zero()) {
        throw Error(ErrorCode::Singular, "linear part is not invertible");
    }
    // An injective map sending the finite set S into itself maps it onto S.
    const LinearVertexMap map(lin, space);
    return std::all_of(s.members().begin(), s.members().end(), [&](Vertex u) { return s.contains(map(u)); });
}

VertexPermutation::VertexPermutation(std::vector<Vertex> mapping) : mapping_(std::move(mapping)) {}

VertexPermutation VertexPermutation::identity(Vertex n)
{
    std::vector<Vertex> m(n);
    for (Vertex u = 0; u < n; ++u) {
        m[u] = u;
    }
    return VertexPermutation(std::move(m));
}

VertexPermutation VertexPermutation::from_linear(const LinPart& lin, const TensorSpace& space)
{
    const LinearVertexMap map(lin, space);
    std::vector<Vertex> m(space.size());
    for (Vertex u = 0; u < space.size(); ++u) {
        m[u] = map(u);
    }
    return VertexPermutation(std::move(m));
}

bool VertexPermutation::is_permutation() const
{
    std::vector<bool> hit(mapping_.size(), false);
    for (const auto v : mapping_) {
        if (v >= mapping_.size() || hit[v]) {
            return false;
        }
        hit[v] = true;
    }
    return true;
}

VertexPermutation VertexPermutation::then(const VertexPermutation& next) const
{
    if (next.size() != size()) {
        throw Error(ErrorCode::DimensionMismatch, "permutations of different sets");
    }
    std::vector<Vertex> m(mapping_.size());
    for (std::size_t u = 0; u < m.size(); ++u) {
        m[u] = next.mapping_[mapping_[u]];
    }
    return VertexPermutation(std::move(m));
}

VertexPermutation VertexPermutation::inverse() const
{
    if (!is_permutation()) {
        throw Error(ErrorCode::InvalidConfig, "mapping is not a bijection");
    }
    std::vector<Vertex> m(mapping_.size());
    for (std::size_t u = 0; u < m.size(); ++u) {
        m[mapping_[u]] = static_cast<Vertex>(u);
    }
    return VertexPermutation(std::move(m));
}

bool is_automorphism(const VertexPermutation& perm, const ConnectionSet& s)
{
    const auto& space = s.space();
    if (perm.size() != space.size()) {
        throw Error(ErrorCode::DimensionMismatch, "permutation size differs from the vertex count");
    }
    if (!perm.is_permutation()) {
        return false;
    }
    for (Vertex x = 0; x < space.size(); ++x) {
        const Vertex minus_image = space.neg(perm(x));
        for (const auto step : s.members()) {
            if (!s.contains(space.add(perm(space.add(x, step)), minus_image))) {
                return false;
            }
        }
    }
    return true;
}

HammingCoordinates::HammingCoordinates(ProjPoint x_dir, ProjPoint y_dir, const TensorSpace& space)
    : space_(space), dx_(x_dir.direction()), dy_(y_dir.direction()), inverse_{}
{
    if (x_dir == y_dir) {
        throw Error(ErrorCode::BadDecomposition, "the two directions coincide");
    }
    const PrimeModulus mod = space.modulus();
    const Matrix d = Matrix::from_ints(2, 2, {dx_[0], dy_[0], dx_[1], dy_[1]}, mod);
    const Matrix inv = mat_inv(d);
    inverse_ = {inv.raw(0, 0), inv.raw(0, 1), inv.raw(1, 0), inv.raw(1, 1)};
}

std::pair<std::uint32_t, std::uint32_t> HammingCoordinates::split(Vertex u) const
{
    const PrimeModulus mod = space_.modulus();
    const Residues r1 = space_.decode_w(u % space_.w_size());
    const Residues r2 = space_.decode_w(u / space_.w_size());
    Residues a(space_.m());
    Residues b(space_.m());
    for (std::size_t j = 0; j < space_.m(); ++j) {
        a[j] = mod.add(mod.mul(inverse_[0], r1[j]), mod.mul(inverse_[1], r2[j]));
        b[j] = mod.add(mod.mul(inverse_[2], r1[j]), mod.mul(inverse_[3], r2[j]));
    }
    return {space_.encode_w(a), space_.encode_w(b)};
}

Vertex HammingCoordinates::join(std::uint32_t a_code, std::uint32_t b_code) const
{
    const PrimeModulus mod = space_.modulus();
    const Residues a = space_.decode_w(a_code);
    const Residues b = space_.decode_w(b_code);
    Residues r1(space_.m());
    Residues r2(space_.m());
    for (std::size_t j = 0; j < space_.m(); ++j) {
        r1[j] = mod.add(mod.mul(dx_[0], a[j]), mod.mul(dy_[0], b[j]));
        r2[j] = mod.add(mod.mul(dx_[1], a[j]), mod.mul(dy_[1], b[j]));
    }
    return space_.encode_w(r1) + space_.w_size() * space_.encode_w(r2);
}

bool hamming_check(const ConnectionSet& s, ProjPoint x_dir, ProjPoint y_dir)
{
    const auto& space = s.space();
    const HammingCoordinates coords(x_dir, y_dir, space);
    if (!(direction_union_set({x_dir, y_dir}, space) == s)) {
        throw Error(ErrorCode::BadDecomposition, "S is not (X u Y) \\ {0} for the given directions");
    }
    // phi is additive, so x ~ y iff phi(x - y) has exactly one nonzero
    // coordinate iff phi(x), phi(y) differ in exactly one coordinate.
    const Vertex q = space.w_size();
    std::vector<bool> hit(space.size(), false);
    for (Vertex u = 0; u < space.size(); ++u) {
        const auto [a, b] = coords.split(u);
        const Vertex image = a + q * b;
        if (hit[image]) {
            return false;
        }
        hit[image] = true;
        if (u != 0 && s.contains(u) != ((a == 0) != (b == 0))) {
            return false;
        }
    }
    return true;
}

HammingWitness hamming_witness(ProjPoint x_dir, ProjPoint y_dir, std::size_t m, PrimeModulus p)
{
    const TensorSpace space(m, p);
    const HammingCoordinates coords(x_dir, y_dir, space);
    const ConnectionSet s = direction_union_set({x_dir, y_dir}, space);

    // W-codes of f1 and 2 f1 are 1 and 2.
    const auto sigma = [](std::uint32_t code) -> std::uint32_t {
        if (code == 1) {
            return 2;
        }
        if (code == 2) {
            return 1;
        }
        return code;
    };
    std::vector<Vertex> mapping(space.size());
    for (Vertex u = 0; u < space.size(); ++u) {
        const auto [a, b] = coords.split(u);
        mapping[u] = coords.join(sigma(a), b);
    }
    VertexPermutation perm(std::move(mapping));

    if (!is_automorphism(perm, s)) {
        throw Error(ErrorCode::CertificationFailed, "Hamming witness is not an automorphism");
    }
    // Affine maps fixing 0 are additive; find an additivity failure.
    const Vertex f1 = coords.join(1, 0);
    const std::pair<Vertex, Vertex> candidates[] = {{f1, f1}, {f1, coords.join(1, 1)}, {f1, coords.join(0, 1)}};
    for (const auto& [u, v] : candidates) {
        if (perm(0) != 0 || perm(space.add(u, v)) != space.add(perm(u), perm(v))) {
            const std::uint64_t arcs = static_cast<std::uint64_t>(space.size()) * s.size();
            return HammingWitness{x_dir, y_dir, std::move(perm), u, v, arcs};
        }
    }
    throw Error(ErrorCode::CertificationFailed, "Hamming witness appears affine");
}

}  // namespace orbitals
