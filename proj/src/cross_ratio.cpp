#include "orbitals/cross_ratio.hpp"

#include "orbitals/error.hpp"
#include "orbitals/group.hpp"

#include <algorithm>
#include <map>

namespace orbitals {

namespace {

constexpr std::string_view kLabels = "PQRS";

std::array<std::uint32_t, 2> lift(const ProjValue& t)
{
    if (t.is_infinity()) {
        return {0, 1};
    }
    return {1, t.slope()};
}

std::uint32_t det2(const std::array<std::uint32_t, 2>& u, const std::array<std::uint32_t, 2>& v, PrimeModulus mod)
{
    return mod.sub(mod.mul(u[0], v[1]), mod.mul(u[1], v[0]));
}

/// r -> (a r + b) / (c r + d) as {a, b, c, d}.
std::array<int, 4> mobius(CrossRatioForm form)
{
    switch (form) {
    case CrossRatioForm::R: return {1, 0, 0, 1};
    case CrossRatioForm::ROverRMinusOne: return {1, 0, 1, -1};
    case CrossRatioForm::OneMinusR: return {-1, 1, 0, 1};
    case CrossRatioForm::Reciprocal: return {0, 1, 1, 0};
    case CrossRatioForm::OneOverOneMinusR: return {0, 1, -1, 1};
    case CrossRatioForm::RMinusOneOverR: return {1, -1, 1, 0};
    }
    return {1, 0, 0, 1};
}

bool same_up_to_sign(const std::array<int, 4>& x, const std::array<int, 4>& y)
{
    bool plus = true;
    bool minus = true;
    for (std::size_t k = 0; k < 4; ++k) {
        plus = plus && x[k] == y[k];
        minus = minus && x[k] == -y[k];
    }
    return plus || minus;
}

std::array<int, 4> mobius_product(const std::array<int, 4>& x, const std::array<int, 4>& y)
{
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

std::map<Perm4, CrossRatioForm> build_relabel_map()
{
    std::map<Perm4, CrossRatioForm> out;
    for (const auto& row : relabel_rows()) {
        for (const auto text : row.permutations) {
            if (!out.emplace(parse_cycles(text), row.form).second) {
                throw Error(ErrorCode::TableViolation, "permutation " + std::string(text) + " listed twice");
            }
        }
    }
    if (out.size() != 24) {
        throw Error(ErrorCode::TableViolation, "table does not cover all 24 permutations");
    }
    for (const auto& [s, fs] : out) {
        for (const auto& [t, ft] : out) {
            // Relabelling by s and then by t equals relabelling by compose(t, s).
            const CrossRatioForm both = out.at(compose(t, s));
            if (!same_up_to_sign(mobius(both), mobius_product(mobius(ft), mobius(fs)))) {
                throw Error(ErrorCode::TableViolation,
                            "table is inconsistent at " + cycle_string(s) + " then " + cycle_string(t));
            }
        }
    }
    return out;
}

const std::map<Perm4, CrossRatioForm>& relabel_map()
{
    static const std::map<Perm4, CrossRatioForm> map = build_relabel_map();
    return map;
}

}  // namespace

ProjValue proj_value(std::uint32_t num, std::uint32_t den, PrimeModulus mod)
{
    if (num == 0 && den == 0) {
        throw Error(ErrorCode::DegenerateQuad, "0/0 is not a point of the projective line");
    }
    return ProjPoint::from_vector(den, num, mod);
}

ProjQuad::ProjQuad(std::array<ProjValue, 4> points, PrimeModulus mod) : points_(points), mod_(mod)
{
    for (std::size_t i = 0; i < 4; ++i) {
        if (!points_[i].is_infinity() && points_[i].slope() >= mod.value()) {
            throw Error(ErrorCode::DegenerateQuad, "parameter is not a residue");
        }
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (points_[i] == points_[j]) {
                throw Error(ErrorCode::DegenerateQuad, "quad has repeated point " + points_[i].to_string());
            }
        }
    }
}

ProjValue cross_ratio(const ProjQuad& quad)
{
    const PrimeModulus mod = quad.modulus();
    const auto a = lift(quad[0]);
    const auto b = lift(quad[1]);
    const auto c = lift(quad[2]);
    const auto d = lift(quad[3]);
    const std::uint32_t num = mod.mul(det2(a, c, mod), det2(b, d, mod));
    const std::uint32_t den = mod.mul(det2(b, c, mod), det2(a, d, mod));
    return proj_value(num, den, mod);
}

Perm4 parse_cycles(std::string_view text)
{
    Perm4 perm = kIdentityPerm;
    std::array<bool, 4> moved{};
    std::size_t pos = 0;
    const auto fail = [&]() {
        return Error(ErrorCode::InvalidConfig, "bad cycle notation '" + std::string(text) + "'");
    };
    while (pos < text.size()) {
        if (text[pos] != '(') {
            throw fail();
        }
        const std::size_t close = text.find(')', pos);
        if (close == std::string_view::npos) {
            throw fail();
        }
        const std::string_view cycle = text.substr(pos + 1, close - pos - 1);
        std::vector<std::uint8_t> labels;
        for (const char ch : cycle) {
            const std::size_t k = kLabels.find(ch);
            if (k == std::string_view::npos || moved[k]) {
                throw fail();
            }
            moved[k] = true;
            labels.push_back(static_cast<std::uint8_t>(k));
        }
        for (std::size_t k = 0; k < labels.size(); ++k) {
            perm[labels[k]] = labels[(k + 1) % labels.size()];
        }
        pos = close + 1;
    }
    return perm;
}

std::string cycle_string(const Perm4& perm)
{
    std::string out;
    std::array<bool, 4> seen{};
    for (std::uint8_t start = 0; start < 4; ++start) {
        if (seen[start] || perm[start] == start) {
            continue;
        }
        out += '(';
        for (std::uint8_t k = start; !seen[k]; k = perm[k]) {
            seen[k] = true;
            out += kLabels[k];
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

Perm4 compose(const Perm4& first, const Perm4& second)
{
    Perm4 out{};
    for (std::size_t k = 0; k < 4; ++k) {
        out[k] = second[first[k]];
    }
    return out;
}

ProjQuad permute_quad(const ProjQuad& quad, const Perm4& perm)
{
    return ProjQuad({quad[perm[0]], quad[perm[1]], quad[perm[2]], quad[perm[3]]}, quad.modulus());
}

std::string_view form_name(CrossRatioForm form)
{
    switch (form) {
    case CrossRatioForm::R: return "r";
    case CrossRatioForm::ROverRMinusOne: return "r/(r-1)";
    case CrossRatioForm::OneMinusR: return "1-r";
    case CrossRatioForm::Reciprocal: return "1/r";
    case CrossRatioForm::OneOverOneMinusR: return "1/(1-r)";
    case CrossRatioForm::RMinusOneOverR: return "(r-1)/r";
    }
    return "?";
}

ProjValue apply_form(CrossRatioForm form, const ProjValue& r, PrimeModulus mod)
{
    const auto [a, b, c, d] = mobius(form);
    const auto h = lift(r);  // (den, num)
    const std::uint32_t num = mod.add(mod.mul(mod.reduce(a), h[1]), mod.mul(mod.reduce(b), h[0]));
    const std::uint32_t den = mod.add(mod.mul(mod.reduce(c), h[1]), mod.mul(mod.reduce(d), h[0]));
    return proj_value(num, den, mod);
}

const std::array<RelabelRow, 6>& relabel_rows()
{
    static const std::array<RelabelRow, 6> rows = {{
        {CrossRatioForm::R, {"()", "(PQ)(RS)", "(PR)(QS)", "(PS)(QR)"}},
        {CrossRatioForm::ROverRMinusOne, {"(PR)", "(QS)", "(PQRS)", "(PSRQ)"}},
        {CrossRatioForm::OneMinusR, {"(PS)", "(QR)", "(PQSR)", "(PRSQ)"}},
        {CrossRatioForm::Reciprocal, {"(PQ)", "(RS)", "(PRQS)", "(PSQR)"}},
        {CrossRatioForm::OneOverOneMinusR, {"(PQS)", "(PRQ)", "(PSR)", "(QRS)"}},
        {CrossRatioForm::RMinusOneOverR, {"(PQR)", "(PRS)", "(PSQ)", "(QSR)"}},
    }};
    return rows;
}

CrossRatioForm relabel_form(const Perm4& perm)
{
    const auto& map = relabel_map();
    const auto it = map.find(perm);
    if (it == map.end()) {
        throw Error(ErrorCode::InvalidConfig, "not a permutation of four labels");
    }
    return it->second;
}

ProjValue permuted_cross_ratio(const Perm4& perm, const ProjValue& r, PrimeModulus mod)
{
    return apply_form(relabel_form(perm), r, mod);
}

RelabelReport verify_relabel_table(PrimeModulus p)
{
    const std::uint32_t q = p.value();
    std::vector<ProjValue> line;
    for (std::uint32_t t = 0; t < q; ++t) {
        line.push_back(ProjPoint::finite(t));
    }
    line.push_back(ProjPoint::infinity());

    std::vector<std::pair<Perm4, CrossRatioForm>> perms(relabel_map().begin(), relabel_map().end());
    RelabelReport report{0, 0};
    const std::size_t n = line.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                for (std::size_t d = 0; d < n; ++d) {
                    if (a == b || a == c || a == d || b == c || b == d || c == d) {
                        continue;
                    }
                    const ProjQuad quad({line[a], line[b], line[c], line[d]}, p);
                    const ProjValue r = cross_ratio(quad);
                    ++report.quads;
                    for (const auto& [perm, form] : perms) {
                        const ProjValue lhs = cross_ratio(permute_quad(quad, perm));
                        const ProjValue rhs = apply_form(form, r, p);
                        ++report.checks;
                        if (!(lhs == rhs)) {
                            throw Error(ErrorCode::TableViolation,
                                        "quad (" + line[a].to_string() + "," + line[b].to_string() + "," +
                                            line[c].to_string() + "," + line[d].to_string() + ") under " +
                                            cycle_string(perm) + ": got " + lhs.to_string() + ", table gives " +
                                            rhs.to_string());
                        }
                    }
                }
            }
        }
    }
    return report;
}

bool klein_four_classifier(const Perm4& perm)
{
    static const std::array<Perm4, 4> v4 = {
        Perm4{0, 1, 2, 3},
        Perm4{1, 0, 3, 2},
        Perm4{2, 3, 0, 1},
        Perm4{3, 2, 1, 0},
    };
    return std::find(v4.begin(), v4.end(), perm) != v4.end();
}

namespace {

void require_valid_lambda(FpElement lambda)
{
    const FpElement l4 = fp_pow(lambda, 4);
    if (l4.is_zero() || l4.value() == 1) {
        throw Error(ErrorCode::DegenerateLambda, "lambda^4 must avoid 0 and 1, lambda = " + std::to_string(lambda.value()));
    }
}

}  // namespace

ProjQuad lambda_quad(FpElement lambda)
{
    require_valid_lambda(lambda);
    const FpElement inv = fp_inv(lambda);
    return ProjQuad({ProjPoint::finite(lambda.value()), ProjPoint::finite((-lambda).value()),
                     ProjPoint::finite(inv.value()), ProjPoint::finite((-inv).value())},
                    lambda.modulus());
}

FpElement lambda_cross_ratio(FpElement lambda)
{
    require_valid_lambda(lambda);
    const FpElement one(1, lambda.modulus());
    const FpElement sq = lambda * lambda;
    const FpElement top = (sq - one) * (sq - one);
    const FpElement bottom = (sq + one) * (sq + one);
    return top / bottom;
}

std::vector<V4Collineation> v4_collineations(PrimeModulus p)
{
    return {
        {parse_cycles("()"), Matrix::from_ints(2, 2, {1, 0, 0, 1}, p)},
        {parse_cycles("(PQ)(RS)"), Matrix::from_ints(2, 2, {1, 0, 0, -1}, p)},
        {parse_cycles("(PR)(QS)"), Matrix::from_ints(2, 2, {0, 1, 1, 0}, p)},
        {parse_cycles("(PS)(QR)"), Matrix::from_ints(2, 2, {0, -1, 1, 0}, p)},
    };
}

std::optional<Perm4> induced_permutation(const Matrix& m, FpElement lambda)
{
    const ProjQuad quad = lambda_quad(lambda);
    Perm4 sigma{};
    for (std::size_t k = 0; k < 4; ++k) {
        const ProjPoint image = quad[k].image(m);
        const auto it = std::find(quad.points().begin(), quad.points().end(), image);
        if (it == quad.points().end()) {
            return std::nullopt;
        }
        sigma[k] = static_cast<std::uint8_t>(it - quad.points().begin());
    }
    return sigma;
}

V4Report verify_v4_collineations(PrimeModulus p)
{
    const D8Group d8 = d8_elements(p);
    const auto rows = v4_collineations(p);
    V4Report report{0, 0};
    for (std::uint32_t l = 1; l < p.value(); ++l) {
        const FpElement lambda(l, p);
        const FpElement l4 = fp_pow(lambda, 4);
        if (l4.is_zero() || l4.value() == 1) {
            continue;
        }
        ++report.lambdas;
        const ProjValue r = cross_ratio(lambda_quad(lambda));
        if (!(r == ProjPoint::finite(lambda_cross_ratio(lambda).value()))) {
            throw Error(ErrorCode::TableViolation, "cross-ratio formula fails at lambda = " + std::to_string(l));
        }
        for (const auto& row : rows) {
            ++report.checks;
            const auto induced = induced_permutation(row.m, lambda);
            if (!d8.contains(row.m) || !klein_four_classifier(row.sigma) || !induced || *induced != row.sigma) {
                throw Error(ErrorCode::TableViolation, row.m.to_string() + " does not induce " +
                                                           cycle_string(row.sigma) + " at lambda = " + std::to_string(l));
            }
        }
    }
    return report;
}

}  // namespace orbitals
