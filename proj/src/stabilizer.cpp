#include "orbitals/stabilizer.hpp"

#include "orbitals/error.hpp"
#include "orbitals/parallel.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace orbitals {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Direction sets and stabilizers

DirectionSet::DirectionSet(std::vector<ProjPoint> points, PrimeModulus p) : points_(std::move(points)), mod_(p)
{
    if (points_.empty()) {
        throw Error(ErrorCode::InvalidConfig, "a direction set needs at least one point");
    }
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    for (const auto& pt : points_) {
        if (!pt.is_infinity() && pt.slope() >= p.value()) {
            throw Error(ErrorCode::InvalidConfig, "slope is not a residue mod p");
        }
    }
}

DirectionSet DirectionSet::from_slopes(const std::vector<std::int64_t>& slopes, PrimeModulus p)
{
    std::vector<ProjPoint> pts;
    for (const auto s : slopes) {
        pts.push_back(s == -1 ? ProjPoint::infinity() : ProjPoint::finite(p.reduce(s)));
    }
    return DirectionSet(std::move(pts), p);
}

DirectionSet DirectionSet::from_labels(const std::vector<SuborbitLabel>& labels, PrimeModulus p)
{
    std::vector<ProjPoint> pts;
    for (const auto& label : labels) {
        const auto dirs = label_directions(label, p);
        pts.insert(pts.end(), dirs.begin(), dirs.end());
    }
    return DirectionSet(std::move(pts), p);
}

std::vector<VVector> DirectionSet::realized() const
{
    std::vector<VVector> out;
    for (const auto& pt : points_) {
        const auto d = pt.direction();
        for (std::uint32_t k = 1; k < mod_.value(); ++k) {
            out.push_back({mod_.mul(k, d[0]), mod_.mul(k, d[1])});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool DirectionSet::contains(const VVector& v) const
{
    if (v[0] == 0 && v[1] == 0) {
        return false;
    }
    return std::binary_search(points_.begin(), points_.end(), ProjPoint::from_vector(v[0], v[1], mod_));
}

bool DirectionSet::is_d8_closed() const
{
    for (const auto& g : d8_elements(mod_).elements) {
        for (const auto& pt : points_) {
            if (!std::binary_search(points_.begin(), points_.end(), pt.image(g))) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::int64_t> DirectionSet::slope_list() const
{
    std::vector<std::int64_t> out;
    for (const auto& pt : points_) {
        out.push_back(pt.is_infinity() ? -1 : static_cast<std::int64_t>(pt.slope()));
    }
    return out;
}

namespace {

void check_closure(StabilizerResult& result, PrimeModulus mod)
{
    const auto& els = result.elements;
    const auto member = [&](const Matrix& a) { return std::binary_search(els.begin(), els.end(), a); };
    for (const auto& a : els) {
        if (!member(mat_inv(a))) {
            throw Error(ErrorCode::CertificationFailed, "stabilizer not closed under inverses at " + a.to_string());
        }
    }
    const std::uint64_t n = els.size();
    if (n * n <= kClosureProductBudget) {
        for (const auto& a : els) {
            for (const auto& b : els) {
                if (!member(mat_mul(a, b))) {
                    throw Error(ErrorCode::CertificationFailed, "stabilizer not closed under products");
                }
            }
        }
        result.closure_products_checked = n * n;
        return;
    }
    std::mt19937_64 rng(kDefaultSeed ^ mod.value());
    for (std::uint64_t t = 0; t < kClosureProductBudget; ++t) {
        const Matrix& a = els[rng() % n];
        const Matrix& b = els[rng() % n];
        if (!member(mat_mul(a, b))) {
            throw Error(ErrorCode::CertificationFailed, "stabilizer not closed under products");
        }
    }
    result.closure_products_checked = kClosureProductBudget;
}

}  // namespace

StabilizerResult setwise_stabilizer_gl2(const DirectionSet& ds)
{
    const PrimeModulus mod = ds.modulus();
    if (mod.value() > kGl2EnumerationLimit) {
        throw Error(ErrorCode::ParameterTooLarge, "GL(2,p) enumeration is limited to p <= 200");
    }
    const std::uint32_t p = mod.value();
    const auto realized = ds.realized();
    std::vector<bool> inside(static_cast<std::size_t>(p) * p, false);
    for (const auto& v : realized) {
        inside[v[0] + static_cast<std::size_t>(p) * v[1]] = true;
    }
    const auto gl2 = gl2_enumerate(mod);
    const std::size_t workers = worker_count();
    std::vector<std::vector<Matrix>> found(workers);
    const std::size_t chunk = (gl2.size() + workers - 1) / workers;
    parallel_for(workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(gl2.size(), lo + chunk);
            for (std::size_t k = lo; k < hi; ++k) {
                const Matrix& a = gl2[k];
                // v A for the row vector v = (x, y).
                const bool keeps = std::all_of(realized.begin(), realized.end(), [&](const VVector& v) {
                    const std::uint32_t x = mod.add(mod.mul(v[0], a.raw(0, 0)), mod.mul(v[1], a.raw(1, 0)));
                    const std::uint32_t y = mod.add(mod.mul(v[0], a.raw(0, 1)), mod.mul(v[1], a.raw(1, 1)));
                    return inside[x + static_cast<std::size_t>(p) * y];
                });
                if (keeps) {
                    found[w].push_back(a);
                }
            }
        }
    });
    StabilizerResult result{{}, gl2.size(), 0};
    for (auto& part : found) {
        result.elements.insert(result.elements.end(), part.begin(), part.end());
    }
    std::sort(result.elements.begin(), result.elements.end());
    check_closure(result, mod);
    return result;
}

std::vector<Matrix> intersect_sorted(const std::vector<Matrix>& a, const std::vector<Matrix>& b)
{
    std::vector<Matrix> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Matrix> reduce_mod_scalars(const std::vector<Matrix>& elements)
{
    if (elements.empty()) {
        return {};
    }
    const PrimeModulus mod = elements.front().modulus();
    const D8Group d8 = d8_elements(mod);
    std::map<Matrix, std::uint32_t> class_sizes;  // keyed by the first-entry-normalized multiple
    std::set<Matrix> reduced;
    for (const auto& a : elements) {
        const auto data = a.data();
        const auto lead = std::find_if(data.begin(), data.end(), [](std::uint32_t v) { return v != 0; });
        const Matrix normalized = a.scaled(mod.inv(*lead));
        if (class_sizes[normalized]++ > 0) {
            continue;
        }
        std::optional<Matrix> rep;
        for (std::uint32_t k = 1; k < mod.value() && !rep; ++k) {
            const Matrix candidate = a.scaled(k);
            if (d8.contains(candidate)) {
                rep = candidate;
            }
        }
        const Matrix r = rep ? *rep : normalized;
        reduced.insert(r);
        reduced.insert(r.scaled(mod.neg(1)));
    }
    for (const auto& [normalized, count] : class_sizes) {
        if (count != mod.value() - 1) {
            throw Error(ErrorCode::CertificationFailed,
                        "projective class of " + normalized.to_string() + " is not closed under scalars");
        }
    }
    return {reduced.begin(), reduced.end()};
}

bool equals_d8_mod_scalars(const std::vector<Matrix>& elements)
{
    if (elements.empty()) {
        return false;
    }
    return reduce_mod_scalars(elements) == d8_elements(elements.front().modulus()).elements;
}

// ---------------------------------------------------------------------------
// Unions of orbitals and their witnesses

std::string union_key(const std::vector<SuborbitLabel>& labels)
{
    std::vector<SuborbitLabel> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    std::string key;
    for (const auto& l : sorted) {
        key += (key.empty() ? "" : "+") + l.to_string();
    }
    return key;
}

std::string_view witness_kind_name(WitnessKind kind)
{
    switch (kind) {
    case WitnessKind::Linear:
        return "linear";
    case WitnessKind::Hamming:
        return "hamming";
    case WitnessKind::GlGlOnB:
        return "glgl-on-B";
    case WitnessKind::ComplementRef:
        return "complement-ref";
    }
    return "unknown";
}

namespace {

void require_family_prime(std::uint32_t p)
{
    if (p != 5 && p != 7 && p != 13) {
        throw Error(ErrorCode::InvalidConfig, "this certificate is defined for p in {5, 7, 13}, got " +
                                                  std::to_string(p));
    }
}

void require_m(std::size_t m)
{
    if (m < 2) {
        throw Error(ErrorCode::InvalidConfig, "m must be at least 2");
    }
}

class UnionResolver {
public:
    UnionResolver(std::uint32_t p, std::size_t m)
        : p_(p), m_(m), mod_(static_cast<std::int64_t>(p)), space_(m, mod_), labels_(nontrivial_labels(mod_))
    {
        const std::size_t r = labels_.size();
        full_ = (std::uint32_t{1} << r) - 1;
        for (std::size_t k = 0; k < r; ++k) {
            if (labels_[k].tag() == SuborbitLabel::Tag::B) {
                b_bit_ = std::uint32_t{1} << k;
            }
        }
        for (const auto& entry : witness_manifest()) {
            if (entry.p == p_) {
                manifest_.emplace(union_key(entry.labels), &entry);
            }
        }
    }

    std::vector<UnionWitness> resolve()
    {
        std::map<std::uint32_t, Slot> slots;
        for (std::uint32_t mask = 1; mask < full_; ++mask) {
            slots[mask];
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (auto& [mask, slot] : slots) {
                if (slot.witness) {
                    continue;
                }
                if (try_direct(mask, slot) || try_reuse(mask, slot, slots) || try_complement(mask, slot, slots)) {
                    changed = true;
                }
            }
        }
        std::vector<UnionWitness> out;
        for (auto& [mask, slot] : slots) {
            if (!slot.witness) {
                throw Error(ErrorCode::CertificationFailed, "no verified witness for union " + key(mask));
            }
            out.push_back(*slot.witness);
        }
        return out;
    }

private:
    struct Slot {
        std::optional<UnionWitness> witness;
        std::optional<VertexPermutation> permutation;
        bool direct_tried = false;
        bool reuse_tried = false;
        bool complement_tried = false;
    };

    [[nodiscard]] std::vector<SuborbitLabel> labels_of(std::uint32_t mask) const
    {
        std::vector<SuborbitLabel> out;
        for (std::size_t k = 0; k < labels_.size(); ++k) {
            if (mask & (std::uint32_t{1} << k)) {
                out.push_back(labels_[k]);
            }
        }
        return out;
    }

    [[nodiscard]] std::string key(std::uint32_t mask) const { return union_key(labels_of(mask)); }

    const ConnectionSet& set_of(std::uint32_t mask)
    {
        auto it = sets_.find(mask);
        if (it == sets_.end()) {
            it = sets_.emplace(mask, orbital_union_set(labels_of(mask), m_, mod_)).first;
        }
        return it->second;
    }

    bool linear_ok(const Matrix& a, std::uint32_t mask)
    {
        const LinPart lin = LinPart::with_identity(a, m_);
        return !g0_contains(lin) && preserves_set(lin, set_of(mask));
    }

    UnionWitness base(std::uint32_t mask, WitnessKind kind, std::string source) const
    {
        UnionWitness w;
        w.labels = labels_of(mask);
        w.kind = kind;
        w.source = std::move(source);
        return w;
    }

    bool try_direct(std::uint32_t mask, Slot& slot)
    {
        if (slot.direct_tried) {
            return false;
        }
        slot.direct_tried = true;
        const std::string k = key(mask);
        if (const auto it = manifest_.find(k); it != manifest_.end()) {
            const ManifestEntry& entry = *it->second;
            if (linear_ok(entry.a, mask)) {
                slot.witness = base(mask, WitnessKind::Linear, "manifest");
                slot.witness->matrix = entry.a;
                return true;
            }
            if (!entry.correction || !linear_ok(*entry.correction, mask)) {
                throw Error(ErrorCode::CertificationFailed,
                            "manifest witness " + entry.a.to_string() + " fails for union " + k);
            }
            slot.witness = base(mask, WitnessKind::Linear, "manifest-correction");
            slot.witness->matrix = entry.correction;
            slot.witness->rejected = entry.a;
            return true;
        }
        const auto labels = labels_of(mask);
        if (labels.size() != 1) {
            return false;
        }
        if (labels.front().tag() == SuborbitLabel::Tag::B) {
            // Any A o B preserves the rank of a tensor; a shear is outside G0.
            const Matrix shear = Matrix::from_ints(2, 2, {1, 1, 0, 1}, mod_);
            if (!linear_ok(shear, mask)) {
                throw Error(ErrorCode::CertificationFailed, "shear does not preserve the non-simple tensors");
            }
            slot.witness = base(mask, WitnessKind::GlGlOnB, "shear");
            slot.witness->matrix = shear;
            return true;
        }
        const auto dirs = label_directions(labels.front(), mod_);
        if (dirs.size() != 2) {
            return false;
        }
        const HammingWitness h = hamming_witness(dirs[0], dirs[1], m_, mod_);
        slot.witness = base(mask, WitnessKind::Hamming, "hamming");
        slot.witness->hamming_dirs = std::make_pair(dirs[0], dirs[1]);
        slot.witness->arcs_checked = h.arcs_checked;
        slot.permutation = h.permutation;
        return true;
    }

    /// Re-verifies `from`'s witness against the set of `mask`.
    bool adopt(std::uint32_t mask, Slot& slot, const Slot& from, WitnessKind kind, std::string source)
    {
        const UnionWitness& w = *from.witness;
        UnionWitness adopted = base(mask, kind, std::move(source));
        if (w.matrix) {
            if (!linear_ok(*w.matrix, mask)) {
                return false;
            }
            adopted.matrix = w.matrix;
        } else {
            const ConnectionSet& s = set_of(mask);
            if (!is_automorphism(*from.permutation, s)) {
                return false;
            }
            adopted.hamming_dirs = w.hamming_dirs;
            adopted.arcs_checked = static_cast<std::uint64_t>(space_.size()) * s.size();
            slot.permutation = from.permutation;
        }
        slot.witness = std::move(adopted);
        return true;
    }

    bool try_reuse(std::uint32_t mask, Slot& slot, const std::map<std::uint32_t, Slot>& slots)
    {
        if (slot.reuse_tried || !(mask & b_bit_) || mask == b_bit_) {
            return false;
        }
        const std::uint32_t sub = mask & ~b_bit_;
        const Slot& from = slots.at(sub);
        if (!from.witness) {
            return false;
        }
        slot.reuse_tried = true;
        const WitnessKind kind = from.witness->matrix ? WitnessKind::Linear : WitnessKind::Hamming;
        return adopt(mask, slot, from, kind, "reuse:" + key(sub));
    }

    bool try_complement(std::uint32_t mask, Slot& slot, const std::map<std::uint32_t, Slot>& slots)
    {
        const std::uint32_t other = full_ & ~mask;
        const Slot& from = slots.at(other);
        if (slot.complement_tried || !from.witness) {
            return false;
        }
        slot.complement_tried = true;
        return adopt(mask, slot, from, WitnessKind::ComplementRef, "complement:" + key(other));
    }

    std::uint32_t p_;
    std::size_t m_;
    PrimeModulus mod_;
    TensorSpace space_;
    std::vector<SuborbitLabel> labels_;
    std::uint32_t full_ = 0;
    std::uint32_t b_bit_ = 0;
    std::map<std::string, const ManifestEntry*> manifest_;
    std::map<std::uint32_t, ConnectionSet> sets_;
};

json slopes_json(const std::vector<ProjPoint>& pts)
{
    json out = json::array();
    for (const auto& pt : pts) {
        out.push_back(pt.to_string());
    }
    return out;
}

json matrices_json(const std::vector<Matrix>& ms)
{
    json out = json::array();
    for (const auto& a : ms) {
        out.push_back(a.to_rows());
    }
    return out;
}

}  // namespace

bool manifest_row_verifies(const ManifestEntry& entry, std::size_t m)
{
    const LinPart lin = LinPart::with_identity(entry.a, m);
    const ConnectionSet s = orbital_union_set(entry.labels, m, PrimeModulus(static_cast<std::int64_t>(entry.p)));
    return !g0_contains(lin) && preserves_set(lin, s);
}

std::vector<UnionWitness> resolve_union_witnesses(std::uint32_t p, std::size_t m)
{
    require_family_prime(p);
    require_m(m);
    return UnionResolver(p, m).resolve();
}

Certificate certify_not_digraph_group(std::uint32_t p, std::size_t m)
{
    const auto witnesses = resolve_union_witnesses(p, m);
    const PrimeModulus mod(static_cast<std::int64_t>(p));
    const auto labels = nontrivial_labels(mod);
    const std::uint64_t expected = (std::uint64_t{1} << labels.size()) - 2;
    std::set<std::string> seen;
    json unions = json::array();
    std::map<std::string, std::uint64_t> kinds;
    json corrections = json::array();
    for (const auto& w : witnesses) {
        const std::string k = union_key(w.labels);
        if (!seen.insert(k).second) {
            throw Error(ErrorCode::CertificationFailed, "union " + k + " listed twice");
        }
        json row = {{"union", k}, {"kind", std::string(witness_kind_name(w.kind))}, {"source", w.source}};
        if (w.matrix) {
            row["matrix"] = w.matrix->to_rows();
            row["in_g0"] = false;
        }
        if (w.rejected) {
            row["listed_matrix_rejected"] = w.rejected->to_rows();
            corrections.push_back(k);
        }
        if (w.hamming_dirs) {
            row["hamming_directions"] = {w.hamming_dirs->first.to_string(), w.hamming_dirs->second.to_string()};
            row["additive"] = false;
        }
        row["arcs_checked"] = w.arcs_checked;
        unions.push_back(row);
        ++kinds[std::string(witness_kind_name(w.kind))];
    }
    if (seen.size() != expected) {
        throw Error(ErrorCode::CertificationFailed, "covered " + std::to_string(seen.size()) + " unions, expected " +
                                                        std::to_string(expected));
    }
    json label_names = json::array();
    for (const auto& l : labels) {
        label_names.push_back(l.to_string());
    }
    Certificate cert;
    cert.claim = "not-digraph-group";
    cert.parameters = {{"p", p}, {"m", m}};
    cert.status = CertStatus::Verified;
    cert.evidence = {{"rank", rank_of(m, mod)},
                     {"nontrivial_suborbits", label_names},
                     {"unions_expected", expected},
                     {"unions_certified", seen.size()},
                     {"witness_kinds", kinds},
                     {"manifest_corrections", corrections},
                     {"trivial_unions", "empty and complete arc sets have automorphism group Sym(V(x)W)"},
                     {"unions", unions}};
    return cert;
}

// ---------------------------------------------------------------------------
// 2-closure and q = 17

TwoClosedRecipe two_closed_recipe(std::uint32_t p)
{
    require_family_prime(p);
    const PrimeModulus mod(static_cast<std::int64_t>(p));
    const auto a = SuborbitLabel::a();
    const auto l1 = SuborbitLabel::lambda(1);
    const auto l2 = SuborbitLabel::lambda(2);
    const auto l3 = SuborbitLabel::lambda(3);
    switch (p) {
    case 5:
        return {{1, 2, 3, 4}, {l1, l2}, "V1", DirectionSet::from_labels({l1}, mod), "V2",
                DirectionSet::from_labels({l2}, mod)};
    case 7:
        // The second set is the direction set of Delta_1, namely {1, 6}.
        return {{2, 3, 4, 5}, {l2}, "V1", DirectionSet::from_labels({a}, mod), "VA",
                DirectionSet::from_labels({l1}, mod)};
    default:
        return {{2, 6, 7, 11}, {l2}, "V2", DirectionSet::from_labels({l2}, mod), "V3",
                DirectionSet::from_labels({l3}, mod)};
    }
}

namespace {

json clique_json(const CliqueAxiomReport& report)
{
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"lemma", c.lemma}, {"instances", c.instances_checked}});
    }
    json out = {{"mode", std::string(check_mode_name(report.mode))}, {"seed", report.seed}, {"checks", checks}};
    if (report.census) {
        out["census"] = {{"cliques", report.census->cliques}, {"clique_size", report.census->clique_size}};
    }
    return out;
}

CliqueAxiomReport clique_stage(const MuConfig& cfg, std::uint64_t seed, std::uint64_t samples)
{
    try {
        return verify_clique_axioms(cfg, seed, samples);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::LemmaViolation) {
            throw Error(ErrorCode::CertificationFailed, std::string("clique axioms: ") + e.what());
        }
        throw;
    }
}

std::set<std::uint32_t> finite_slopes(const DirectionSet& ds)
{
    std::set<std::uint32_t> out;
    for (const auto& pt : ds.points()) {
        if (!pt.is_infinity()) {
            out.insert(pt.slope());
        }
    }
    return out;
}

json stabilizer_json(const std::string& name, const DirectionSet& ds, const StabilizerResult& st)
{
    return {{"name", name},
            {"directions", slopes_json(ds.points())},
            {"order", st.elements.size()},
            {"closure_products_checked", st.closure_products_checked}};
}

}  // namespace

Certificate certify_two_closed(std::uint32_t p, std::size_t m, std::uint64_t seed, std::uint64_t samples)
{
    require_m(m);
    const TwoClosedRecipe recipe = two_closed_recipe(p);
    const PrimeModulus mod(static_cast<std::int64_t>(p));

    const MuConfig cfg(recipe.mus, m, mod);
    const std::set<std::uint32_t> mus(recipe.mus.begin(), recipe.mus.end());
    const DirectionSet delta_dirs = DirectionSet::from_labels(recipe.mu_labels, mod);
    if (finite_slopes(delta_dirs) != mus || delta_dirs.points().size() != mus.size()) {
        throw Error(ErrorCode::CertificationFailed, "configuration: mu values do not match the suborbit directions");
    }

    const CliqueAxiomReport cliques = clique_stage(cfg, seed, samples);

    const StabilizerResult s1 = setwise_stabilizer_gl2(recipe.first);
    const StabilizerResult s2 = setwise_stabilizer_gl2(recipe.second);
    const auto pair = intersect_sorted(s1.elements, s2.elements);
    const auto pair_reduced = reduce_mod_scalars(pair);
    const bool pair_is_d8 = equals_d8_mod_scalars(pair);

    // An element of the 2-closure fixes every suborbit, so its linear part
    // preserves the direction set of each one. When the pair leaves more than
    // D8, further direction sets are intersected in label order, keeping only
    // those that shrink the group.
    auto current = pair;
    json refinement = json::array();
    for (const auto& label : nontrivial_labels(mod)) {
        if (equals_d8_mod_scalars(current)) {
            break;
        }
        if (label_directions(label, mod).empty()) {
            continue;
        }
        const DirectionSet ds = DirectionSet::from_labels({label}, mod);
        if (ds.points() == recipe.first.points() || ds.points() == recipe.second.points()) {
            continue;
        }
        const StabilizerResult st = setwise_stabilizer_gl2(ds);
        auto next = intersect_sorted(current, st.elements);
        if (next.size() == current.size()) {
            continue;
        }
        current = std::move(next);
        json row = stabilizer_json("V_" + label.to_string(), ds, st);
        row["intersection_order_after"] = current.size();
        refinement.push_back(std::move(row));
    }
    const auto reduced = reduce_mod_scalars(current);
    if (!equals_d8_mod_scalars(current)) {
        throw Error(ErrorCode::CertificationFailed, "stabilizers: intersection reduces to " +
                                                        std::to_string(reduced.size()) + " elements, not D8");
    }
    json labels = json::array();
    for (const auto& l : recipe.mu_labels) {
        labels.push_back(l.to_string());
    }
    Certificate cert;
    cert.claim = "two-closed";
    cert.parameters = {{"p", p}, {"m", m}, {"seed", seed}, {"samples", samples}};
    cert.status = CertStatus::Verified;
    cert.evidence = {
        {"configuration", {{"mus", recipe.mus}, {"suborbits", labels}}},
        {"clique_axioms", clique_json(cliques)},
        {"stabilizers",
         {{"gl2_order", s1.matrices_checked},
          {"sets", {stabilizer_json(recipe.first_name, recipe.first, s1),
                    stabilizer_json(recipe.second_name, recipe.second, s2)}},
          {"pair_intersection_order", pair.size()},
          {"pair_scalar_classes_times_sign", pair_reduced.size()},
          {"pair_equals_d8", pair_is_d8},
          {"refinement", refinement},
          {"intersection_order", current.size()},
          {"scalar_classes_times_sign", reduced.size()},
          {"reduced_elements", matrices_json(reduced)},
          {"equals_d8", true}}}};
    return cert;
}

Certificate certify_q17(std::size_t m, std::uint64_t seed, std::uint64_t samples)
{
    return certify_q17(m, kQ17Mus, seed, samples);
}

Certificate certify_q17(std::size_t m, const std::vector<std::uint32_t>& mus, std::uint64_t seed,
                        std::uint64_t samples)
{
    require_m(m);
    const PrimeModulus mod(17);
    std::vector<ProjPoint> pts;
    for (const auto mu : mus) {
        pts.push_back(ProjPoint::finite(mod.reduce(mu)));
    }
    const DirectionSet v12(pts, mod);
    const StabilizerResult st = setwise_stabilizer_gl2(v12);
    const auto reduced = reduce_mod_scalars(st.elements);
    if (!equals_d8_mod_scalars(st.elements)) {
        throw Error(ErrorCode::CertificationFailed,
                    "stabilizer: reduces to " + std::to_string(reduced.size()) + " elements, not D8");
    }
    const DirectionSet delta12 = DirectionSet::from_labels({SuborbitLabel::lambda(1), SuborbitLabel::lambda(2)}, mod);
    if (delta12.points() != v12.points()) {
        throw Error(ErrorCode::CertificationFailed, "directions: mu values are not the directions of Delta_1 u Delta_2");
    }
    const CliqueAxiomReport cliques = clique_stage(MuConfig(mus, m, mod), seed, samples);

    Certificate cert;
    cert.claim = "q17-rigidity";
    cert.parameters = {{"p", 17}, {"m", m}, {"mus", mus}, {"seed", seed}, {"samples", samples}};
    cert.status = CertStatus::Verified;
    cert.evidence = {{"stabilizer",
                      {{"gl2_order", st.matrices_checked},
                       {"order", st.elements.size()},
                       {"closure_products_checked", st.closure_products_checked},
                       {"scalar_classes_times_sign", reduced.size()},
                       {"reduced_elements", matrices_json(reduced)},
                       {"equals_d8", true}}},
                     {"directions_match_delta_1_2", true},
                     {"clique_axioms", clique_json(cliques)}};
    return cert;
}

// ---------------------------------------------------------------------------
// Obstructions and the prime scan

std::array<FpElement, 4> lambda_obstructions(FpElement lambda)
{
    const FpElement l2 = lambda * lambda;
    const FpElement l4 = l2 * l2;
    if (l4.is_zero() || l4.value() == 1) {
        throw Error(ErrorCode::DegenerateLambda, "lambda^4 must not be 0 or 1");
    }
    const PrimeModulus mod = lambda.modulus();
    const FpElement one(1, mod);
    const FpElement six(6, mod);
    const FpElement fourteen(mod.reduce(14), mod);
    return {l4 + one, l4 + six * l2 + one, l4 - six * l2 + one, l4 * l4 + fourteen * l4 + one};
}

std::array<std::int64_t, 4> lambda_obstructions_integer(std::int64_t lambda)
{
    if (lambda < -200 || lambda > 200) {
        throw Error(ErrorCode::ParameterTooLarge, "integer obstructions are evaluated for |lambda| <= 200");
    }
    const std::int64_t l2 = lambda * lambda;
    const std::int64_t l4 = l2 * l2;
    return {l4 + 1, l4 + 6 * l2 + 1, l4 - 6 * l2 + 1, l4 * l4 + 14 * l4 + 1};
}

bool obstructed_mod(std::int64_t lambda, std::uint32_t p)
{
    const auto values = lambda_obstructions_integer(lambda);
    return std::any_of(values.begin(), values.end(),
                       [p](std::int64_t v) { return v % static_cast<std::int64_t>(p) == 0; });
}

namespace {

bool degenerate_mod(std::int64_t lambda, std::uint32_t p)
{
    const PrimeModulus mod(p);
    const FpElement l(mod.reduce(lambda), mod);
    const FpElement l4 = fp_pow(l, 4);
    return l4.is_zero() || l4.value() == 1;
}

bool residue_obstructed(std::int64_t lambda, std::uint32_t p)
{
    const PrimeModulus mod(p);
    const auto values = lambda_obstructions(FpElement(mod.reduce(lambda), mod));
    return std::any_of(values.begin(), values.end(), [](const FpElement& v) { return v.is_zero(); });
}

}  // namespace

ScanResult scan_obstructions(std::uint32_t max_p)
{
    if (max_p > kScanLimit) {
        throw Error(ErrorCode::ParameterTooLarge, "scan is limited to primes <= " + std::to_string(kScanLimit));
    }
    ScanResult result{max_p, {}, {}, {}, {}};
    for (std::uint32_t p = 2; p <= max_p; ++p) {
        if (!is_prime(p)) {
            continue;
        }
        result.primes.push_back(p);
        const bool o2 = obstructed_mod(2, p);
        const bool o4 = obstructed_mod(4, p);
        for (const std::int64_t lambda : {2, 4}) {
            if (p >= 5 && !degenerate_mod(lambda, p) && residue_obstructed(lambda, p) != obstructed_mod(lambda, p)) {
                throw Error(ErrorCode::ScanViolation, "residue and integer obstructions disagree at p=" +
                                                          std::to_string(p) + ", lambda=" + std::to_string(lambda));
            }
        }
        if (o2 && o4) {
            result.both_obstructed.push_back(p);
        }
        if (p < 5 || p == 5 || p == 7 || p == 13 || p == 17) {
            continue;
        }
        const bool clean2 = !o2 && !degenerate_mod(2, p);
        const bool clean4 = !o4 && !degenerate_mod(4, p);
        if (clean2) {
            result.rigid_via_lambda2.push_back(p);
        } else if (clean4) {
            result.rigid_via_lambda4.push_back(p);
        } else {
            throw Error(ErrorCode::ScanViolation, "both lambda = 2 and lambda = 4 are obstructed at p=" +
                                                      std::to_string(p));
        }
    }
    return result;
}

Certificate scan_primes(std::uint32_t max_p)
{
    const ScanResult scan = scan_obstructions(max_p);
    std::vector<std::uint32_t> expected;
    for (const std::uint32_t p : {7u, 13u}) {
        if (p <= max_p) {
            expected.push_back(p);
        }
    }
    if (scan.both_obstructed != expected) {
        throw Error(ErrorCode::ScanViolation, "both-obstructed primes differ from {7, 13}");
    }
    Certificate cert;
    cert.claim = "prime-scan";
    cert.parameters = {{"max_prime", max_p}};
    cert.status = CertStatus::Verified;
    cert.evidence = {
        {"primes_scanned", scan.primes.size()},
        {"both_obstructed", scan.both_obstructed},
        {"rigid_via_lambda2", scan.rigid_via_lambda2.size()},
        {"rigid_via_lambda4", scan.rigid_via_lambda4},
        {"integer_obstructions", {{"lambda2", lambda_obstructions_integer(2)}, {"lambda4", lambda_obstructions_integer(4)}}},
        {"scope",
         "obstruction arithmetic only: rigidity of a clean Gamma_lambda rests on the clique-structure argument "
         "and is not machine-checked here; no explicit digraph is constructed for general p"}};
    if (max_p >= 17) {
        cert.evidence["p17"] = {{"lambda2_obstructed", obstructed_mod(2, 17)},
                                {"lambda4_integer_obstructed", obstructed_mod(4, 17)},
                                {"lambda4_degenerate", degenerate_mod(4, 17)}};
    }
    return cert;
}

}  // namespace orbitals
