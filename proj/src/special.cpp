#include "latvol/special.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace latvol {

namespace {

// Proportionality of the integer vectors (a_i) and (b_i) with b nonzero.
bool proportional(const std::vector<Int>& a, const std::vector<Int>& b)
{
    std::size_t r = b.size();
    std::size_t ref = r;
    for (std::size_t i = 0; i < r; ++i)
        if (b[i] != 0) {
            ref = i;
            break;
        }
    if (ref == r)
        return false;
    for (std::size_t i = 0; i < r; ++i)
        if (a[i] * b[ref] != a[ref] * b[i])
            return false;
    return true;
}

} // namespace

SpecialShape recognize_parallelotope(const HomogenizedPolytope& p)
{
    SpecialShape none;
    const int d = p.dim();
    if (d < 1 || d > 62)
        return none;
    const Eigen::Index m = p.vertex_count();
    const Eigen::Index h = p.facet_count();
    if (h != 2 * d || Int(m) != int_pow(2, d) || !p.simple())
        return none;

    // facets must pair into d classes with disjoint vertex sets covering all
    // vertices
    std::vector<Eigen::Index> partner(static_cast<std::size_t>(h), -1);
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = i + 1; j < h; ++j) {
            const auto& a = p.facets()[static_cast<std::size_t>(i)].incident;
            const auto& b = p.facets()[static_cast<std::size_t>(j)].incident;
            if (a.and_count(b) == 0 && a.count() + b.count() == static_cast<std::size_t>(m)) {
                if (partner[static_cast<std::size_t>(i)] >= 0 ||
                    partner[static_cast<std::size_t>(j)] >= 0)
                    return none; // pairing must be unique
                partner[static_cast<std::size_t>(i)] = j;
                partner[static_cast<std::size_t>(j)] = i;
            }
        }
    }
    for (Eigen::Index i = 0; i < h; ++i)
        if (partner[static_cast<std::size_t>(i)] < 0)
            return none;

    // geometric certificate: the two heights of a pair sum to a constant on
    // P, i.e. g'*lambda + g*lambda' is proportional to the grading on aff(P)
    const auto& basis = p.aff_basis().vectors();
    const Eigen::Index r = basis.rows();
    std::vector<Int> delta_vals(static_cast<std::size_t>(r));
    Int tmp;
    for (Eigen::Index k = 0; k < r; ++k) {
        dot_row_into(tmp, p.grading_form(), basis, k);
        delta_vals[static_cast<std::size_t>(k)] = tmp;
    }
    for (Eigen::Index i = 0; i < h; ++i) {
        const Eigen::Index j = partner[static_cast<std::size_t>(i)];
        if (j < i)
            continue;
        const auto& fi = p.facets()[static_cast<std::size_t>(i)];
        const auto& fj = p.facets()[static_cast<std::size_t>(j)];
        IntVector mu = fj.divisor_g * fi.lambda + fi.divisor_g * fj.lambda;
        std::vector<Int> mu_vals(static_cast<std::size_t>(r));
        for (Eigen::Index k = 0; k < r; ++k) {
            dot_row_into(tmp, mu, basis, k);
            mu_vals[static_cast<std::size_t>(k)] = tmp;
        }
        if (!proportional(mu_vals, delta_vals))
            return none;
    }

    // corner simplex: vertex 0 and its d neighbors along edges
    SpecialShape shape;
    shape.kind = SpecialShape::Kind::parallelotope;
    shape.corner = 0;
    std::vector<Eigen::Index> corner_facets;
    for (Eigen::Index i = 0; i < h; ++i)
        if (p.facets()[static_cast<std::size_t>(i)].incident.test(0))
            corner_facets.push_back(i);
    if (static_cast<int>(corner_facets.size()) != d)
        return none;
    for (Eigen::Index dropped : corner_facets) {
        Eigen::Index neighbor = -1;
        for (Eigen::Index v = 1; v < m; ++v) {
            bool on_all = true;
            for (Eigen::Index f : corner_facets) {
                if (f == dropped)
                    continue;
                if (!p.facets()[static_cast<std::size_t>(f)].incident.test(
                        static_cast<std::size_t>(v))) {
                    on_all = false;
                    break;
                }
            }
            if (on_all) {
                neighbor = v;
                break;
            }
        }
        if (neighbor < 0)
            return none;
        shape.neighbors.push_back(neighbor);
    }
    return shape;
}

SpecialShape recognize_cross_polytope(const HomogenizedPolytope& p)
{
    SpecialShape none;
    const int d = p.dim();
    if (d < 1 || d > 62)
        return none;
    const Eigen::Index m = p.vertex_count();
    const Eigen::Index h = p.facet_count();
    if (m != 2 * d || Int(h) != int_pow(2, d))
        return none;
    for (const auto& f : p.facets())
        if (f.incident.count() != static_cast<std::size_t>(d))
            return none; // facets must be simplices

    // antipodal pairing: vertices i, i' sharing no facet
    std::vector<Eigen::Index> partner(static_cast<std::size_t>(m), -1);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            bool share = false;
            for (const auto& f : p.facets()) {
                if (f.incident.test(static_cast<std::size_t>(i)) &&
                    f.incident.test(static_cast<std::size_t>(j))) {
                    share = true;
                    break;
                }
            }
            if (!share) {
                if (partner[static_cast<std::size_t>(i)] >= 0 ||
                    partner[static_cast<std::size_t>(j)] >= 0)
                    return none;
                partner[static_cast<std::size_t>(i)] = j;
                partner[static_cast<std::size_t>(j)] = i;
            }
        }
    }
    for (Eigen::Index i = 0; i < m; ++i)
        if (partner[static_cast<std::size_t>(i)] < 0)
            return none;
    // every facet holds exactly one vertex of each pair
    for (const auto& f : p.facets())
        for (Eigen::Index i = 0; i < m; ++i)
            if (f.incident.test(static_cast<std::size_t>(i)) &&
                f.incident.test(static_cast<std::size_t>(partner[static_cast<std::size_t>(i)])))
                return none;

    // common center: all antipodal midpoints coincide
    for (Eigen::Index coord = 0; coord < p.edim(); ++coord) {
        Rat center;
        bool have = false;
        for (Eigen::Index i = 0; i < m; ++i) {
            const Eigen::Index j = partner[static_cast<std::size_t>(i)];
            Rat mid = make_rat(p.generators()(i, coord), p.delta_of(i)) +
                      make_rat(p.generators()(j, coord), p.delta_of(j));
            if (!have) {
                center = mid;
                have = true;
            } else if (mid != center) {
                return none;
            }
        }
    }

    SpecialShape shape;
    shape.kind = SpecialShape::Kind::cross_polytope;
    shape.apex = 0;
    for (const auto& f : p.facets()) {
        if (!f.incident.test(0)) {
            f.incident.for_each(
                [&](std::size_t v) { shape.opposite_facet.push_back(static_cast<Eigen::Index>(v)); });
            break;
        }
    }
    return shape;
}

SpecialShape recognize_special(const HomogenizedPolytope& p)
{
    if (p.vertex_count() == p.dim() + 1) {
        SpecialShape s;
        s.kind = SpecialShape::Kind::simplex;
        return s;
    }
    SpecialShape s = recognize_parallelotope(p);
    if (s.kind != SpecialShape::Kind::none)
        return s;
    return recognize_cross_polytope(p);
}

Rat parallelotope_volume(const HomogenizedPolytope& p, const SpecialShape& shape)
{
    if (shape.kind != SpecialShape::Kind::parallelotope)
        throw std::invalid_argument("shape is not a parallelotope");
    std::vector<Eigen::Index> idx;
    idx.push_back(shape.corner);
    idx.insert(idx.end(), shape.neighbors.begin(), shape.neighbors.end());
    return Rat(factorial(p.dim())) * simplex_volume(p, idx);
}

Rat cross_polytope_volume(const HomogenizedPolytope& p, const SpecialShape& shape)
{
    if (shape.kind != SpecialShape::Kind::cross_polytope)
        throw std::invalid_argument("shape is not a cross polytope");
    std::vector<Eigen::Index> idx;
    idx.push_back(shape.apex);
    idx.insert(idx.end(), shape.opposite_facet.begin(), shape.opposite_facet.end());
    return Rat(int_pow(2, p.dim() - 1)) * simplex_volume(p, idx);
}

namespace {

struct PullingContext {
    const HomogenizedPolytope& p;
    const std::vector<Eigen::Index>& rank_of; // vertex -> position in the order
    std::unordered_map<Bitset, std::vector<std::vector<Eigen::Index>>, BitsetHash> memo;

    // facets of the face given by its vertex set: maximal intersections with
    // facets of P not containing the face
    std::vector<Bitset> facets_of(const Bitset& face) const
    {
        std::vector<Bitset> cand;
        for (const auto& f : p.facets()) {
            if (f.incident.contains(face))
                continue;
            Bitset w;
            w.assign_and(face, f.incident);
            if (w.any())
                cand.push_back(std::move(w));
        }
        std::sort(cand.begin(), cand.end(),
                  [](const Bitset& a, const Bitset& b) { return a.count() > b.count(); });
        std::vector<Bitset> maximal;
        for (auto& w : cand) {
            bool contained = false;
            for (const auto& kept : maximal)
                if (kept.contains(w)) {
                    contained = true;
                    break;
                }
            if (!contained)
                maximal.push_back(std::move(w));
        }
        return maximal;
    }

    const std::vector<std::vector<Eigen::Index>>& triangulate(const Bitset& face, int dim)
    {
        auto it = memo.find(face);
        if (it != memo.end())
            return it->second;
        std::vector<std::vector<Eigen::Index>> simplices;
        std::vector<Eigen::Index> verts;
        face.for_each([&](std::size_t v) { verts.push_back(static_cast<Eigen::Index>(v)); });
        if (static_cast<int>(verts.size()) == dim + 1) {
            simplices.push_back(verts);
        } else {
            Eigen::Index first = verts[0];
            for (Eigen::Index v : verts)
                if (rank_of[static_cast<std::size_t>(v)] < rank_of[static_cast<std::size_t>(first)])
                    first = v;
            for (const Bitset& w : facets_of(face)) {
                if (w.test(static_cast<std::size_t>(first)))
                    continue;
                for (const auto& s : triangulate(w, dim - 1)) {
                    std::vector<Eigen::Index> coned = s;
                    coned.push_back(first);
                    simplices.push_back(std::move(coned));
                }
            }
        }
        return memo.emplace(face, std::move(simplices)).first->second;
    }
};

} // namespace

std::vector<Eigen::Index> natural_vertex_order(const HomogenizedPolytope& p)
{
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p.vertex_count()));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    return order;
}

OracleResult pulling_triangulation(const HomogenizedPolytope& p,
                                   const std::vector<Eigen::Index>& vertex_order,
                                   const OracleLimits& limits)
{
    if (p.dim() > limits.max_dim || p.vertex_count() > limits.max_vertices)
        throw OracleBoundError();
    const Eigen::Index m = p.vertex_count();
    if (static_cast<Eigen::Index>(vertex_order.size()) != m)
        throw std::invalid_argument("vertex order must list every vertex once");
    std::vector<Eigen::Index> rank(static_cast<std::size_t>(m), -1);
    for (std::size_t i = 0; i < vertex_order.size(); ++i) {
        const Eigen::Index v = vertex_order[i];
        if (v < 0 || v >= m || rank[static_cast<std::size_t>(v)] >= 0)
            throw std::invalid_argument("vertex order must list every vertex once");
        rank[static_cast<std::size_t>(v)] = static_cast<Eigen::Index>(i);
    }

    OracleResult res;
    res.lattice_volume = 0;
    res.simplices = 0;
    const int d = p.dim();
    if (d <= 0) {
        res.lattice_volume = 1;
        res.simplices = 1;
        return res;
    }

    // rational vertex coordinates in the working space
    RatMatrix q(m, p.edim());
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < p.edim(); ++j)
            q(i, j) = make_rat(p.generators()(i, j), p.delta_of(i));

    // direction lattice of aff(P): kernel of the grading on the affine
    // lattice
    const IntMatrix& aff = p.aff_basis().vectors();
    IntMatrix delta_row(1, aff.rows());
    Int tmp;
    for (Eigen::Index k = 0; k < aff.rows(); ++k) {
        dot_row_into(tmp, p.grading_form(), aff, k);
        delta_row(0, k) = tmp;
    }
    LatticeBasis dir(IntMatrix(kernel_lattice(delta_row) * aff), p.edim());

    PullingContext ctx{p, rank, {}};
    Bitset all(static_cast<std::size_t>(m));
    all.set_all();
    const auto& simplices = ctx.triangulate(all, d);

    const IntMatrix& cmap = dir.coordinate_map(); // d x edim, integral
    for (const auto& s : simplices) {
        RatMatrix t(d, d);
        for (int i = 0; i < d; ++i) {
            for (int k = 0; k < d; ++k) {
                Rat acc = 0;
                for (Eigen::Index j = 0; j < p.edim(); ++j)
                    acc += Rat(cmap(k, j)) * (q(s[static_cast<std::size_t>(i) + 1], j) -
                                              q(s[0], j));
                t(i, k) = acc;
            }
        }
        res.lattice_volume += det_abs(std::move(t));
        res.simplices += 1;
    }
    return res;
}

Rat oracle_volume_by_triangulation(const HomogenizedPolytope& p,
                                   const std::vector<Eigen::Index>& vertex_order,
                                   const OracleLimits& limits)
{
    return pulling_triangulation(p, vertex_order, limits).lattice_volume;
}

} // namespace latvol
