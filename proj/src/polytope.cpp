#include "latvol/polytope.hpp"

#include "latvol/dd.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>

namespace latvol {

namespace {

bool lex_less(const IntMatrix& m, Eigen::Index a, Eigen::Index b)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (m(a, j) != m(b, j))
            return m(a, j) < m(b, j);
    }
    return false;
}

} // namespace

HomogenizedPolytope::HomogenizedPolytope(IntMatrix gens, std::vector<Int> deltas,
                                         IntVector grading_form,
                                         std::vector<IntVector> facet_forms,
                                         std::vector<int> facet_reps, IntMatrix to_original,
                                         Eigen::Index full_dim)
    : gens_(std::move(gens)), deltas_(std::move(deltas)), grading_(std::move(grading_form)),
      to_original_(std::move(to_original)), full_dim_(full_dim)
{
    const Eigen::Index m = gens_.rows();

    // Canonical vertex numbering: sort generators lexicographically so that
    // downstream tie-breaking by vertex index is reproducible no matter how
    // the rays came out of the conversion.
    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return lex_less(gens_, a, b); });
    IntMatrix sorted(m, gens_.cols());
    std::vector<Int> sorted_deltas(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        sorted.row(i) = gens_.row(order[i]);
        sorted_deltas[i] = deltas_[order[i]];
    }
    gens_ = std::move(sorted);
    deltas_ = std::move(sorted_deltas);

    aff_ = saturated_basis(gens_, 1);
    dim_ = static_cast<int>(aff_.rank()) - 1;

    Int k = 0;
    for (Eigen::Index i = 0; i < aff_.rank(); ++i) {
        Int v = dot(grading_, aff_.vectors().row(i).transpose());
        if (v != 0)
            k = boost::multiprecision::gcd(k, v);
        if (k == 1)
            break;
    }
    grading_denominator_ = boost::multiprecision::abs(k);

    // Validate the candidate facet forms: incidence by exact evaluation,
    // facet rank, dedup of forms cutting the same facet. A 0-dimensional
    // polytope has no facets.
    std::map<std::size_t, std::vector<std::size_t>> by_hash;
    Int val;
    for (std::size_t c = 0; dim_ >= 1 && c < facet_forms.size(); ++c) {
        IntVector lambda = std::move(facet_forms[c]);
        make_primitive(lambda);
        Bitset inc(static_cast<std::size_t>(m));
        Eigen::Index inc_count = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            dot_row_into(val, lambda, gens_, i);
            if (val == 0) {
                inc.set(static_cast<std::size_t>(i));
                ++inc_count;
            }
        }
        if (inc_count == m)
            continue; // implicit equation, not a support hyperplane of a facet
        // facet test: incident generators must span a cone of rank dim P
        RankAccumulator acc(gens_.cols());
        for (Eigen::Index i = 0; i < m && acc.rank() < dim_; ++i)
            if (inc.test(static_cast<std::size_t>(i)))
                acc.add(gens_.row(i).transpose());
        if (acc.rank() != dim_)
            continue;
        bool duplicate = false;
        for (std::size_t prev : by_hash[inc.hash()]) {
            if (facets_[prev].incident == inc) {
                duplicate = true;
                break;
            }
        }
        if (duplicate)
            continue;
        FacetForm f;
        f.lambda = std::move(lambda);
        f.incident = std::move(inc);
        f.rep_index = facet_reps[c];
        f.divisor_g = (dim_ >= 0) ? primitivity_divisor(f.lambda, aff_) : Int(1);
        by_hash[f.incident.hash()].push_back(facets_.size());
        facets_.push_back(std::move(f));
    }

    simple_ = true;
    for (Eigen::Index i = 0; i < m && simple_; ++i) {
        Eigen::Index on = 0;
        for (const auto& f : facets_)
            if (f.incident.test(static_cast<std::size_t>(i)))
                ++on;
        if (on != dim_)
            simple_ = false;
    }
}

RatVector HomogenizedPolytope::original_vertex(Eigen::Index i) const
{
    IntVector lifted = to_original_ * gens_.row(i).transpose();
    RatVector out(lifted.size());
    for (Eigen::Index j = 0; j < lifted.size(); ++j)
        out(j) = make_rat(lifted(j), deltas_[static_cast<std::size_t>(i)]);
    return out;
}

Int HomogenizedPolytope::euclidean_gram_det() const
{
    if (dim_ <= 0)
        return 1;
    const Eigen::Index r = aff_.rank();
    IntMatrix delta_row(1, r);
    for (Eigen::Index j = 0; j < r; ++j)
        delta_row(0, j) = dot(grading_, aff_.vectors().row(j).transpose());
    IntMatrix ker = kernel_lattice(delta_row);          // (r-1) x r
    IntMatrix directions = ker * aff_.vectors();        // (r-1) x edim
    IntMatrix orig = directions * to_original_.transpose(); // (r-1) x n
    return det_abs(IntMatrix(orig * orig.transpose()));
}

std::pair<IntMatrix, std::vector<Int>> homogenize(const RatMatrix& points)
{
    const Eigen::Index m = points.rows();
    const Eigen::Index n = points.cols();
    IntMatrix gens(m, n + 1);
    std::vector<Int> deltas(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        Int scale = 1;
        for (Eigen::Index j = 0; j < n; ++j)
            scale = boost::multiprecision::lcm(scale, denominator(points(i, j)));
        for (Eigen::Index j = 0; j < n; ++j)
            gens(i, j) = numerator(points(i, j)) * (scale / denominator(points(i, j)));
        gens(i, n) = scale;
        deltas[static_cast<std::size_t>(i)] = scale; // (p,1) scaled by its lcm is primitive
    }
    return {std::move(gens), std::move(deltas)};
}

namespace {

// Shared V-side pipeline: generators with positive grading values, possibly
// spanning a proper subspace. Works in coordinates of the saturated span,
// computes facets as extreme rays of the dual cone.
std::optional<HomogenizedPolytope> from_generators_impl(const IntMatrix& gens_in,
                                                        const std::vector<Int>& deltas_in,
                                                        const IntVector& grading_in,
                                                        const IntMatrix& to_original_in)
{
    const Eigen::Index m = gens_in.rows();
    const Eigen::Index e0 = gens_in.cols();
    if (m == 0)
        return std::nullopt;

    // Drop duplicate generators (same primitive ray).
    std::vector<Eigen::Index> keep;
    {
        std::vector<Eigen::Index> order(m);
        std::iota(order.begin(), order.end(), Eigen::Index(0));
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index b) { return lex_less(gens_in, a, b); });
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i > 0 && gens_in.row(order[i]) == gens_in.row(order[i - 1]))
                continue;
            keep.push_back(order[i]);
        }
    }

    IntMatrix gens(static_cast<Eigen::Index>(keep.size()), e0);
    std::vector<Int> deltas(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        gens.row(static_cast<Eigen::Index>(i)) = gens_in.row(keep[i]);
        deltas[i] = deltas_in[static_cast<std::size_t>(keep[i])];
        if (deltas[i] <= 0)
            throw GradingError();
    }

    // Reduce to the saturated lattice of the span.
    LatticeBasis span = saturated_basis(gens, 1);
    const Eigen::Index r = span.rank();
    IntMatrix gens_r(gens.rows(), r);
    for (Eigen::Index i = 0; i < gens.rows(); ++i)
        gens_r.row(i) = span.coordinates(gens.row(i).transpose()).transpose();
    IntVector grading_r = span.vectors() * grading_in;
    IntMatrix to_original = to_original_in * span.vectors().transpose(); // n x r

    // Facets: extreme rays of the dual cone {y : <g_i, y> >= 0}.
    IntMatrix dual_rays = double_description(gens_r);
    std::vector<Eigen::Index> dual_order(dual_rays.rows());
    std::iota(dual_order.begin(), dual_order.end(), Eigen::Index(0));
    std::sort(dual_order.begin(), dual_order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return lex_less(dual_rays, a, b); });
    std::vector<IntVector> forms;
    std::vector<int> reps;
    forms.reserve(dual_order.size());
    for (Eigen::Index i = 0; i < dual_rays.rows(); ++i) {
        forms.push_back(dual_rays.row(dual_order[i]).transpose());
        reps.push_back(static_cast<int>(i));
    }

    return HomogenizedPolytope(std::move(gens_r), std::move(deltas), std::move(grading_r),
                               std::move(forms), std::move(reps), std::move(to_original), r - 1);
}

} // namespace

std::optional<HomogenizedPolytope> dual_convert(const RatMatrix& points)
{
    auto [gens, deltas] = homogenize(points);
    const Eigen::Index n = points.cols();
    IntVector grading = IntVector::Zero(n + 1);
    grading(n) = 1;
    IntMatrix to_original(n, n + 1);
    to_original.setZero();
    for (Eigen::Index j = 0; j < n; ++j)
        to_original(j, j) = 1;
    return from_generators_impl(gens, deltas, grading, to_original);
}

std::optional<HomogenizedPolytope> dual_convert_from_generators(const IntMatrix& gens,
                                                                const IntVector& grading)
{
    const Eigen::Index m = gens.rows();
    IntMatrix prim = gens;
    std::vector<Int> deltas(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        IntVector row = prim.row(i).transpose();
        make_primitive(row);
        prim.row(i) = row.transpose();
        deltas[static_cast<std::size_t>(i)] = dot(grading, row);
    }
    IntMatrix to_original = IntMatrix::Identity(gens.cols(), gens.cols());
    return from_generators_impl(prim, deltas, grading, to_original);
}

std::optional<HomogenizedPolytope> dual_convert(const ConstraintSystem& cs)
{
    const Eigen::Index n = cs.ambient_dim;

    // Restrict to the kernel lattice of the equations.
    IntMatrix basis; // r0 x n
    if (cs.equations.rows() > 0) {
        basis = kernel_lattice(cs.equations);
    } else {
        basis = IntMatrix::Identity(n, n);
    }
    const Eigen::Index r0 = basis.rows();
    if (r0 == 0)
        return std::nullopt;

    IntMatrix ineqs(cs.inequalities.rows(), r0);
    for (Eigen::Index i = 0; i < cs.inequalities.rows(); ++i)
        for (Eigen::Index j = 0; j < r0; ++j)
            ineqs(i, j) = dot(cs.inequalities.row(i).transpose(), basis.row(j).transpose());
    IntVector grading_r = basis * cs.grading;

    // Drop zero rows (trivial constraints) but remember original indices.
    std::vector<Eigen::Index> row_index;
    {
        std::vector<Eigen::Index> nonzero;
        for (Eigen::Index i = 0; i < ineqs.rows(); ++i) {
            bool zero = true;
            for (Eigen::Index j = 0; j < r0 && zero; ++j)
                zero = ineqs(i, j) == 0;
            if (!zero)
                nonzero.push_back(i);
        }
        IntMatrix packed(static_cast<Eigen::Index>(nonzero.size()), r0);
        for (std::size_t i = 0; i < nonzero.size(); ++i)
            packed.row(static_cast<Eigen::Index>(i)) = ineqs.row(nonzero[i]);
        ineqs = std::move(packed);
        row_index = std::move(nonzero);
    }

    IntMatrix rays;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        rays = double_description(ineqs);
        if (std::getenv("LATVOL_PROFILE"))
            std::fprintf(stderr, "[profile] double description: %ld rays in %.1fs\n",
                         static_cast<long>(rays.rows()),
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count());
    } catch (const NotPointedError&) {
        throw GradingError();
    }
    if (rays.rows() == 0)
        return std::nullopt;

    std::vector<Int> deltas(static_cast<std::size_t>(rays.rows()));
    for (Eigen::Index i = 0; i < rays.rows(); ++i) {
        deltas[static_cast<std::size_t>(i)] = dot(grading_r, rays.row(i).transpose());
        if (deltas[static_cast<std::size_t>(i)] <= 0)
            throw GradingError();
    }

    std::vector<IntVector> forms;
    std::vector<int> reps;
    for (Eigen::Index i = 0; i < ineqs.rows(); ++i) {
        forms.push_back(ineqs.row(i).transpose());
        reps.push_back(static_cast<int>(row_index[static_cast<std::size_t>(i)]));
    }

    return HomogenizedPolytope(std::move(rays), std::move(deltas), std::move(grading_r),
                               std::move(forms), std::move(reps),
                               IntMatrix(basis.transpose()), r0 - 1);
}

Int grading_denominator(const HomogenizedPolytope& p)
{
    return p.grading_denominator();
}

Rat lattice_height(const FacetForm& f, const IntVector& v, const Int& delta_v)
{
    Int num = dot(f.lambda, v);
    return make_rat(num, f.divisor_g * delta_v);
}

Rat lattice_height(const HomogenizedPolytope& p, const FacetForm& f, Eigen::Index gen_index)
{
    return lattice_height(f, p.generator(gen_index), p.delta_of(gen_index));
}

Rat simplex_volume(const HomogenizedPolytope& p, const std::vector<Eigen::Index>& gen_indices)
{
    const Eigen::Index s = static_cast<Eigen::Index>(gen_indices.size());
    IntMatrix sub(s, p.edim());
    Int delta_prod = 1;
    for (Eigen::Index i = 0; i < s; ++i) {
        sub.row(i) = p.generators().row(gen_indices[static_cast<std::size_t>(i)]);
        delta_prod *= p.delta_of(gen_indices[static_cast<std::size_t>(i)]);
    }
    LatticeBasis basis = saturated_basis(sub, 1, s);
    if (basis.rank() != s)
        throw DegenerateSimplexError();
    IntMatrix t(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
        t.row(i) = basis.coordinates(sub.row(i).transpose()).transpose();
    return make_rat(det_abs(std::move(t)), delta_prod);
}

bool is_simple(const HomogenizedPolytope& p)
{
    return p.simple();
}

} // namespace latvol
