#include "latvol/descent.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>

namespace latvol {

namespace {

struct FaceData {
    Rat weight;
    Int flags;
};

using LayerMap = std::unordered_map<FaceSignature, FaceData, BitsetHash>;

struct Accumulators {
    Rat volume = Rat(0);
    std::uint64_t det_count = 0;
    Int sigma = 0;
};

// In-place fraction-free row echelon over preallocated storage; rows are fed
// straight from the generator matrix, kept primitive, and reused across
// faces so the inner loop does not allocate.
struct EchelonWorkspace {
    IntMatrix rows; // capacity x e
    IntVector work; // e
    std::vector<Eigen::Index> pivots;
    Eigen::Index count = 0;
    Int coef, g;

    void init(Eigen::Index capacity, Eigen::Index e)
    {
        if (rows.rows() < capacity || rows.cols() != e)
            rows.resize(capacity, e);
        if (work.size() != e)
            work.resize(e);
    }
    void reset()
    {
        pivots.clear();
        count = 0;
    }

    bool feed(const IntMatrix& src, Eigen::Index r)
    {
        const Eigen::Index e = work.size();
        for (Eigen::Index j = 0; j < e; ++j)
            work(j) = src(r, j);
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            const Eigen::Index pc = pivots[k];
            if (work(pc) == 0)
                continue;
            coef = work(pc);
            for (Eigen::Index j = 0; j < e; ++j) {
                work(j) *= rows(static_cast<Eigen::Index>(k), pc);
                work(j) -= coef * rows(static_cast<Eigen::Index>(k), j);
            }
        }
        Eigen::Index pivot = -1;
        for (Eigen::Index j = 0; j < e; ++j)
            if (work(j) != 0) {
                pivot = j;
                break;
            }
        if (pivot < 0)
            return false;
        g = 0;
        for (Eigen::Index j = pivot; j < e; ++j) {
            if (work(j) != 0)
                g = boost::multiprecision::gcd(g, work(j));
            if (g == 1)
                break;
        }
        const bool negate = work(pivot) < 0;
        for (Eigen::Index j = 0; j < e; ++j) {
            if (g > 1 && work(j) != 0)
                exact_div(work(j), work(j), g);
            if (negate)
                work(j) = -work(j);
            rows(count, j) = work(j);
        }
        pivots.push_back(pivot);
        ++count;
        return true;
    }
};

// Product of the Smith invariants of the top `nrows` x `ncols` block,
// destroying it. Equals the index of the lattice generated by the rows in
// the saturation of their span, i.e. |det T| of the coordinate matrix in a
// saturated basis; 0 when the rows are dependent.
Int smith_invariant_product(IntMatrix& m, Eigen::Index nrows, Eigen::Index ncols)
{
    Int prod = 1;
    Int q;
    for (Eigen::Index t = 0; t < nrows; ++t) {
        // locate a nonzero entry in the remaining block
        Eigen::Index pi = -1, pj = -1;
        for (Eigen::Index i = t; i < nrows && pi < 0; ++i)
            for (Eigen::Index j = t; j < ncols; ++j)
                if (m(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0)
            return 0; // rank deficit
        while (true) {
            // smallest nonzero entry of the block as the pivot
            for (Eigen::Index i = t; i < nrows; ++i)
                for (Eigen::Index j = t; j < ncols; ++j)
                    if (m(i, j) != 0 && boost::multiprecision::abs(m(i, j)) <
                                            boost::multiprecision::abs(m(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
            if (pi != t)
                m.row(t).head(ncols).swap(m.row(pi).head(ncols));
            if (pj != t)
                m.col(t).head(nrows).swap(m.col(pj).head(nrows));
            bool clean = true;
            for (Eigen::Index i = t + 1; i < nrows; ++i) {
                if (m(i, t) == 0)
                    continue;
                q = m(i, t) / m(t, t);
                if (q != 0)
                    for (Eigen::Index j = t; j < ncols; ++j)
                        m(i, j) -= q * m(t, j);
                if (m(i, t) != 0)
                    clean = false;
            }
            for (Eigen::Index j = t + 1; j < ncols; ++j) {
                if (m(t, j) == 0)
                    continue;
                q = m(t, j) / m(t, t);
                if (q != 0)
                    for (Eigen::Index i = t; i < nrows; ++i)
                        m(i, j) -= q * m(i, t);
                if (m(t, j) != 0)
                    clean = false;
            }
            if (clean)
                break;
            pi = t;
            pj = t;
            // find some nonzero for the next round (the pivot shrank)
            bool found = false;
            for (Eigen::Index i = t; i < nrows && !found; ++i)
                for (Eigen::Index j = t; j < ncols; ++j)
                    if (m(i, j) != 0) {
                        pi = i;
                        pj = j;
                        found = true;
                        break;
                    }
        }
        prod *= boost::multiprecision::abs(m(t, t));
    }
    return prod;
}

// Per-thread workspace; buffers persist across faces and layers so the hot
// loop stays allocation-light.
struct Scratch {
    Bitset vf;
    std::vector<std::uint32_t> verts;
    std::vector<Bitset> cand;
    std::vector<int> cand_j;
    std::vector<std::uint32_t> cand_pop;
    std::size_t cand_n = 0;
    std::vector<std::uint32_t> cand_order;
    std::vector<std::uint32_t> maximal;
    std::vector<std::uint32_t> shuffled;
    std::vector<std::uint32_t> incident_count; // dense over vertex ids
    std::vector<Eigen::Index> simplex_idx;
    EchelonWorkspace echelon;
    IntMatrix sat_rows; // saturated basis of the current face, on demand
    Eigen::Index sat_count = 0;
    bool sat_ready = false;
    IntMatrix snf; // simplex volume working block
    Int g, val, num, delta_prod;
    // profiling accumulators (ns), filled when LATVOL_PROFILE is set
    std::uint64_t t_vertex = 0, t_facets = 0, t_select = 0, t_basis = 0, t_push = 0,
                  t_det = 0;
};

const bool g_profile = std::getenv("LATVOL_PROFILE") != nullptr;

struct PhaseTimer {
    std::uint64_t* slot;
    std::chrono::steady_clock::time_point start;
    explicit PhaseTimer(std::uint64_t& s)
        : slot(g_profile ? &s : nullptr),
          start(g_profile ? std::chrono::steady_clock::now()
                          : std::chrono::steady_clock::time_point{})
    {
    }
    ~PhaseTimer()
    {
        if (slot)
            *slot += static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count());
    }
};

void face_vertex_set(const HomogenizedPolytope& p, const FaceSignature& sig,
                     const Bitset& all_vertices, Scratch& s)
{
    const std::size_t first = sig.find_first();
    if (first == Bitset::npos) {
        s.vf = all_vertices;
    } else {
        s.vf = p.facets()[first].incident;
        for (std::size_t j = sig.find_next(first); j != Bitset::npos; j = sig.find_next(j))
            s.vf &= p.facets()[j].incident;
    }
    s.verts.clear();
    s.vf.for_each([&](std::size_t v) { s.verts.push_back(static_cast<std::uint32_t>(v)); });
}

// Candidate facets of the face (intersections with non-containing facets of
// P), then the true facets among them. For simple P every nonempty candidate
// is a facet cut out by a unique hyperplane; otherwise facets are the maximal
// candidates, deduplicated with the smallest hyperplane index as
// representative.
void face_facets(const HomogenizedPolytope& p, const FaceSignature& sig, int face_dim,
                 Scratch& s)
{
    const auto& facets = p.facets();
    s.cand_j.clear();
    s.cand_pop.clear();
    s.cand_n = 0;
    for (std::size_t j = 0; j < facets.size(); ++j) {
        if (sig.test(j))
            continue;
        if (s.cand_n == s.cand.size())
            s.cand.emplace_back();
        const std::size_t pc = s.cand[s.cand_n].assign_and_count(s.vf, facets[j].incident);
        if (pc < static_cast<std::size_t>(face_dim) || pc == 0)
            continue;
        s.cand_j.push_back(static_cast<int>(j));
        s.cand_pop.push_back(static_cast<std::uint32_t>(pc));
        ++s.cand_n;
    }

    s.maximal.clear();
    if (p.simple()) {
        for (std::size_t i = 0; i < s.cand_n; ++i)
            s.maximal.push_back(static_cast<std::uint32_t>(i));
        return;
    }
    s.cand_order.resize(s.cand_n);
    std::iota(s.cand_order.begin(), s.cand_order.end(), 0u);
    std::sort(s.cand_order.begin(), s.cand_order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (s.cand_pop[a] != s.cand_pop[b])
            return s.cand_pop[a] > s.cand_pop[b];
        return s.cand_j[a] < s.cand_j[b];
    });
    for (std::uint32_t idx : s.cand_order) {
        bool contained = false;
        for (std::uint32_t kept : s.maximal) {
            if (s.cand[kept].contains(s.cand[idx])) {
                contained = true;
                break;
            }
        }
        if (!contained)
            s.maximal.push_back(idx);
    }
}

Eigen::Index select_from(const std::vector<std::uint32_t>& verts,
                         const std::vector<Bitset>& cand,
                         const std::vector<std::uint32_t>& maximal,
                         const std::vector<std::uint32_t>& layer_counts,
                         std::vector<std::uint32_t>& incident_count)
{
    for (std::uint32_t v : verts)
        incident_count[v] = 0;
    for (std::uint32_t idx : maximal)
        cand[idx].for_each([&](std::size_t v) { ++incident_count[v]; });
    Eigen::Index best = -1;
    std::uint32_t best_opp = 0, best_layer = 0;
    for (std::uint32_t v : verts) {
        const std::uint32_t opp = static_cast<std::uint32_t>(maximal.size()) - incident_count[v];
        if (best < 0 || opp < best_opp || (opp == best_opp && layer_counts[v] < best_layer)) {
            best = static_cast<Eigen::Index>(v);
            best_opp = opp;
            best_layer = layer_counts[v];
        }
    }
    return best;
}

// Row echelon of the face's generators: a seeded random order is consumed
// until the face rank is reached.
void face_echelon(const HomogenizedPolytope& p, Eigen::Index expected_rank, std::uint64_t seed,
                  Scratch& s)
{
    s.shuffled = s.verts;
    std::mt19937_64 rng(seed);
    for (std::size_t i = s.shuffled.size(); i > 1; --i)
        std::swap(s.shuffled[i - 1], s.shuffled[rng() % i]);
    s.echelon.init(expected_rank + 1, p.edim());
    s.echelon.reset();
    for (std::size_t i = 0; i < s.shuffled.size() && s.echelon.count < expected_rank; ++i)
        s.echelon.feed(p.generators(), s.shuffled[i]);
    s.sat_ready = false;
}

// Saturated basis rows of the face's affine lattice, on demand: the span's
// integer points are the kernel of the kernel of the echelon rows.
void ensure_saturation(Scratch& s)
{
    if (s.sat_ready)
        return;
    IntMatrix orth = kernel_lattice(IntMatrix(s.echelon.rows.topRows(s.echelon.count)));
    IntMatrix sat = kernel_lattice(orth);
    s.sat_rows = std::move(sat);
    s.sat_count = s.sat_rows.rows();
    s.sat_ready = true;
}

// Divisor of lambda on the face's affine lattice. The gcd over the echelon
// rows is a multiple of the true divisor, so 1 there settles the common case
// without saturating.
void facet_divisor(const IntVector& lambda, Scratch& s)
{
    s.g = 0;
    for (Eigen::Index r = 0; r < s.echelon.count; ++r) {
        dot_row_into(s.val, lambda, s.echelon.rows, r);
        if (s.val != 0)
            s.g = boost::multiprecision::gcd(s.g, s.val);
        if (s.g == 1)
            return;
    }
    ensure_saturation(s);
    s.g = 0;
    for (Eigen::Index r = 0; r < s.sat_count; ++r) {
        dot_row_into(s.val, lambda, s.sat_rows, r);
        if (s.val != 0)
            s.g = boost::multiprecision::gcd(s.g, s.val);
        if (s.g == 1)
            return;
    }
}

// Cone volume of the simplex spanned by the listed generators:
// |det T| / prod(delta) with |det T| the Smith invariant product of the
// generator rows.
Rat simplex_cone_volume(const HomogenizedPolytope& p, const std::vector<Eigen::Index>& idx,
                        Scratch& s)
{
    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    const Eigen::Index e = p.edim();
    if (s.snf.rows() < n || s.snf.cols() != e)
        s.snf.resize(std::max<Eigen::Index>(n, s.snf.rows()), e);
    s.delta_prod = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < e; ++j)
            s.snf(i, j) = p.generators()(idx[static_cast<std::size_t>(i)], j);
        s.delta_prod *= p.delta_of(idx[static_cast<std::size_t>(i)]);
    }
    Int det = smith_invariant_product(s.snf, n, e);
    if (det == 0)
        throw DegenerateSimplexError();
    return make_rat(det, s.delta_prod);
}

void process_face(const HomogenizedPolytope& p, int face_dim, const FaceSignature& sig,
                  const FaceData& fd, const std::vector<std::uint32_t>& layer_counts,
                  std::uint64_t seed, const Bitset& all_vertices, Scratch& s, LayerMap& next,
                  Accumulators& acc)
{
    {
        PhaseTimer t(s.t_vertex);
        face_vertex_set(p, sig, all_vertices, s);
    }

    if (s.verts.size() == static_cast<std::size_t>(face_dim) + 1) {
        PhaseTimer t(s.t_det);
        s.simplex_idx.assign(s.verts.begin(), s.verts.end());
        acc.volume += fd.weight * simplex_cone_volume(p, s.simplex_idx, s);
        ++acc.det_count;
        acc.sigma += fd.flags;
        return;
    }

    {
        PhaseTimer t(s.t_facets);
        face_facets(p, sig, face_dim, s);
    }
    Eigen::Index best;
    {
        PhaseTimer t(s.t_select);
        best = select_from(s.verts, s.cand, s.maximal, layer_counts, s.incident_count);
    }

    {
        PhaseTimer t(s.t_basis);
        face_echelon(p, face_dim + 1, seed, s);
    }
    PhaseTimer t_all(s.t_push);

    const bool simple = p.simple();
    for (std::uint32_t idx : s.maximal) {
        const Bitset& w = s.cand[idx];
        if (w.test(static_cast<std::size_t>(best)))
            continue;
        const IntVector& lambda = p.facets()[static_cast<std::size_t>(s.cand_j[idx])].lambda;

        // height of the selected vertex over this facet, in F's own lattice
        facet_divisor(lambda, s);
        dot_row_into(s.num, lambda, p.generators(), best);
        Rat height = make_rat(s.num, s.g * p.delta_of(best));
        Rat pushed = fd.weight * height;

        if (s.cand_pop[idx] == static_cast<std::uint32_t>(face_dim)) {
            // simplex facet: computed directly instead of stored
            s.simplex_idx.clear();
            w.for_each([&](std::size_t v) { s.simplex_idx.push_back(static_cast<Eigen::Index>(v)); });
            acc.volume += pushed * simplex_cone_volume(p, s.simplex_idx, s);
            ++acc.det_count;
            acc.sigma += fd.flags;
            continue;
        }

        FaceSignature gsig = sig;
        if (simple) {
            gsig.set(static_cast<std::size_t>(s.cand_j[idx]));
        } else {
            for (std::size_t c = 0; c < s.cand_n; ++c)
                if (s.cand[c].contains(w))
                    gsig.set(static_cast<std::size_t>(s.cand_j[c]));
        }
        FaceData& entry = next[std::move(gsig)];
        entry.weight += pushed;
        entry.flags += fd.flags;
    }
}

} // namespace

FaceLocalData face_local_data(const HomogenizedPolytope& p, const FaceSignature& signature,
                              int face_dim)
{
    Scratch s;
    s.incident_count.assign(static_cast<std::size_t>(p.vertex_count()), 0);
    Bitset all_vertices(static_cast<std::size_t>(p.vertex_count()));
    all_vertices.set_all();
    face_vertex_set(p, signature, all_vertices, s);
    if (!s.vf.any())
        throw std::invalid_argument("not a face");

    FaceLocalData out;
    out.vertices = s.vf;
    out.is_simplex = s.verts.size() == static_cast<std::size_t>(face_dim) + 1;
    if (out.is_simplex)
        return out;
    face_facets(p, signature, face_dim, s);
    for (std::uint32_t idx : s.maximal) {
        out.facet_vertices.push_back(s.cand[idx]);
        out.facet_rep.push_back(s.cand_j[idx]);
        FaceSignature gsig = signature;
        if (p.simple()) {
            gsig.set(static_cast<std::size_t>(s.cand_j[idx]));
        } else {
            for (std::size_t c = 0; c < s.cand_n; ++c)
                if (s.cand[c].contains(s.cand[idx]))
                    gsig.set(static_cast<std::size_t>(s.cand_j[c]));
        }
        out.facet_signatures.push_back(std::move(gsig));
    }
    return out;
}

Eigen::Index select_vertex(const FaceLocalData& local,
                           const std::vector<std::uint32_t>& layer_vertex_counts)
{
    std::vector<std::uint32_t> verts;
    local.vertices.for_each([&](std::size_t v) { verts.push_back(static_cast<std::uint32_t>(v)); });
    std::vector<std::uint32_t> maximal(local.facet_vertices.size());
    std::iota(maximal.begin(), maximal.end(), 0u);
    std::vector<std::uint32_t> incident(local.vertices.size(), 0);
    return select_from(verts, local.facet_vertices, maximal, layer_vertex_counts, incident);
}

VolumeResult descend(const HomogenizedPolytope& p, const DescentOptions& opts)
{
    const Eigen::Index m = p.vertex_count();
    const std::size_t nfacets = p.facets().size();
    const int nthreads = std::max(1, opts.threads);

    VolumeResult res;
    res.dim = p.dim();
    res.grading_denominator = p.grading_denominator();

    Bitset all_vertices(static_cast<std::size_t>(m));
    all_vertices.set_all();

    LayerMap current;
    current.emplace(FaceSignature(nfacets), FaceData{Rat(1), Int(1)});

    Accumulators total;
    res.stats.total_faces = 1;
    res.stats.layer_sizes.push_back(1);

    std::vector<Scratch> scratch(static_cast<std::size_t>(nthreads));
    for (auto& s : scratch)
        s.incident_count.assign(static_cast<std::size_t>(m), 0);
    std::vector<std::vector<std::uint32_t>> thread_counts(
        static_cast<std::size_t>(nthreads), std::vector<std::uint32_t>(static_cast<std::size_t>(m)));
    std::vector<std::uint32_t> layer_counts(static_cast<std::size_t>(m));

    int face_dim = p.dim();
    while (!current.empty()) {
        std::vector<std::pair<const FaceSignature*, const FaceData*>> faces;
        faces.reserve(current.size());
        for (const auto& kv : current)
            faces.emplace_back(&kv.first, &kv.second);
        const std::size_t nfaces = faces.size();
        const std::size_t chunk =
            std::clamp<std::size_t>(nfaces / (8 * static_cast<std::size_t>(nthreads)), 1, 64);

        // First pass: how many faces of this layer contain each vertex
        // (selection rule (ii)); recomputed from incidence since vertex sets
        // are not stored.
        {
            std::atomic<std::size_t> cursor{0};
            auto worker = [&](int t) {
                auto& counts = thread_counts[static_cast<std::size_t>(t)];
                std::fill(counts.begin(), counts.end(), 0u);
                Scratch& s = scratch[static_cast<std::size_t>(t)];
                while (true) {
                    const std::size_t begin = cursor.fetch_add(chunk);
                    if (begin >= nfaces)
                        break;
                    const std::size_t end = std::min(nfaces, begin + chunk);
                    for (std::size_t i = begin; i < end; ++i) {
                        face_vertex_set(p, *faces[i].first, all_vertices, s);
                        for (std::uint32_t v : s.verts)
                            ++counts[v];
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int t = 1; t < nthreads; ++t)
                pool.emplace_back(worker, t);
            worker(0);
            for (auto& th : pool)
                th.join();
            std::fill(layer_counts.begin(), layer_counts.end(), 0u);
            for (const auto& counts : thread_counts)
                for (std::size_t v = 0; v < counts.size(); ++v)
                    layer_counts[v] += counts[v];
        }

        // Second pass: process the layer; merge thread-local results. All
        // merges are exact commutative additions, so the outcome does not
        // depend on scheduling or thread count.
        LayerMap next;
        {
            std::vector<LayerMap> local_next(static_cast<std::size_t>(nthreads));
            std::vector<Accumulators> local_acc(static_cast<std::size_t>(nthreads));
            std::atomic<std::size_t> cursor{0};
            auto worker = [&](int t) {
                Scratch& s = scratch[static_cast<std::size_t>(t)];
                auto& nx = local_next[static_cast<std::size_t>(t)];
                auto& ac = local_acc[static_cast<std::size_t>(t)];
                while (true) {
                    const std::size_t begin = cursor.fetch_add(chunk);
                    if (begin >= nfaces)
                        break;
                    const std::size_t end = std::min(nfaces, begin + chunk);
                    for (std::size_t i = begin; i < end; ++i)
                        process_face(p, face_dim, *faces[i].first, *faces[i].second, layer_counts,
                                     opts.rng_seed, all_vertices, s, nx, ac);
                }
            };
            std::vector<std::thread> pool;
            for (int t = 1; t < nthreads; ++t)
                pool.emplace_back(worker, t);
            worker(0);
            for (auto& th : pool)
                th.join();

            for (int t = 0; t < nthreads; ++t) {
                auto& nx = local_next[static_cast<std::size_t>(t)];
                if (next.empty()) {
                    next = std::move(nx);
                } else {
                    for (auto& kv : nx) {
                        FaceData& entry = next[kv.first];
                        entry.weight += kv.second.weight;
                        entry.flags += kv.second.flags;
                    }
                }
                const Accumulators& ac = local_acc[static_cast<std::size_t>(t)];
                total.volume += ac.volume;
                total.det_count += ac.det_count;
                total.sigma += ac.sigma;
            }
        }

        current = std::move(next);
        --face_dim;
        if (!current.empty()) {
            res.stats.layer_sizes.push_back(Int(current.size()));
            res.stats.total_faces += Int(current.size());
        }
        if (g_profile)
            std::fprintf(stderr, "[profile] layer dim %d: %zu faces\n", face_dim,
                         current.size());
    }

    res.stats.det_count = Int(total.det_count);
    res.stats.flag_decompositions = total.sigma;
    res.cone_volume = total.volume;
    res.lattice_volume = total.volume * Rat(res.grading_denominator);
    if (g_profile) {
        std::uint64_t tv = 0, tf = 0, ts = 0, tb = 0, tp = 0, td = 0;
        for (const auto& s : scratch) {
            tv += s.t_vertex;
            tf += s.t_facets;
            ts += s.t_select;
            tb += s.t_basis;
            tp += s.t_push;
            td += s.t_det;
        }
        std::fprintf(stderr,
                     "[profile] vertex %.1fs facets %.1fs select %.1fs basis %.1fs push %.1fs "
                     "det %.1fs\n",
                     tv * 1e-9, tf * 1e-9, ts * 1e-9, tb * 1e-9, tp * 1e-9, td * 1e-9);
    }
    return res;
}

} // namespace latvol
