#include "latvol/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace latvol {

namespace {

// Column operation col_j -= q * col_j0 applied to both the working matrix
// and the accumulated transform.
void column_axpy(IntMatrix& m, IntMatrix& q, Eigen::Index j, Eigen::Index j0,
                 const Int& factor)
{
    if (factor == 0)
        return;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) -= factor * m(i, j0);
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        q(i, j) -= factor * q(i, j0);
}

void swap_columns(IntMatrix& m, IntMatrix& q, Eigen::Index a, Eigen::Index b)
{
    if (a == b)
        return;
    m.col(a).swap(m.col(b));
    q.col(a).swap(q.col(b));
}

} // namespace

ColumnEchelon column_echelon(const IntMatrix& a)
{
    ColumnEchelon res;
    const Eigen::Index rows = a.rows(), cols = a.cols();
    res.echelon = a;
    res.transform = IntMatrix::Identity(cols, cols);
    IntMatrix& m = res.echelon;
    IntMatrix& q = res.transform;

    Eigen::Index c = 0; // next free pivot column
    Int quot;
    for (Eigen::Index i = 0; i < rows && c < cols; ++i) {
        // Euclidean reduction among the entries of row i right of the frontier
        // until at most one of them is nonzero.
        while (true) {
            Eigen::Index jmin = -1;
            int nonzero = 0;
            for (Eigen::Index j = c; j < cols; ++j) {
                if (m(i, j) != 0) {
                    ++nonzero;
                    if (jmin < 0 || boost::multiprecision::abs(m(i, j)) <
                                        boost::multiprecision::abs(m(i, jmin)))
                        jmin = j;
                }
            }
            if (nonzero == 0)
                break;
            if (nonzero == 1) {
                swap_columns(m, q, c, jmin);
                if (m(i, c) < 0) {
                    m.col(c) = -m.col(c);
                    q.col(c) = -q.col(c);
                }
                ++c;
                break;
            }
            for (Eigen::Index j = c; j < cols; ++j) {
                if (j == jmin || m(i, j) == 0)
                    continue;
                quot = m(i, j) / m(i, jmin);
                column_axpy(m, q, j, jmin, quot);
            }
        }
    }
    res.rank = c;
    return res;
}

IntMatrix kernel_lattice(const IntMatrix& a)
{
    const Eigen::Index n = a.cols();
    if (a.rows() == 0)
        return IntMatrix::Identity(n, n);
    ColumnEchelon ce = column_echelon(a);
    const Eigen::Index k = n - ce.rank;
    IntMatrix basis(k, n);
    for (Eigen::Index j = 0; j < k; ++j)
        basis.row(j) = ce.transform.col(ce.rank + j).transpose();
    return basis;
}

Eigen::Index integer_rank(const IntMatrix& a)
{
    RankAccumulator acc(a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        acc.add(a.row(i).transpose());
    return acc.rank();
}

bool RankAccumulator::add(IntVector v)
{
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Eigen::Index p = pivots_[k];
        if (v(p) == 0)
            continue;
        // v <- lead(row)*v - v(p)*row, zeroing position p without fractions.
        const Int lead = rows_[k](p);
        const Int coef = v(p);
        for (Eigen::Index j = 0; j < ambient_; ++j)
            v(j) = lead * v(j) - coef * rows_[k](j);
    }
    Eigen::Index pivot = -1;
    for (Eigen::Index j = 0; j < ambient_; ++j) {
        if (v(j) != 0) {
            pivot = j;
            break;
        }
    }
    if (pivot < 0)
        return false;
    make_primitive(v);
    if (v(pivot) < 0)
        v = -v;
    rows_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
}

IntMatrix RankAccumulator::rows() const
{
    IntMatrix m(static_cast<Eigen::Index>(rows_.size()), ambient_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = rows_[i].transpose();
    return m;
}

LatticeBasis::LatticeBasis(IntMatrix basis_rows, Eigen::Index ambient_dim)
    : rows_(std::move(basis_rows)), ambient_(ambient_dim)
{
    const Eigen::Index r = rows_.rows();
    coord_map_.resize(r, ambient_);
    if (r == 0)
        return;
    ColumnEchelon ce = column_echelon(rows_);
    if (ce.rank != r)
        throw std::invalid_argument("basis rows are linearly dependent");
    // U*Q = [H|0] with H lower triangular of determinant +-1 exactly when the
    // rows span a saturated lattice. Forward substitution inverts H over Z.
    IntMatrix h = ce.echelon.leftCols(r);
    IntMatrix hinv = IntMatrix::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        hinv(i, i) = 1;
        for (Eigen::Index j = 0; j < i; ++j)
            if (h(i, j) != 0)
                hinv.row(i) -= h(i, j) * hinv.row(j);
        if (h(i, i) == -1)
            hinv.row(i) = -hinv.row(i);
        else if (h(i, i) != 1)
            throw std::invalid_argument("basis does not span a saturated lattice");
    }
    coord_map_ = (ce.transform.leftCols(r) * hinv).transpose();
}

LatticeBasis saturated_basis(const IntMatrix& vectors, std::uint64_t rng_seed,
                             Eigen::Index expected_rank)
{
    const Eigen::Index m = vectors.rows();
    const Eigen::Index n = vectors.cols();
    if (m == 0)
        throw std::invalid_argument("saturated_basis: no input vectors");

    if (expected_rank < 0) {
        RankAccumulator acc(n);
        for (Eigen::Index i = 0; i < m && acc.rank() < n; ++i)
            acc.add(vectors.row(i).transpose());
        expected_rank = acc.rank();
    }

    // Deterministic shuffle of the row indices (explicit Fisher-Yates so the
    // sequence does not depend on the standard library implementation).
    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::mt19937_64 rng(rng_seed);
    for (Eigen::Index i = m - 1; i > 0; --i) {
        const Eigen::Index j = static_cast<Eigen::Index>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }

    RankAccumulator acc(n);
    Eigen::Index take = std::min(m, std::max<Eigen::Index>(expected_rank, 1));
    Eigen::Index used = 0;
    while (true) {
        for (; used < take; ++used)
            acc.add(vectors.row(order[used]).transpose());
        if (acc.rank() == expected_rank || used == m)
            break;
        take = std::min(m, take * 2);
    }

    if (acc.rank() == 0)
        return LatticeBasis(IntMatrix(0, n), n);

    // Saturate: the span's integer points are the kernel of the kernel.
    IntMatrix orth = kernel_lattice(acc.rows());
    IntMatrix sat = kernel_lattice(orth);
    return LatticeBasis(std::move(sat), n);
}

RatVector coordinates_in_basis(const IntVector& v, const IntMatrix& basis_rows)
{
    const Eigen::Index r = basis_rows.rows();
    const Eigen::Index n = basis_rows.cols();
    // Solve the overdetermined system U^T t = v by rational elimination on
    // the augmented n x (r+1) matrix.
    RatMatrix aug(n, r + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < r; ++j)
            aug(i, j) = Rat(basis_rows(j, i));
        aug(i, r) = Rat(v(i));
    }
    Eigen::Index row = 0;
    std::vector<Eigen::Index> pivot_rows;
    for (Eigen::Index col = 0; col < r; ++col) {
        Eigen::Index p = -1;
        for (Eigen::Index i = row; i < n; ++i)
            if (aug(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0)
            throw std::invalid_argument("basis rows are linearly dependent");
        aug.row(p).swap(aug.row(row));
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == row || aug(i, col) == 0)
                continue;
            Rat f = aug(i, col) / aug(row, col);
            for (Eigen::Index j = col; j <= r; ++j)
                aug(i, j) -= f * aug(row, j);
        }
        pivot_rows.push_back(row);
        ++row;
    }
    // Inconsistent rows mean v is outside the span.
    for (Eigen::Index i = row; i < n; ++i)
        if (aug(i, r) != 0)
            throw NotInSpanError();
    RatVector t(r);
    for (Eigen::Index col = 0; col < r; ++col)
        t(col) = aug(pivot_rows[col], r) / aug(pivot_rows[col], col);
    return t;
}

RatVector coordinates_in_basis(const IntVector& v, const LatticeBasis& basis)
{
    return coordinates_in_basis(v, basis.vectors());
}

Int det_abs(IntMatrix t)
{
    const Eigen::Index n = t.rows();
    if (t.cols() != n)
        throw std::invalid_argument("det_abs: matrix not square");
    if (n == 0)
        return 1;
    Int prev = 1, tmp;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (t(k, k) == 0) {
            Eigen::Index p = -1;
            for (Eigen::Index i = k + 1; i < n; ++i)
                if (t(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0)
                return 0;
            t.row(k).swap(t.row(p)); // sign flip is irrelevant for |det|
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                tmp = t(i, j) * t(k, k);
                tmp -= t(i, k) * t(k, j);
                exact_div(t(i, j), tmp, prev);
            }
            t(i, k) = 0;
        }
        prev = t(k, k);
    }
    return boost::multiprecision::abs(t(n - 1, n - 1));
}

Rat det_abs(RatMatrix t)
{
    const Eigen::Index n = t.rows();
    if (t.cols() != n)
        throw std::invalid_argument("det_abs: matrix not square");
    Rat det = 1;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = -1;
        for (Eigen::Index i = k; i < n; ++i)
            if (t(i, k) != 0) {
                p = i;
                break;
            }
        if (p < 0)
            return 0;
        if (p != k)
            t.row(k).swap(t.row(p));
        det *= t(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (t(i, k) == 0)
                continue;
            Rat f = t(i, k) / t(k, k);
            for (Eigen::Index j = k; j < n; ++j)
                t(i, j) -= f * t(k, j);
        }
    }
    return boost::multiprecision::abs(det);
}

Int primitivity_divisor(const IntVector& lambda, const LatticeBasis& basis)
{
    Int g = 0, val;
    for (Eigen::Index i = 0; i < basis.rank(); ++i) {
        dot_row_into(val, lambda, basis.vectors(), i);
        if (val != 0)
            g = boost::multiprecision::gcd(g, val);
        if (g == 1)
            return g;
    }
    if (g == 0)
        throw std::domain_error("form vanishes on lattice");
    return boost::multiprecision::abs(g);
}

} // namespace latvol
