#ifndef LATVOL_LINALG_HPP
#define LATVOL_LINALG_HPP

#include "latvol/arith.hpp"

#include <cstdint>
#include <stdexcept>

namespace latvol {

struct NotInSpanError : std::domain_error {
    NotInSpanError() : std::domain_error("not in span") {}
};

/// Basis of a saturated sublattice of Z^n (Z^n modulo the lattice is
/// torsion-free). Basis vectors are the rows of vectors(). The coordinate
/// map is an integer matrix C with C * u_j = e_j for every basis vector u_j,
/// so coordinates of lattice members are obtained by a plain matrix-vector
/// product.
class LatticeBasis {
public:
    LatticeBasis() = default;
    LatticeBasis(IntMatrix basis_rows, Eigen::Index ambient_dim);

    Eigen::Index ambient_dim() const { return ambient_; }
    Eigen::Index rank() const { return rows_.rows(); }
    const IntMatrix& vectors() const { return rows_; }
    const IntMatrix& coordinate_map() const { return coord_map_; }

    /// C * v for v in the lattice; exact integer coordinates.
    IntVector coordinates(const IntVector& v) const { return coord_map_ * v; }

private:
    IntMatrix rows_;      // rank x ambient
    IntMatrix coord_map_; // rank x ambient
    Eigen::Index ambient_ = 0;
};

/// Column echelon form over Z: returns unimodular Q with A*Q = [B|0],
/// B of full column rank. Rank and Q are what the callers need; the
/// echelon matrix itself is returned for completeness.
struct ColumnEchelon {
    IntMatrix echelon;   // rows(A) x cols(A)
    IntMatrix transform; // cols(A) x cols(A), unimodular
    Eigen::Index rank = 0;
};
ColumnEchelon column_echelon(const IntMatrix& a);

/// Basis (as rows) of the saturated lattice {x in Z^n : A x = 0}.
IntMatrix kernel_lattice(const IntMatrix& a);

Eigen::Index integer_rank(const IntMatrix& a);

/// Incremental fraction-free row echelon; feeds one vector at a time and
/// reports whether it enlarged the rank. Rows are kept primitive to bound
/// entry growth.
class RankAccumulator {
public:
    explicit RankAccumulator(Eigen::Index ambient) : ambient_(ambient) {}
    Eigen::Index rank() const { return static_cast<Eigen::Index>(pivots_.size()); }
    bool add(IntVector v);
    /// Echelonized independent rows accumulated so far (rank x ambient).
    IntMatrix rows() const;

private:
    Eigen::Index ambient_;
    std::vector<IntVector> rows_;
    std::vector<Eigen::Index> pivots_;
};

/// Basis of span_Q(rows of vectors) intersected with Z^n. A random subset of
/// the input of about the expected rank is tried first and doubled while its
/// rank is too small; the subset's span is then saturated through two kernel
/// computations. The result is independent of the seed up to unimodular
/// change of basis.
///
/// expected_rank < 0 means "unknown": the rank of the full input is then
/// computed first.
LatticeBasis saturated_basis(const IntMatrix& vectors, std::uint64_t rng_seed = 1,
                             Eigen::Index expected_rank = -1);

/// Exact rational coordinates t with v = sum t_j u_j over the rows u_j of
/// basis_rows; throws NotInSpanError if v is outside the span.
RatVector coordinates_in_basis(const IntVector& v, const IntMatrix& basis_rows);
RatVector coordinates_in_basis(const IntVector& v, const LatticeBasis& basis);

/// |det| by Bareiss fraction-free elimination.
Int det_abs(IntMatrix t);
/// |det| by exact Gaussian elimination.
Rat det_abs(RatMatrix t);

/// g = gcd of lambda evaluated at all basis vectors; the linear form
/// lambda/g is primitive on the lattice. Throws std::domain_error when
/// lambda vanishes on the whole lattice.
Int primitivity_divisor(const IntVector& lambda, const LatticeBasis& basis);

} // namespace latvol

#endif
