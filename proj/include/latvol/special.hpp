#ifndef LATVOL_SPECIAL_HPP
#define LATVOL_SPECIAL_HPP

#include "latvol/polytope.hpp"

#include <stdexcept>
#include <vector>

namespace latvol {

/// Certificate of a recognized special shape. Recognition is exact: the
/// combinatorial structure and the geometric certificate (parallel facet
/// pairs, common center) are verified in exact arithmetic, so perturbed
/// inputs never pass.
struct SpecialShape {
    enum class Kind { none, simplex, parallelotope, cross_polytope };
    Kind kind = Kind::none;

    // parallelotope: a corner vertex and its dim neighbors
    Eigen::Index corner = -1;
    std::vector<Eigen::Index> neighbors;

    // cross polytope: a vertex and the vertices of an opposite facet
    Eigen::Index apex = -1;
    std::vector<Eigen::Index> opposite_facet;
};

SpecialShape recognize_parallelotope(const HomogenizedPolytope& p);
SpecialShape recognize_cross_polytope(const HomogenizedPolytope& p);
/// simplex, then parallelotope, then cross polytope, else none.
SpecialShape recognize_special(const HomogenizedPolytope& p);

/// Vol(conv(0,P)) = d! * Vol(corner simplex cone).
Rat parallelotope_volume(const HomogenizedPolytope& p, const SpecialShape& shape);
/// Vol(conv(0,P)) = 2^(d-1) * Vol(vertex + opposite facet simplex cone).
Rat cross_polytope_volume(const HomogenizedPolytope& p, const SpecialShape& shape);

struct OracleBoundError : std::runtime_error {
    OracleBoundError() : std::runtime_error("oracle bound") {}
};

struct OracleLimits {
    int max_dim = 8;
    Eigen::Index max_vertices = 64;
};

struct OracleResult {
    Rat lattice_volume; // volume of P in the lattice of aff(P)
    Int simplices;      // size of the explicit pulling triangulation
};

/// Independent verifier: the explicit pulling triangulation induced by the
/// vertex order (cone every face over its first vertex), with simplex
/// volumes as determinants over the direction lattice of aff(P). The value
/// does not depend on the order.
OracleResult pulling_triangulation(const HomogenizedPolytope& p,
                                   const std::vector<Eigen::Index>& vertex_order,
                                   const OracleLimits& limits = {});

Rat oracle_volume_by_triangulation(const HomogenizedPolytope& p,
                                   const std::vector<Eigen::Index>& vertex_order,
                                   const OracleLimits& limits = {});

/// 0, 1, ..., m-1.
std::vector<Eigen::Index> natural_vertex_order(const HomogenizedPolytope& p);

} // namespace latvol

#endif
