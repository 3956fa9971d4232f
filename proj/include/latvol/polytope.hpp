#ifndef LATVOL_POLYTOPE_HPP
#define LATVOL_POLYTOPE_HPP

#include "latvol/bitset.hpp"
#include "latvol/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latvol {

struct GradingError : std::domain_error {
    GradingError() : std::domain_error("grading not positive") {}
};

struct DegenerateSimplexError : std::domain_error {
    DegenerateSimplexError() : std::domain_error("degenerate simplex") {}
};

/// Support hyperplane of the homogenized polytope: an integer linear form
/// lambda >= 0 on the cone together with its primitivity divisor g on the
/// polytope's affine lattice, so that the lattice height of a generator v is
/// lambda(v) / (g * delta(v)).
struct FacetForm {
    IntVector lambda;
    Int divisor_g;
    Bitset incident;   // generators with lambda(v) == 0
    int rep_index = 0; // smallest defining hyperplane index
};

/// Homogeneous constraint description: the polytope is the slice
/// {x : inequalities*x >= 0, equations*x = 0, grading(x) = 1}.
struct ConstraintSystem {
    Eigen::Index ambient_dim = 0;
    IntMatrix inequalities; // rows: integer forms, >= 0
    IntMatrix equations;    // rows: integer forms, == 0
    IntVector grading;
};

/// A rational polytope P in homogeneous coordinates: a pointed cone C with
/// primitive integer generators, a grading delta positive on C \ {0}, and
/// P = {x in C : delta(x) = 1}. Both descriptions (generators and support
/// hyperplanes with incidence) are populated; immutable after construction.
///
/// When the input had equations (or was lower dimensional), the object works
/// in coordinates of the saturated lattice of the relevant subspace; the
/// to_original map carries vertices and directions back to the input space.
class HomogenizedPolytope {
public:
    HomogenizedPolytope(IntMatrix gens, std::vector<Int> deltas, IntVector grading_form,
                        std::vector<IntVector> facet_forms, std::vector<int> facet_reps,
                        IntMatrix to_original, Eigen::Index full_dim);

    Eigen::Index edim() const { return gens_.cols(); }
    Eigen::Index vertex_count() const { return gens_.rows(); }
    Eigen::Index facet_count() const { return static_cast<Eigen::Index>(facets_.size()); }
    int dim() const { return dim_; }
    /// Largest dimension the input description allowed (slice of the reduced
    /// ambient space); dim() < full_dim() means implicit equations.
    Eigen::Index full_dim() const { return full_dim_; }

    const IntMatrix& generators() const { return gens_; }
    IntVector generator(Eigen::Index i) const { return gens_.row(i).transpose(); }
    const Int& delta_of(Eigen::Index i) const { return deltas_[static_cast<std::size_t>(i)]; }
    const IntVector& grading_form() const { return grading_; }
    const std::vector<FacetForm>& facets() const { return facets_; }
    const LatticeBasis& aff_basis() const { return aff_; }
    const Int& grading_denominator() const { return grading_denominator_; }
    bool simple() const { return simple_; }

    /// Vertex i in the coordinates of the original input space.
    RatVector original_vertex(Eigen::Index i) const;
    Eigen::Index original_ambient() const { return to_original_.rows(); }

    /// Gram determinant of a basis of the direction lattice of aff(P) in the
    /// original coordinates; Euclidean volume = lattice volume / dim! *
    /// sqrt(gram).
    Int euclidean_gram_det() const;

private:
    IntMatrix gens_;
    std::vector<Int> deltas_;
    IntVector grading_;
    std::vector<FacetForm> facets_;
    LatticeBasis aff_;
    int dim_ = -1;
    Int grading_denominator_;
    bool simple_ = false;
    IntMatrix to_original_;
    Eigen::Index full_dim_ = 0;
};

/// V-side homogenization: each rational point p becomes the primitive
/// integer vector on the ray through (p, 1), with its delta value.
std::pair<IntMatrix, std::vector<Int>> homogenize(const RatMatrix& points);

/// Dual conversion (H to V): extreme rays of the constraint cone plus the
/// irredundant support hyperplanes with incidence. nullopt = empty polytope;
/// GradingError when the grading fails to be positive on the cone.
std::optional<HomogenizedPolytope> dual_convert(const ConstraintSystem& cs);

/// Dual conversion (V to H) from rational points.
std::optional<HomogenizedPolytope> dual_convert(const RatMatrix& points);

/// Dual conversion from explicit integer generators with a grading form
/// (delta must be positive at every generator).
std::optional<HomogenizedPolytope> dual_convert_from_generators(const IntMatrix& gens,
                                                                const IntVector& grading);

/// Smallest k >= 1 such that aff(kP) contains a lattice point.
Int grading_denominator(const HomogenizedPolytope& p);

/// Lattice height lambda(v)/(g*delta_v) of a generator over a facet.
Rat lattice_height(const FacetForm& f, const IntVector& v, const Int& delta_v);
Rat lattice_height(const HomogenizedPolytope& p, const FacetForm& f, Eigen::Index gen_index);

/// Cone volume of the simplex spanned by the given generators: |det T| over
/// the product of the delta values, T the coordinate matrix in the basis of
/// the simplex's own saturated affine lattice. Throws DegenerateSimplexError
/// on affinely dependent input.
Rat simplex_volume(const HomogenizedPolytope& p, const std::vector<Eigen::Index>& gen_indices);

/// True iff every vertex lies on exactly dim P facets.
bool is_simple(const HomogenizedPolytope& p);

} // namespace latvol

#endif
