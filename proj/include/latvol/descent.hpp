#ifndef LATVOL_DESCENT_HPP
#define LATVOL_DESCENT_HPP

#include "latvol/polytope.hpp"

#include <cstdint>

namespace latvol {

/// A face of P is identified by the set of facets of P containing it;
/// P itself carries the empty set.
using FaceSignature = Bitset;

struct DescentOptions {
    int threads = 1;
    std::uint64_t rng_seed = 1;
};

struct DescentStats {
    Int total_faces = 0;          // stored faces over all layers (inline-finished
                                  // simplex facets are not stored)
    std::vector<Int> layer_sizes;
    Int det_count = 0;            // number of simplex determinants
    Int flag_decompositions = 0;  // simplices of the implicit decomposition
};

struct VolumeResult {
    Rat cone_volume;        // volume of conv(0, P)
    Rat lattice_volume;     // grading_denominator * cone_volume
    Int grading_denominator;
    int dim = -1;
    DescentStats stats;
};

/// Local data of a face: its vertex set, its facets (deduplicated, with the
/// smallest defining hyperplane kept as representative) and their signatures.
struct FaceLocalData {
    Bitset vertices;
    bool is_simplex = false;
    std::vector<Bitset> facet_vertices;
    std::vector<FaceSignature> facet_signatures;
    std::vector<int> facet_rep;
};

/// Vertex set, facets and simplex flag of the face with the given signature.
/// face_dim is the dimension implied by the layer the face lives in.
FaceLocalData face_local_data(const HomogenizedPolytope& p, const FaceSignature& signature,
                              int face_dim);

/// The descent vertex choice: among the vertices of the face, minimize the
/// number of opposite facets, then the number of faces of the current layer
/// containing the vertex, then the vertex index.
Eigen::Index select_vertex(const FaceLocalData& local,
                           const std::vector<std::uint32_t>& layer_vertex_counts);

/// Lattice volume of P by descent in the face lattice: layers of faces with
/// accumulated weights, simplex faces finished by determinants. The result
/// is identical for any thread count.
VolumeResult descend(const HomogenizedPolytope& p, const DescentOptions& opts = {});

} // namespace latvol

#endif
