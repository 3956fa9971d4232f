#ifndef LATVOL_DD_HPP
#define LATVOL_DD_HPP

#include "latvol/linalg.hpp"

#include <stdexcept>

namespace latvol {

struct NotPointedError : std::domain_error {
    NotPointedError() : std::domain_error("cone is not pointed") {}
};

/// Extreme rays of the cone {x : A x >= 0}, A given by rows, by the double
/// description method: a simplicial start cone from independent rows, then
/// one halfspace at a time with combinatorial adjacency tests. Rays come out
/// primitive; order is unspecified (callers sort). Throws NotPointedError
/// when rank(A) < dimension; returns a 0-row matrix for the cone {0}.
IntMatrix double_description(const IntMatrix& constraints);

/// Exact solution of a nonsingular square system A x = b.
RatVector solve_rational(const IntMatrix& a, const IntVector& b);

} // namespace latvol

#endif
